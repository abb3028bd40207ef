use serde::{Deserialize, Serialize};

use super::graph::SparsityGraph;
use crate::error::{Error, Result};

/// Maximal cliques of a chordal graph together with a perfect elimination
/// ordering that produced them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueCover {
    n: usize,
    cliques: Vec<Vec<usize>>,
    ordering: Vec<usize>,
}

impl CliqueCover {
    /// Chordally extend `g` and take the maximal cliques of the result.
    pub fn from_graph(g: &SparsityGraph) -> CliqueCover {
        maximal_cliques(&chordal_extend(g)).expect("extension is chordal")
    }

    /// A single clique holding every node.
    pub fn dense(n: usize) -> CliqueCover {
        CliqueCover {
            n,
            cliques: vec![(0..n).collect()],
            ordering: (0..n).collect(),
        }
    }

    /// A user supplied cover. Members are sorted and the cliques must cover
    /// every node; the graph they induce need not be maximal-clique exact.
    pub fn from_cliques(n: usize, cliques: Vec<Vec<usize>>) -> Result<CliqueCover> {
        let mut cliques: Vec<Vec<usize>> = cliques
            .into_iter()
            .map(|mut c| {
                c.sort_unstable();
                c.dedup();
                c
            })
            .collect();
        let mut seen = vec![false; n];
        for c in &cliques {
            for &v in c {
                if v >= n {
                    return Err(Error::InvalidInput(format!("clique member {} out of range 1..={n}", v + 1)));
                }
                seen[v] = true;
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidInput(format!("node {} is in no clique", v + 1)));
        }
        cliques.sort();
        cliques.dedup();
        Ok(CliqueCover {
            n,
            cliques,
            ordering: (0..n).collect(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    /// Cliques with ascending members, in lexicographic order.
    pub fn cliques(&self) -> &[Vec<usize>] {
        &self.cliques
    }

    pub fn ordering(&self) -> &[usize] {
        &self.ordering
    }

    pub fn max_clique_size(&self) -> usize {
        self.cliques.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Index of the first clique containing every node of `nodes`.
    pub fn containing(&self, nodes: &[usize]) -> Option<usize> {
        self.cliques
            .iter()
            .position(|c| nodes.iter().all(|v| c.binary_search(v).is_ok()))
    }

    /// The chordal graph whose edges are all pairs inside some clique.
    pub fn graph(&self) -> SparsityGraph {
        let mut g = SparsityGraph::empty(self.n);
        for c in &self.cliques {
            for (k, &i) in c.iter().enumerate() {
                for &j in &c[k + 1..] {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }
}

/// Maximum cardinality search. Returns nodes in visit order; ties go to the
/// lowest index.
fn mcs_order(g: &SparsityGraph) -> Vec<usize> {
    let n = g.n();
    let mut weight = vec![0usize; n];
    let mut done = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !done[v])
            .max_by(|&a, &b| weight[a].cmp(&weight[b]).then(b.cmp(&a)))
            .expect("node remains");
        done[v] = true;
        order.push(v);
        for &u in g.neighbors(v) {
            if !done[u] {
                weight[u] += 1;
            }
        }
    }
    order
}

/// `true` if in `order` every node's later neighbours form a clique.
pub fn is_perfect_elimination_ordering(g: &SparsityGraph, order: &[usize]) -> bool {
    let n = g.n();
    if order.len() != n {
        return false;
    }
    let mut pos = vec![usize::MAX; n];
    for (k, &v) in order.iter().enumerate() {
        if v >= n || pos[v] != usize::MAX {
            return false;
        }
        pos[v] = k;
    }
    order.iter().all(|&v| {
        let later: Vec<usize> = g.neighbors(v).iter().copied().filter(|&u| pos[u] > pos[v]).collect();
        g.is_clique(&later)
    })
}

/// A perfect elimination ordering of `g` when it is chordal.
pub fn is_chordal(g: &SparsityGraph) -> Option<Vec<usize>> {
    let mut order = mcs_order(g);
    order.reverse();
    is_perfect_elimination_ordering(g, &order).then_some(order)
}

/// A chordal supergraph of `g`.
///
/// Chordal graphs are returned unchanged. Otherwise nodes are eliminated
/// greedily by minimum current degree (lowest index on ties) and the
/// neighbourhood of each eliminated node is filled into a clique.
pub fn chordal_extend(g: &SparsityGraph) -> SparsityGraph {
    if is_chordal(g).is_some() {
        return g.clone();
    }
    let n = g.n();
    let mut work = g.clone();
    let mut out = g.clone();
    let mut gone = vec![false; n];
    for _ in 0..n {
        let v = (0..n)
            .filter(|&v| !gone[v])
            .min_by_key(|&v| (work.neighbors(v).iter().filter(|&&u| !gone[u]).count(), v))
            .expect("node remains");
        let nb: Vec<usize> = work.neighbors(v).iter().copied().filter(|&u| !gone[u]).collect();
        for (k, &a) in nb.iter().enumerate() {
            for &b in &nb[k + 1..] {
                work.add_edge(a, b);
                out.add_edge(a, b);
            }
        }
        gone[v] = true;
    }
    out
}

/// All maximal cliques of a chordal graph.
pub fn maximal_cliques(g: &SparsityGraph) -> Result<CliqueCover> {
    let order = is_chordal(g).ok_or(Error::NotChordal)?;
    let n = g.n();
    let mut pos = vec![0; n];
    for (k, &v) in order.iter().enumerate() {
        pos[v] = k;
    }
    let mut candidates: Vec<Vec<usize>> = order
        .iter()
        .map(|&v| {
            let mut c: Vec<usize> = std::iter::once(v)
                .chain(g.neighbors(v).iter().copied().filter(|&u| pos[u] > pos[v]))
                .collect();
            c.sort_unstable();
            c
        })
        .collect();
    candidates.sort();
    candidates.dedup();
    let is_subset = |a: &[usize], b: &[usize]| a.len() < b.len() && a.iter().all(|x| b.binary_search(x).is_ok());
    let cliques: Vec<Vec<usize>> = candidates
        .iter()
        .filter(|c| !candidates.iter().any(|d| is_subset(c, d)))
        .cloned()
        .collect();
    Ok(CliqueCover {
        n,
        cliques,
        ordering: order,
    })
}
