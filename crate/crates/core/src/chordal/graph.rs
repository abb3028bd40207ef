use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polyalg::CspMatrix;

/// An undirected simple graph on nodes `0..n`.
///
/// Self-loops are never stored; the diagonal is implicitly part of every
/// sparsity pattern built from a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsityGraph {
    n: usize,
    adj: Vec<BTreeSet<usize>>,
}

impl SparsityGraph {
    pub fn empty(n: usize) -> Self {
        SparsityGraph {
            n,
            adj: vec![BTreeSet::new(); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                g.add_edge(i, j);
            }
        }
        g
    }

    /// The path `0 - 1 - ... - (n-1)`.
    pub fn path(n: usize) -> Self {
        let mut g = Self::empty(n);
        for i in 1..n {
            g.add_edge(i - 1, i);
        }
        g
    }

    /// Build from 0-based edges, rejecting self-loops and out-of-range nodes.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n);
        for &(i, j) in edges {
            if i >= n || j >= n {
                return Err(Error::InvalidInput(format!(
                    "edge ({i}, {j}) references a node outside 0..{n}"
                )));
            }
            if i == j {
                return Err(Error::InvalidInput(format!("self-loop at node {i}")));
            }
            g.add_edge(i, j);
        }
        Ok(g)
    }

    /// Edge `(i, j)` for every off-diagonal 1 of a correlative sparsity matrix.
    pub fn from_csp(csp: &CspMatrix) -> Self {
        let mut g = Self::empty(csp.n());
        for (i, j) in csp.edges() {
            g.add_edge(i, j);
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        if i != j {
            self.adj[i].insert(j);
            self.adj[j].insert(i);
        }
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(&j)
    }

    /// `true` when `i == j` or `(i, j)` is an edge.
    pub fn in_pattern(&self, i: usize, j: usize) -> bool {
        i == j || self.has_edge(i, j)
    }

    pub fn neighbors(&self, i: usize) -> &BTreeSet<usize> {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            for &j in self.adj[i].range(i + 1..) {
                out.push((i, j));
            }
        }
        out
    }

    pub fn is_subgraph_of(&self, other: &SparsityGraph) -> bool {
        self.n == other.n && self.edges().iter().all(|&(i, j)| other.has_edge(i, j))
    }

    /// `true` when every pair of `nodes` is adjacent.
    pub fn is_clique(&self, nodes: &[usize]) -> bool {
        nodes
            .iter()
            .enumerate()
            .all(|(k, &i)| nodes[k + 1..].iter().all(|&j| self.has_edge(i, j)))
    }
}

/// JSON edge-list form with 1-based node labels.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

impl TryFrom<GraphJson> for SparsityGraph {
    type Error = Error;
    fn try_from(j: GraphJson) -> Result<Self> {
        let mut edges = Vec::with_capacity(j.edges.len());
        for (k, &[a, b]) in j.edges.iter().enumerate() {
            if a == 0 || b == 0 || a > j.n || b > j.n {
                return Err(Error::InvalidInput(format!(
                    "edges[{k}] = [{a}, {b}] is outside 1..={}",
                    j.n
                )));
            }
            edges.push((a - 1, b - 1));
        }
        SparsityGraph::from_edges(j.n, &edges)
    }
}

impl From<&SparsityGraph> for GraphJson {
    fn from(g: &SparsityGraph) -> Self {
        GraphJson {
            n: g.n,
            edges: g.edges().into_iter().map(|(i, j)| [i + 1, j + 1]).collect(),
        }
    }
}

impl Serialize for SparsityGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson::from(self).serialize(s)
    }
}

impl<'de> Deserialize<'de> for SparsityGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        SparsityGraph::try_from(GraphJson::deserialize(d)?).map_err(serde::de::Error::custom)
    }
}
