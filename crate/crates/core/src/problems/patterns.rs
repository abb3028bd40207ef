use crate::chordal::SparsityGraph;
use crate::error::{Error, Result};

fn connect(g: &mut SparsityGraph, a: &[usize], b: &[usize]) {
    for &i in a {
        for &j in b {
            if i != j {
                g.add_edge(i, j);
            }
        }
    }
}

/// Five-node star (node 0 is the hub) with every node expanded into a block
/// of consecutive rows: `r / 5` rows per node, the remainder going to the
/// last node. Rows of one node are mutually adjacent and a hub row is adjacent
/// to every row, so the maximal cliques are hub block plus one leaf block.
pub fn star_pattern(r: usize) -> Result<SparsityGraph> {
    if r < 5 {
        return Err(Error::InvalidInput(format!("star pattern needs r >= 5, got {r}")));
    }
    let groups = node_groups(r, 5);
    let mut g = SparsityGraph::empty(r);
    for grp in &groups {
        connect(&mut g, grp, grp);
    }
    for leaf in &groups[1..] {
        connect(&mut g, &groups[0], leaf);
    }
    Ok(g)
}

/// Split `0..r` into `k` runs of `r / k` rows, the last run taking the rest.
pub(crate) fn node_groups(r: usize, k: usize) -> Vec<Vec<usize>> {
    let base = r / k;
    (0..k)
        .map(|g| {
            let end = if g + 1 == k { r } else { (g + 1) * base };
            (g * base..end).collect()
        })
        .collect()
}

/// Block-arrow pattern on `l*e + h` nodes: `l` dense diagonal blocks of side
/// `e`, all coupled to a dense trailing head of `h` nodes.
pub fn block_arrow_pattern(l: usize, e: usize, h: usize) -> Result<SparsityGraph> {
    if l == 0 || e == 0 {
        return Err(Error::InvalidInput(format!("block-arrow pattern needs l, e >= 1 (got l={l}, e={e})")));
    }
    let n = l * e + h;
    let head: Vec<usize> = (l * e..n).collect();
    let mut g = SparsityGraph::empty(n);
    connect(&mut g, &head, &head);
    for b in 0..l {
        let blk: Vec<usize> = (b * e..(b + 1) * e).collect();
        connect(&mut g, &blk, &blk);
        connect(&mut g, &blk, &head);
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chordal::{is_chordal, maximal_cliques};

    #[test]
    fn star_cliques_are_hub_plus_leaf() {
        let g = star_pattern(12).unwrap();
        assert!(is_chordal(&g).is_some());
        let cover = maximal_cliques(&g).unwrap();
        assert_eq!(cover.len(), 4);
        // hub rows 0..2, last leaf takes 8..12
        let mut sizes: Vec<usize> = cover.cliques().iter().map(|c| c.len()).collect();
        sizes.sort();
        assert_eq!(sizes, vec![4, 4, 4, 6]);
        for c in cover.cliques() {
            assert!(c.contains(&0) && c.contains(&1));
        }
        assert!(!g.has_edge(2, 4));
        assert!(g.has_edge(0, 11));
    }

    #[test]
    fn arrow_sizes() {
        let g = block_arrow_pattern(2, 3, 2).unwrap();
        assert_eq!(g.n(), 8);
        let cover = maximal_cliques(&g).unwrap();
        assert_eq!(cover.len(), 2);
        assert!(cover.cliques().iter().all(|c| c.len() == 5));
    }

    #[test]
    fn arrow_degenerate_cases() {
        let g = block_arrow_pattern(1, 3, 2).unwrap();
        assert_eq!(g.edge_count(), 10);
        let g = block_arrow_pattern(3, 2, 0).unwrap();
        assert_eq!(g.edge_count(), 3);
        assert!(!g.has_edge(1, 2));
        assert!(block_arrow_pattern(0, 3, 1).is_err());
    }

    proptest::proptest! {
        #[test]
        fn arrow_is_chordal_with_l_cliques(l in 2usize..5, e in 1usize..4, h in 1usize..3) {
            let g = block_arrow_pattern(l, e, h).unwrap();
            proptest::prop_assert!(is_chordal(&g).is_some());
            let cover = maximal_cliques(&g).unwrap();
            proptest::prop_assert_eq!(cover.len(), l);
            proptest::prop_assert!(cover.cliques().iter().all(|c| c.len() == e + h));
        }
    }
}
