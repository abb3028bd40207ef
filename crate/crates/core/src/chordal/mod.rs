//! Sparsity graphs, chordal extension, maximal cliques and clique-sum
//! decompositions of sparse PSD matrices.

mod cliques;
mod decompose;
mod graph;

pub use cliques::{chordal_extend, is_chordal, is_perfect_elimination_ordering, maximal_cliques, CliqueCover};
pub use decompose::{clique_decompose_psd, inflate, restrict, CliqueBlocks, IndexMatrix};
pub use graph::{GraphJson, SparsityGraph};
