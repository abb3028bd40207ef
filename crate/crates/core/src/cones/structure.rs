use std::collections::{BTreeMap, BTreeSet};

use super::affine::AffinePolyMatrix;
use super::kind::ConeKind;
use crate::chordal::{CliqueCover, SparsityGraph};
use crate::error::{Error, Result};
use crate::polyalg::{Exponent, MonomialBasis};

/// Knobs for turning a constraint into Gram blocks.
#[derive(Clone, Debug)]
pub struct GramOptions {
    /// Largest basis degree `d`; defaults to `ceil(deg / 2)`.
    pub half_degree: Option<u32>,
    /// Drop basis monomials whose square falls outside the degree range of
    /// the matching diagonal entry. Exact for every cone.
    pub prune_degrees: bool,
    /// Clique cover used by SSOS: over the variables for scalar constraints,
    /// over the matrix rows for matrix constraints. Computed from the
    /// sparsity pattern when absent.
    pub cover: Option<CliqueCover>,
    /// With SSOS, use one full-basis PSD block whose entries outside the
    /// clique-induced pattern are pinned to zero instead of clique blocks.
    /// Only meant as a reference formulation.
    pub sparse_gram: bool,
}

impl Default for GramOptions {
    fn default() -> Self {
        GramOptions {
            half_degree: None,
            prune_degrees: true,
            cover: None,
            sparse_gram: false,
        }
    }
}

/// One basis element of a (possibly matrix valued) Gram block: the monomial
/// `alpha` placed in matrix row `row`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct GramElement {
    pub row: usize,
    pub alpha: Exponent,
}

/// A Gram block: its basis and the clique it was built from.
#[derive(Clone, Debug, PartialEq)]
pub struct GramBlockSpec {
    /// Variables (scalar case) or matrix rows (matrix case) of the clique.
    pub clique: Vec<usize>,
    pub elements: Vec<GramElement>,
    /// Pairs `(i, j)`, `i <= j`, whose entry is identically zero.
    pub forbidden: BTreeSet<(usize, usize)>,
}

impl GramBlockSpec {
    pub fn side(&self) -> usize {
        self.elements.len()
    }

    pub fn allows(&self, i: usize, j: usize) -> bool {
        let key = if i <= j { (i, j) } else { (j, i) };
        !self.forbidden.contains(&key)
    }

    /// Monomials of the block, ignoring rows.
    pub fn basis(&self) -> MonomialBasis {
        let n = self.elements.first().map_or(0, |e| e.alpha.nvars());
        MonomialBasis::from_elements(n, self.elements.iter().map(|e| e.alpha.clone()).collect())
    }
}

/// Entry `(i, j)` of block `block` contributes `weight * Q_ij` to a
/// coefficient.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Contribution {
    pub block: usize,
    pub i: usize,
    pub j: usize,
    pub weight: f64,
}

/// Key of a coefficient equation: entry `(a, b)`, `a <= b`, monomial `alpha`.
pub type CoeffKey = (usize, usize, Exponent);

/// Gram blocks of a constraint and the linear map from their entries to the
/// coefficients of the constrained polynomial (matrix).
#[derive(Clone, Debug)]
pub struct GramStructure {
    pub kind: ConeKind,
    pub n: usize,
    pub r: usize,
    pub half_degree: u32,
    pub blocks: Vec<GramBlockSpec>,
    pub coefficient_map: BTreeMap<CoeffKey, Vec<Contribution>>,
}

impl GramStructure {
    pub fn max_block_side(&self) -> usize {
        self.blocks.iter().map(GramBlockSpec::side).max().unwrap_or(0)
    }
}

/// Build the Gram blocks for `target` in cone `kind`.
///
/// `pattern` is the sparsity pattern of a matrix constraint (`None` means
/// the nonzero pattern of `target`); it is ignored when `r = 1`.
pub fn build_gram_structure(
    target: &AffinePolyMatrix,
    kind: ConeKind,
    pattern: Option<&SparsityGraph>,
    opts: &GramOptions,
) -> Result<GramStructure> {
    let r = target.side();
    let n = target.nvars();
    let deg = target.degree();
    let d = opts.half_degree.unwrap_or(deg.div_ceil(2));
    if 2 * d < deg {
        return Err(Error::InvalidInput(format!(
            "basis degree {d} too small for a constraint of degree {deg}"
        )));
    }

    // Basis degree window per matrix row.
    let ranges: Vec<Option<(u32, u32)>> = (0..r)
        .map(|a| {
            let p = target.get(a, a);
            if !opts.prune_degrees {
                Some((0, d))
            } else if p.is_zero() {
                None
            } else {
                let lo = p.min_degree().div_ceil(2);
                let hi = (p.degree() / 2).min(d);
                (lo <= hi).then_some((lo, hi))
            }
        })
        .collect();
    let elements_on = |a: usize, support: Option<&[usize]>| -> Vec<GramElement> {
        match ranges[a] {
            None => Vec::new(),
            Some((lo, hi)) => MonomialBasis::degree_range(n, lo, hi, support)
                .iter()
                .map(|alpha| GramElement { row: a, alpha: alpha.clone() })
                .collect(),
        }
    };
    let all_vars: Vec<usize> = (0..n).collect();
    let all_rows: Vec<usize> = (0..r).collect();

    let mut blocks = Vec::new();
    if r == 1 {
        let p = target.get(0, 0);
        match (kind, opts.sparse_gram) {
            (ConeKind::Ssos, sparse_gram) => {
                let cover = match &opts.cover {
                    Some(c) => {
                        if c.n() != n {
                            return Err(Error::DimensionMismatch { expected: n, found: c.n() });
                        }
                        c.clone()
                    }
                    None => CliqueCover::from_graph(&SparsityGraph::from_csp(&p.csp_matrix())),
                };
                for (alpha, _) in p.terms() {
                    let supp: Vec<usize> = alpha.support().collect();
                    if cover.containing(&supp).is_none() {
                        return Err(Error::NotCorrelativelySparse {
                            monomial: alpha.to_string(),
                        });
                    }
                }
                if sparse_gram {
                    let elements = elements_on(0, None);
                    let mut forbidden = BTreeSet::new();
                    for i in 0..elements.len() {
                        for j in i..elements.len() {
                            let s = elements[i].alpha.add(&elements[j].alpha);
                            let supp: Vec<usize> = s.support().collect();
                            if cover.containing(&supp).is_none() {
                                forbidden.insert((i, j));
                            }
                        }
                    }
                    blocks.push(GramBlockSpec {
                        clique: all_vars.clone(),
                        elements,
                        forbidden,
                    });
                } else {
                    for c in cover.cliques() {
                        blocks.push(GramBlockSpec {
                            clique: c.clone(),
                            elements: elements_on(0, Some(c)),
                            forbidden: BTreeSet::new(),
                        });
                    }
                }
            }
            _ => blocks.push(GramBlockSpec {
                clique: all_vars,
                elements: elements_on(0, None),
                forbidden: BTreeSet::new(),
            }),
        }
    } else {
        let owned;
        let pattern = match pattern {
            Some(g) => {
                if g.n() != r {
                    return Err(Error::DimensionMismatch { expected: r, found: g.n() });
                }
                g
            }
            None => {
                let mut g = SparsityGraph::empty(r);
                for a in 0..r {
                    for b in a + 1..r {
                        if !target.get(a, b).is_zero() {
                            g.add_edge(a, b);
                        }
                    }
                }
                owned = g;
                &owned
            }
        };
        for a in 0..r {
            for b in a + 1..r {
                if !pattern.has_edge(a, b) && !target.get(a, b).is_zero() {
                    return Err(Error::PatternViolation { row: a, col: b });
                }
            }
        }
        let full_rows = |rows: &[usize]| -> Vec<GramElement> { rows.iter().flat_map(|&a| elements_on(a, None)).collect() };
        match kind {
            ConeKind::Sos => blocks.push(GramBlockSpec {
                clique: all_rows.clone(),
                elements: full_rows(&all_rows),
                forbidden: BTreeSet::new(),
            }),
            ConeKind::Ssos => {
                let cover = match &opts.cover {
                    Some(c) => {
                        if c.n() != r {
                            return Err(Error::DimensionMismatch { expected: r, found: c.n() });
                        }
                        for (a, b) in pattern.edges() {
                            if cover_misses(c, a, b) {
                                return Err(Error::PatternViolation { row: a, col: b });
                            }
                        }
                        c.clone()
                    }
                    None => CliqueCover::from_graph(pattern),
                };
                for c in cover.cliques() {
                    blocks.push(GramBlockSpec {
                        clique: c.clone(),
                        elements: full_rows(c),
                        forbidden: BTreeSet::new(),
                    });
                }
            }
            ConeKind::Dsos | ConeKind::Sdsos => {
                let elements = full_rows(&all_rows);
                let mut forbidden = BTreeSet::new();
                for i in 0..elements.len() {
                    for j in i + 1..elements.len() {
                        let (a, b) = (elements[i].row, elements[j].row);
                        if a != b && !pattern.has_edge(a, b) {
                            forbidden.insert((i, j));
                        }
                    }
                }
                blocks.push(GramBlockSpec {
                    clique: all_rows.clone(),
                    elements,
                    forbidden,
                });
            }
        }
    }

    blocks.retain(|b| !b.elements.is_empty());
    let mut coefficient_map: BTreeMap<CoeffKey, Vec<Contribution>> = BTreeMap::new();
    for (k, blk) in blocks.iter().enumerate() {
        let el = &blk.elements;
        for i in 0..el.len() {
            for j in i..el.len() {
                if !blk.allows(i, j) {
                    continue;
                }
                let (a, b) = (el[i].row.min(el[j].row), el[i].row.max(el[j].row));
                let weight = if i != j && a == b { 2.0 } else { 1.0 };
                coefficient_map
                    .entry((a, b, el[i].alpha.add(&el[j].alpha)))
                    .or_default()
                    .push(Contribution { block: k, i, j, weight });
            }
        }
    }

    Ok(GramStructure {
        kind,
        n,
        r,
        half_degree: d,
        blocks,
        coefficient_map,
    })
}

fn cover_misses(c: &CliqueCover, a: usize, b: usize) -> bool {
    c.containing(&[a, b]).is_none()
}
