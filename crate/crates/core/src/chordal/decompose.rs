use faer::Mat;

use super::cliques::CliqueCover;
use crate::conic::{min_eigenvalue, smat, solve, Cone, ConicProgram, Settings, SolveStatus};
use crate::error::{Error, Result};

/// The selection operator `E_C` of a clique `C` inside `n` nodes: row `i`
/// holds a single one in column `C[i]`, with `C` sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexMatrix {
    clique: Vec<usize>,
    n: usize,
}

impl IndexMatrix {
    pub fn new(clique: &[usize], n: usize) -> Result<Self> {
        let mut c = clique.to_vec();
        c.sort_unstable();
        c.dedup();
        if c.len() != clique.len() || c.last().is_some_and(|&v| v >= n) {
            return Err(Error::InvalidInput(format!(
                "clique {clique:?} is not a set of distinct nodes below {n}"
            )));
        }
        Ok(IndexMatrix { clique: c, n })
    }

    pub fn clique(&self) -> &[usize] {
        &self.clique
    }

    /// The dense `|C| x n` 0/1 matrix.
    pub fn matrix(&self) -> Mat<f64> {
        Mat::from_fn(self.clique.len(), self.n, |i, j| (self.clique[i] == j) as u8 as f64)
    }

    /// `E_C' B E_C`.
    pub fn inflate(&self, block: &Mat<f64>) -> Result<Mat<f64>> {
        let k = self.clique.len();
        if block.nrows() != k || block.ncols() != k {
            return Err(Error::DimensionMismatch {
                expected: k,
                found: block.nrows(),
            });
        }
        let mut out = Mat::zeros(self.n, self.n);
        for a in 0..k {
            for b in 0..k {
                out[(self.clique[a], self.clique[b])] = block[(a, b)];
            }
        }
        Ok(out)
    }

    /// `E_C X E_C'`.
    pub fn restrict(&self, x: &Mat<f64>) -> Result<Mat<f64>> {
        if x.nrows() != self.n || x.ncols() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.nrows(),
            });
        }
        let c = &self.clique;
        Ok(Mat::from_fn(c.len(), c.len(), |a, b| x[(c[a], c[b])]))
    }
}

pub fn inflate(clique: &[usize], block: &Mat<f64>, n: usize) -> Result<Mat<f64>> {
    IndexMatrix::new(clique, n)?.inflate(block)
}

pub fn restrict(clique: &[usize], x: &Mat<f64>) -> Result<Mat<f64>> {
    IndexMatrix::new(clique, x.nrows())?.restrict(x)
}

/// One PSD block per clique of the decomposition `X = sum_k E_k' X_k E_k`.
pub type CliqueBlocks = Vec<(Vec<usize>, Mat<f64>)>;

/// Split a matrix supported on a chordal pattern into PSD clique blocks.
///
/// Returns `Ok(None)` when no such split exists, which for a chordal pattern
/// happens exactly when `X` is not positive semidefinite. The blocks are found
/// by solving the feasibility SDP with one PSD variable per clique.
pub fn clique_decompose_psd(x: &Mat<f64>, cover: &CliqueCover, tol: f64) -> Result<Option<CliqueBlocks>> {
    let n = cover.n();
    if x.nrows() != n || x.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: x.nrows(),
        });
    }
    let scale = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .fold(0.0f64, |a, (i, j)| a.max(x[(i, j)].abs()));
    for i in 0..n {
        for j in 0..i {
            if (x[(i, j)] - x[(j, i)]).abs() > 1e-12 * scale.max(1.0) {
                return Err(Error::NotSymmetric { row: i, col: j });
            }
        }
    }
    let pattern = cover.graph();
    for i in 0..n {
        for j in 0..i {
            if !pattern.has_edge(i, j) && x[(i, j)].abs() > tol {
                return Err(Error::PatternViolation { row: i, col: j });
            }
        }
    }
    if n == 0 {
        return Ok(Some(Vec::new()));
    }

    let cliques = cover.cliques();
    let mut prog = ConicProgram::new();
    let blocks: Vec<usize> = cliques.iter().map(|c| prog.add_cone(Cone::Psd(c.len()))).collect();
    for i in 0..n {
        for j in 0..=i {
            if i != j && !pattern.has_edge(i, j) {
                continue;
            }
            let mut row = Vec::new();
            for (k, c) in cliques.iter().enumerate() {
                if let (Ok(a), Ok(b)) = (c.binary_search(&i), c.binary_search(&j)) {
                    let scale = if a == b { 1.0 } else { crate::conic::SQRT2 };
                    row.push((prog.psd_col(blocks[k], a, b), 1.0 / scale));
                }
            }
            prog.add_row(row, x[(i, j)]);
        }
    }
    let sol = solve(&prog, &Settings::default())?;
    match sol.status {
        SolveStatus::Optimal => {}
        SolveStatus::PrimalInfeasible => return Ok(None),
        SolveStatus::DualInfeasible | SolveStatus::NumericalFailure => {
            return Err(Error::NumericalFailure(format!(
                "clique decomposition SDP ended with status {:?}",
                sol.status
            )))
        }
    }
    let mut out: CliqueBlocks = cliques
        .iter()
        .zip(&blocks)
        .map(|(c, &k)| (c.clone(), smat(&sol.x[prog.block_range(k)], c.len())))
        .collect();

    // Push the solver's residual into the first clique holding each entry so
    // the blocks reassemble exactly.
    let mut sum = Mat::<f64>::zeros(n, n);
    for (c, b) in &out {
        sum += inflate(c, b, n)?;
    }
    for i in 0..n {
        for j in 0..=i {
            let r = x[(i, j)] - sum[(i, j)];
            if r == 0.0 {
                continue;
            }
            if let Some(k) = cover.containing(&[i, j]) {
                let c = &out[k].0;
                let a = c.binary_search(&i).unwrap();
                let b = c.binary_search(&j).unwrap();
                let blk = &mut out[k].1;
                blk[(a, b)] += r;
                if a != b {
                    blk[(b, a)] += r;
                }
            }
        }
    }
    if out.iter().any(|(_, b)| min_eigenvalue(b) < -tol) {
        return Ok(None);
    }
    Ok(Some(out))
}
