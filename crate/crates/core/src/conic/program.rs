use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::svec::{smat, svec_index, svec_len};
use crate::error::{Error, Result};

/// A cone block of the variable vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Cone {
    /// Unconstrained variables.
    Free(usize),
    /// The nonnegative orthant.
    NonNeg(usize),
    /// `{(t, z) : t >= |z|}` of the given total dimension.
    Soc(usize),
    /// `{(u, v, w) : 2 u v >= |w|^2, u, v >= 0}` of the given total dimension.
    Rsoc(usize),
    /// Positive semidefinite matrices of the given side, stored as svec.
    Psd(usize),
}

impl Cone {
    /// Number of scalar variables occupied by the block.
    pub fn dim(&self) -> usize {
        match *self {
            Cone::Free(k) | Cone::NonNeg(k) | Cone::Soc(k) | Cone::Rsoc(k) => k,
            Cone::Psd(r) => svec_len(r),
        }
    }

    /// Barrier degree of the block (zero for free variables).
    pub fn degree(&self) -> usize {
        match *self {
            Cone::Free(_) => 0,
            Cone::NonNeg(k) => k,
            Cone::Soc(_) | Cone::Rsoc(_) => 1,
            Cone::Psd(r) => r,
        }
    }
}

/// A conic program in standard primal form:
///
/// ```text
/// minimize c'x  subject to  A x = b,  x in K = K_1 x ... x K_p
/// ```
///
/// whose dual is `maximize b'y subject to A'y + s = c, s in K*` (with `s = 0`
/// on free blocks).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConicProgram {
    cones: Vec<Cone>,
    offsets: Vec<usize>,
    nvars: usize,
    rows: Vec<Vec<(usize, f64)>>,
    b: Vec<f64>,
    c: Vec<f64>,
}

impl ConicProgram {
    pub fn new() -> Self {
        Self::default()
    }

    /// Append a cone block and return its index.
    pub fn add_cone(&mut self, cone: Cone) -> usize {
        self.offsets.push(self.nvars);
        self.cones.push(cone);
        self.nvars += cone.dim();
        self.c.resize(self.nvars, 0.0);
        self.cones.len() - 1
    }

    /// Append the equality `sum_k a_k x_{col_k} = rhs` and return its row index.
    /// Repeated columns are summed.
    pub fn add_row<I>(&mut self, entries: I, rhs: f64) -> usize
    where
        I: IntoIterator<Item = (usize, f64)>,
    {
        let mut row: Vec<(usize, f64)> = entries.into_iter().collect();
        row.sort_unstable_by_key(|e| e.0);
        let mut merged: Vec<(usize, f64)> = Vec::with_capacity(row.len());
        for (col, v) in row {
            match merged.last_mut() {
                Some(last) if last.0 == col => last.1 += v,
                _ => merged.push((col, v)),
            }
        }
        merged.retain(|e| e.1 != 0.0);
        self.rows.push(merged);
        self.b.push(rhs);
        self.rows.len() - 1
    }

    pub fn set_objective(&mut self, col: usize, v: f64) {
        self.c[col] = v;
    }

    pub fn add_objective(&mut self, col: usize, v: f64) {
        self.c[col] += v;
    }

    pub fn cones(&self) -> &[Cone] {
        &self.cones
    }

    pub fn block_range(&self, k: usize) -> Range<usize> {
        self.offsets[k]..self.offsets[k] + self.cones[k].dim()
    }

    pub fn block_offset(&self, k: usize) -> usize {
        self.offsets[k]
    }

    /// Column of entry `(i, j)` of PSD block `k`.
    pub fn psd_col(&self, k: usize, i: usize, j: usize) -> usize {
        let Cone::Psd(r) = self.cones[k] else {
            panic!("block {k} is not a PSD block");
        };
        self.offsets[k] + svec_index(i, j, r)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, i: usize) -> &[(usize, f64)] {
        &self.rows[i]
    }

    pub fn rows(&self) -> &[Vec<(usize, f64)>] {
        &self.rows
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn c(&self) -> &[f64] {
        &self.c
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Largest PSD side, or zero when the program has no PSD block.
    pub fn max_psd_side(&self) -> usize {
        self.cones
            .iter()
            .filter_map(|c| match c {
                Cone::Psd(r) => Some(*r),
                _ => None,
            })
            .max()
            .unwrap_or(0)
    }

    pub fn validate(&self) -> Result<()> {
        for (i, row) in self.rows.iter().enumerate() {
            for &(col, v) in row {
                if col >= self.nvars {
                    return Err(Error::InvalidInput(format!(
                        "row {i} references column {col} of {}",
                        self.nvars
                    )));
                }
                if !v.is_finite() {
                    return Err(Error::InvalidInput(format!("row {i} has a non-finite entry")));
                }
            }
        }
        if self.b.iter().chain(&self.c).any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("b or c has a non-finite entry".into()));
        }
        Ok(())
    }

    pub fn a_mul(&self, x: &[f64]) -> Vec<f64> {
        self.rows
            .iter()
            .map(|row| row.iter().map(|&(j, v)| v * x[j]).sum())
            .collect()
    }

    pub fn at_mul(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.nvars];
        for (row, &yi) in self.rows.iter().zip(y) {
            for &(j, v) in row {
                out[j] += v * yi;
            }
        }
        out
    }

    pub fn objective(&self, x: &[f64]) -> f64 {
        dot(&self.c, x)
    }

    /// Largest violation of cone membership of `x` block by block: the
    /// negative part of the smallest eigenvalue-like quantity of each block.
    /// Free blocks are ignored; zero means `x` lies in `K`.
    pub fn cone_violation(&self, x: &[f64]) -> f64 {
        let mut worst = 0.0f64;
        for (k, cone) in self.cones.iter().enumerate() {
            let v = &x[self.block_range(k)];
            let m = match *cone {
                Cone::Free(_) => 0.0,
                Cone::NonNeg(_) => v.iter().fold(f64::INFINITY, |a, &b| a.min(b)),
                Cone::Soc(_) => v[0] - norm2(&v[1..]),
                Cone::Rsoc(_) => {
                    let (u, w) = (v[0], v[1]);
                    let lam = 0.5 * ((u + w) - ((u - w).powi(2) + 2.0 * dot(&v[2..], &v[2..])).sqrt());
                    lam.min(u).min(w)
                }
                Cone::Psd(r) => {
                    let m = smat(v, r);
                    crate::conic::min_eigenvalue(&m)
                }
            };
            worst = worst.max(-m);
        }
        worst
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

pub(crate) fn norm_inf(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Outcome of a conic solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Optimal,
    PrimalInfeasible,
    DualInfeasible,
    NumericalFailure,
}

/// Primal-dual solution of a [`ConicProgram`].
///
/// On `Optimal`, `(x, y, s)` is a primal-dual pair. On `PrimalInfeasible`,
/// `y` is a Farkas ray normalised to `b'y = 1` with `s = -A'y` in `K*`. On
/// `DualInfeasible`, `x` is a ray in `K` normalised to `c'x = -1` with
/// `A x = 0`. On `NumericalFailure` the last iterate is returned.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConicSolution {
    pub status: SolveStatus,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub s: Vec<f64>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// `|c'x - b'y| / (1 + max(|c'x|, |b'y|))`.
    pub gap: f64,
    /// `|A x - b|_inf / (1 + |b|_inf)`.
    pub primal_residual: f64,
    /// `|A'y + s - c|_inf / (1 + |c|_inf)`.
    pub dual_residual: f64,
    pub iterations: usize,
}

/// Residuals of a candidate primal-dual pair, computed from scratch.
#[derive(Clone, Copy, Debug)]
pub struct Residuals {
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
    pub primal_objective: f64,
    pub dual_objective: f64,
}

impl ConicProgram {
    /// Relative residuals of `(x, y, s)` in the conventions of [`ConicSolution`].
    pub fn residuals(&self, x: &[f64], y: &[f64], s: &[f64]) -> Residuals {
        let ax = self.a_mul(x);
        let rp: Vec<f64> = ax.iter().zip(&self.b).map(|(a, b)| a - b).collect();
        let aty = self.at_mul(y);
        let rd: Vec<f64> = (0..self.nvars).map(|j| aty[j] + s[j] - self.c[j]).collect();
        let pobj = dot(&self.c, x);
        let dobj = dot(&self.b, y);
        Residuals {
            primal: norm_inf(&rp) / (1.0 + norm_inf(&self.b)),
            dual: norm_inf(&rd) / (1.0 + norm_inf(&self.c)),
            gap: (pobj - dobj).abs() / (1.0 + pobj.abs().max(dobj.abs())),
            primal_objective: pobj,
            dual_objective: dobj,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_merge_duplicate_columns() {
        let mut p = ConicProgram::new();
        p.add_cone(Cone::NonNeg(3));
        p.add_row([(2, 1.0), (0, 2.0), (2, 3.0), (1, 0.0)], 5.0);
        assert_eq!(p.row(0), &[(0, 2.0), (2, 4.0)]);
        assert_eq!(p.a_mul(&[1.0, 1.0, 1.0]), vec![6.0]);
        assert_eq!(p.at_mul(&[2.0]), vec![4.0, 0.0, 8.0]);
    }

    #[test]
    fn psd_columns_follow_svec() {
        let mut p = ConicProgram::new();
        p.add_cone(Cone::Free(1));
        let k = p.add_cone(Cone::Psd(3));
        assert_eq!(p.nvars(), 7);
        assert_eq!(p.psd_col(k, 0, 0), 1);
        assert_eq!(p.psd_col(k, 2, 0), 3);
        assert_eq!(p.psd_col(k, 1, 2), 5);
        assert_eq!(p.max_psd_side(), 3);
    }

    #[test]
    fn cone_violation_detects_each_cone() {
        let mut p = ConicProgram::new();
        p.add_cone(Cone::Soc(3));
        p.add_cone(Cone::Rsoc(3));
        assert_eq!(p.cone_violation(&[5.0, 3.0, 4.0, 1.0, 2.0, 2.0]), 0.0);
        assert!(p.cone_violation(&[4.0, 3.0, 4.0, 1.0, 2.0, 2.0]) > 0.0);
        assert!(p.cone_violation(&[5.0, 3.0, 4.0, 1.0, 2.0, 2.1]) > 0.0);
    }
}
