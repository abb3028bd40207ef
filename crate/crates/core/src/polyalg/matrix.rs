use super::{CspMatrix, Polynomial};
use crate::error::{Error, Result};

/// A symmetric `r x r` matrix of polynomials in `n` variables.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyMatrix {
    r: usize,
    n: usize,
    entries: Vec<Polynomial>,
}

impl PolyMatrix {
    /// Build from a row-major list of `r * r` entries, checking symmetry.
    pub fn new(r: usize, n: usize, entries: Vec<Polynomial>) -> Result<Self> {
        if entries.len() != r * r {
            return Err(Error::DimensionMismatch {
                expected: r * r,
                found: entries.len(),
            });
        }
        for p in &entries {
            if p.nvars() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.nvars(),
                });
            }
        }
        for i in 0..r {
            for j in i + 1..r {
                let d = entries[i * r + j].try_sub(&entries[j * r + i])?;
                let scale = 1.0
                    + entries[i * r + j]
                        .max_abs_coeff()
                        .max(entries[j * r + i].max_abs_coeff());
                if d.max_abs_coeff() > 1e-12 * scale {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(PolyMatrix { r, n, entries })
    }

    /// Build from the upper triangle, mirroring it into the lower one.
    pub fn from_fn(r: usize, n: usize, mut f: impl FnMut(usize, usize) -> Polynomial) -> Result<Self> {
        let mut entries = vec![Polynomial::zero(n); r * r];
        for i in 0..r {
            for j in i..r {
                let p = f(i, j);
                entries[j * r + i] = p.clone();
                entries[i * r + j] = p;
            }
        }
        PolyMatrix::new(r, n, entries)
    }

    /// The `1 x 1` matrix holding `p`.
    pub fn scalar(p: Polynomial) -> Self {
        PolyMatrix {
            r: 1,
            n: p.nvars(),
            entries: vec![p],
        }
    }

    pub fn side(&self) -> usize {
        self.r
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Polynomial {
        &self.entries[i * self.r + j]
    }

    pub fn entries(&self) -> &[Polynomial] {
        &self.entries
    }

    pub fn degree(&self) -> u32 {
        self.entries.iter().map(Polynomial::degree).max().unwrap_or(0)
    }

    /// Off-diagonal pairs `(i, j)`, `i < j`, whose entry is not identically zero.
    pub fn nonzero_pattern(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.r {
            for j in i + 1..self.r {
                if !self.get(i, j).is_zero() {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Union of the correlative sparsity patterns of all entries.
    pub fn csp_matrix(&self) -> CspMatrix {
        let mut m = CspMatrix::identity(self.n);
        for p in &self.entries {
            m.union(&p.csp_matrix());
        }
        m
    }

    /// Row-major numeric matrix `P(x)`.
    pub fn eval(&self, x: &[f64]) -> Result<Vec<f64>> {
        self.entries.iter().map(|p| p.eval(x)).collect()
    }
}
