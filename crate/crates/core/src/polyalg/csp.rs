use super::exponent::Exponent;
use crate::error::{Error, Result};

/// A symmetric 0/1 matrix recording which variable pairs co-occur in a monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CspMatrix {
    n: usize,
    data: Vec<bool>,
}

impl CspMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![false; n * n];
        for i in 0..n {
            data[i * n + i] = true;
        }
        CspMatrix { n, data }
    }

    /// Build from 0/1 rows, rejecting non-square, non-binary or asymmetric input.
    pub fn from_rows(rows: &[Vec<u8>]) -> Result<Self> {
        let n = rows.len();
        let mut m = CspMatrix::identity(n);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                if v > 1 {
                    return Err(Error::InvalidInput(format!("entry ({i}, {j}) is not 0/1")));
                }
                if v != rows[j][i] {
                    return Err(Error::NotSymmetric { row: i, col: j });
                }
                m.data[i * n + j] = v == 1 || i == j;
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize) {
        self.data[i * self.n + j] = true;
        self.data[j * self.n + i] = true;
    }

    pub(crate) fn mark_monomial(&mut self, alpha: &Exponent) {
        let s: Vec<usize> = alpha.support().collect();
        for (k, &i) in s.iter().enumerate() {
            for &j in &s[k..] {
                self.set(i, j);
            }
        }
    }

    pub fn union(&mut self, other: &CspMatrix) {
        assert_eq!(self.n, other.n);
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a |= b;
        }
    }

    pub fn rows(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) as u8).collect())
            .collect()
    }

    /// Off-diagonal pairs `(i, j)` with `i < j` that are set.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for j in i + 1..self.n {
                if self.get(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}
