use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::exponent::Exponent;
use super::CspMatrix;
use crate::error::{Error, Result};

/// Coefficients with magnitude below this are treated as zero at construction.
pub const ZERO_TOL: f64 = 1e-12;

/// A sparse real polynomial in `n` variables.
///
/// Terms are kept in graded lexicographic order and never store a zero
/// coefficient. All arithmetic returns a fresh canonical value.
#[derive(Clone, PartialEq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Exponent, f64>,
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Polynomial {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        Self::monomial(Exponent::zero(n), c)
    }

    /// The coordinate polynomial `x_i` (0-based index).
    pub fn var(n: usize, i: usize) -> Self {
        Self::monomial(Exponent::unit(n, i), 1.0)
    }

    pub fn monomial(alpha: Exponent, c: f64) -> Self {
        let mut p = Polynomial::zero(alpha.nvars());
        if c.abs() >= ZERO_TOL {
            p.terms.insert(alpha, c);
        }
        p
    }

    /// Collect terms, summing duplicates and dropping negligible coefficients.
    pub fn from_terms<I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Exponent, f64)>,
    {
        let mut acc: BTreeMap<Exponent, f64> = BTreeMap::new();
        for (alpha, c) in terms {
            if alpha.nvars() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: alpha.nvars(),
                });
            }
            if !c.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "coefficient of {alpha} is not finite"
                )));
            }
            *acc.entry(alpha).or_insert(0.0) += c;
        }
        acc.retain(|_, c| c.abs() >= ZERO_TOL);
        Ok(Polynomial { n, terms: acc })
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    /// Number of stored terms.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, f64)> + '_ {
        self.terms.iter().map(|(a, &c)| (a, c))
    }

    pub fn coeff(&self, alpha: &Exponent) -> f64 {
        self.terms.get(alpha).copied().unwrap_or(0.0)
    }

    /// Total degree; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Exponent::degree).max().unwrap_or(0)
    }

    /// Smallest total degree among the stored terms; zero for the zero polynomial.
    pub fn min_degree(&self) -> u32 {
        self.terms.keys().map(Exponent::degree).min().unwrap_or(0)
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        Ok(self.terms.iter().map(|(a, c)| c * a.eval(x)).sum())
    }

    pub fn try_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        Polynomial::from_terms(
            self.n,
            self.terms().chain(other.terms()).map(|(a, c)| (a.clone(), c)),
        )
    }

    pub fn try_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.try_add(&other.scale(-1.0))
    }

    pub fn try_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.check_same(other)?;
        let mut prods = Vec::with_capacity(self.len() * other.len());
        for (a, ca) in self.terms() {
            for (b, cb) in other.terms() {
                prods.push((a.add(b), ca * cb));
            }
        }
        Polynomial::from_terms(self.n, prods)
    }

    pub fn scale(&self, s: f64) -> Polynomial {
        let terms = self
            .terms
            .iter()
            .map(|(a, &c)| (a.clone(), c * s))
            .filter(|(_, c)| c.abs() >= ZERO_TOL)
            .collect();
        Polynomial { n: self.n, terms }
    }

    pub fn pow(&self, k: u32) -> Polynomial {
        let mut out = Polynomial::constant(self.n, 1.0);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Partial derivative with respect to `x_i`.
    pub fn derivative(&self, i: usize) -> Polynomial {
        let terms = self.terms().filter(|(a, _)| a.get(i) > 0).map(|(a, c)| {
            let mut alpha = a.as_slice().to_vec();
            let k = alpha[i];
            alpha[i] -= 1;
            (Exponent::new(alpha), c * k as f64)
        });
        Polynomial::from_terms(self.n, terms).expect("same dimension")
    }

    /// Re-index into `n` variables, sending variable `i` to `map[i]`.
    pub fn embed(&self, n: usize, map: &[usize]) -> Polynomial {
        assert_eq!(map.len(), self.n, "embedding map must cover every variable");
        Polynomial::from_terms(n, self.terms().map(|(a, c)| (a.embed(n, map), c)))
            .expect("embedded exponents have length n")
    }

    /// Largest coefficient magnitude, or zero.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().fold(0.0, |m, c| m.max(c.abs()))
    }

    /// Correlative sparsity pattern: `(i, j)` is set when `i == j` or some
    /// term contains both `x_i` and `x_j`.
    pub fn csp_matrix(&self) -> CspMatrix {
        let mut m = CspMatrix::identity(self.n);
        for alpha in self.terms.keys() {
            m.mark_monomial(alpha);
        }
        m
    }

    fn check_same(&self, other: &Polynomial) -> Result<()> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        Ok(())
    }
}

/// Entrywise OR of the correlative sparsity patterns of `ps`.
pub fn csp_matrix_of_set(ps: &[Polynomial]) -> Result<CspMatrix> {
    let Some(first) = ps.first() else {
        return Err(Error::InvalidInput("empty polynomial set".into()));
    };
    let mut m = CspMatrix::identity(first.n);
    for p in ps {
        first.check_same(p)?;
        for alpha in p.terms.keys() {
            m.mark_monomial(alpha);
        }
    }
    Ok(m)
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (a, c)) in self.terms.iter().enumerate() {
            let sign = if *c < 0.0 { "-" } else { "+" };
            if k == 0 {
                if *c < 0.0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = c.abs();
            if a.degree() == 0 {
                write!(f, "{mag}")?;
            } else if mag == 1.0 {
                write!(f, "{a}")?;
            } else {
                write!(f, "{mag}*{a}")?;
            }
        }
        Ok(())
    }
}

// Operator sugar panics on mismatched variable counts; use the `try_*`
// methods for fallible arithmetic.
impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("variable count mismatch")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("variable count mismatch")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("variable count mismatch")
    }
}

impl Mul<&Polynomial> for f64 {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        rhs.scale(self)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}
