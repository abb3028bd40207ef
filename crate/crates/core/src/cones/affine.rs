use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::polyalg::{CspMatrix, Exponent, PolyMatrix, Polynomial, ZERO_TOL};

/// A scalar decision variable of an [`SosProgram`](super::SosProgram),
/// identified by its column in the underlying conic program.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DecVar(pub(crate) usize);

impl DecVar {
    pub fn column(&self) -> usize {
        self.0
    }
}

/// `constant + sum_k coef_k * var_k`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct AffineExpr {
    pub constant: f64,
    pub vars: Vec<(DecVar, f64)>,
}

impl AffineExpr {
    pub fn is_constant(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn eval(&self, values: &[f64]) -> f64 {
        self.constant + self.vars.iter().map(|(v, c)| c * values[v.0]).sum::<f64>()
    }

    fn add_var(&mut self, v: DecVar, c: f64) {
        match self.vars.iter_mut().find(|(w, _)| *w == v) {
            Some(e) => e.1 += c,
            None => self.vars.push((v, c)),
        }
    }

    fn is_zero(&self) -> bool {
        self.constant.abs() < ZERO_TOL && self.vars.iter().all(|(_, c)| c.abs() < ZERO_TOL)
    }
}

/// A polynomial whose coefficients are affine in decision variables.
#[derive(Clone, Debug, PartialEq)]
pub struct AffinePoly {
    n: usize,
    terms: BTreeMap<Exponent, AffineExpr>,
}

impl AffinePoly {
    pub fn zero(n: usize) -> Self {
        AffinePoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    /// Add `scale * p`.
    pub fn add_poly(&mut self, p: &Polynomial, scale: f64) -> Result<()> {
        self.check(p)?;
        for (a, c) in p.terms() {
            self.terms.entry(a.clone()).or_default().constant += scale * c;
        }
        self.prune();
        Ok(())
    }

    /// Add `var * p`.
    pub fn add_var_times(&mut self, var: DecVar, p: &Polynomial) -> Result<()> {
        self.check(p)?;
        for (a, c) in p.terms() {
            self.terms.entry(a.clone()).or_default().add_var(var, c);
        }
        self.prune();
        Ok(())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &AffineExpr)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, alpha: &Exponent) -> Option<&AffineExpr> {
        self.terms.get(alpha)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Exponent::degree).max().unwrap_or(0)
    }

    pub fn min_degree(&self) -> u32 {
        self.terms.keys().map(Exponent::degree).min().unwrap_or(0)
    }

    /// The polynomial obtained by fixing every decision variable.
    pub fn eval(&self, values: &[f64]) -> Polynomial {
        Polynomial::from_terms(self.n, self.terms.iter().map(|(a, e)| (a.clone(), e.eval(values))))
            .expect("exponents share n")
    }

    /// Correlative sparsity over every monomial that may carry a nonzero coefficient.
    pub fn csp_matrix(&self) -> CspMatrix {
        let support = Polynomial::from_terms(self.n, self.terms.keys().map(|a| (a.clone(), 1.0)))
            .expect("exponents share n");
        support.csp_matrix()
    }

    fn check(&self, p: &Polynomial) -> Result<()> {
        if p.nvars() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: p.nvars(),
            });
        }
        Ok(())
    }

    fn prune(&mut self) {
        self.terms.retain(|_, e| !e.is_zero());
    }
}

impl From<&Polynomial> for AffinePoly {
    fn from(p: &Polynomial) -> Self {
        let mut a = AffinePoly::zero(p.nvars());
        a.add_poly(p, 1.0).expect("same dimension");
        a
    }
}

/// A symmetric `r x r` matrix of [`AffinePoly`] entries.
#[derive(Clone, Debug, PartialEq)]
pub struct AffinePolyMatrix {
    r: usize,
    n: usize,
    /// Upper triangle, row-major over `i <= j`.
    upper: Vec<AffinePoly>,
}

impl AffinePolyMatrix {
    pub fn zero(r: usize, n: usize) -> Self {
        AffinePolyMatrix {
            r,
            n,
            upper: vec![AffinePoly::zero(n); r * (r + 1) / 2],
        }
    }

    pub fn side(&self) -> usize {
        self.r
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    fn idx(&self, i: usize, j: usize) -> usize {
        let (i, j) = if i <= j { (i, j) } else { (j, i) };
        i * self.r - i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: usize, j: usize) -> &AffinePoly {
        &self.upper[self.idx(i, j)]
    }

    pub fn get_mut(&mut self, i: usize, j: usize) -> &mut AffinePoly {
        let k = self.idx(i, j);
        &mut self.upper[k]
    }

    pub fn degree(&self) -> u32 {
        self.upper.iter().map(AffinePoly::degree).max().unwrap_or(0)
    }

    pub fn eval(&self, values: &[f64]) -> PolyMatrix {
        PolyMatrix::from_fn(self.r, self.n, |i, j| self.get(i, j).eval(values)).expect("symmetric by construction")
    }
}

impl From<&PolyMatrix> for AffinePolyMatrix {
    fn from(m: &PolyMatrix) -> Self {
        let mut a = AffinePolyMatrix::zero(m.side(), m.nvars());
        for i in 0..m.side() {
            for j in i..m.side() {
                a.get_mut(i, j).add_poly(m.get(i, j), 1.0).expect("same dimension");
            }
        }
        a
    }
}

impl From<AffinePoly> for AffinePolyMatrix {
    fn from(p: AffinePoly) -> Self {
        AffinePolyMatrix {
            r: 1,
            n: p.nvars(),
            upper: vec![p],
        }
    }
}
