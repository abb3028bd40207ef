use std::cmp::Ordering;
use std::fmt;

/// A multi-index `alpha` in `N^n`, representing the monomial `prod_i x_i^alpha_i`.
///
/// Exponents order by graded lexicographic order: lower total degree first, and
/// within a degree the exponent with the larger power of the earliest variable
/// first. Sorting the monomials of degree at most `d` ascending therefore gives
/// `1, x1, ..., xn, x1^2, x1 x2, ..., xn^d`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Exponent(Vec<u32>);

impl Exponent {
    pub fn new(alpha: Vec<u32>) -> Self {
        Exponent(alpha)
    }

    pub fn zero(n: usize) -> Self {
        Exponent(vec![0; n])
    }

    /// The exponent of the single variable `x_i`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut alpha = vec![0; n];
        alpha[i] = 1;
        Exponent(alpha)
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    /// Indices of the variables with a positive power.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &a)| a > 0)
            .map(|(i, _)| i)
    }

    /// `true` if every variable with a positive power belongs to `vars`.
    pub fn is_supported_on(&self, vars: &[usize]) -> bool {
        self.support().all(|i| vars.contains(&i))
    }

    pub fn add(&self, other: &Exponent) -> Exponent {
        debug_assert_eq!(self.0.len(), other.0.len());
        Exponent(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Re-index into `n` variables, sending variable `i` to `map[i]`.
    pub fn embed(&self, n: usize, map: &[usize]) -> Exponent {
        let mut alpha = vec![0; n];
        for (i, &a) in self.0.iter().enumerate() {
            alpha[map[i]] += a;
        }
        Exponent(alpha)
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(x)
            .filter(|(&a, _)| a > 0)
            .map(|(&a, &xi)| xi.powi(a as i32))
            .product()
    }
}

impl Ord for Exponent {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Exponent {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if a == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, a)?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

impl From<Vec<u32>> for Exponent {
    fn from(alpha: Vec<u32>) -> Self {
        Exponent(alpha)
    }
}
