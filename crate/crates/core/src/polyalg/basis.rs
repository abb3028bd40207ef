use super::exponent::Exponent;

/// An ordered, duplicate-free list of monomials in graded lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialBasis {
    n: usize,
    elements: Vec<Exponent>,
}

/// All exponents of degree at most `d` over `n` variables supported on
/// `support` (every variable if `None`), sorted in graded lexicographic order.
pub fn monomial_basis(n: usize, d: u32, support: Option<&[usize]>) -> MonomialBasis {
    MonomialBasis::degree_range(n, 0, d, support)
}

impl MonomialBasis {
    /// Monomials with `lo <= degree <= hi` supported on `support`.
    pub fn degree_range(n: usize, lo: u32, hi: u32, support: Option<&[usize]>) -> Self {
        let vars: Vec<usize> = match support {
            Some(s) => {
                let mut v = s.to_vec();
                v.sort_unstable();
                v.dedup();
                v
            }
            None => (0..n).collect(),
        };
        let mut elements = Vec::new();
        let mut alpha = vec![0u32; n];
        enumerate(&vars, 0, hi, &mut alpha, &mut |a| {
            let deg: u32 = a.iter().sum();
            if deg >= lo {
                elements.push(Exponent::new(a.to_vec()));
            }
        });
        elements.sort();
        MonomialBasis { n, elements }
    }

    /// Sort and deduplicate an arbitrary list of exponents over `n` variables.
    pub fn from_elements(n: usize, mut elements: Vec<Exponent>) -> Self {
        assert!(elements.iter().all(|e| e.nvars() == n));
        elements.sort();
        elements.dedup();
        MonomialBasis { n, elements }
    }

    pub fn nvars(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[Exponent] {
        &self.elements
    }

    pub fn get(&self, i: usize) -> &Exponent {
        &self.elements[i]
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Exponent> {
        self.elements.iter()
    }

    pub fn position(&self, alpha: &Exponent) -> Option<usize> {
        self.elements.binary_search(alpha).ok()
    }

    pub fn max_degree(&self) -> u32 {
        self.elements.iter().map(Exponent::degree).max().unwrap_or(0)
    }

    /// The vector `v(x)` of basis monomials evaluated at `x`.
    pub fn eval(&self, x: &[f64]) -> Vec<f64> {
        self.elements.iter().map(|e| e.eval(x)).collect()
    }
}

fn enumerate(vars: &[usize], k: usize, budget: u32, alpha: &mut [u32], f: &mut impl FnMut(&[u32])) {
    if k == vars.len() {
        f(alpha);
        return;
    }
    for p in 0..=budget {
        alpha[vars[k]] = p;
        enumerate(vars, k + 1, budget - p, alpha, f);
    }
    alpha[vars[k]] = 0;
}

/// Binomial coefficient `C(n, k)`.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}
