use crate::polyalg::Polynomial;

/// The Broyden tridiagonal polynomial `sum_i g_i(x)^2` with
/// `g_i = (3 - 2 x_i) x_i - x_{i-1} - 2 x_{i+1} + 1` (missing neighbours
/// dropped at the ends).
pub fn broyden_poly(n: usize) -> Polynomial {
    assert!(n >= 2, "Broyden polynomial needs at least two variables");
    let x = |i| Polynomial::var(n, i);
    let one = Polynomial::constant(n, 1.0);
    let mut p = Polynomial::zero(n);
    for i in 0..n {
        let xi = x(i);
        let mut g = &(&(&one.scale(3.0) - &xi.scale(2.0)) * &xi) + &one;
        if i > 0 {
            g = &g - &x(i - 1);
        }
        if i + 1 < n {
            g = &g - &x(i + 1).scale(2.0);
        }
        p = &p + &(&g * &g);
    }
    p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn residuals(x: &[f64]) -> Vec<f64> {
        let n = x.len();
        (0..n)
            .map(|i| {
                let prev = if i > 0 { x[i - 1] } else { 0.0 };
                let next = if i + 1 < n { x[i + 1] } else { 0.0 };
                (3.0 - 2.0 * x[i]) * x[i] - prev - 2.0 * next + 1.0
            })
            .collect()
    }

    #[test]
    fn matches_direct_evaluation_and_value_at_origin() {
        for n in [3, 5, 10] {
            let p = broyden_poly(n);
            assert_eq!(p.degree(), 4);
            assert!((p.eval(&vec![0.0; n]).unwrap() - n as f64).abs() < 1e-12);
            for k in 0..20 {
                let x: Vec<f64> = (0..n).map(|i| ((k * 31 + i * 17) % 23) as f64 / 7.0 - 1.5).collect();
                let want: f64 = residuals(&x).iter().map(|g| g * g).sum();
                assert!((p.eval(&x).unwrap() - want).abs() < 1e-9 * (1.0 + want));
            }
        }
    }

    #[test]
    fn csp_couples_variables_up_to_two_apart() {
        // Mixed second differences of the residual form detect coupling; the
        // cross term of x_{i-1} and 2 x_{i+1} inside group i links i-1, i+1.
        let n = 8;
        let csp = broyden_poly(n).csp_matrix();
        let f = |x: &[f64]| residuals(x).iter().map(|g| g * g).sum::<f64>();
        let base: Vec<f64> = (0..n).map(|i| 0.3 + 0.1 * i as f64).collect();
        let h = 1e-3;
        for i in 0..n {
            for j in i + 1..n {
                let at = |di: f64, dj: f64| {
                    let mut x = base.clone();
                    x[i] += di;
                    x[j] += dj;
                    f(&x)
                };
                let mixed = (at(h, h) - at(h, -h) - at(-h, h) + at(-h, -h)) / (4.0 * h * h);
                assert_eq!(csp.get(i, j), mixed.abs() > 1e-3, "({i}, {j}) mixed {mixed}");
                assert_eq!(csp.get(i, j), j - i <= 2);
            }
        }
    }

    #[test]
    fn vanishes_at_a_root_of_the_system() {
        // Newton's method on the tridiagonal system from -1 reaches a root.
        let n = 3;
        let mut x = vec![-1.0; n];
        for _ in 0..50 {
            let g = residuals(&x);
            let mut jac = faer::Mat::<f64>::zeros(n, n);
            for i in 0..n {
                jac[(i, i)] = 3.0 - 4.0 * x[i];
                if i > 0 {
                    jac[(i, i - 1)] = -1.0;
                }
                if i + 1 < n {
                    jac[(i, i + 1)] = -2.0;
                }
            }
            use faer::linalg::solvers::Solve;
            let rhs = faer::Mat::<f64>::from_fn(n, 1, |i, _| g[i]);
            let step = jac.partial_piv_lu().solve(&rhs);
            for i in 0..n {
                x[i] -= step[(i, 0)];
            }
        }
        assert!(broyden_poly(n).eval(&x).unwrap() < 1e-20);
    }
}
