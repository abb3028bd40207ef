use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{run_program, Outcome, SolveOptions};
use crate::chordal::SparsityGraph;
use crate::cones::{AffinePoly, ConeKind, SosProgram};
use crate::error::Result;
use crate::polyalg::{Exponent, Polynomial};

/// Symmetric matrix with entries uniform in `[-1, 1]` on the pattern and its
/// diagonal, zero elsewhere.
pub fn random_copositive(pattern: &SparsityGraph, seed: u64) -> Vec<Vec<f64>> {
    let n = pattern.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut z = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i..n {
            if i == j || pattern.has_edge(i, j) {
                let v = rng.random_range(-1.0..=1.0);
                z[i][j] = v;
                z[j][i] = v;
            }
        }
    }
    z
}

/// The quartic `sum_ij Z_ij x_i^2 x_j^2`, nonnegative iff `Z` is copositive.
pub fn copositive_form(z: &[Vec<f64>]) -> Polynomial {
    let n = z.len();
    let terms = (0..n).flat_map(|i| {
        (i..n).filter(move |&j| z[i][j] != 0.0).map(move |j| {
            let mut a = vec![0u32; n];
            a[i] += 2;
            a[j] += 2;
            (Exponent::new(a), if i == j { z[i][i] } else { 2.0 * z[i][j] })
        })
    });
    Polynomial::from_terms(n, terms).expect("exponents built with n variables")
}

/// `min gamma` subject to `sum_ij (Z + gamma I)_ij x_i^2 x_j^2` in `kind`.
pub fn solve_copositive(z: &[Vec<f64>], kind: ConeKind, opts: &SolveOptions) -> Result<Outcome> {
    let started = Instant::now();
    let n = z.len();
    let mut prog = SosProgram::new();
    let gamma = prog.free_var();
    let mut t = AffinePoly::from(&copositive_form(z));
    let quartics = (0..n).fold(Polynomial::zero(n), |acc, i| &acc + &Polynomial::var(n, i).pow(4));
    t.add_var_times(gamma, &quartics)?;
    prog.add_constraint(&t, kind, &opts.gram)?;
    prog.minimize(gamma, 1.0);
    Ok(run_program(&prog, Some(gamma), opts, started)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{block_arrow_pattern, RowStatus};

    #[test]
    fn form_matches_quadratic_in_squares() {
        let g = block_arrow_pattern(2, 2, 1).unwrap();
        let z = random_copositive(&g, 4);
        let q = copositive_form(&z);
        let x = [0.4, -1.1, 0.7, 0.2, -0.9];
        let y: Vec<f64> = x.iter().map(|v| v * v).collect();
        let direct: f64 = (0..5).flat_map(|i| (0..5).map(move |j| (i, j))).map(|(i, j)| y[i] * z[i][j] * y[j]).sum();
        assert!((q.eval(&x).unwrap() - direct).abs() < 1e-12);
        for (i, j) in q.csp_matrix().edges() {
            assert!(g.has_edge(i, j));
        }
    }

    #[test]
    fn generator_respects_pattern_and_seed() {
        let g = block_arrow_pattern(2, 3, 2).unwrap();
        let z = random_copositive(&g, 9);
        assert_eq!(z, random_copositive(&g, 9));
        for i in 0..8 {
            for j in 0..8 {
                assert_eq!(z[i][j], z[j][i]);
                if i != j && !g.has_edge(i, j) {
                    assert_eq!(z[i][j], 0.0);
                }
            }
        }
    }

    #[test]
    fn identity_is_copositive_in_every_cone() {
        let z: Vec<Vec<f64>> = (0..4).map(|i| (0..4).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect();
        for kind in ConeKind::ALL {
            let out = solve_copositive(&z, kind, &SolveOptions::default()).unwrap();
            assert_eq!(out.status, RowStatus::Optimal, "{kind}");
            assert!(out.value.unwrap() <= -1.0 + 1e-5, "{kind}: {:?}", out.value);
        }
    }
}
