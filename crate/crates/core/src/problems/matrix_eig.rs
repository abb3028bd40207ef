use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{patterns::star_pattern, run_program, Outcome, SolveOptions};
use crate::chordal::SparsityGraph;
use crate::cones::{AffinePolyMatrix, ConeKind, SosProgram};
use crate::error::{Error, Result};
use crate::polyalg::{monomial_basis, PolyMatrix, Polynomial};

/// Symmetric `r x r` matrix whose on-pattern entries (diagonal included) are
/// dense polynomials of degree `2d` in `n` variables with coefficients drawn
/// uniformly from `[-1, 1]`. Off-pattern entries are zero.
pub fn random_sparse_polymatrix(r: usize, pattern: &SparsityGraph, n: usize, d: u32, seed: u64) -> Result<PolyMatrix> {
    if pattern.n() != r {
        return Err(Error::DimensionMismatch { expected: r, found: pattern.n() });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let monos = monomial_basis(n, 2 * d, None);
    let mut upper = vec![Polynomial::zero(n); r * r];
    for a in 0..r {
        for b in a..r {
            if a == b || pattern.has_edge(a, b) {
                let terms: Vec<_> = monos.iter().map(|m| (m.clone(), rng.random_range(-1.0..=1.0))).collect();
                upper[a * r + b] = Polynomial::from_terms(n, terms)?;
            }
        }
    }
    PolyMatrix::from_fn(r, n, |a, b| upper[a.min(b) * r + a.max(b)].clone())
}

/// Gram matrix over `(row, monomial)` pairs that splits every coefficient of
/// `P` evenly among the monomial pairs producing it. Indexed `row * k + m`
/// for the `k` monomials of the half basis.
fn even_split_gram(p: &PolyMatrix, half: &[crate::Exponent]) -> Vec<Vec<f64>> {
    let (r, k) = (p.side(), half.len());
    let mut g = vec![vec![0.0; r * k]; r * k];
    for a in 0..r {
        for b in 0..r {
            for (beta, c) in p.get(a, b).terms() {
                let pairs: Vec<(usize, usize)> = (0..k)
                    .flat_map(|i| (0..k).map(move |j| (i, j)))
                    .filter(|&(i, j)| &half[i].add(&half[j]) == beta)
                    .collect();
                for &(i, j) in &pairs {
                    g[a * k + i][b * k + j] += c / pairs.len() as f64;
                }
            }
        }
    }
    g
}

/// A seeded eigenvalue-bound instance: random quadratic entries in two
/// variables on the expanded star pattern, with `s (x1^2 + x2^2)` added to
/// each diagonal entry. The shift `s` makes the degree-one rows of the even
/// split Gram matrix strictly diagonally dominant, so `P + gamma I` is
/// feasible in every cone once `gamma` is large enough.
pub fn eig_bound_instance(r: usize, seed: u64) -> Result<(PolyMatrix, SparsityGraph)> {
    let pattern = star_pattern(r)?;
    let p = random_sparse_polymatrix(r, &pattern, 2, 1, seed)?;
    let half = monomial_basis(2, 1, None);
    let k = half.len();
    let g = even_split_gram(&p, half.elements());
    let mut deficit: f64 = 0.0;
    for (row, gr) in g.iter().enumerate() {
        if row % k == 0 {
            continue; // constant monomial, handled by gamma
        }
        let off: f64 = gr.iter().enumerate().filter(|&(j, _)| j != row).map(|(_, v)| v.abs()).sum();
        deficit = deficit.max(off - gr[row]);
    }
    let s = 1.0 + deficit;
    let shift = (&Polynomial::var(2, 0).pow(2) + &Polynomial::var(2, 1).pow(2)).scale(s);
    let shifted = PolyMatrix::from_fn(r, 2, |a, b| if a == b { p.get(a, a) + &shift } else { p.get(a, b).clone() })?;
    Ok((shifted, pattern))
}

/// `min gamma` subject to `P + gamma I` in the matrix cone `kind`.
pub fn solve_matrix_eig_bound(p: &PolyMatrix, pattern: &SparsityGraph, kind: ConeKind, opts: &SolveOptions) -> Result<Outcome> {
    let started = Instant::now();
    let (r, n) = (p.side(), p.nvars());
    let mut prog = SosProgram::new();
    let gamma = prog.free_var();
    let mut t = AffinePolyMatrix::from(p);
    let one = Polynomial::constant(n, 1.0);
    for a in 0..r {
        t.get_mut(a, a).add_var_times(gamma, &one)?;
    }
    prog.add_matrix_constraint(&t, kind, Some(pattern), &opts.gram)?;
    prog.minimize(gamma, 1.0);
    Ok(run_program(&prog, Some(gamma), opts, started)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::RowStatus;

    #[test]
    fn generator_is_deterministic_and_respects_pattern() {
        let g = star_pattern(10).unwrap();
        let a = random_sparse_polymatrix(10, &g, 2, 1, 7).unwrap();
        let b = random_sparse_polymatrix(10, &g, 2, 1, 7).unwrap();
        assert_eq!(a, b);
        for i in 0..10 {
            for j in 0..10 {
                let on = i == j || g.has_edge(i, j);
                assert_eq!(!a.get(i, j).is_zero(), on, "entry ({i},{j})");
                assert_eq!(a.get(i, j), a.get(j, i));
            }
        }
        assert_eq!(a.degree(), 2);
        assert!(a.entries().iter().flat_map(|p| p.terms()).all(|(_, c)| c.abs() <= 1.0));
    }

    #[test]
    fn even_split_reproduces_matrix() {
        // y' P(x) y recomputed from the Gram matrix at random points.
        let (p, _) = eig_bound_instance(6, 3).unwrap();
        let half = monomial_basis(2, 1, None);
        let g = even_split_gram(&p, half.elements());
        let x = [0.3, -0.7];
        let y = [1.0, -2.0, 0.5, 0.1, 0.0, 3.0];
        let pv = p.eval(&x).unwrap();
        let direct: f64 = (0..6).flat_map(|a| (0..6).map(move |b| (a, b))).map(|(a, b)| y[a] * y[b] * pv[a * 6 + b]).sum();
        let v: Vec<f64> = half.iter().map(|m| m.eval(&x)).collect();
        let z: Vec<f64> = (0..6).flat_map(|a| v.iter().map(move |m| y[a] * m)).collect();
        let quad: f64 = (0..z.len()).flat_map(|i| (0..z.len()).map(move |j| (i, j))).map(|(i, j)| z[i] * g[i][j] * z[j]).sum();
        assert!((direct - quad).abs() < 1e-10, "{direct} vs {quad}");
    }

    #[test]
    fn diagonal_squares_need_no_shift() {
        let n = 2;
        let p = PolyMatrix::from_fn(3, n, |a, b| {
            if a == b {
                Polynomial::var(n, a % n).pow(2)
            } else {
                Polynomial::zero(n)
            }
        })
        .unwrap();
        let pattern = SparsityGraph::empty(3);
        for kind in ConeKind::ALL {
            let out = solve_matrix_eig_bound(&p, &pattern, kind, &SolveOptions::default()).unwrap();
            assert_eq!(out.status, RowStatus::Optimal, "{kind}");
            assert!(out.value.unwrap().abs() < 1e-5, "{kind}: {:?}", out.value);
        }
    }

    #[test]
    fn sos_constructed_matrix_has_nonpositive_bound() {
        // P = sum over cliques of V_c' G_c V_c with G_c PSD, so P is matrix SSOS.
        let g = star_pattern(5).unwrap();
        let half = monomial_basis(2, 1, None);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut entries = vec![Polynomial::zero(2); 25];
        for leaf in 1..5 {
            let rows = [0usize, leaf];
            let els: Vec<(usize, usize)> = rows.iter().flat_map(|&a| (0..3).map(move |m| (a, m))).collect();
            let f: Vec<Vec<f64>> = (0..els.len()).map(|_| (0..els.len()).map(|_| rng.random_range(-1.0..1.0)).collect()).collect();
            for (i, &(a, mi)) in els.iter().enumerate() {
                for (j, &(b, mj)) in els.iter().enumerate() {
                    let gij: f64 = (0..els.len()).map(|k| f[k][i] * f[k][j]).sum();
                    let term = Polynomial::monomial(half.get(mi).add(&half.get(mj)), gij);
                    entries[a * 5 + b] = &entries[a * 5 + b] + &term;
                }
            }
        }
        let p = PolyMatrix::new(5, 2, entries).unwrap();
        let out = solve_matrix_eig_bound(&p, &g, ConeKind::Ssos, &SolveOptions::default()).unwrap();
        assert_eq!(out.status, RowStatus::Optimal);
        assert!(out.value.unwrap() <= 1e-6, "{:?}", out.value);
    }

    #[test]
    fn cone_ordering_on_seeded_instance() {
        let (p, g) = eig_bound_instance(10, 1).unwrap();
        let vals: Vec<f64> = ConeKind::ALL
            .iter()
            .map(|&k| {
                let out = solve_matrix_eig_bound(&p, &g, k, &SolveOptions::default()).unwrap();
                assert_eq!(out.status, RowStatus::Optimal, "{k}");
                out.value.unwrap()
            })
            .collect();
        // ALL is ordered dsos, sdsos, ssos, sos
        for w in vals.windows(2) {
            assert!(w[0] >= w[1] - 1e-6 * (1.0 + w[0].abs()), "{vals:?}");
        }
    }
}
