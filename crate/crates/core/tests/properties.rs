//! Randomized invariants across the algebra, chordal and conic layers.

use faer::Mat;
use proptest::prelude::*;
use sparsos::chordal::{chordal_extend, clique_decompose_psd, inflate, is_chordal, maximal_cliques, SparsityGraph};
use sparsos::cones::{certify, certify_matrix, scalarize_matrix, CertifyOptions, ConeKind, GramOptions, SosStatus};
use sparsos::conic::{min_eigenvalue, smat, solve, svec, Cone, ConicProgram, Settings, SolveStatus};
use sparsos::polyalg::binomial;
use sparsos::{monomial_basis, Exponent, PolyMatrix, Polynomial};

fn small_poly(n: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..3, n), -3i32..=3), 0..6).prop_map(move |terms| {
        Polynomial::from_terms(n, terms.into_iter().map(|(a, c)| (Exponent::new(a), c as f64))).unwrap()
    })
}

fn random_graph(n: usize) -> impl Strategy<Value = SparsityGraph> {
    prop::collection::vec(prop::bool::weighted(0.3), n * (n - 1) / 2).prop_map(move |bits| {
        let mut g = SparsityGraph::empty(n);
        let mut k = 0;
        for i in 0..n {
            for j in i + 1..n {
                if bits[k] {
                    g.add_edge(i, j);
                }
                k += 1;
            }
        }
        g
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_laws_on_integer_polynomials(p in small_poly(3), q in small_poly(3), r in small_poly(3)) {
        prop_assert_eq!(&p + &Polynomial::zero(3), p.clone());
        prop_assert_eq!(&p * &q, &q * &p);
        prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
        prop_assert_eq!(&p * &(&q + &r), &(&p * &q) + &(&p * &r));
    }

    #[test]
    fn csp_matches_definitional_enumeration(p in small_poly(4), q in small_poly(4)) {
        let pq = &p * &q;
        let csp = pq.csp_matrix();
        for i in 0..4 {
            prop_assert!(csp.get(i, i));
            for j in 0..4 {
                prop_assert_eq!(csp.get(i, j), csp.get(j, i));
                if i != j {
                    let want = pq.terms().any(|(a, _)| a.get(i) > 0 && a.get(j) > 0);
                    prop_assert_eq!(csp.get(i, j), want);
                }
            }
        }
    }

    #[test]
    fn basis_size_is_binomial(n in 1usize..=6, d in 0u32..=4) {
        let b = monomial_basis(n, d, None);
        prop_assert_eq!(b.len(), binomial(n + d as usize, d as usize));
        // graded lexicographic order: strictly increasing, degrees nondecreasing
        for w in b.elements().windows(2) {
            prop_assert!(w[0] < w[1]);
            prop_assert!(w[0].degree() <= w[1].degree());
        }
    }

    #[test]
    fn chordal_extension_and_cliques(g in random_graph(8)) {
        let h = chordal_extend(&g);
        prop_assert!(is_chordal(&h).is_some());
        prop_assert!(g.is_subgraph_of(&h));
        let cover = maximal_cliques(&h).unwrap();
        prop_assert!(cover.len() <= 8);
        let cl = cover.cliques();
        for (a, ca) in cl.iter().enumerate() {
            prop_assert!(h.is_clique(ca));
            for (b, cb) in cl.iter().enumerate() {
                if a != b {
                    prop_assert!(!ca.iter().all(|v| cb.contains(v)), "{:?} inside {:?}", ca, cb);
                }
            }
        }
        // every edge of the chordal graph lies in some clique and vice versa
        let mut union = SparsityGraph::empty(8);
        for c in cl {
            for (k, &i) in c.iter().enumerate() {
                for &j in &c[k + 1..] {
                    union.add_edge(i, j);
                }
            }
        }
        prop_assert_eq!(union.edges(), h.edges());
    }

    #[test]
    fn svec_round_trip(v in prop::collection::vec(-5.0f64..5.0, 10)) {
        let m = smat(&v, 4);
        let back = svec(&m).unwrap();
        for (a, b) in v.iter().zip(&back) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        // inner products are preserved
        let frob: f64 = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| m[(i, j)] * m[(i, j)]).sum();
        let dot: f64 = v.iter().map(|x| x * x).sum();
        prop_assert!((frob - dot).abs() < 1e-9);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn clique_decomposition_output_is_psd(g in random_graph(6), seed in 0u64..1000) {
        use rand::{Rng, SeedableRng};
        let h = chordal_extend(&g);
        let cover = maximal_cliques(&h).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let mut x = Mat::<f64>::zeros(6, 6);
        for c in cover.cliques() {
            let k = c.len();
            let f = Mat::<f64>::from_fn(k, k, |_, _| rng.random_range(-1.0..1.0));
            let blk = f.transpose() * &f;
            x += inflate(c, &blk, 6).unwrap();
        }
        let blocks = clique_decompose_psd(&x, &cover, 1e-9).unwrap().expect("clique sum decomposes");
        let mut sum = Mat::<f64>::zeros(6, 6);
        for (c, b) in &blocks {
            prop_assert!(min_eigenvalue(b) >= -1e-8);
            sum += inflate(c, b, 6).unwrap();
        }
        prop_assert!(min_eigenvalue(&sum) >= -1e-8);
        prop_assert!((&sum - &x).norm_max() < 1e-8);
    }

    #[test]
    fn random_lp_weak_duality(c in prop::collection::vec(0.1f64..2.0, 4), a in prop::collection::vec(0.1f64..2.0, 8), x0 in prop::collection::vec(0.1f64..2.0, 4)) {
        // min c'x, A x = A x0, x >= 0 with positive data: feasible and bounded.
        let mut prog = ConicProgram::new();
        prog.add_cone(Cone::NonNeg(4));
        for i in 0..2 {
            let bi: f64 = (0..4).map(|j| a[i * 4 + j] * x0[j]).sum();
            prog.add_row((0..4).map(|j| (j, a[i * 4 + j])), bi);
        }
        for (j, cj) in c.iter().enumerate() {
            prog.set_objective(j, *cj);
        }
        let sol = solve(&prog, &Settings::default()).unwrap();
        prop_assert_eq!(sol.status, SolveStatus::Optimal);
        prop_assert!(sol.primal_objective >= sol.dual_objective - 1e-7);
        let res = prog.residuals(&sol.x, &sol.y, &sol.s);
        prop_assert!((res.primal - sol.primal_residual).abs() < 1e-9);
        prop_assert!((res.dual - sol.dual_residual).abs() < 1e-9);
    }

    #[test]
    fn inclusion_chain_on_sparse_quartics(coefs in prop::collection::vec(-1.0f64..1.0, 12), shift in 0.0f64..2.0) {
        // chain quartic: sum_i (x_i^2 - a_i)^2 + b_i x_i x_{i+1} + shift x'x
        let n = 4;
        let x = |i| Polynomial::var(n, i);
        let mut p = Polynomial::zero(n);
        for i in 0..n {
            let sq = &x(i).pow(2) - &Polynomial::constant(n, coefs[i]);
            p = &p + &(&sq * &sq);
            p = &p + &x(i).pow(2).scale(shift);
            if i + 1 < n {
                p = &p + &(&x(i) * &x(i + 1)).scale(coefs[n + i]);
                p = &p + &(&x(i).pow(2) * &x(i + 1)).scale(0.3 * coefs[2 * n + i]);
            }
        }
        let opts = CertifyOptions::default();
        let mut ok = Vec::new();
        for kind in ConeKind::ALL {
            let out = certify(&p, kind, &opts).unwrap();
            prop_assert!(out.status != SosStatus::NumericalFailure, "{kind}: {:?}", out.message);
            ok.push(out.status == SosStatus::Feasible);
        }
        for w in ok.windows(2) {
            prop_assert!(!w[0] || w[1], "membership must be monotone along dsos, sdsos, ssos, sos: {ok:?}");
        }
    }

    #[test]
    fn matrix_and_scalarized_ssos_agree(coefs in prop::collection::vec(-1.0f64..1.0, 30), diag in 0.0f64..1.5) {
        // 3x3 path-pattern matrix in two variables with quadratic entries
        let n = 2;
        let quad = |k: usize| {
            let terms = monomial_basis(n, 2, None).iter().enumerate().map(|(t, m)| (m.clone(), coefs[(k * 6 + t) % 30])).collect::<Vec<_>>();
            Polynomial::from_terms(n, terms).unwrap()
        };
        let p = PolyMatrix::from_fn(3, n, |a, b| match (a.min(b), a.max(b)) {
            (i, j) if i == j => &quad(i) + &(&(&Polynomial::var(n, 0).pow(2) + &Polynomial::var(n, 1).pow(2)) + &Polynomial::constant(n, 1.0)).scale(diag + 1.0),
            (0, 1) => quad(3),
            (1, 2) => quad(4),
            _ => Polynomial::zero(n),
        }).unwrap();
        let pattern = SparsityGraph::path(3);
        let opts = CertifyOptions::default();
        let m = certify_matrix(&p, ConeKind::Ssos, Some(&pattern), &opts).unwrap();
        // scalar version with y-cliques {y0, y1} and {y1, y2}, all of x in each
        let s = scalarize_matrix(&p);
        let cover = sparsos::chordal::CliqueCover::from_cliques(5, vec![vec![0, 1, 2, 3], vec![0, 1, 3, 4]]).unwrap();
        let sopts = CertifyOptions { gram: GramOptions { cover: Some(cover), ..GramOptions::default() }, ..CertifyOptions::default() };
        let sc = certify(&s, ConeKind::Ssos, &sopts).unwrap();
        prop_assert!(m.status != SosStatus::NumericalFailure && sc.status != SosStatus::NumericalFailure);
        prop_assert_eq!(m.status, sc.status);
    }
}
