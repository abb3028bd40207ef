//! Acceptance criteria. Each check prints one `PASS` or `FAIL` line; the run
//! exits nonzero on any FAIL that is not listed in `KNOWN_UNATTAINABLE`.
//! Built without the test harness so the lines always reach the output.
//!
//! Set `SPARSOS_FULL=1` to include the dense SOS Broyden cell at n = 20,
//! which needs several minutes and a few GB of memory.

use std::time::Instant;

use faer::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sparsos::chordal::{chordal_extend, clique_decompose_psd, inflate, maximal_cliques, CliqueCover, SparsityGraph};
use sparsos::cones::{
    certify, verify_certificate, AffinePoly, CertifyOptions, ConeKind, GramOptions, SosProgram, SosStatus,
};
use sparsos::conic::{min_eigenvalue, solve, Cone, ConicProgram, ConicSolution, Settings, SolveStatus, SQRT2};
use sparsos::polyalg::binomial;
use sparsos::problems::{
    block_arrow_pattern, broyden_poly, copositive_form, lyapunov_search, random_banded_system, random_copositive, solve_copositive,
    solve_lower_bound, LyapunovOptions, RowStatus, SolveOptions,
};
use sparsos::{Exponent, PolyMatrix, Polynomial};

// Tolerances, pinned.
const EX1_RESIDUAL: f64 = 1e-8;
const EX1_GRAM: f64 = 1e-6;
const EX1_SECONDS: f64 = 1.0;
const BROYDEN_ZERO: f64 = 1e-3;
const SDSOS_BAND: (f64, f64) = (40.0, 52.0);
const SSOS_BLOCK_SIDE: usize = 6;
const BROYDEN_SSOS_SECONDS: f64 = 5.0;
const ORDER_REL: f64 = 1e-6;
const VERIFY_TOL: f64 = 1e-6;
const SPARSE_GRAM_AGREE: f64 = 1e-5;
const DECOMPOSE_TOL: f64 = 1e-8;
const COPOSITIVE_AGREE: f64 = 1e-4;
const COPOSITIVE_SSOS_SECONDS: f64 = 2.0;
const QUADRATIC_AGREE: f64 = 1e-6;
const LYAP_SAMPLES: usize = 10_000;
const LYAP_DECREASE: f64 = -1e-6;
const SOLVER_ACCURACY: f64 = 1e-7;

/// Checks that cannot pass as stated; see the README. 2e: the Broyden csp
/// has bandwidth two. 6b: on one block-arrow instance the clique-wise SOS
/// cone is strictly smaller than SOS, which `separation` demonstrates.
const KNOWN_UNATTAINABLE: &[&str] = &["2e", "6b"];

struct Report {
    lines: Vec<(String, bool, String)>,
}

impl Report {
    fn check(&mut self, id: &str, what: &str, ok: bool, detail: String) {
        println!("{} [{id}] {what}: {detail}", if ok { "PASS" } else { "FAIL" });
        self.lines.push((id.to_string(), ok, what.to_string()));
    }
}

fn ordered(vals: &[Option<f64>]) -> bool {
    // None (infeasible) counts as +infinity
    vals.windows(2).all(|w| match (w[0], w[1]) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(a), Some(b)) => a >= b - ORDER_REL * (1.0 + a.abs().max(b.abs())),
    })
}

fn poly(n: usize, terms: impl IntoIterator<Item = (Vec<u32>, f64)>) -> Polynomial {
    Polynomial::from_terms(n, terms.into_iter().map(|(a, c)| (Exponent::new(a), c))).unwrap()
}

fn criterion_1(rep: &mut Report) {
    // v'Qv with v = (1, x1, x2, x3) and the corner-coupled Q below.
    let rows = [[2.0, 1.0, 0.0, 1.0], [1.0, 2.0, 1.0, 0.0], [0.0, 1.0, 2.0, 1.0], [1.0, 0.0, 1.0, 2.0]];
    let q = Mat::from_fn(4, 4, |i, j| rows[i][j]);
    let v: Vec<Polynomial> = std::iter::once(Polynomial::constant(3, 1.0))
        .chain((0..3).map(|i| Polynomial::var(3, i)))
        .collect();
    let mut p = Polynomial::zero(3);
    for i in 0..4 {
        for j in 0..4 {
            p = &p + &(&v[i] * &v[j]).scale(q[(i, j)]);
        }
    }
    let cover = CliqueCover::from_cliques(3, vec![vec![0, 1], vec![1, 2]]).unwrap();
    let opts = CertifyOptions {
        gram: GramOptions { cover: Some(cover), ..GramOptions::default() },
        ..CertifyOptions::default()
    };
    let started = Instant::now();
    let out = certify(&p, ConeKind::Ssos, &opts).unwrap();
    let secs = started.elapsed().as_secs_f64();
    let Some(cert) = out.certificate else {
        rep.check("1", "Example 1 SSOS certificate", false, format!("status {:?}", out.status));
        return;
    };
    let sides: Vec<usize> = cert.blocks.iter().map(|b| b.side()).collect();
    let mut sum = Mat::<f64>::zeros(4, 4);
    for (blk, idx) in cert.blocks.iter().zip([[0, 1, 2], [0, 2, 3]]) {
        sum += inflate(&idx, &blk.gram, 4).unwrap();
    }
    let err = (0..4).flat_map(|i| (0..4).map(move |j| (i, j))).map(|(i, j)| (sum[(i, j)] - q[(i, j)]).abs()).fold(0.0, f64::max);
    rep.check("1a", "two 3x3 blocks", sides == [3, 3], format!("sides {sides:?}"));
    rep.check("1b", "reconstruction residual < 1e-8", cert.residual < EX1_RESIDUAL, format!("{:.2e}", cert.residual));
    rep.check("1c", "reassembled Gram equals Q within 1e-6", err < EX1_GRAM, format!("max error {err:.2e}"));
    rep.check("1d", "runtime < 1 s", secs < EX1_SECONDS, format!("{secs:.3} s"));
}

fn criterion_2(rep: &mut Report) {
    let opts = SolveOptions::default();
    let full = std::env::var("SPARSOS_FULL").is_ok_and(|v| v == "1");
    let mut ssos_ok = true;
    let mut ssos_detail = Vec::new();
    let mut sides = Vec::new();
    let mut slowest: f64 = 0.0;
    let mut dsos_ok = true;
    let mut sos_ok = true;
    let mut sos_detail = Vec::new();
    for n in [10, 15, 20] {
        let p = broyden_poly(n);
        let s = solve_lower_bound(&p, ConeKind::Ssos, &opts).unwrap();
        let ok = s.status == RowStatus::Optimal && s.value.is_some_and(|g| g.abs() <= BROYDEN_ZERO);
        ssos_ok &= ok;
        ssos_detail.push(format!("n={n}: {:?}", s.value));
        sides.push(s.max_block_side);
        slowest = slowest.max(s.time_s);

        let d = solve_lower_bound(&p, ConeKind::Dsos, &opts).unwrap();
        dsos_ok &= d.status == RowStatus::Infeasible;

        if n <= 15 || full {
            let o = solve_lower_bound(&p, ConeKind::Sos, &opts).unwrap();
            sos_ok &= o.status == RowStatus::Optimal && o.value.is_some_and(|g| g.abs() <= BROYDEN_ZERO);
            sos_ok &= o.max_block_side == binomial(n + 2, 2);
            sos_detail.push(format!("n={n}: {:?} side {}", o.value, o.max_block_side));
        } else {
            sos_detail.push(format!("n={n}: skipped by policy (side {}, set SPARSOS_FULL=1)", binomial(n + 2, 2)));
        }
    }
    rep.check("2a", "Broyden SSOS gamma = 0 +- 1e-3, n = 10, 15, 20", ssos_ok, ssos_detail.join("; "));
    rep.check("2b", "Broyden SOS gamma = 0 +- 1e-3", sos_ok, sos_detail.join("; "));
    rep.check("2c", "Broyden DSOS infeasible for all n", dsos_ok, "n = 10, 15, 20".into());
    let sd = solve_lower_bound(&broyden_poly(10), ConeKind::Sdsos, &opts).unwrap();
    let sd_ok = sd.value.is_some_and(|g| (SDSOS_BAND.0..=SDSOS_BAND.1).contains(&g));
    rep.check("2d", "Broyden SDSOS gamma in [40, 52] at n = 10", sd_ok, format!("{:?}", sd.value));
    rep.check(
        "2e",
        "Broyden SSOS max PSD block side = 6",
        sides.iter().all(|&s| s == SSOS_BLOCK_SIDE),
        format!("sides {sides:?}; csp has x_(i-1) x_(i+1) edges, cliques have 3 variables"),
    );
    rep.check("2f", "Broyden SSOS cells < 5 s", slowest < BROYDEN_SSOS_SECONDS, format!("slowest {slowest:.3} s"));
}

/// Seeded sparse quartic on a tridiagonal (even seeds) or star (odd seeds)
/// pattern in 3..=8 variables, bounded below by construction.
fn random_quartic(seed: u64) -> (Polynomial, Vec<Vec<usize>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = 3 + (seed as usize / 2) % 6;
    let cliques: Vec<Vec<usize>> = if seed.is_multiple_of(2) { (0..n - 1).map(|i| vec![i, i + 1]).collect() } else { (1..n).map(|i| vec![0, i]).collect() };
    let mut terms = Vec::new();
    let mut deg = vec![0usize; n];
    for c in &cliques {
        let (i, j) = (c[0], c[1]);
        deg[i] += 1;
        deg[j] += 1;
        for a in 0..=3u32 {
            for b in 0..=3 - a {
                if a + b >= 1 && a > 0 && b > 0 {
                    let mut e = vec![0; n];
                    e[i] = a;
                    e[j] = b;
                    terms.push((e, rng.random_range(-1.0..=1.0)));
                }
            }
        }
        let mut e = vec![0; n];
        e[i] = 2;
        e[j] = 2;
        terms.push((e, rng.random_range(0.5..=1.0)));
    }
    for i in 0..n {
        for k in 1..=3u32 {
            let mut e = vec![0; n];
            e[i] = k;
            terms.push((e, rng.random_range(-1.0..=1.0)));
        }
        let mut e = vec![0; n];
        e[i] = 4;
        terms.push((e, 2.0 + 2.0 * deg[i] as f64));
    }
    (poly(n, terms), cliques)
}

struct LowerBound {
    value: Option<f64>,
    verified: bool,
}

fn lower_bound_with_certificate(p: &Polynomial, kind: ConeKind, gram: &GramOptions) -> LowerBound {
    let n = p.nvars();
    let mut prog = SosProgram::new();
    let gamma = prog.free_var();
    let mut t = AffinePoly::from(p);
    let xx = (0..n).fold(Polynomial::zero(n), |acc, i| &acc + &Polynomial::var(n, i).pow(2));
    t.add_var_times(gamma, &xx).unwrap();
    prog.add_constraint(&t, kind, gram).unwrap();
    prog.minimize(gamma, 1.0);
    let sol = prog.solve(&Settings::default()).unwrap();
    if sol.status != SosStatus::Feasible {
        return LowerBound { value: None, verified: sol.status == SosStatus::Infeasible };
    }
    let g = sol.value(gamma);
    let target = PolyMatrix::scalar(t.eval(&sol.values));
    let cert = &sol.certificates[0];
    let report = verify_certificate(&target, cert, VERIFY_TOL);
    LowerBound { value: Some(g), verified: report.passed }
}

fn criteria_3_and_4(rep: &mut Report) {
    let mut order_ok = true;
    let mut verify_ok = true;
    let mut bad = Vec::new();
    let mut thm2_ok = true;
    let mut thm2_count = 0;
    let mut thm2_worst: f64 = 0.0;
    for seed in 0..50 {
        let (p, cliques) = random_quartic(seed);
        let vals: Vec<LowerBound> = ConeKind::ALL.iter().map(|&k| lower_bound_with_certificate(&p, k, &GramOptions::default())).collect();
        let v: Vec<Option<f64>> = vals.iter().map(|l| l.value).collect();
        if !ordered(&v) {
            order_ok = false;
            bad.push(format!("seed {seed}: {v:?}"));
        }
        verify_ok &= vals.iter().all(|l| l.verified);

        if p.nvars() <= 4 {
            thm2_count += 1;
            let cover = CliqueCover::from_cliques(p.nvars(), cliques).unwrap();
            let sparse = GramOptions { cover: Some(cover.clone()), sparse_gram: true, ..GramOptions::default() };
            let blocks = GramOptions { cover: Some(cover), ..GramOptions::default() };
            let a = lower_bound_with_certificate(&p, ConeKind::Ssos, &blocks).value;
            let b = lower_bound_with_certificate(&p, ConeKind::Ssos, &sparse).value;
            match (a, b) {
                (Some(a), Some(b)) => {
                    thm2_worst = thm2_worst.max((a - b).abs());
                    thm2_ok &= (a - b).abs() <= SPARSE_GRAM_AGREE * (1.0 + a.abs());
                }
                (None, None) => {}
                _ => thm2_ok = false,
            }
        }
    }
    rep.check("3a", "50 sparse quartics: gamma_dsos >= gamma_sdsos >= gamma_ssos >= gamma_sos", order_ok, if bad.is_empty() { "all ordered".into() } else { bad.join("; ") });
    rep.check("3b", "every feasible certificate verifies", verify_ok, format!("tol {VERIFY_TOL:e}"));
    rep.check(
        "4",
        "clique-block SSOS equals sparse-Gram SSOS (n <= 4)",
        thm2_ok && thm2_count > 0,
        format!("{thm2_count} instances, worst gap {thm2_worst:.2e}"),
    );
}

fn criterion_5(rep: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut ok = true;
    let mut rejected = true;
    let mut worst: f64 = 0.0;
    for _ in 0..100 {
        let n = rng.random_range(3..=12);
        let mut g = SparsityGraph::empty(n);
        for i in 0..n {
            for j in i + 1..n {
                if rng.random_bool(0.25) {
                    g.add_edge(i, j);
                }
            }
        }
        let h = chordal_extend(&g);
        let cover = maximal_cliques(&h).unwrap();
        let mut x = Mat::<f64>::zeros(n, n);
        for c in cover.cliques() {
            let k = c.len();
            let f = Mat::<f64>::from_fn(k, k, |_, _| rng.random_range(-1.0..1.0));
            x += inflate(c, &(f.transpose() * &f), n).unwrap();
        }
        match clique_decompose_psd(&x, &cover, 1e-9).unwrap() {
            Some(blocks) => {
                let mut sum = Mat::<f64>::zeros(n, n);
                for (c, b) in &blocks {
                    sum += inflate(c, b, n).unwrap();
                }
                let err = (&sum - &x).norm_max();
                worst = worst.max(err);
                ok &= err < DECOMPOSE_TOL;
            }
            None => ok = false,
        }
        // Same pattern, minimum eigenvalue exactly -0.1.
        let shift = min_eigenvalue(&x) + 0.1;
        let mut y = x.clone();
        for i in 0..n {
            y[(i, i)] -= shift;
        }
        rejected &= clique_decompose_psd(&y, &cover, 1e-9).unwrap().is_none();
    }
    rep.check("5a", "100 clique-sum matrices decompose and reassemble within 1e-8", ok, format!("worst {worst:.2e}"));
    rep.check("5b", "min eigenvalue -0.1 matrices rejected", rejected, "100 patterns".into());
}

fn criterion_6(rep: &mut Report) {
    let opts = SolveOptions::default();
    let mut order_ok = true;
    let mut agree_ok = true;
    let mut worst: f64 = 0.0;
    let mut slowest: f64 = 0.0;
    let mut detail = Vec::new();
    for l in [2, 4] {
        let g = block_arrow_pattern(l, 3, 2).unwrap();
        for seed in 0..5 {
            let z = random_copositive(&g, seed);
            let outs: Vec<_> = ConeKind::ALL.iter().map(|&k| solve_copositive(&z, k, &opts).unwrap()).collect();
            let v: Vec<Option<f64>> = outs.iter().map(|o| o.value).collect();
            order_ok &= ordered(&v[..3]);
            slowest = slowest.max(outs[2].time_s);
            detail.push(format!("l={l} s={seed} ssos {:.5} sos {:.5}", v[2].unwrap_or(f64::NAN), v[3].unwrap_or(f64::NAN)));
            match (v[2], v[3]) {
                (Some(a), Some(b)) => {
                    worst = worst.max((a - b).abs());
                    agree_ok &= (a - b).abs() <= COPOSITIVE_AGREE;
                    if a - b > COPOSITIVE_AGREE {
                        detail.push(separation(&z, 0.5 * (a + b)));
                    }
                }
                _ => agree_ok = false,
            }
        }
    }
    rep.check("6a", "copositive gamma_dsos >= gamma_sdsos >= gamma_ssos", order_ok, "l = 2, 4; 5 seeds".into());
    rep.check("6b", "copositive gamma_ssos = gamma_sos within 1e-4", agree_ok, format!("worst {worst:.2e}; {}", detail.join(", ")));
    rep.check("6c", "copositive SSOS cells < 2 s", slowest < COPOSITIVE_SSOS_SECONDS, format!("slowest {slowest:.3} s"));
}

/// At a gamma strictly between the two bounds, certify the shifted form in
/// each cone on its own: a verified SOS certificate next to an infeasible
/// SSOS program shows the gap is not a solver artefact.
fn separation(z: &[Vec<f64>], gamma: f64) -> String {
    let mut z = z.to_vec();
    for (i, row) in z.iter_mut().enumerate() {
        row[i] += gamma;
    }
    let p = copositive_form(&z);
    let opts = CertifyOptions::default();
    let sos = certify(&p, ConeKind::Sos, &opts).unwrap();
    let sos_ok = sos.certificate.as_ref().is_some_and(|c| verify_certificate(&PolyMatrix::scalar(p.clone()), c, VERIFY_TOL).passed);
    let ssos = certify(&p, ConeKind::Ssos, &opts).unwrap();
    format!("at gamma {gamma:.4}: sos certificate verifies {sos_ok}, ssos {:?}", ssos.status)
}

fn criterion_7(rep: &mut Report) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let opts = SolveOptions::default();
    let mut ok = true;
    let mut worst: f64 = 0.0;
    let mut bad = Vec::new();
    for inst in 0..20 {
        let n = rng.random_range(3..=8);
        let mut terms = Vec::new();
        for i in 0..n {
            let mut e = vec![0; n];
            e[i] = 2;
            terms.push((e.clone(), rng.random_range(-1.0..=1.0)));
            e[i] = 1;
            terms.push((e, rng.random_range(-1.0..=1.0)));
            for j in i + 1..n {
                if rng.random_bool(0.3) {
                    let mut e = vec![0; n];
                    e[i] = 1;
                    e[j] = 1;
                    terms.push((e, rng.random_range(-1.0..=1.0)));
                }
            }
        }
        // A positive constant keeps `p + gamma |x|^2` certifiable for large gamma.
        terms.push((vec![0; n], rng.random_range(0.1..=1.0)));
        let p = poly(n, terms);
        let a = solve_lower_bound(&p, ConeKind::Ssos, &opts).unwrap();
        let b = solve_lower_bound(&p, ConeKind::Sos, &opts).unwrap();
        match (a.value, b.value) {
            (Some(va), Some(vb)) if (va - vb).abs() <= QUADRATIC_AGREE * (1.0 + va.abs()) => worst = worst.max((va - vb).abs()),
            _ => {
                ok = false;
                bad.push(format!("#{inst} n={n}: ssos {:?} {:?}, sos {:?} {:?}", a.status, a.value, b.status, b.value));
            }
        }
    }
    let detail = if bad.is_empty() { String::new() } else { format!("; {}", bad.join(", ")) };
    rep.check("7", "sparse quadratics: SSOS and SOS bounds agree within 1e-6", ok, format!("20 instances, worst {worst:.2e}{detail}"));
}

/// Minimum over uniform box samples of `V - eps |x|^2` and `-grad V . f`.
fn sample_lyapunov(f: &[Polynomial], v: &Polynomial, eps: f64, b: f64, seed: u64) -> (f64, f64) {
    let n = f.len();
    let grad: Vec<Polynomial> = (0..n).map(|k| v.derivative(k)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut pos, mut dec) = (f64::INFINITY, f64::INFINITY);
    for _ in 0..LYAP_SAMPLES {
        let x: Vec<f64> = (0..n).map(|_| rng.random_range(-b..=b)).collect();
        let xx: f64 = x.iter().map(|t| t * t).sum();
        pos = pos.min(v.eval(&x).unwrap() - eps * xx);
        let lie: f64 = (0..n).map(|k| grad[k].eval(&x).unwrap() * f[k].eval(&x).unwrap()).sum();
        dec = dec.min(-lie);
    }
    (pos, dec)
}

fn criterion_8(rep: &mut Report) {
    let opts = SolveOptions::default();
    let lopts = LyapunovOptions::default();
    let mut found = true;
    let mut structure = true;
    let mut samples_ok = true;
    let mut detail = Vec::new();
    let mut ssos_time = 0.0;
    for n in [10, 20] {
        let f = random_banded_system(n, 0).unwrap();
        let res = lyapunov_search(&f, ConeKind::Ssos, &lopts, &opts).unwrap();
        if n == 10 {
            ssos_time = res.outcome.time_s;
        }
        let Some(v) = res.v else {
            found = false;
            detail.push(format!("n={n}: {}", res.outcome.status));
            continue;
        };
        structure &= v.terms().all(|(e, _)| {
            let s: Vec<usize> = e.support().collect();
            e.degree() == 2 && s.last().unwrap() - s[0] <= 2
        });
        let (pos, dec) = sample_lyapunov(&f, &v, lopts.eps, lopts.box_half_width, n as u64);
        samples_ok &= pos >= 0.0 && dec >= LYAP_DECREASE;
        detail.push(format!("n={n}: min V-eps|x|^2 {pos:.2e}, min -f.gradV {dec:.2e}"));
    }
    rep.check("8a", "Lyapunov SSOS finds V, n = 10, 20", found, detail.join("; "));
    rep.check("8b", "V has the banded clique-sum structure", structure, "quadratic, |i-j| <= 2".into());
    rep.check("8c", "10^4 box samples: V >= eps|x|^2 and -f.gradV >= -1e-6", samples_ok, detail.join("; "));
    let f = random_banded_system(10, 0).unwrap();
    let sos = lyapunov_search(&f, ConeKind::Sos, &lopts, &opts).unwrap();
    rep.check(
        "8d",
        "Lyapunov SSOS faster than SOS at n = 10",
        sos.outcome.status == RowStatus::Feasible && ssos_time < sos.outcome.time_s,
        format!("ssos {ssos_time:.3} s, sos {:.3} s ({})", sos.outcome.time_s, sos.outcome.status),
    );
}

/// Residuals and duality gap recomputed from (x, y, s), independent of the
/// solver's own bookkeeping.
fn independent_check(p: &ConicProgram, sol: &ConicSolution) -> bool {
    let ax = p.a_mul(&sol.x);
    let pres = ax.iter().zip(p.b()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    let aty = p.at_mul(&sol.y);
    let dres = (0..p.nvars()).map(|j| (aty[j] + sol.s[j] - p.c()[j]).abs()).fold(0.0, f64::max);
    let pobj: f64 = p.c().iter().zip(&sol.x).map(|(c, x)| c * x).sum();
    let dobj: f64 = p.b().iter().zip(&sol.y).map(|(b, y)| b * y).sum();
    let res = p.residuals(&sol.x, &sol.y, &sol.s);
    sol.status == SolveStatus::Optimal
        && pres <= 1e-8
        && dres <= 1e-8
        && pobj >= dobj - 1e-7
        && (pobj - sol.primal_objective).abs() <= 1e-9 * (1.0 + pobj.abs())
        && (dobj - sol.dual_objective).abs() <= 1e-9 * (1.0 + dobj.abs())
        && (res.primal - sol.primal_residual).abs() <= 1e-9
        && (res.dual - sol.dual_residual).abs() <= 1e-9
        && ((pobj - dobj).abs() / (1.0 + pobj.abs().max(dobj.abs())) - sol.gap).abs() <= 1e-12
}

fn criterion_9(rep: &mut Report) {
    let s = Settings::default();
    // LP: min x, x = 1, x >= 0
    let mut lp = ConicProgram::new();
    lp.add_cone(Cone::NonNeg(1));
    lp.add_row([(0, 1.0)], 1.0);
    lp.set_objective(0, 1.0);
    let a = solve(&lp, &s).unwrap();
    // SDP: min t, [[1, 2], [2, t]] PSD
    let mut sdp = ConicProgram::new();
    let k = sdp.add_cone(Cone::Psd(2));
    sdp.add_row([(sdp.psd_col(k, 0, 0), 1.0)], 1.0);
    sdp.add_row([(sdp.psd_col(k, 1, 0), 1.0)], 2.0 * SQRT2);
    sdp.set_objective(sdp.psd_col(k, 1, 1), 1.0);
    let b = solve(&sdp, &s).unwrap();
    // SOCP: min t, (t, 3, 4) in the second-order cone
    let mut socp = ConicProgram::new();
    socp.add_cone(Cone::Soc(3));
    socp.add_row([(1, 1.0)], 3.0);
    socp.add_row([(2, 1.0)], 4.0);
    socp.set_objective(0, 1.0);
    let c = solve(&socp, &s).unwrap();
    let vals = [a.primal_objective, b.primal_objective, c.primal_objective];
    let want = [1.0, 4.0, 5.0];
    let ok = vals.iter().zip(want).all(|(v, w)| (v - w).abs() <= SOLVER_ACCURACY);
    rep.check("9a", "LP x* = 1, SDP t* = 4, SOCP t* = 5 to 1e-7", ok, format!("{vals:?}"));
    let indep = independent_check(&lp, &a) && independent_check(&sdp, &b) && independent_check(&socp, &c);
    rep.check("9b", "gap and residuals verified independently", indep, "three programs".into());
}

fn main() {
    let mut rep = Report { lines: Vec::new() };
    criterion_1(&mut rep);
    criterion_2(&mut rep);
    criteria_3_and_4(&mut rep);
    criterion_5(&mut rep);
    criterion_6(&mut rep);
    criterion_7(&mut rep);
    criterion_8(&mut rep);
    criterion_9(&mut rep);
    let failed: Vec<&String> = rep.lines.iter().filter(|(_, ok, _)| !ok).map(|(id, _, _)| id).collect();
    let unexpected: Vec<&&String> = failed.iter().filter(|id| !KNOWN_UNATTAINABLE.contains(&id.as_str())).collect();
    println!("{} checks, {} failed ({} known unattainable)", rep.lines.len(), failed.len(), failed.len() - unexpected.len());
    if !unexpected.is_empty() {
        eprintln!("unexpected failures: {unexpected:?}");
        std::process::exit(1);
    }
}
