use super::kkt::Kkt;
use super::scaling::{Block, Scaling};
use super::{Internal, Settings};
use crate::conic::presolve::PresolveRecord;
use crate::conic::program::{dot, norm_inf, ConicProgram, SolveStatus};

pub(crate) struct Raw {
    pub status: SolveStatus,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub s: Vec<f64>,
    pub iterations: usize,
}

/// A full search direction of the embedding.
struct Dir {
    dx: Vec<f64>,
    dy: Vec<f64>,
    ds: Vec<f64>,
    dtau: f64,
    dkappa: f64,
}

struct State<'a> {
    p: &'a Internal,
    x: Vec<f64>,
    y: Vec<f64>,
    s: Vec<f64>,
    tau: f64,
    kappa: f64,
}

impl State<'_> {
    fn apply_blocks(&self, scal: &[Scaling], v: &[f64], f: impl Fn(&Scaling, &[f64], &mut [f64])) -> Vec<f64> {
        let mut out = vec![0.0; self.p.n];
        for (b, sc) in self.p.blocks.iter().zip(scal) {
            let r = b.range();
            f(sc, &v[r.clone()], &mut out[r]);
        }
        out
    }

    fn mask_free(&self, v: &mut [f64]) {
        for &j in &self.p.free {
            v[j] = 0.0;
        }
    }
}

fn max_abs(v: &[f64]) -> f64 {
    norm_inf(v)
}

pub(crate) fn run(p: &Internal, orig: &ConicProgram, record: Option<&PresolveRecord>, st: &Settings) -> Raw {
    let n = p.n;
    let m = p.m;
    let nu: usize = p.blocks.iter().map(Block::degree).sum();
    let mut x = vec![0.0; n];
    let mut s = vec![0.0; n];
    for b in &p.blocks {
        let r = b.range();
        b.identity(&mut x[r.clone()]);
        b.identity(&mut s[r]);
    }
    let mut state = State {
        p,
        x,
        y: vec![0.0; m],
        s,
        tau: 1.0,
        kappa: 1.0,
    };
    let bnorm = 1.0 + max_abs(&p.b);
    let cnorm = 1.0 + max_abs(&p.c);

    let mut kkt = match Kkt::new(p) {
        Ok(k) => k,
        Err(e) => {
            log::warn!("{e}");
            return Raw {
                status: SolveStatus::NumericalFailure,
                x: state.x,
                y: state.y,
                s: state.s,
                iterations: 0,
            };
        }
    };
    log::trace!("normal equations: {m} rows, {} stored entries", kkt.nnz());

    let mut status = SolveStatus::NumericalFailure;
    let mut iterations = 0;
    let mut stalls = 0;
    // Best iterate within REDUCED_ACCURACY of the targets, used when the
    // last steps break down just short of convergence.
    let mut best: Option<(f64, Snapshot)> = None;

    for it in 0..=st.max_iter {
        iterations = it;
        let State { x, y, s, tau, kappa, .. } = &state;
        let (tau, kappa) = (*tau, *kappa);

        // Residuals of the embedding.
        let ax = p.a_mul(x);
        let aty = p.at_mul(y);
        let r1: Vec<f64> = (0..m).map(|i| ax[i] - p.b[i] * tau).collect();
        let r2: Vec<f64> = (0..n).map(|j| p.c[j] * tau - aty[j] - s[j]).collect();
        let cx = dot(&p.c, x);
        let by = dot(&p.b, y);
        let r3 = by - cx - kappa;
        let xs: f64 = dot(x, s);
        let mu = (xs + tau * kappa) / (nu as f64 + 1.0);

        let pres = max_abs(&r1) / tau / bnorm;
        let dres = max_abs(&r2) / tau / cnorm;
        let pobj = cx / tau;
        let dobj = by / tau;
        let gap = (pobj - dobj).abs() / (1.0 + pobj.abs().max(dobj.abs()));
        log::trace!(
            "it {it:3} pobj {pobj:+.6e} dobj {dobj:+.6e} pres {pres:.1e} dres {dres:.1e} gap {gap:.1e} tau {tau:.1e} kappa {kappa:.1e} mu {mu:.1e}"
        );

        if pres <= st.feas_tol && dres <= st.feas_tol && gap <= st.gap_tol && original_ok(p, orig, record, &state, st) {
            status = SolveStatus::Optimal;
            break;
        }
        let worst = (pres / st.feas_tol).max(dres / st.feas_tol).max(gap / st.gap_tol);
        if worst <= REDUCED_ACCURACY && best.as_ref().is_none_or(|b| worst < b.0) {
            best = Some((worst, Snapshot { x: x.clone(), y: y.clone(), s: s.clone(), tau, kappa }));
        }
        if by > 0.0 {
            let ray: Vec<f64> = (0..n).map(|j| aty[j] + s[j]).collect();
            if max_abs(&ray) / by <= st.infeas_tol {
                status = SolveStatus::PrimalInfeasible;
                break;
            }
        }
        if cx < 0.0 && max_abs(&ax) / -cx <= st.infeas_tol {
            status = SolveStatus::DualInfeasible;
            break;
        }
        if it == st.max_iter {
            break;
        }

        // Scalings and normal equations.
        let mut scal = Vec::with_capacity(p.blocks.len());
        let mut interior = true;
        for b in &p.blocks {
            let r = b.range();
            match Scaling::new(b, &x[r.clone()], &s[r]) {
                Some(sc) => scal.push(sc),
                None => {
                    interior = false;
                    break;
                }
            }
        }
        if !interior {
            log::debug!("iterate left the cone interior at iteration {it}");
            break;
        }
        if let Err(e) = kkt.factor(&scal) {
            log::debug!("{e}");
            break;
        }

        // Direction along which tau moves.
        let mut ck = p.c.clone();
        state.mask_free(&mut ck);
        let hc = state.apply_blocks(&scal, &ck, Scaling::hinv);
        let ahc = p.a_mul(&hc);
        let rhs2: Vec<f64> = (0..m).map(|i| p.b[i] + ahc[i]).collect();
        let cf: Vec<f64> = p.free.iter().map(|&j| p.c[j]).collect();
        let (dy2, dxf2) = kkt.solve(&rhs2, &cf);
        let mut atdy2 = p.at_mul(&dy2);
        state.mask_free(&mut atdy2);
        let mut dx2 = state.apply_blocks(&scal, &atdy2, Scaling::hinv);
        for j in 0..n {
            dx2[j] -= hc[j];
        }
        for (k, &j) in p.free.iter().enumerate() {
            dx2[j] = dxf2[k];
        }
        let denom_base = dot(&p.b, &dy2) - dot(&p.c, &dx2);

        let lambda: Vec<f64> = {
            let mut l = vec![0.0; n];
            for (b, sc) in p.blocks.iter().zip(&scal) {
                l[b.range()].copy_from_slice(sc.lambda());
            }
            l
        };
        let mut lam_sq = vec![0.0; n];
        for b in &p.blocks {
            let r = b.range();
            b.jordan(&lambda[r.clone()], &lambda[r.clone()], &mut lam_sq[r]);
        }

        let solve_dir = |eta: f64, rc: &[f64], rk: f64, kkt: &mut Kkt| -> Dir {
            let u = state.apply_blocks(&scal, rc, Scaling::lambda_div);
            let wu = state.apply_blocks(&scal, &u, Scaling::winv);
            let mut r2k = r2.clone();
            state.mask_free(&mut r2k);
            let hr2 = state.apply_blocks(&scal, &r2k, Scaling::hinv);
            let g: Vec<f64> = (0..n).map(|j| wu[j] - eta * hr2[j]).collect();
            let ag = p.a_mul(&g);
            let rhs1: Vec<f64> = (0..m).map(|i| -eta * r1[i] - ag[i]).collect();
            let rf: Vec<f64> = p.free.iter().map(|&j| eta * r2[j]).collect();
            let (dy1, dxf1) = kkt.solve(&rhs1, &rf);
            let mut atdy1 = p.at_mul(&dy1);
            state.mask_free(&mut atdy1);
            let hatdy1 = state.apply_blocks(&scal, &atdy1, Scaling::hinv);
            let mut dx1: Vec<f64> = (0..n).map(|j| g[j] + hatdy1[j]).collect();
            for (k, &j) in p.free.iter().enumerate() {
                dx1[j] = dxf1[k];
            }
            let dtau = (-eta * r3 - dot(&p.b, &dy1) + dot(&p.c, &dx1) + rk / state.tau)
                / (denom_base + state.kappa / state.tau);
            let dy: Vec<f64> = (0..m).map(|i| dy1[i] + dtau * dy2[i]).collect();
            let dx: Vec<f64> = (0..n).map(|j| dx1[j] + dtau * dx2[j]).collect();
            let atdy = p.at_mul(&dy);
            let mut ds: Vec<f64> = (0..n).map(|j| -atdy[j] + p.c[j] * dtau + eta * r2[j]).collect();
            state.mask_free(&mut ds);
            let dkappa = (rk - state.kappa * dtau) / state.tau;
            Dir {
                dx,
                dy,
                ds,
                dtau,
                dkappa,
            }
        };

        let step_len = |d: &Dir| -> (f64, Vec<f64>, Vec<f64>) {
            let finite = d.dx.iter().chain(&d.ds).chain(&d.dy).all(|v| v.is_finite()) && d.dtau.is_finite() && d.dkappa.is_finite();
            if !finite {
                return (0.0, vec![0.0; n], vec![0.0; n]);
            }
            let wdx = state.apply_blocks(&scal, &d.dx, Scaling::w);
            let wds = state.apply_blocks(&scal, &d.ds, Scaling::winv_t);
            let mut alpha = f64::INFINITY;
            for (b, sc) in p.blocks.iter().zip(&scal) {
                let r = b.range();
                alpha = alpha.min(sc.max_step(&wdx[r.clone()])).min(sc.max_step(&wds[r]));
            }
            if d.dtau < 0.0 {
                alpha = alpha.min(-state.tau / d.dtau);
            }
            if d.dkappa < 0.0 {
                alpha = alpha.min(-state.kappa / d.dkappa);
            }
            (alpha, wdx, wds)
        };

        // Predictor.
        let rc_aff: Vec<f64> = lam_sq.iter().map(|v| -v).collect();
        let aff = solve_dir(1.0, &rc_aff, -tau * kappa, &mut kkt);
        let (alpha_aff, wdx_a, wds_a) = step_len(&aff);
        let alpha_aff = alpha_aff.min(1.0);
        let sigma = (1.0 - alpha_aff).powi(3).clamp(0.0, 1.0);

        // Corrector.
        let mut rc = vec![0.0; n];
        let mut e = vec![0.0; n];
        let mut second = vec![0.0; n];
        for b in &p.blocks {
            let r = b.range();
            b.identity(&mut e[r.clone()]);
            b.jordan(&wds_a[r.clone()], &wdx_a[r.clone()], &mut second[r]);
        }
        for j in 0..n {
            rc[j] = -lam_sq[j] - second[j] + sigma * mu * e[j];
        }
        let rk = -tau * kappa - aff.dtau * aff.dkappa + sigma * mu;
        let dir = solve_dir(1.0 - sigma, &rc, rk, &mut kkt);
        let (alpha_max, _, _) = step_len(&dir);
        let alpha = (st.step_fraction * alpha_max).min(1.0);
        if !alpha.is_finite() || alpha < 1e-10 {
            stalls += 1;
            if stalls >= 3 {
                log::debug!("step length collapsed at iteration {it}");
                break;
            }
            continue;
        }
        stalls = 0;
        for j in 0..n {
            state.x[j] += alpha * dir.dx[j];
            state.s[j] += alpha * dir.ds[j];
        }
        for i in 0..m {
            state.y[i] += alpha * dir.dy[i];
        }
        state.tau += alpha * dir.dtau;
        state.kappa += alpha * dir.dkappa;
        if kkt.regularized_pivots > 0 {
            log::trace!("regularized pivots: {}", kkt.regularized_pivots);
        }
    }

    if status == SolveStatus::NumericalFailure {
        if let Some((worst, snap)) = best {
            log::debug!("breakdown after reaching {worst:.1e} times the tolerances; returning that iterate");
            state.x = snap.x;
            state.y = snap.y;
            state.s = snap.s;
            state.tau = snap.tau;
            state.kappa = snap.kappa;
            if original_ok(p, orig, record, &state, &relaxed(st)) {
                status = SolveStatus::Optimal;
            }
        }
    }

    let State { x, y, s, tau, kappa, .. } = state;
    match status {
        SolveStatus::Optimal => Raw {
            status,
            x: x.iter().map(|v| v / tau).collect(),
            y: y.iter().map(|v| v / tau).collect(),
            s: s.iter().map(|v| v / tau).collect(),
            iterations,
        },
        SolveStatus::PrimalInfeasible => primal_ray(p, x, y, s, iterations),
        SolveStatus::DualInfeasible => dual_ray(p, x, y, s, iterations),
        SolveStatus::NumericalFailure => {
            // The embedding separates infeasibility from breakdown through tau / kappa.
            let by = dot(&p.b, &y);
            let cx = dot(&p.c, &x);
            if tau < 1e-6 * kappa && by > 0.0 && (cx >= 0.0 || by >= -cx) {
                primal_ray(p, x, y, s, iterations)
            } else if tau < 1e-6 * kappa && cx < 0.0 {
                dual_ray(p, x, y, s, iterations)
            } else {
                Raw {
                    status,
                    x: x.iter().map(|v| v / tau).collect(),
                    y: y.iter().map(|v| v / tau).collect(),
                    s: s.iter().map(|v| v / tau).collect(),
                    iterations,
                }
            }
        }
    }
}

fn primal_ray(p: &Internal, x: Vec<f64>, y: Vec<f64>, s: Vec<f64>, iterations: usize) -> Raw {
    let by = dot(&p.b, &y);
    Raw {
        status: SolveStatus::PrimalInfeasible,
        x: vec![0.0; x.len()],
        y: y.iter().map(|v| v / by).collect(),
        s: s.iter().map(|v| v / by).collect(),
        iterations,
    }
}

fn dual_ray(p: &Internal, x: Vec<f64>, y: Vec<f64>, s: Vec<f64>, iterations: usize) -> Raw {
    let cx = -dot(&p.c, &x);
    Raw {
        status: SolveStatus::DualInfeasible,
        x: x.iter().map(|v| v / cx).collect(),
        y: vec![0.0; y.len()],
        s: vec![0.0; s.len()],
        iterations,
    }
}

/// Check the normalized iterate against the tolerances on the original,
/// unscaled program.
struct Snapshot {
    x: Vec<f64>,
    y: Vec<f64>,
    s: Vec<f64>,
    tau: f64,
    kappa: f64,
}

/// Accepted slack on the tolerances for the best iterate after a breakdown.
const REDUCED_ACCURACY: f64 = 100.0;

fn relaxed(st: &Settings) -> Settings {
    Settings {
        feas_tol: st.feas_tol * REDUCED_ACCURACY,
        gap_tol: st.gap_tol * REDUCED_ACCURACY,
        ..st.clone()
    }
}

fn original_ok(p: &Internal, orig: &ConicProgram, record: Option<&PresolveRecord>, st: &State, set: &Settings) -> bool {
    let mut x: Vec<f64> = st.x.iter().map(|v| v / st.tau).collect();
    let mut s: Vec<f64> = st.s.iter().map(|v| v / st.tau).collect();
    let y: Vec<f64> = st.y.iter().map(|v| v / st.tau).collect();
    p.unrotate(&mut x);
    p.unrotate(&mut s);
    let y = match record {
        Some(r) => r.restore_y(&y),
        None => y,
    };
    let res = orig.residuals(&x, &y, &s);
    res.primal <= set.feas_tol && res.dual <= set.feas_tol && res.gap <= set.gap_tol
}
