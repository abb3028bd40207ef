use std::time::Instant;

use faer::Mat;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{run_program, Outcome, SolveOptions};
use crate::cones::{AffinePoly, ConeKind, DecVar, SosProgram};
use crate::error::{Error, Result};
use crate::polyalg::{Exponent, Polynomial};

const MAX_RETRIES: usize = 100;

/// Random banded cubic vector field: `f_i` depends on `x_{i-1}, x_i, x_{i+1}`
/// only. The linear part is `-I` plus a tridiagonal perturbation drawn until
/// its spectral abscissa is negative; every monomial of degree 2 or 3 in the
/// three neighbouring variables gets a coefficient uniform in `[-1, 1]`.
pub fn random_banded_system(n: usize, seed: u64) -> Result<Vec<Polynomial>> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("banded systems need n >= 3, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_RETRIES {
        let a = Mat::<f64>::from_fn(n, n, |i, j| match i.abs_diff(j) {
            0 => -1.0 + rng.random_range(-0.3..=0.3),
            1 => rng.random_range(-0.5..=0.5),
            _ => 0.0,
        });
        let eig = a
            .eigenvalues()
            .map_err(|e| Error::NumericalFailure(format!("eigenvalues of the linear part: {e:?}")))?;
        if eig.iter().any(|z| z.re >= 0.0) {
            continue;
        }
        let mut f = Vec::with_capacity(n);
        for i in 0..n {
            let band: Vec<usize> = (i.saturating_sub(1)..=(i + 1).min(n - 1)).collect();
            let mut terms: Vec<(Exponent, f64)> = band.iter().map(|&j| (Exponent::unit(n, j), a[(i, j)])).collect();
            for m in crate::polyalg::MonomialBasis::degree_range(n, 2, 3, Some(&band)).iter() {
                terms.push((m.clone(), rng.random_range(-1.0..=1.0)));
            }
            f.push(Polynomial::from_terms(n, terms)?);
        }
        return Ok(f);
    }
    Err(Error::NumericalFailure(format!("no linearly stable system after {MAX_RETRIES} draws")))
}

#[derive(Clone, Debug)]
pub struct LyapunovOptions {
    /// `V >= eps x'x` is imposed.
    pub eps: f64,
    /// Half width `b` of the box `[-b, b]^n` on which the decrease condition
    /// is certified.
    pub box_half_width: f64,
    /// Use box multipliers `sigma_i x_i^2 (b^2 - x_i^2)`; `false` imposes the
    /// decrease condition globally.
    pub multipliers: bool,
}

impl Default for LyapunovOptions {
    fn default() -> Self {
        LyapunovOptions {
            eps: 1e-6,
            box_half_width: 0.1,
            multipliers: true,
        }
    }
}

#[derive(Clone, Debug)]
pub struct LyapunovResult {
    pub outcome: Outcome,
    /// The quadratic Lyapunov function, when one was found and verified.
    pub v: Option<Polynomial>,
    pub multipliers: Vec<f64>,
}

/// Search for a quadratic `V = sum_{|i-j| <= 2} c_ij x_i x_j` with
/// `V - eps x'x` and `-grad V . f - sum_i sigma_i x_i^2 (b^2 - x_i^2)` in
/// `kind`, `sigma >= 0`, normalized by `trace(c) = n`.
pub fn lyapunov_search(f: &[Polynomial], kind: ConeKind, lopts: &LyapunovOptions, opts: &SolveOptions) -> Result<LyapunovResult> {
    let started = Instant::now();
    let n = f.len();
    if f.iter().any(|fi| fi.nvars() != n) {
        return Err(Error::InvalidInput("vector field components must have one variable per component".into()));
    }
    let x = |i| Polynomial::var(n, i);
    let mut prog = SosProgram::new();
    let mut coeffs: Vec<(DecVar, Polynomial)> = Vec::new();
    let mut trace = Vec::new();
    for i in 0..n {
        for j in i..(i + 3).min(n) {
            let c = prog.free_var();
            if i == j {
                trace.push((c, 1.0));
            }
            coeffs.push((c, &x(i) * &x(j)));
        }
    }

    let mut positive = AffinePoly::zero(n);
    let mut decrease = AffinePoly::zero(n);
    for (c, m) in &coeffs {
        positive.add_var_times(*c, m)?;
        let mut lie = Polynomial::zero(n);
        for (k, fk) in f.iter().enumerate() {
            let dm = m.derivative(k);
            if !dm.is_zero() {
                lie = &lie + &(&dm * fk);
            }
        }
        decrease.add_var_times(*c, &lie.scale(-1.0))?;
    }
    let xx = (0..n).fold(Polynomial::zero(n), |acc, i| &acc + &x(i).pow(2));
    positive.add_poly(&xx, -lopts.eps)?;

    let mut sigmas = Vec::new();
    if lopts.multipliers {
        let b2 = Polynomial::constant(n, lopts.box_half_width.powi(2));
        for i in 0..n {
            let s = prog.nonneg_var();
            let xi2 = x(i).pow(2);
            decrease.add_var_times(s, &(&xi2 * &(&b2 - &xi2)).scale(-1.0))?;
            sigmas.push(s);
        }
    }

    prog.add_linear_eq(&trace, n as f64);
    prog.add_constraint(&positive, kind, &opts.gram)?;
    prog.add_constraint(&decrease, kind, &opts.gram)?;

    let (outcome, sol) = run_program(&prog, None, opts, started)?;
    let (v, multipliers) = match (&sol, outcome.status) {
        (Some(sol), super::RowStatus::Feasible) => {
            let mut v = Polynomial::zero(n);
            for (c, m) in &coeffs {
                v = &v + &m.scale(sol.value(*c));
            }
            (Some(v), sigmas.iter().map(|s| sol.value(*s)).collect())
        }
        _ => (None, Vec::new()),
    };
    Ok(LyapunovResult { outcome, v, multipliers })
}
