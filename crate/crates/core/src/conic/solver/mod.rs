//! Primal-dual interior-point method on the homogeneous self-dual embedding
//! with Nesterov-Todd scaling and Mehrotra predictor-corrector steps.

mod hsd;
mod kkt;
mod scaling;

use std::time::Instant;

use super::presolve::presolve;
use super::program::{dot, Cone, ConicProgram, ConicSolution, SolveStatus};
use super::svec::SQRT2;
use crate::error::Result;
use scaling::Block;

/// Solver tolerances and limits.
#[derive(Clone, Debug)]
pub struct Settings {
    /// Relative primal and dual residual target.
    pub feas_tol: f64,
    /// Relative duality gap target.
    pub gap_tol: f64,
    /// Tolerance on normalized Farkas rays.
    pub infeas_tol: f64,
    pub max_iter: usize,
    pub presolve: bool,
    /// Fraction of the distance to the boundary taken per step.
    pub step_fraction: f64,
}

impl Default for Settings {
    fn default() -> Self {
        Settings {
            feas_tol: 1e-8,
            gap_tol: 1e-8,
            infeas_tol: 1e-8,
            max_iter: 200,
            presolve: true,
            step_fraction: 0.99,
        }
    }
}

/// The program as seen by the interior-point loop: rotated cones replaced by
/// ordinary second-order cones and free columns split off.
pub(crate) struct Internal {
    pub m: usize,
    pub n: usize,
    pub rows: Vec<Vec<(usize, f64)>>,
    pub cols: Vec<Vec<(usize, f64)>>,
    pub b: Vec<f64>,
    pub c: Vec<f64>,
    pub blocks: Vec<Block>,
    pub free: Vec<usize>,
    /// Offsets of rotated blocks, mapped with `T` on the way in and out.
    pub rotated: Vec<usize>,
}

/// `(u, v) <- ((u + v) / sqrt2, (u - v) / sqrt2)`, its own inverse.
fn rotate(v: &mut [f64], off: usize) {
    let (a, b) = (v[off], v[off + 1]);
    v[off] = (a + b) / SQRT2;
    v[off + 1] = (a - b) / SQRT2;
}

impl Internal {
    fn new(p: &ConicProgram) -> Internal {
        let n = p.nvars();
        let mut blocks = Vec::new();
        let mut free = Vec::new();
        let mut rotated = Vec::new();
        for (k, cone) in p.cones().iter().enumerate() {
            let off = p.block_offset(k);
            match *cone {
                Cone::Free(d) => free.extend(off..off + d),
                Cone::NonNeg(dim) if dim > 0 => blocks.push(Block::NonNeg { off, dim }),
                Cone::Soc(dim) if dim > 0 => blocks.push(Block::Soc { off, dim }),
                Cone::Rsoc(dim) if dim > 0 => {
                    assert!(dim >= 2, "rotated cone needs dimension at least 2");
                    rotated.push(off);
                    blocks.push(Block::Soc { off, dim });
                }
                Cone::Psd(r) if r > 0 => blocks.push(Block::Psd { off, r }),
                _ => {}
            }
        }
        let mut is_rot = vec![false; n];
        for &off in &rotated {
            is_rot[off] = true;
        }
        let mut rows: Vec<Vec<(usize, f64)>> = Vec::with_capacity(p.nrows());
        for row in p.rows() {
            let mut dense: std::collections::BTreeMap<usize, f64> = row.iter().copied().collect();
            for &off in &rotated {
                let a = dense.get(&off).copied().unwrap_or(0.0);
                let b = dense.get(&(off + 1)).copied().unwrap_or(0.0);
                if a != 0.0 || b != 0.0 {
                    dense.insert(off, (a + b) / SQRT2);
                    dense.insert(off + 1, (a - b) / SQRT2);
                }
            }
            rows.push(dense.into_iter().filter(|e| e.1 != 0.0).collect());
        }
        let mut cols: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
        for (i, row) in rows.iter().enumerate() {
            for &(j, v) in row {
                cols[j].push((i, v));
            }
        }
        let mut c = p.c().to_vec();
        for &off in &rotated {
            rotate(&mut c, off);
        }
        Internal {
            m: p.nrows(),
            n,
            rows,
            cols,
            b: p.b().to_vec(),
            c,
            blocks,
            free,
            rotated,
        }
    }

    fn a_mul(&self, x: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| r.iter().map(|&(j, v)| v * x[j]).sum()).collect()
    }

    fn at_mul(&self, y: &[f64]) -> Vec<f64> {
        self.cols.iter().map(|c| c.iter().map(|&(i, v)| v * y[i]).sum()).collect()
    }

    fn unrotate(&self, v: &mut [f64]) {
        for &off in &self.rotated {
            rotate(v, off);
        }
    }
}

/// Solve a conic program.
///
/// Fails only on malformed input; infeasibility and numerical trouble are
/// reported through [`ConicSolution::status`].
pub fn solve(prog: &ConicProgram, settings: &Settings) -> Result<ConicSolution> {
    prog.validate()?;
    let start = Instant::now();
    let (work, record) = if settings.presolve {
        match presolve(prog) {
            Ok((p, r)) => (p, Some(r)),
            Err(inf) => {
                log::debug!("presolve: {}", inf.reason);
                let s: Vec<f64> = prog.at_mul(&inf.ray).iter().map(|v| -v).collect();
                return Ok(finish(prog, SolveStatus::PrimalInfeasible, vec![0.0; prog.nvars()], inf.ray, s, 0));
            }
        }
    } else {
        (prog.clone(), None)
    };
    let internal = Internal::new(&work);
    let raw = hsd::run(&internal, prog, record.as_ref(), settings);
    let mut x = raw.x;
    let mut s = raw.s;
    internal.unrotate(&mut x);
    internal.unrotate(&mut s);
    let y = match &record {
        Some(r) => r.restore_y(&raw.y),
        None => raw.y,
    };
    log::debug!(
        "conic solve: {:?} after {} iterations in {:.3}s ({} rows, {} columns)",
        raw.status,
        raw.iterations,
        start.elapsed().as_secs_f64(),
        prog.nrows(),
        prog.nvars()
    );
    Ok(finish(prog, raw.status, x, y, s, raw.iterations))
}

fn finish(
    prog: &ConicProgram,
    status: SolveStatus,
    x: Vec<f64>,
    y: Vec<f64>,
    s: Vec<f64>,
    iterations: usize,
) -> ConicSolution {
    let res = prog.residuals(&x, &y, &s);
    let (pobj, dobj) = match status {
        SolveStatus::PrimalInfeasible => (f64::INFINITY, dot(prog.b(), &y)),
        SolveStatus::DualInfeasible => (dot(prog.c(), &x), f64::NEG_INFINITY),
        _ => (res.primal_objective, res.dual_objective),
    };
    ConicSolution {
        status,
        x,
        y,
        s,
        primal_objective: pobj,
        dual_objective: dobj,
        gap: res.gap,
        primal_residual: res.primal,
        dual_residual: res.dual,
        iterations,
    }
}
