use std::collections::HashMap;

use super::program::{Cone, ConicProgram};

/// How a presolved program maps back to the original.
#[derive(Clone, Debug)]
pub struct PresolveRecord {
    /// Original index of each surviving row.
    pub kept_rows: Vec<usize>,
    /// Surviving row `i` equals original row `kept_rows[i]` times `row_scale[i]`.
    pub row_scale: Vec<f64>,
    pub original_rows: usize,
    /// Columns pinned by a single-entry row, with their value.
    pub fixed: Vec<(usize, f64)>,
}

impl PresolveRecord {
    /// Map a dual vector of the presolved program to the original rows.
    pub fn restore_y(&self, y: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.original_rows];
        for ((&i, &f), &v) in self.kept_rows.iter().zip(&self.row_scale).zip(y) {
            out[i] = f * v;
        }
        out
    }
}

/// Presolve detected primal infeasibility; `ray` is a Farkas certificate over
/// the original rows with `b'ray = 1` and `-A'ray` in the dual cone.
#[derive(Clone, Debug)]
pub struct PresolveInfeasible {
    pub reason: String,
    pub ray: Vec<f64>,
}

/// Drop zero and duplicate rows, scale rows to unit infinity norm and check
/// fixed variables for consistency with their cone.
pub fn presolve(p: &ConicProgram) -> Result<(ConicProgram, PresolveRecord), PresolveInfeasible> {
    let m = p.nrows();
    let b = p.b();
    let bscale = 1.0 + b.iter().fold(0.0f64, |a, v| a.max(v.abs()));
    let infeasible = |reason: String, entries: &[(usize, f64)]| {
        let mut ray = vec![0.0; m];
        let mut by = 0.0;
        for &(i, v) in entries {
            ray[i] += v;
            by += v * b[i];
        }
        for r in &mut ray {
            *r /= by;
        }
        PresolveInfeasible { reason, ray }
    };

    let mut col_cone = vec![(Cone::Free(0), 0usize); p.nvars()];
    for (k, cone) in p.cones().iter().enumerate() {
        for (local, j) in p.block_range(k).enumerate() {
            col_cone[j] = (*cone, local);
        }
    }

    let mut out = ConicProgram::new();
    for &cone in p.cones() {
        out.add_cone(cone);
    }
    for (j, &v) in p.c().iter().enumerate() {
        out.set_objective(j, v);
    }
    let mut rec = PresolveRecord {
        kept_rows: Vec::new(),
        row_scale: Vec::new(),
        original_rows: m,
        fixed: Vec::new(),
    };
    let mut seen: HashMap<Vec<(usize, u64)>, (usize, f64, f64)> = HashMap::new();

    for i in 0..m {
        let row = p.row(i);
        let amax = row.iter().fold(0.0f64, |a, e| a.max(e.1.abs()));
        if amax == 0.0 {
            if b[i].abs() > 1e-12 * bscale {
                return Err(infeasible(format!("row {i} reads 0 = {}", b[i]), &[(i, 1.0)]));
            }
            continue;
        }
        let f = row[0].1.signum() / amax;
        let scaled: Vec<(usize, f64)> = row.iter().map(|&(j, v)| (j, v * f)).collect();
        let rhs = b[i] * f;
        let key: Vec<(usize, u64)> = scaled.iter().map(|&(j, v)| (j, v.to_bits())).collect();
        if let Some(&(first, first_rhs, first_f)) = seen.get(&key) {
            if (rhs - first_rhs).abs() > 1e-9 * (1.0 + rhs.abs().max(first_rhs.abs())) {
                return Err(infeasible(
                    format!("rows {first} and {i} have equal left-hand sides but different right-hand sides"),
                    &[(i, f), (first, -first_f)],
                ));
            }
            continue;
        }
        if scaled.len() == 1 {
            let (j, a) = scaled[0];
            let value = rhs / a;
            let must_be_nonneg = match col_cone[j] {
                (Cone::NonNeg(_), _) => true,
                (Cone::Soc(_), 0) | (Cone::Rsoc(_), 0 | 1) => true,
                (Cone::Psd(r), local) => {
                    let (pi, pj) = super::svec::svec_pair(local, r);
                    pi == pj
                }
                _ => false,
            };
            if must_be_nonneg && value < -1e-12 * bscale {
                return Err(infeasible(
                    format!("row {i} fixes column {j} to {value}, outside its cone"),
                    &[(i, -f * a.signum())],
                ));
            }
            rec.fixed.push((j, value));
        }
        seen.insert(key, (i, rhs, f));
        out.add_row(scaled, rhs);
        rec.kept_rows.push(i);
        rec.row_scale.push(f);
    }
    Ok((out, rec))
}
