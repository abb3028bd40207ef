//! Normal equations `M dy = r` with `M = A_K H^{-1} A_K'`, bordered by the
//! columns of free variables.
//!
//! Rows touched only by free variables make `M` singular, so the factored
//! matrix is `M + rho A_f A_f'`. The bordered system keeps its solution when
//! the first right-hand side is shifted by `rho A_f r2`.
//!
//! The sparsity pattern of `M` is fixed by which rows share a cone block, so
//! the symbolic Cholesky analysis (with AMD ordering) runs once and every
//! interior-point iteration only refactors numerically.

use faer::dyn_stack::{MemBuffer, MemStack, StackReq};
use faer::linalg::solvers::Solve;
use faer::sparse::linalg::cholesky::{
    factorize_symbolic_cholesky, CholeskySymbolicParams, LltRef, SymbolicCholesky,
    SymmetricOrdering,
};
use faer::sparse::{SparseColMatRef, SymbolicSparseColMatRef};
use faer::linalg::cholesky::llt::factor::LltRegularization;
use faer::{Conj, Mat, MatMut, Par, Side};

use super::scaling::{Block, Scaling};
use super::Internal;
use crate::conic::svec::{svec_pair, SQRT2};

/// Rows of `A` touching one group of columns whose `H^{-1}` couples them.
enum Group {
    /// A single nonnegative column.
    NonNeg {
        block: usize,
        local: usize,
        rows: Vec<usize>,
        vals: Vec<f64>,
        pos: Vec<usize>,
    },
    Soc {
        block: usize,
        rows: Vec<usize>,
        /// Per touching row: (local column, value).
        entries: Vec<Vec<(usize, f64)>>,
        pos: Vec<usize>,
    },
    Psd {
        block: usize,
        rows: Vec<usize>,
        /// Per touching row: `(p, q, w)` with the row's matrix equal to
        /// `sum w (E_pq + E_qp)`.
        entries: Vec<Vec<(usize, usize, f64)>>,
        pos: Vec<usize>,
    },
    /// A free column, weighted by `rho`.
    Free {
        rows: Vec<usize>,
        vals: Vec<f64>,
        pos: Vec<usize>,
    },
}

pub(crate) struct Kkt {
    m: usize,
    col_ptr: Vec<usize>,
    row_idx: Vec<usize>,
    values: Vec<f64>,
    symbolic: SymbolicCholesky<usize>,
    l_values: Vec<f64>,
    mem: MemBuffer,
    groups: Vec<Group>,
    /// Sparse columns of `A` for free variables.
    free_cols: Vec<Vec<(usize, f64)>>,
    /// `M^{-1} A_f`, column-major `m x k`.
    z: Mat<f64>,
    sf: Mat<f64>,
    rho: f64,
    /// Diagonal shift added to the factored matrix.
    shift: f64,
    pub regularized_pivots: usize,
}

fn packed(a: usize, c: usize) -> usize {
    a * (a + 1) / 2 + c
}

impl Kkt {
    pub fn new(prob: &Internal) -> Result<Kkt, String> {
        let m = prob.m;
        let mut groups = Vec::new();
        for (bi, block) in prob.blocks.iter().enumerate() {
            match *block {
                Block::NonNeg { off, dim } => {
                    for local in 0..dim {
                        let col = &prob.cols[off + local];
                        if col.is_empty() {
                            continue;
                        }
                        groups.push(Group::NonNeg {
                            block: bi,
                            local,
                            rows: col.iter().map(|e| e.0).collect(),
                            vals: col.iter().map(|e| e.1).collect(),
                            pos: Vec::new(),
                        });
                    }
                }
                Block::Soc { off, dim } => {
                    let mut per_row: std::collections::BTreeMap<usize, Vec<(usize, f64)>> = Default::default();
                    for local in 0..dim {
                        for &(i, v) in &prob.cols[off + local] {
                            per_row.entry(i).or_default().push((local, v));
                        }
                    }
                    if per_row.is_empty() {
                        continue;
                    }
                    let (rows, entries) = per_row.into_iter().unzip();
                    groups.push(Group::Soc {
                        block: bi,
                        rows,
                        entries,
                        pos: Vec::new(),
                    });
                }
                Block::Psd { off, r } => {
                    let mut per_row: std::collections::BTreeMap<usize, Vec<(usize, usize, f64)>> = Default::default();
                    for local in 0..block.dim() {
                        let (p, q) = svec_pair(local, r);
                        let w_scale = if p == q { 0.5 } else { 1.0 / SQRT2 };
                        for &(i, v) in &prob.cols[off + local] {
                            per_row.entry(i).or_default().push((p, q, v * w_scale));
                        }
                    }
                    if per_row.is_empty() {
                        continue;
                    }
                    let (rows, entries) = per_row.into_iter().unzip();
                    groups.push(Group::Psd {
                        block: bi,
                        rows,
                        entries,
                        pos: Vec::new(),
                    });
                }
            }
        }

        for &j in &prob.free {
            let col = &prob.cols[j];
            if !col.is_empty() {
                groups.push(Group::Free {
                    rows: col.iter().map(|e| e.0).collect(),
                    vals: col.iter().map(|e| e.1).collect(),
                    pos: Vec::new(),
                });
            }
        }

        // Lower-triangular pattern: column j holds rows i >= j.
        let mut cols: Vec<Vec<usize>> = (0..m).map(|j| vec![j]).collect();
        for g in &groups {
            let rows = group_rows(g);
            for (a, &ra) in rows.iter().enumerate() {
                for &rc in &rows[..=a] {
                    cols[rc].push(ra);
                }
            }
        }
        let mut col_ptr = Vec::with_capacity(m + 1);
        let mut row_idx = Vec::new();
        col_ptr.push(0);
        for c in &mut cols {
            c.sort_unstable();
            c.dedup();
            row_idx.extend_from_slice(c);
            col_ptr.push(row_idx.len());
        }
        drop(cols);
        for g in &mut groups {
            let rows = group_rows(g).to_vec();
            let mut pos = Vec::with_capacity(rows.len() * (rows.len() + 1) / 2);
            for (a, &ra) in rows.iter().enumerate() {
                for &rc in &rows[..=a] {
                    let seg = &row_idx[col_ptr[rc]..col_ptr[rc + 1]];
                    let k = seg.binary_search(&ra).expect("pattern contains pair");
                    pos.push(col_ptr[rc] + k);
                }
            }
            match g {
                Group::NonNeg { pos: p, .. }
                | Group::Soc { pos: p, .. }
                | Group::Psd { pos: p, .. }
                | Group::Free { pos: p, .. } => *p = pos,
            }
        }

        let sym = SymbolicSparseColMatRef::new_checked(m, m, &col_ptr, None, &row_idx);
        let symbolic = factorize_symbolic_cholesky(
            sym,
            Side::Lower,
            SymmetricOrdering::Amd,
            CholeskySymbolicParams::default(),
        )
        .map_err(|e| format!("symbolic factorization failed: {e:?}"))?;
        let l_values = vec![0.0; symbolic.len_val()];
        let req = StackReq::any_of(&[
            symbolic.factorize_numeric_llt_scratch::<f64>(Par::Seq, Default::default()),
            symbolic.solve_in_place_scratch::<f64>(1, Par::Seq),
        ]);
        let mem = MemBuffer::try_new(req).map_err(|_| "out of memory for factorization workspace".to_string())?;
        let free_cols: Vec<Vec<(usize, f64)>> = prob.free.iter().map(|&j| prob.cols[j].clone()).collect();
        let k = free_cols.len();
        let nnz = row_idx.len();
        Ok(Kkt {
            m,
            col_ptr,
            row_idx,
            values: vec![0.0; nnz],
            symbolic,
            l_values,
            mem,
            groups,
            free_cols,
            z: Mat::zeros(m, k),
            sf: Mat::zeros(k, k),
            rho: 1.0,
            shift: 0.0,
            regularized_pivots: 0,
        })
    }

    /// Number of stored lower-triangle entries of `M`.
    pub fn nnz(&self) -> usize {
        self.row_idx.len()
    }

    /// Assemble `M` for the current scalings and factor it.
    pub fn factor(&mut self, scalings: &[Scaling]) -> Result<(), String> {
        self.values.fill(0.0);
        let values = &mut self.values;
        for g in &self.groups {
            match g {
                Group::NonNeg {
                    block,
                    local,
                    vals,
                    pos,
                    ..
                } => {
                    let h = scalings[*block].nonneg_hinv(*local);
                    let mut k = 0;
                    for a in 0..vals.len() {
                        for c in 0..=a {
                            values[pos[k]] += vals[a] * vals[c] * h;
                            k += 1;
                        }
                    }
                }
                Group::Soc {
                    block,
                    entries,
                    pos,
                    ..
                } => {
                    let h = scalings[*block].soc_hinv_dense();
                    let dim = h.nrows();
                    let mut z = vec![0.0; dim];
                    for a in 0..entries.len() {
                        z.fill(0.0);
                        for &(col, v) in &entries[a] {
                            for i in 0..dim {
                                z[i] += h[(i, col)] * v;
                            }
                        }
                        for c in 0..=a {
                            let dotv: f64 = entries[c].iter().map(|&(col, v)| v * z[col]).sum();
                            values[pos[packed(a, c)]] += dotv;
                        }
                    }
                }
                Group::Psd {
                    block,
                    entries,
                    pos,
                    ..
                } => {
                    let g = scalings[*block].psd_g();
                    for a in 0..entries.len() {
                        let ea = &entries[a];
                        for c in 0..=a {
                            let mut acc = 0.0;
                            for &(p, q, wa) in ea {
                                let mut inner = 0.0;
                                for &(u, v, wc) in &entries[c] {
                                    inner += wc * (g[(p, u)] * g[(q, v)] + g[(p, v)] * g[(q, u)]);
                                }
                                acc += wa * inner;
                            }
                            values[pos[packed(a, c)]] += 2.0 * acc;
                        }
                    }
                }
                Group::Free { .. } => {}
            }
        }

        let maxdiag = (0..self.m)
            .map(|j| self.values[self.col_ptr[j]])
            .fold(0.0f64, f64::max)
            .max(1.0);
        self.rho = maxdiag;
        for g in &self.groups {
            if let Group::Free { vals, pos, .. } = g {
                let mut k = 0;
                for a in 0..vals.len() {
                    for c in 0..=a {
                        self.values[pos[k]] += vals[a] * vals[c] * maxdiag;
                        k += 1;
                    }
                }
            }
        }
        // Retry with a growing diagonal shift when a pivot breaks down; the
        // refinement in `solve` works against the unshifted matrix.
        self.shift = 0.0;
        let mut attempt = 0;
        loop {
            let reg = LltRegularization {
                dynamic_regularization_delta: 1e-9 * maxdiag,
                dynamic_regularization_epsilon: 1e-14 * maxdiag,
            };
            let mat = SparseColMatRef::new(
                SymbolicSparseColMatRef::new_checked(self.m, self.m, &self.col_ptr, None, &self.row_idx),
                &self.values,
            );
            let stack = MemStack::new(&mut self.mem);
            let res = self.symbolic.factorize_numeric_llt(
                &mut self.l_values,
                mat,
                Side::Lower,
                reg,
                Par::Seq,
                stack,
                Default::default(),
            );
            match res {
                Ok(_) => break,
                Err(e) if attempt >= 3 => {
                    return Err(format!("Cholesky of the normal equations failed: {e:?}"));
                }
                Err(_) => {
                    let next = maxdiag * [1e-12, 1e-10, 1e-8][attempt];
                    for j in 0..self.m {
                        self.values[self.col_ptr[j]] += next - self.shift;
                    }
                    self.shift = next;
                    self.regularized_pivots += 1;
                    attempt += 1;
                }
            }
        }

        let k = self.free_cols.len();
        if k > 0 {
            let mut z = Mat::zeros(self.m, k);
            for (j, col) in self.free_cols.iter().enumerate() {
                for &(i, v) in col {
                    z[(i, j)] = v;
                }
            }
            self.solve_m(z.as_mut());
            let mut sf = Mat::zeros(k, k);
            for (i, col) in self.free_cols.iter().enumerate() {
                for j in 0..k {
                    sf[(i, j)] = col.iter().map(|&(r, v)| v * z[(r, j)]).sum();
                }
            }
            self.z = z;
            self.sf = sf;
        }
        Ok(())
    }

    fn solve_m(&mut self, rhs: MatMut<'_, f64>) {
        let llt = LltRef::new(&self.symbolic, &self.l_values);
        let stack = MemStack::new(&mut self.mem);
        llt.solve_in_place_with_conj(Conj::No, rhs, Par::Seq, stack);
    }

    /// `M v` from the assembled lower triangle.
    fn m_mul(&self, v: &[f64], out: &mut [f64]) {
        out.fill(0.0);
        for j in 0..self.m {
            for k in self.col_ptr[j]..self.col_ptr[j + 1] {
                let i = self.row_idx[k];
                let a = self.values[k];
                if i == j {
                    out[i] += (a - self.shift) * v[j];
                } else {
                    out[i] += a * v[j];
                    out[j] += a * v[i];
                }
            }
        }
    }

    fn solve_once(&mut self, r1: &[f64], r2: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut t = Mat::from_fn(self.m, 1, |i, _| r1[i]);
        self.solve_m(t.as_mut());
        let k = self.free_cols.len();
        if k == 0 {
            return ((0..self.m).map(|i| t[(i, 0)]).collect(), Vec::new());
        }
        let rhs = Mat::from_fn(k, 1, |j, _| {
            self.free_cols[j].iter().map(|&(r, v)| v * t[(r, 0)]).sum::<f64>() - r2[j]
        });
        let dxf = self.sf.partial_piv_lu().solve(&rhs);
        let dy = (0..self.m)
            .map(|i| t[(i, 0)] - (0..k).map(|j| self.z[(i, j)] * dxf[(j, 0)]).sum::<f64>())
            .collect();
        (dy, (0..k).map(|j| dxf[(j, 0)]).collect())
    }

    /// Solve `[M A_f; A_f' 0] [dy; dxf] = [r1; r2]` with iterative refinement.
    pub fn solve(&mut self, r1: &[f64], r2: &[f64]) -> (Vec<f64>, Vec<f64>) {
        let mut shifted = r1.to_vec();
        for (j, col) in self.free_cols.iter().enumerate() {
            for &(i, v) in col {
                shifted[i] += self.rho * v * r2[j];
            }
        }
        let r1 = &shifted[..];
        let (mut dy, mut dxf) = self.solve_once(r1, r2);
        let scale = 1.0 + r1.iter().chain(r2).fold(0.0f64, |a, v| a.max(v.abs()));
        let mut my = vec![0.0; self.m];
        let mut last = f64::INFINITY;
        for _ in 0..4 {
            self.m_mul(&dy, &mut my);
            let mut e1: Vec<f64> = (0..self.m).map(|i| r1[i] - my[i]).collect();
            for (j, col) in self.free_cols.iter().enumerate() {
                for &(i, v) in col {
                    e1[i] -= v * dxf[j];
                }
            }
            let e2: Vec<f64> = self
                .free_cols
                .iter()
                .enumerate()
                .map(|(j, col)| r2[j] - col.iter().map(|&(i, v)| v * dy[i]).sum::<f64>())
                .collect();
            let err = e1.iter().chain(&e2).fold(0.0f64, |a, v| a.max(v.abs()));
            if err <= 1e-14 * scale || err >= 0.5 * last {
                break;
            }
            last = err;
            let (cy, cf) = self.solve_once(&e1, &e2);
            for (a, b) in dy.iter_mut().zip(&cy) {
                *a += b;
            }
            for (a, b) in dxf.iter_mut().zip(&cf) {
                *a += b;
            }
        }
        (dy, dxf)
    }
}

fn group_rows(g: &Group) -> &[usize] {
    match g {
        Group::NonNeg { rows, .. } | Group::Soc { rows, .. } | Group::Psd { rows, .. } | Group::Free { rows, .. } => {
            rows
        }
    }
}

impl Scaling {
    /// Diagonal entry `local` of `H^{-1}` for a nonnegative block.
    fn nonneg_hinv(&self, local: usize) -> f64 {
        match self {
            Scaling::NonNeg { d, .. } => 1.0 / (d[local] * d[local]),
            _ => unreachable!("scalar H^{{-1}} requested for a non-orthant block"),
        }
    }
}
