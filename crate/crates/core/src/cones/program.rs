use std::collections::HashMap;
use std::time::Instant;

use faer::Mat;

use super::affine::{AffineExpr, AffinePoly, AffinePolyMatrix, DecVar};
use super::certificate::{verify_certificate, CertificateBlock, GramCertificate};
use super::kind::ConeKind;
use super::structure::{build_gram_structure, GramOptions, GramStructure};
use crate::chordal::SparsityGraph;
use crate::conic::{solve, Cone, ConicProgram, ConicSolution, Settings, SolveStatus, SQRT2};
use crate::error::Result;
use crate::polyalg::ZERO_TOL;

/// How the entries of one Gram block are parametrized by conic columns.
#[derive(Clone, Debug)]
enum BlockParam {
    /// One PSD cone: `Q_ij = x[col] / sqrt(2)` off the diagonal.
    Psd { block: usize },
    /// Extreme rays of the DD cone: `Q = sum a_i e_i e_i' +
    /// sum_{i<j} p_ij (e_i + e_j)(e_i + e_j)' + m_ij (e_i - e_j)(e_i - e_j)'`.
    Dd {
        diag: usize,
        /// `(i, j, column of p_ij)`, with `m_ij` in the next column.
        pairs: Vec<(usize, usize, usize)>,
        index: PairIndex,
    },
    /// Sum of 2x2 PSD blocks, one rotated cone `(u, v, w)` per allowed pair,
    /// contributing `u` to `Q_ii`, `v` to `Q_jj` and `w / sqrt(2)` to `Q_ij`.
    /// Elements without any allowed pair get a nonnegative diagonal.
    Sdd {
        pairs: Vec<(usize, usize, usize)>,
        lone: Vec<(usize, usize)>,
        index: PairIndex,
    },
}

/// Lookup from a pair to its position in a pair list, plus the pairs
/// incident to each element.
#[derive(Clone, Debug, Default)]
struct PairIndex {
    at: HashMap<(usize, usize), usize>,
    incident: Vec<Vec<usize>>,
}

impl PairIndex {
    fn new(side: usize, pairs: &[(usize, usize, usize)]) -> Self {
        let mut idx = PairIndex {
            at: HashMap::with_capacity(pairs.len()),
            incident: vec![Vec::new(); side],
        };
        for (k, &(i, j, _)) in pairs.iter().enumerate() {
            idx.at.insert((i, j), k);
            idx.incident[i].push(k);
            idx.incident[j].push(k);
        }
        idx
    }

    fn get(&self, i: usize, j: usize) -> Option<usize> {
        self.at.get(&(i.min(j), i.max(j))).copied()
    }
}

#[derive(Clone, Debug)]
struct Constraint {
    target: AffinePolyMatrix,
    structure: GramStructure,
    params: Vec<BlockParam>,
    /// Coefficients that must vanish but no Gram entry can reach.
    unreachable: Vec<String>,
}

/// Outcome of an [`SosProgram`] solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SosStatus {
    Feasible,
    Infeasible,
    Unbounded,
    NumericalFailure,
}

impl SosStatus {
    pub fn name(&self) -> &'static str {
        match self {
            SosStatus::Feasible => "feasible",
            SosStatus::Infeasible => "infeasible",
            SosStatus::Unbounded => "unbounded",
            SosStatus::NumericalFailure => "numerical_failure",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SosSolution {
    pub status: SosStatus,
    /// Objective value when feasible.
    pub objective: Option<f64>,
    /// Values of every conic column; index with [`SosSolution::value`].
    pub values: Vec<f64>,
    /// One certificate per constraint, in insertion order, when feasible.
    pub certificates: Vec<GramCertificate>,
    /// Raw solver output; `None` if infeasibility was detected structurally.
    pub conic: Option<ConicSolution>,
    pub message: Option<String>,
    pub max_block_side: usize,
    pub solve_seconds: f64,
}

impl SosSolution {
    pub fn value(&self, v: DecVar) -> f64 {
        self.values.get(v.0).copied().unwrap_or(f64::NAN)
    }
}

/// An optimization problem over polynomial cone constraints with affine
/// dependence on scalar decision variables.
#[derive(Clone, Debug, Default)]
pub struct SosProgram {
    prog: ConicProgram,
    constraints: Vec<Constraint>,
}

impl SosProgram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn free_var(&mut self) -> DecVar {
        let k = self.prog.add_cone(Cone::Free(1));
        DecVar(self.prog.block_offset(k))
    }

    pub fn nonneg_var(&mut self) -> DecVar {
        let k = self.prog.add_cone(Cone::NonNeg(1));
        DecVar(self.prog.block_offset(k))
    }

    /// Add `coef * v` to the minimized objective.
    pub fn minimize(&mut self, v: DecVar, coef: f64) {
        self.prog.add_objective(v.0, coef);
    }

    /// `sum coef * var = rhs`.
    pub fn add_linear_eq(&mut self, terms: &[(DecVar, f64)], rhs: f64) {
        self.prog.add_row(terms.iter().map(|(v, c)| (v.0, *c)), rhs);
    }

    pub fn conic(&self) -> &ConicProgram {
        &self.prog
    }

    pub fn max_block_side(&self) -> usize {
        self.constraints.iter().map(|c| c.structure.max_block_side()).max().unwrap_or(0)
    }

    /// Require `p` to lie in the cone `kind`. Returns the constraint index.
    pub fn add_constraint(&mut self, p: &AffinePoly, kind: ConeKind, opts: &GramOptions) -> Result<usize> {
        self.add_matrix_constraint(&AffinePolyMatrix::from(p.clone()), kind, None, opts)
    }

    /// Require the polynomial matrix `m` to lie in the matrix cone `kind`.
    pub fn add_matrix_constraint(
        &mut self,
        m: &AffinePolyMatrix,
        kind: ConeKind,
        pattern: Option<&SparsityGraph>,
        opts: &GramOptions,
    ) -> Result<usize> {
        let structure = build_gram_structure(m, kind, pattern, opts)?;
        let params: Vec<BlockParam> = structure
            .blocks
            .iter()
            .map(|blk| self.emit_block(kind, blk.side(), |i, j| blk.allows(i, j)))
            .collect();

        // Explicit zeros for forbidden PSD entries.
        for (blk, param) in structure.blocks.iter().zip(&params) {
            if let BlockParam::Psd { block } = param {
                for &(i, j) in &blk.forbidden {
                    let col = self.prog.psd_col(*block, i, j);
                    self.prog.add_row([(col, 1.0)], 0.0);
                }
            }
        }

        let mut unreachable = Vec::new();
        let zero = AffineExpr::default();
        let mut keys: Vec<_> = structure.coefficient_map.keys().cloned().collect();
        for a in 0..m.side() {
            for b in a..m.side() {
                for (alpha, _) in m.get(a, b).terms() {
                    keys.push((a, b, alpha.clone()));
                }
            }
        }
        keys.sort();
        keys.dedup();
        for key in keys {
            let (a, b, alpha) = &key;
            let expr = m.get(*a, *b).coeff(alpha).unwrap_or(&zero);
            let mut row: Vec<(usize, f64)> = Vec::new();
            if let Some(contribs) = structure.coefficient_map.get(&key) {
                for c in contribs {
                    entry_terms(&self.prog, &params[c.block], c.i, c.j, c.weight, &mut row);
                }
            }
            row.extend(expr.vars.iter().map(|(v, c)| (v.0, -c)));
            if row.is_empty() {
                if expr.constant.abs() > ZERO_TOL {
                    unreachable.push(format!(
                        "coefficient of {} in entry ({}, {}) is {} but no Gram entry reaches it",
                        alpha,
                        a + 1,
                        b + 1,
                        expr.constant
                    ));
                }
                continue;
            }
            self.prog.add_row(row, expr.constant);
        }

        self.constraints.push(Constraint {
            target: m.clone(),
            structure,
            params,
            unreachable,
        });
        Ok(self.constraints.len() - 1)
    }

    /// Append a cone block and return its first column (or the current end
    /// of the column range for an empty block).
    fn add_columns(&mut self, cone: Cone) -> usize {
        if cone.dim() == 0 {
            return self.prog.nvars();
        }
        let k = self.prog.add_cone(cone);
        self.prog.block_offset(k)
    }

    fn emit_block(&mut self, kind: ConeKind, side: usize, allows: impl Fn(usize, usize) -> bool) -> BlockParam {
        let pairs: Vec<(usize, usize)> = (0..side)
            .flat_map(|i| (i + 1..side).map(move |j| (i, j)))
            .filter(|&(i, j)| allows(i, j))
            .collect();
        match kind {
            ConeKind::Sos | ConeKind::Ssos => BlockParam::Psd {
                block: self.prog.add_cone(Cone::Psd(side)),
            },
            ConeKind::Dsos => {
                let diag = self.add_columns(Cone::NonNeg(side));
                let base = self.add_columns(Cone::NonNeg(2 * pairs.len()));
                let pairs: Vec<_> = pairs.iter().enumerate().map(|(k, &(i, j))| (i, j, base + 2 * k)).collect();
                let index = PairIndex::new(side, &pairs);
                BlockParam::Dd { diag, pairs, index }
            }
            ConeKind::Sdsos => {
                let mut covered = vec![false; side];
                let mut out = Vec::with_capacity(pairs.len());
                for &(i, j) in &pairs {
                    covered[i] = true;
                    covered[j] = true;
                    let k = self.prog.add_cone(Cone::Rsoc(3));
                    out.push((i, j, self.prog.block_offset(k)));
                }
                let lone_idx: Vec<usize> = (0..side).filter(|&i| !covered[i]).collect();
                let lone = if lone_idx.is_empty() {
                    Vec::new()
                } else {
                    let base = self.add_columns(Cone::NonNeg(lone_idx.len()));
                    lone_idx.iter().enumerate().map(|(k, &i)| (i, base + k)).collect()
                };
                let index = PairIndex::new(side, &out);
                BlockParam::Sdd { pairs: out, lone, index }
            }
        }
    }

    /// Solve and extract certificates.
    pub fn solve(&self, settings: &Settings) -> Result<SosSolution> {
        let start = Instant::now();
        let unreachable: Vec<&String> = self.constraints.iter().flat_map(|c| &c.unreachable).collect();
        if let Some(msg) = unreachable.first() {
            return Ok(SosSolution {
                status: SosStatus::Infeasible,
                objective: None,
                values: Vec::new(),
                certificates: Vec::new(),
                conic: None,
                message: Some((*msg).clone()),
                max_block_side: self.max_block_side(),
                solve_seconds: start.elapsed().as_secs_f64(),
            });
        }
        let sol = solve(&self.prog, settings)?;
        let status = match sol.status {
            SolveStatus::Optimal => SosStatus::Feasible,
            SolveStatus::PrimalInfeasible => SosStatus::Infeasible,
            SolveStatus::DualInfeasible => SosStatus::Unbounded,
            SolveStatus::NumericalFailure => SosStatus::NumericalFailure,
        };
        let certificates = if status == SosStatus::Feasible {
            self.constraints.iter().map(|c| extract(&self.prog, c, &sol.x)).collect()
        } else {
            Vec::new()
        };
        Ok(SosSolution {
            status,
            objective: (status == SosStatus::Feasible).then_some(sol.primal_objective),
            values: sol.x.clone(),
            certificates,
            message: None,
            conic: Some(sol),
            max_block_side: self.max_block_side(),
            solve_seconds: start.elapsed().as_secs_f64(),
        })
    }
}

impl SosProgram {
    /// Verify every certificate of a feasible solution against its constraint
    /// (decision variables fixed at their solved values) and attach the
    /// reports. A failed check downgrades the status to `NumericalFailure`.
    pub fn verify(&self, sol: &mut SosSolution, tol: f64) -> bool {
        if sol.status != SosStatus::Feasible {
            return false;
        }
        let mut ok = true;
        for (c, cert) in self.constraints.iter().zip(sol.certificates.iter_mut()) {
            let report = verify_certificate(&c.target.eval(&sol.values), cert, tol);
            ok &= report.passed;
            cert.verification = Some(report);
        }
        if !ok {
            sol.status = SosStatus::NumericalFailure;
            sol.message = Some("solver reported success but a certificate failed verification".into());
        }
        ok
    }
}

/// Append `weight * Q_ij` expressed in conic columns.
fn entry_terms(prog: &ConicProgram, param: &BlockParam, i: usize, j: usize, weight: f64, out: &mut Vec<(usize, f64)>) {
    match param {
        BlockParam::Psd { block } => {
            let s = if i == j { 1.0 } else { 1.0 / SQRT2 };
            out.push((prog.psd_col(*block, i, j), weight * s));
        }
        BlockParam::Dd { diag, pairs, index } => {
            if i == j {
                out.push((diag + i, weight));
                for &k in &index.incident[i] {
                    let col = pairs[k].2;
                    out.push((col, weight));
                    out.push((col + 1, weight));
                }
            } else if let Some(k) = index.get(i, j) {
                let col = pairs[k].2;
                out.push((col, weight));
                out.push((col + 1, -weight));
            }
        }
        BlockParam::Sdd { pairs, lone, index } => {
            if i == j {
                for &k in &index.incident[i] {
                    let (p, _, col) = pairs[k];
                    out.push((if p == i { col } else { col + 1 }, weight));
                }
                if let Some(&(_, col)) = lone.iter().find(|&&(p, _)| p == i) {
                    out.push((col, weight));
                }
            } else if let Some(k) = index.get(i, j) {
                out.push((pairs[k].2 + 2, weight / SQRT2));
            }
        }
    }
}

/// Gram matrix of a block at primal point `x`.
fn gram_value(prog: &ConicProgram, param: &BlockParam, side: usize, x: &[f64]) -> Mat<f64> {
    let mut q = Mat::<f64>::zeros(side, side);
    match param {
        BlockParam::Psd { block } => {
            for j in 0..side {
                for i in j..side {
                    let v = x[prog.psd_col(*block, i, j)];
                    let v = if i == j { v } else { v / SQRT2 };
                    q[(i, j)] = v;
                    q[(j, i)] = v;
                }
            }
        }
        BlockParam::Dd { diag, pairs, .. } => {
            for i in 0..side {
                q[(i, i)] = x[diag + i];
            }
            for &(i, j, col) in pairs {
                let (p, m) = (x[col], x[col + 1]);
                q[(i, i)] += p + m;
                q[(j, j)] += p + m;
                q[(i, j)] += p - m;
                q[(j, i)] += p - m;
            }
        }
        BlockParam::Sdd { pairs, lone, .. } => {
            for &(i, j, col) in pairs {
                q[(i, i)] += x[col];
                q[(j, j)] += x[col + 1];
                q[(i, j)] += x[col + 2] / SQRT2;
                q[(j, i)] += x[col + 2] / SQRT2;
            }
            for &(i, col) in lone {
                q[(i, i)] += x[col];
            }
        }
    }
    q
}

/// Read the Gram blocks, then remove the (tiny) coefficient mismatch left
/// by the interior point method. Every Gram entry feeds exactly one
/// coefficient, so the least-norm correction is a per-coefficient rescale.
fn extract(prog: &ConicProgram, c: &Constraint, x: &[f64]) -> GramCertificate {
    let s = &c.structure;
    let mut grams: Vec<Mat<f64>> = s
        .blocks
        .iter()
        .zip(&c.params)
        .map(|(blk, p)| gram_value(prog, p, blk.side(), x))
        .collect();
    let target = c.target.eval(x);
    for (key, contribs) in &s.coefficient_map {
        let (a, b, alpha) = key;
        let want = target.get(*a, *b).coeff(alpha);
        let have: f64 = contribs.iter().map(|t| t.weight * grams[t.block][(t.i, t.j)]).sum();
        let norm2: f64 = contribs.iter().map(|t| t.weight * t.weight).sum();
        let delta = (want - have) / norm2;
        for t in contribs {
            let g = &mut grams[t.block];
            g[(t.i, t.j)] += delta * t.weight;
            if t.i != t.j {
                g[(t.j, t.i)] += delta * t.weight;
            }
        }
    }
    let blocks: Vec<CertificateBlock> = s
        .blocks
        .iter()
        .zip(grams)
        .map(|(blk, gram)| CertificateBlock {
            clique: blk.clique.clone(),
            basis: blk.elements.iter().map(|e| e.alpha.clone()).collect(),
            rows: blk.elements.iter().map(|e| e.row).collect(),
            gram,
        })
        .collect();
    let mut cert = GramCertificate {
        kind: s.kind,
        n: s.n,
        r: s.r,
        blocks,
        residual: 0.0,
        verification: None,
    };
    cert.residual = cert.residual_against(&target);
    cert
}
