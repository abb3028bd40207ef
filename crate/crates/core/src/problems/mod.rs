//! Generators and drivers for the benchmark families: Broyden lower bounds,
//! matrix eigenvalue bounds, copositivity tests and Lyapunov synthesis.

mod bench;
mod broyden;
mod copositive;
mod lyapunov;
mod matrix_eig;
mod patterns;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

pub use bench::{bench_run, write_csv, BenchConfig};
pub use broyden::broyden_poly;
pub use copositive::{copositive_form, random_copositive, solve_copositive};
pub use lyapunov::{lyapunov_search, random_banded_system, LyapunovOptions, LyapunovResult};
pub use matrix_eig::{eig_bound_instance, random_sparse_polymatrix, solve_matrix_eig_bound};
pub use patterns::{block_arrow_pattern, star_pattern};

use crate::chordal::SparsityGraph;
use crate::cones::{AffinePoly, ConeKind, DecVar, GramOptions, SosProgram, SosSolution, SosStatus};
use crate::conic::Settings;
use crate::error::{Error, Result};
use crate::polyalg::{PolyMatrix, Polynomial};

/// Benchmark family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// `min gamma` with `p + gamma x'x` in the cone, `p` the Broyden polynomial.
    #[serde(rename = "broyden")]
    BroydenLb,
    /// `min gamma` with `P + gamma I` in the matrix cone.
    #[serde(rename = "matrix")]
    MatrixEig,
    /// `min gamma` with `Z + gamma I` copositive via the quartic test.
    Copositive,
    /// Quadratic Lyapunov function for a banded cubic system.
    Lyapunov,
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::BroydenLb => "broyden",
            Family::MatrixEig => "matrix",
            Family::Copositive => "copositive",
            Family::Lyapunov => "lyapunov",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "broyden" => Ok(Family::BroydenLb),
            "matrix" | "matrix-eig" => Ok(Family::MatrixEig),
            "copositive" => Ok(Family::Copositive),
            "lyapunov" => Ok(Family::Lyapunov),
            other => Err(Error::InvalidInput(format!(
                "unknown family `{other}` (expected broyden, matrix, copositive or lyapunov)"
            ))),
        }
    }
}

/// Size parameters of one instance. Only the fields relevant to the family
/// are read: `n` (Broyden, Lyapunov), `r` (matrix), `l, e, h` (copositive),
/// `multipliers` (Lyapunov).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProblemParams {
    pub n: usize,
    pub r: usize,
    pub l: usize,
    pub e: usize,
    pub h: usize,
    pub multipliers: bool,
}

impl Default for ProblemParams {
    fn default() -> Self {
        ProblemParams {
            n: 10,
            r: 30,
            l: 2,
            e: 3,
            h: 2,
            multipliers: true,
        }
    }
}

impl ProblemParams {
    pub fn label(&self, family: Family) -> String {
        match family {
            Family::BroydenLb => format!("n={}", self.n),
            Family::MatrixEig => format!("r={}", self.r),
            Family::Copositive => format!("l={};e={};h={}", self.l, self.e, self.h),
            Family::Lyapunov => format!("n={};mult={}", self.n, if self.multipliers { "on" } else { "off" }),
        }
    }
}

/// Status column of a result row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    /// Optimization problem solved; `value` holds the optimum.
    Optimal,
    /// Feasibility problem solved.
    Feasible,
    Infeasible,
    Unbounded,
    NumericalFailure,
    /// Not attempted: the largest PSD block exceeds the configured cap.
    SkippedByPolicy,
    /// The instance could not be built or solved (message in the log).
    Error,
}

impl RowStatus {
    pub fn name(&self) -> &'static str {
        match self {
            RowStatus::Optimal => "optimal",
            RowStatus::Feasible => "feasible",
            RowStatus::Infeasible => "infeasible",
            RowStatus::Unbounded => "unbounded",
            RowStatus::NumericalFailure => "numerical_failure",
            RowStatus::SkippedByPolicy => "skipped_by_policy",
            RowStatus::Error => "error",
        }
    }
}

impl fmt::Display for RowStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Outcome of solving one instance in one cone.
#[derive(Clone, Debug, PartialEq)]
pub struct Outcome {
    pub status: RowStatus,
    pub value: Option<f64>,
    pub time_s: f64,
    pub max_block_side: usize,
}

/// One line of a benchmark table.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub family: Family,
    pub params: String,
    pub seed: u64,
    pub cone: ConeKind,
    pub status: RowStatus,
    pub value: Option<f64>,
    pub time_s: f64,
    pub max_block_side: usize,
}

/// Solver knobs shared by the drivers.
#[derive(Clone, Debug)]
pub struct SolveOptions {
    pub settings: Settings,
    pub gram: GramOptions,
    pub verify_tol: f64,
    /// Skip instances whose largest PSD block side exceeds this.
    pub size_cap: Option<usize>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            settings: Settings::default(),
            gram: GramOptions::default(),
            verify_tol: 1e-6,
            size_cap: None,
        }
    }
}

/// Solve a built program, verify its certificates and summarize.
pub(crate) fn run_program(
    prog: &SosProgram,
    objective: Option<DecVar>,
    opts: &SolveOptions,
    started: Instant,
) -> Result<(Outcome, Option<SosSolution>)> {
    let side = prog.max_block_side();
    if opts.size_cap.is_some_and(|cap| side > cap) {
        return Ok((
            Outcome {
                status: RowStatus::SkippedByPolicy,
                value: None,
                time_s: 0.0,
                max_block_side: side,
            },
            None,
        ));
    }
    let mut sol = prog.solve(&opts.settings)?;
    prog.verify(&mut sol, opts.verify_tol);
    let status = match sol.status {
        SosStatus::Feasible if objective.is_some() => RowStatus::Optimal,
        SosStatus::Feasible => RowStatus::Feasible,
        SosStatus::Infeasible => RowStatus::Infeasible,
        SosStatus::Unbounded => RowStatus::Unbounded,
        SosStatus::NumericalFailure => RowStatus::NumericalFailure,
    };
    let value = match (status, objective) {
        (RowStatus::Optimal, Some(v)) => Some(sol.value(v)),
        _ => None,
    };
    Ok((
        Outcome {
            status,
            value,
            time_s: started.elapsed().as_secs_f64(),
            max_block_side: side,
        },
        Some(sol),
    ))
}

/// `min gamma` subject to `p + gamma x'x` in `kind`.
pub fn solve_lower_bound(p: &Polynomial, kind: ConeKind, opts: &SolveOptions) -> Result<Outcome> {
    let started = Instant::now();
    let n = p.nvars();
    let mut prog = SosProgram::new();
    let gamma = prog.free_var();
    let mut t = AffinePoly::from(p);
    let xx = (0..n).fold(Polynomial::zero(n), |acc, i| &acc + &Polynomial::var(n, i).pow(2));
    t.add_var_times(gamma, &xx)?;
    prog.add_constraint(&t, kind, &opts.gram)?;
    prog.minimize(gamma, 1.0);
    Ok(run_program(&prog, Some(gamma), opts, started)?.0)
}

/// Data of a generated instance.
#[derive(Clone, Debug)]
pub enum InstanceData {
    LowerBound(Polynomial),
    Matrix { p: PolyMatrix, pattern: SparsityGraph },
    Copositive { z: Vec<Vec<f64>>, pattern: SparsityGraph },
    Lyapunov { f: Vec<Polynomial> },
}

/// A reproducible benchmark instance: regenerating from the same family,
/// parameters and seed gives identical data.
#[derive(Clone, Debug)]
pub struct ProblemInstance {
    pub family: Family,
    pub params: ProblemParams,
    pub seed: u64,
    pub data: InstanceData,
}

impl ProblemInstance {
    pub fn generate(family: Family, params: ProblemParams, seed: u64) -> Result<Self> {
        let data = match family {
            Family::BroydenLb => {
                if params.n < 3 {
                    return Err(Error::InvalidInput("Broyden instances need n >= 3".into()));
                }
                InstanceData::LowerBound(broyden_poly(params.n))
            }
            Family::MatrixEig => {
                let (p, pattern) = eig_bound_instance(params.r, seed)?;
                InstanceData::Matrix { p, pattern }
            }
            Family::Copositive => {
                let pattern = block_arrow_pattern(params.l, params.e, params.h)?;
                let z = random_copositive(&pattern, seed);
                InstanceData::Copositive { z, pattern }
            }
            Family::Lyapunov => InstanceData::Lyapunov {
                f: random_banded_system(params.n, seed)?,
            },
        };
        Ok(ProblemInstance {
            family,
            params,
            seed,
            data,
        })
    }

    pub fn solve(&self, kind: ConeKind, opts: &SolveOptions) -> Result<Outcome> {
        match &self.data {
            InstanceData::LowerBound(p) => solve_lower_bound(p, kind, opts),
            InstanceData::Matrix { p, pattern } => solve_matrix_eig_bound(p, pattern, kind, opts),
            InstanceData::Copositive { z, .. } => solve_copositive(z, kind, opts),
            InstanceData::Lyapunov { f } => {
                let lyap = LyapunovOptions {
                    multipliers: self.params.multipliers,
                    ..LyapunovOptions::default()
                };
                Ok(lyapunov_search(f, kind, &lyap, opts)?.outcome)
            }
        }
    }

    pub fn row(&self, kind: ConeKind, outcome: Outcome) -> ResultRow {
        ResultRow {
            family: self.family,
            params: self.params.label(self.family),
            seed: self.seed,
            cone: kind,
            status: outcome.status,
            value: outcome.value,
            time_s: outcome.time_s,
            max_block_side: outcome.max_block_side,
        }
    }

    /// The instance data in the polynomial JSON wire format.
    pub fn to_json(&self) -> serde_json::Value {
        let data = match &self.data {
            InstanceData::LowerBound(p) => serde_json::json!({ "polynomial": p }),
            InstanceData::Matrix { p, pattern } => serde_json::json!({ "matrix": p, "pattern": pattern }),
            InstanceData::Copositive { z, pattern } => serde_json::json!({
                "z": z,
                "pattern": pattern,
                "quartic": copositive_form(z),
            }),
            InstanceData::Lyapunov { f } => serde_json::json!({
                "vector_field": f,
            }),
        };
        serde_json::json!({
            "family": self.family,
            "params": self.params,
            "seed": self.seed,
            "data": data,
        })
    }
}
