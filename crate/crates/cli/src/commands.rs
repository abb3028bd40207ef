use std::collections::BTreeMap;
use std::path::Path;

use serde_json::json;
use sparsos::chordal::{chordal_extend, is_chordal, maximal_cliques, SparsityGraph};
use sparsos::cones::{
    build_gram_structure, certify, certify_matrix, verify_certificate_as, AffinePoly, AffinePolyMatrix, CertifyOptions,
    CertifyOutcome, ConeKind, GramOptions, SosProgram, SosStatus,
};
use sparsos::conic::{dump, Settings};
use sparsos::problems::{bench_run, solve_lower_bound, write_csv, BenchConfig, Family, ProblemParams, RowStatus, SolveOptions};
use sparsos::{Error, PolyMatrix, Result};

use crate::{input, BenchArgs, CertifyArgs, CertifyMatrixArgs, Command, GraphInfoArgs, LowerboundArgs, SolveFlags, VerifyArgs};
use crate::{EXIT_INFEASIBLE, EXIT_NUMERICAL, EXIT_OK};

pub fn run(cmd: Command) -> Result<u8> {
    match cmd {
        Command::Certify(a) => cmd_certify(a),
        Command::CertifyMatrix(a) => cmd_certify_matrix(a),
        Command::Lowerbound(a) => cmd_lowerbound(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Verify(a) => cmd_verify(a),
        Command::GraphInfo(a) => cmd_graph_info(a),
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("--{name} must be positive, got {v}")))
    }
}

fn gram_options(degree: Option<u32>, sparse_gram: bool) -> Result<GramOptions> {
    let half_degree = match degree {
        Some(d) if d % 2 == 1 => return Err(Error::InvalidInput(format!("--degree must be even, got {d}"))),
        Some(d) => Some(d / 2),
        None => None,
    };
    Ok(GramOptions { half_degree, sparse_gram, ..GramOptions::default() })
}

fn settings(feas_tol: f64) -> Settings {
    Settings { feas_tol, gap_tol: feas_tol, ..Settings::default() }
}

fn certify_options(f: &SolveFlags) -> Result<CertifyOptions> {
    positive("feas-tol", f.feas_tol)?;
    positive("verify-tol", f.verify_tol)?;
    Ok(CertifyOptions {
        gram: gram_options(f.degree, f.sparse_gram)?,
        settings: settings(f.feas_tol),
        verify_tol: f.verify_tol,
    })
}

fn exit_for(status: SosStatus) -> u8 {
    match status {
        SosStatus::Feasible => EXIT_OK,
        SosStatus::Infeasible => EXIT_INFEASIBLE,
        SosStatus::Unbounded | SosStatus::NumericalFailure => EXIT_NUMERICAL,
    }
}

fn print_json(v: &serde_json::Value) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

fn report_outcome(kind: ConeKind, out: &CertifyOutcome, out_path: Option<&Path>) -> Result<u8> {
    if let (Some(path), Some(cert)) = (out_path, &out.certificate) {
        std::fs::write(path, serde_json::to_string_pretty(cert)?)?;
        log::info!("certificate written to {}", path.display());
    }
    print_json(&json!({
        "status": out.status,
        "cone": kind,
        "max_block_side": out.max_block_side,
        "iterations": out.iterations,
        "solve_seconds": out.solve_seconds,
        "message": out.message,
        "certificate": out.certificate,
    }))?;
    Ok(exit_for(out.status))
}

fn write_dump(path: &Path, prog: &SosProgram) -> Result<()> {
    std::fs::write(path, dump(prog.conic()))?;
    log::info!("conic program written to {}", path.display());
    Ok(())
}

fn cmd_certify(a: CertifyArgs) -> Result<u8> {
    let p = input::polynomial(&a.input)?;
    let opts = certify_options(&a.solve)?;
    if let Some(path) = &a.dump_conic {
        let mut prog = SosProgram::new();
        prog.add_constraint(&AffinePoly::from(&p), a.solve.cone, &opts.gram)?;
        write_dump(path, &prog)?;
    }
    let out = certify(&p, a.solve.cone, &opts)?;
    report_outcome(a.solve.cone, &out, a.out.as_deref())
}

fn cmd_certify_matrix(a: CertifyMatrixArgs) -> Result<u8> {
    let m = input::matrix(&a.input)?;
    let pattern = a.pattern.as_deref().map(input::graph).transpose()?;
    let opts = certify_options(&a.solve)?;
    if let Some(path) = &a.dump_conic {
        let mut prog = SosProgram::new();
        prog.add_matrix_constraint(&AffinePolyMatrix::from(&m), a.solve.cone, pattern.as_ref(), &opts.gram)?;
        write_dump(path, &prog)?;
    }
    let out = certify_matrix(&m, a.solve.cone, pattern.as_ref(), &opts)?;
    report_outcome(a.solve.cone, &out, a.out.as_deref())
}

fn cmd_lowerbound(a: LowerboundArgs) -> Result<u8> {
    let p = input::polynomial(&a.input)?;
    let c = certify_options(&a.solve)?;
    let opts = SolveOptions { settings: c.settings, gram: c.gram, verify_tol: c.verify_tol, size_cap: None };
    let out = solve_lower_bound(&p, a.solve.cone, &opts)?;
    print_json(&json!({
        "status": out.status,
        "cone": a.solve.cone,
        "gamma": out.value,
        "max_block_side": out.max_block_side,
        "time_s": out.time_s,
    }))?;
    Ok(match out.status {
        RowStatus::Optimal | RowStatus::Unbounded => EXIT_OK,
        RowStatus::Infeasible => EXIT_INFEASIBLE,
        _ => EXIT_NUMERICAL,
    })
}

fn cmd_bench(a: BenchArgs) -> Result<u8> {
    positive("feas-tol", a.feas_tol)?;
    positive("verify-tol", a.verify_tol)?;
    let base = ProblemParams::default();
    let params: Vec<ProblemParams> = match a.family {
        Family::BroydenLb => a.n.iter().map(|&n| ProblemParams { n, ..base }).collect(),
        Family::MatrixEig => a.r.iter().map(|&r| ProblemParams { r, ..base }).collect(),
        Family::Copositive => a.l.iter().map(|&l| ProblemParams { l, e: a.e, h: a.h, ..base }).collect(),
        Family::Lyapunov => {
            let mults: &[bool] = match a.multipliers.as_str() {
                "on" => &[true],
                "off" => &[false],
                "both" => &[true, false],
                other => return Err(Error::InvalidInput(format!("--multipliers must be on, off or both, got `{other}`"))),
            };
            a.n.iter().flat_map(|&n| mults.iter().map(move |&m| ProblemParams { n, multipliers: m, ..base })).collect()
        }
    };
    let cfg = BenchConfig {
        family: a.family,
        params,
        seeds: (a.seed..a.seed + a.seeds.max(1)).collect(),
        cones: a.cones.clone(),
        solve: SolveOptions {
            settings: settings(a.feas_tol),
            gram: GramOptions::default(),
            verify_tol: a.verify_tol,
            size_cap: a.size_cap,
        },
        jobs: a.jobs,
    };
    let rows = bench_run(&cfg)?;
    log_orderings(&rows);
    match &a.out {
        Some(path) => write_csv(&rows, std::fs::File::create(path)?)?,
        None => write_csv(&rows, std::io::stdout().lock())?,
    }
    Ok(EXIT_OK)
}

type Cell = (ConeKind, Option<f64>, RowStatus);

/// Check gamma_dsos >= gamma_sdsos >= gamma_ssos >= gamma_sos per instance.
fn log_orderings(rows: &[sparsos::problems::ResultRow]) {
    let mut by_instance: BTreeMap<(String, u64), Vec<Cell>> = BTreeMap::new();
    for r in rows {
        by_instance.entry((r.params.clone(), r.seed)).or_default().push((r.cone, r.value, r.status));
    }
    for ((params, seed), mut cells) in by_instance {
        cells.sort_by_key(|c| c.0);
        let solved: Vec<(ConeKind, f64)> = cells
            .iter()
            .filter(|c| matches!(c.2, RowStatus::Optimal | RowStatus::Infeasible))
            .map(|c| (c.0, c.1.unwrap_or(f64::INFINITY)))
            .collect();
        if solved.iter().all(|c| c.1.is_infinite()) && cells.iter().all(|c| c.1.is_none()) {
            continue; // feasibility family
        }
        let ok = solved.windows(2).all(|w| w[0].1 >= w[1].1 - 1e-6 * (1.0 + w[1].1.abs()));
        if ok {
            log::info!("{params} seed {seed}: cone ordering holds");
        } else {
            log::warn!("{params} seed {seed}: cone ordering violated: {solved:?}");
        }
    }
}

fn cmd_verify(a: VerifyArgs) -> Result<u8> {
    positive("verify-tol", a.verify_tol)?;
    let target = input::polynomial_or_matrix(&a.input)?;
    let cert = input::certificate(&a.certificate)?;
    if cert.n != target.nvars() {
        return Err(Error::InvalidInput(format!(
            "certificate has {} variables, input has {}",
            cert.n,
            target.nvars()
        )));
    }
    if cert.r != target.side() {
        return Err(Error::InvalidInput(format!("certificate has side {}, input has {}", cert.r, target.side())));
    }
    let kind = a.as_kind.unwrap_or(cert.kind);
    let report = verify_certificate_as(&target, &cert, kind, a.verify_tol);
    print_json(&serde_json::to_value(&report)?)?;
    Ok(if report.passed { EXIT_OK } else { EXIT_INFEASIBLE })
}

fn cmd_graph_info(a: GraphInfoArgs) -> Result<u8> {
    let m: PolyMatrix = input::polynomial_or_matrix(&a.input)?;
    let gram = gram_options(a.degree, false)?;
    let target = AffinePolyMatrix::from(&m);
    // scalar: variable coupling; matrix: row coupling
    let g = if m.side() == 1 {
        SparsityGraph::from_csp(&m.get(0, 0).csp_matrix())
    } else {
        let edges: Vec<(usize, usize)> = m.nonzero_pattern().into_iter().filter(|(i, j)| i != j).collect();
        SparsityGraph::from_edges(m.side(), &edges)?
    };
    let chordal = is_chordal(&g).is_some();
    let ext = chordal_extend(&g);
    let cover = maximal_cliques(&ext)?;
    let mut sides = serde_json::Map::new();
    let mut blocks = serde_json::Map::new();
    for kind in ConeKind::ALL {
        match build_gram_structure(&target, kind, None, &gram) {
            Ok(s) => {
                sides.insert(kind.to_string(), json!(s.max_block_side()));
                blocks.insert(kind.to_string(), json!(s.blocks.len()));
            }
            Err(e) => {
                sides.insert(kind.to_string(), json!(null));
                log::warn!("{kind}: {e}");
            }
        }
    }
    print_json(&json!({
        "n": m.nvars(),
        "r": m.side(),
        "graph": g,
        "chordal": chordal,
        "fill_edges": ext.edge_count() - g.edge_count(),
        "cliques": cover.cliques().iter().map(|c| c.iter().map(|i| i + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "max_clique": cover.max_clique_size(),
        "max_block_side": sides,
        "blocks": blocks,
    }))?;
    Ok(EXIT_OK)
}
