use std::io::Write;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use super::{Family, ProblemInstance, ProblemParams, ResultRow, RowStatus, SolveOptions};
use crate::cones::ConeKind;
use crate::error::Result;

/// A benchmark grid: every parameter set times every seed times every cone.
#[derive(Clone, Debug)]
pub struct BenchConfig {
    pub family: Family,
    pub params: Vec<ProblemParams>,
    pub seeds: Vec<u64>,
    pub cones: Vec<ConeKind>,
    pub solve: SolveOptions,
    /// Worker threads; rows come back in grid order regardless.
    pub jobs: usize,
}

/// Run the grid. A cell that fails is recorded with status `error` and the
/// run continues; only a failure to generate an instance aborts.
pub fn bench_run(cfg: &BenchConfig) -> Result<Vec<ResultRow>> {
    let mut instances = Vec::new();
    for p in &cfg.params {
        for &seed in &cfg.seeds {
            instances.push(ProblemInstance::generate(cfg.family, *p, seed)?);
        }
    }
    let cells: Vec<(usize, ConeKind)> = (0..instances.len())
        .flat_map(|i| cfg.cones.iter().map(move |&k| (i, k)))
        .collect();

    let results: Vec<Mutex<Option<ResultRow>>> = cells.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let worker = || loop {
        let c = next.fetch_add(1, Ordering::Relaxed);
        let Some(&(i, kind)) = cells.get(c) else { break };
        let inst = &instances[i];
        let row = match inst.solve(kind, &cfg.solve) {
            Ok(out) => inst.row(kind, out),
            Err(e) => {
                log::warn!("{} {} seed {} {kind}: {e}", inst.family, inst.params.label(inst.family), inst.seed);
                inst.row(
                    kind,
                    super::Outcome {
                        status: RowStatus::Error,
                        value: None,
                        time_s: 0.0,
                        max_block_side: 0,
                    },
                )
            }
        };
        log::info!(
            "{} {} seed {} {}: {} {:?} in {:.3}s",
            row.family,
            row.params,
            row.seed,
            row.cone,
            row.status,
            row.value,
            row.time_s
        );
        *results[c].lock().expect("result slot") = Some(row);
    };
    let jobs = cfg.jobs.max(1).min(cells.len().max(1));
    std::thread::scope(|s| {
        for _ in 1..jobs {
            s.spawn(worker);
        }
        worker();
    });
    Ok(results
        .into_iter()
        .map(|m| m.into_inner().expect("result slot").expect("every cell visited"))
        .collect())
}

/// Write rows as CSV with header
/// `family,params,seed,cone,status,value,time_s,max_block_side`.
pub fn write_csv<W: Write>(rows: &[ResultRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["family", "params", "seed", "cone", "status", "value", "time_s", "max_block_side"])
        ?;
    for r in rows {
        w.write_record([
            r.family.to_string(),
            r.params.clone(),
            r.seed.to_string(),
            r.cone.to_string(),
            r.status.to_string(),
            r.value.map(|v| format!("{v:.6}")).unwrap_or_default(),
            format!("{:.4}", r.time_s),
            r.max_block_side.to_string(),
        ])
        ?;
    }
    w.flush()?;
    Ok(())
}
