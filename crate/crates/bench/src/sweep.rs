//! Parameter sweeps over `(μ, α, ρ)` on bilinear instances.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;

use rifbf::problems::{InstanceSpec, SaddleInstance};
use rifbf::solvers::{run, validate_params, SolverConfig, Termination};
use rifbf::stepsize::StepsizeKind;
use rifbf::Vector;
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};
use crate::report::{create, csv_writer, fmt_float, fmt_opt, parse_float, parse_opt};

pub const SWEEP_HEADER: [&str; 9] = ["mu", "alpha", "rho", "seed", "status", "iterations", "residual", "gap", "wall_time"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub struct ProblemSize {
    pub m: usize,
    pub n: usize,
    pub seed: u64,
}

/// How the stepsize is chosen in every cell.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum SweepStepsize {
    /// Constant `λ = μ/L`.
    #[default]
    Fixed,
    Adaptive {
        lambda1: f64,
    },
}

impl SweepStepsize {
    pub fn kind(self, mu: f64, lipschitz: f64) -> StepsizeKind {
        match self {
            SweepStepsize::Fixed => StepsizeKind::Constant { lambda: mu / lipschitz },
            SweepStepsize::Adaptive { lambda1 } => StepsizeKind::Adaptive { mu, lambda1 },
        }
    }
}

fn default_eps() -> f64 {
    1e-5
}

fn default_max_iter() -> usize {
    10_000
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub mu: Vec<f64>,
    pub alpha: Vec<f64>,
    pub rho: Vec<f64>,
    #[serde(default = "default_eps")]
    pub eps: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    pub problem: ProblemSize,
    /// Instance seeds; empty means just `problem.seed`.
    #[serde(default)]
    pub seeds: Vec<u64>,
    #[serde(default)]
    pub output: Option<PathBuf>,
    #[serde(default)]
    pub stepsize: SweepStepsize,
}

impl SweepSpec {
    pub fn from_reader<R: Read>(r: R) -> Result<Self> {
        let spec: SweepSpec = serde_json::from_reader(r)?;
        spec.check()?;
        Ok(spec)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| BenchError::io(path, e))?;
        Self::from_reader(file)
    }

    fn check(&self) -> Result<()> {
        if self.mu.is_empty() || self.alpha.is_empty() || self.rho.is_empty() {
            return Err(BenchError::Usage("mu, alpha and rho grids must be non-empty".into()));
        }
        if !(self.eps > 0.0) || self.max_iter == 0 {
            return Err(BenchError::Usage("need eps > 0 and max_iter >= 1".into()));
        }
        Ok(())
    }

    pub fn seed_list(&self) -> Vec<u64> {
        if self.seeds.is_empty() {
            vec![self.problem.seed]
        } else {
            self.seeds.clone()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellStatus {
    Converged,
    /// Hit `max_iter`; the iteration count is the cap itself.
    Cap,
    /// `(α, ρ, μ)` fails the admissibility check and was not run.
    Skipped,
    Failed,
}

impl CellStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            CellStatus::Converged => "converged",
            CellStatus::Cap => "cap",
            CellStatus::Skipped => "skipped",
            CellStatus::Failed => "failed",
        }
    }

    fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "converged" => CellStatus::Converged,
            "cap" => CellStatus::Cap,
            "skipped" => CellStatus::Skipped,
            "failed" => CellStatus::Failed,
            other => return Err(BenchError::Usage(format!("unknown cell status {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub mu: f64,
    pub alpha: f64,
    pub rho: f64,
    pub seed: u64,
    pub status: CellStatus,
    pub iterations: Option<usize>,
    pub residual: Option<f64>,
    pub gap: Option<f64>,
    pub wall_time: Option<f64>,
}

/// Outcome of a single cell on a prepared instance.
#[derive(Debug, Clone, PartialEq)]
pub struct CellOutcome {
    pub status: CellStatus,
    pub iterations: usize,
    pub residual: f64,
    pub gap: Option<f64>,
    pub wall_time: f64,
}

/// Runs one admissible cell. `x₀` is the instance's default start.
pub fn run_cell(
    inst: &SaddleInstance,
    x0: &Vector,
    alpha: f64,
    rho: f64,
    stepsize: StepsizeKind,
    eps: f64,
    max_iter: usize,
) -> Result<CellOutcome> {
    let p = inst.as_inclusion()?;
    let cfg = SolverConfig::new(alpha, rho, stepsize).with_eps(eps).with_max_iter(max_iter);
    let rec = run(&p, &cfg, x0)?;
    let status = match rec.termination {
        Termination::Converged => CellStatus::Converged,
        Termination::MaxIter => CellStatus::Cap,
        Termination::NumericalFailure => CellStatus::Failed,
    };
    let gap = match (&p.gap, status) {
        (Some(g), CellStatus::Converged | CellStatus::Cap) => Some(g(&rec.final_x)?),
        _ => None,
    };
    Ok(CellOutcome { status, iterations: rec.iterations_used, residual: rec.final_residual(), gap, wall_time: rec.wall_time })
}

struct Cell {
    mu: f64,
    alpha: f64,
    rho: f64,
    seed_index: usize,
}

/// Runs every cell of the spec. Rows come out ordered by `μ`, then `α`,
/// then `ρ`, then seed, whatever the number of worker threads.
pub fn run_sweep(spec: &SweepSpec, timings: bool) -> Result<Vec<SweepRow>> {
    spec.check()?;
    let seeds = spec.seed_list();
    let instances = seeds
        .iter()
        .map(|&seed| InstanceSpec::new(spec.problem.m, spec.problem.n, seed).build_with_start())
        .collect::<rifbf::Result<Vec<_>>>()?;

    let mut cells = Vec::new();
    for &mu in &spec.mu {
        for &alpha in &spec.alpha {
            for &rho in &spec.rho {
                for seed_index in 0..seeds.len() {
                    cells.push(Cell { mu, alpha, rho, seed_index });
                }
            }
        }
    }

    let slots: Vec<Mutex<Option<Result<SweepRow>>>> = cells.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1).min(cells.len().max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(cell) = cells.get(i) else { break };
                let (inst, x0) = &instances[cell.seed_index];
                let row = sweep_cell(spec, cell, seeds[cell.seed_index], inst, x0, timings);
                *slots[i].lock().expect("slot lock") = Some(row);
            });
        }
    });
    slots.into_iter().map(|s| s.into_inner().expect("slot lock").expect("every cell visited")).collect()
}

fn sweep_cell(spec: &SweepSpec, cell: &Cell, seed: u64, inst: &SaddleInstance, x0: &Vector, timings: bool) -> Result<SweepRow> {
    let mut row = SweepRow {
        mu: cell.mu,
        alpha: cell.alpha,
        rho: cell.rho,
        seed,
        status: CellStatus::Skipped,
        iterations: None,
        residual: None,
        gap: None,
        wall_time: None,
    };
    // out-of-domain values count as infeasible
    let admissible = validate_params(cell.alpha, cell.rho, cell.mu).map(|c| c.is_ok()).unwrap_or(false);
    if !admissible {
        return Ok(row);
    }
    let kind = spec.stepsize.kind(cell.mu, inst.lipschitz());
    match run_cell(inst, x0, cell.alpha, cell.rho, kind, spec.eps, spec.max_iter) {
        Ok(out) => {
            log::info!(
                "mu={} alpha={} rho={} seed={seed}: {} after {}",
                cell.mu,
                cell.alpha,
                cell.rho,
                out.status.as_str(),
                out.iterations
            );
            row.status = out.status;
            row.iterations = Some(out.iterations);
            row.residual = Some(out.residual);
            row.gap = out.gap;
            row.wall_time = timings.then_some(out.wall_time);
        }
        Err(BenchError::Solver(rifbf::Error::NumericalFailure { .. })) => row.status = CellStatus::Failed,
        Err(e) => return Err(e),
    }
    Ok(row)
}

/// Smallest iteration count over admissible `(α, ρ)` cells for one `μ`.
///
/// Each run is capped at the best count found so far, so a cell that cannot
/// win stops early; the minimum is the same as that of the full grid.
pub fn best_cell(
    inst: &SaddleInstance,
    x0: &Vector,
    mu: f64,
    alphas: &[f64],
    rhos: &[f64],
    eps: f64,
    max_iter: usize,
) -> Result<Option<(f64, f64, usize)>> {
    let mut candidates: Vec<(f64, f64)> = alphas
        .iter()
        .flat_map(|&a| rhos.iter().map(move |&r| (a, r)))
        .filter(|&(a, r)| validate_params(a, r, mu).map(|c| c.is_ok()).unwrap_or(false))
        .collect();
    // likely winners first: largest effective relaxation ρ/(1 − α)
    candidates.sort_by(|x, y| (y.1 / (1.0 - y.0)).total_cmp(&(x.1 / (1.0 - x.0))));
    let mut best: Option<(f64, f64, usize)> = None;
    for (alpha, rho) in candidates {
        let cap = best.map_or(max_iter, |b| b.2);
        let out = run_cell(inst, x0, alpha, rho, SweepStepsize::Fixed.kind(mu, inst.lipschitz()), eps, cap)?;
        if out.status == CellStatus::Converged && best.is_none_or(|b| out.iterations < b.2) {
            best = Some((alpha, rho, out.iterations));
        }
    }
    Ok(best)
}

pub fn write_sweep<W: Write>(rows: &[SweepRow], w: W) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(SWEEP_HEADER)?;
    for r in rows {
        out.write_record([
            fmt_float(r.mu),
            fmt_float(r.alpha),
            fmt_float(r.rho),
            r.seed.to_string(),
            r.status.as_str().to_string(),
            r.iterations.map(|i| i.to_string()).unwrap_or_default(),
            fmt_opt(r.residual),
            fmt_opt(r.gap),
            fmt_opt(r.wall_time),
        ])?;
    }
    out.flush().map_err(|e| BenchError::io("<sweep>", e))
}

pub fn write_sweep_file(rows: &[SweepRow], path: &Path) -> Result<()> {
    write_sweep(rows, create(path)?)
}

pub fn read_sweep<R: Read>(r: R) -> Result<Vec<SweepRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            let int = |s: &str| -> Result<Option<usize>> {
                if s.is_empty() {
                    Ok(None)
                } else {
                    s.parse().map(Some).map_err(|_| BenchError::Usage(format!("bad integer {s:?}")))
                }
            };
            Ok(SweepRow {
                mu: parse_float(&rec[0])?,
                alpha: parse_float(&rec[1])?,
                rho: parse_float(&rec[2])?,
                seed: rec[3].parse().map_err(|_| BenchError::Usage(format!("bad seed {:?}", &rec[3])))?,
                status: CellStatus::parse(&rec[4])?,
                iterations: int(&rec[5])?,
                residual: parse_opt(&rec[6])?,
                gap: parse_opt(&rec[7])?,
                wall_time: parse_opt(&rec[8])?,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_spec() -> SweepSpec {
        SweepSpec {
            mu: vec![0.5],
            alpha: vec![0.0, 0.9],
            rho: vec![1.0, 1.5],
            eps: 1e-5,
            max_iter: 2000,
            problem: ProblemSize { m: 6, n: 5, seed: 3 },
            seeds: vec![],
            output: None,
            stepsize: SweepStepsize::Fixed,
        }
    }

    #[test]
    fn infeasible_cells_are_skipped_in_order() {
        let rows = run_sweep(&tiny_spec(), false).unwrap();
        let shape: Vec<(f64, f64, CellStatus)> = rows.iter().map(|r| (r.alpha, r.rho, r.status)).collect();
        assert_eq!(
            shape,
            vec![
                (0.0, 1.0, CellStatus::Converged),
                (0.0, 1.5, CellStatus::Skipped),
                (0.9, 1.0, CellStatus::Skipped),
                (0.9, 1.5, CellStatus::Skipped),
            ]
        );
        assert!(rows[0].wall_time.is_none());
        assert!(rows[1].iterations.is_none());
    }

    #[test]
    fn spec_defaults() {
        let json = r#"{"mu":[0.5],"alpha":[0.0],"rho":[1.0],"problem":{"m":2,"n":2,"seed":1}}"#;
        let spec = SweepSpec::from_reader(json.as_bytes()).unwrap();
        assert_eq!((spec.eps, spec.max_iter), (1e-5, 10_000));
        assert_eq!(spec.seed_list(), vec![1]);
        assert_eq!(spec.stepsize, SweepStepsize::Fixed);
        let empty = r#"{"mu":[],"alpha":[0.0],"rho":[1.0],"problem":{"m":2,"n":2,"seed":1}}"#;
        assert!(SweepSpec::from_reader(empty.as_bytes()).is_err());
    }
}
