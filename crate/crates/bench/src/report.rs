//! CSV and JSON output.
//!
//! Floats are written in scientific notation with 17 significant digits,
//! which reparses to the identical `f64`. Missing values are empty fields.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use rifbf::dynamics::Trajectory;
use rifbf::solvers::{IterationRow, RunRecord, Termination};
use serde::{Deserialize, Serialize};

use crate::error::{BenchError, Result};

pub const TRACE_HEADER: [&str; 9] = ["k", "residual", "lambda", "theta", "delta", "h", "main_slack", "gap", "step_norm"];
pub const TRAJECTORY_HEADER: [&str; 4] = ["t", "speed", "residual_m", "residual_xy"];

pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map(fmt_float).unwrap_or_default()
}

pub(crate) fn parse_float(field: &str) -> Result<f64> {
    field.parse().map_err(|_| BenchError::Usage(format!("not a number: {field:?}")))
}

pub(crate) fn parse_opt(field: &str) -> Result<Option<f64>> {
    if field.is_empty() {
        Ok(None)
    } else {
        parse_float(field).map(Some)
    }
}

pub(crate) fn csv_writer<W: Write>(w: W) -> csv::Writer<W> {
    csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w)
}

pub(crate) fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| BenchError::io(path, e))
}

pub fn write_trace<W: Write>(rows: &[IterationRow], w: W) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(TRACE_HEADER)?;
    for r in rows {
        out.write_record([
            r.k.to_string(),
            fmt_float(r.residual),
            fmt_float(r.lambda),
            fmt_opt(r.theta),
            fmt_opt(r.delta),
            fmt_opt(r.h),
            fmt_opt(r.main_slack),
            fmt_opt(r.gap),
            fmt_opt(r.step_norm),
        ])?;
    }
    out.flush().map_err(|e| BenchError::io("<trace>", e))
}

pub fn write_trace_file(rows: &[IterationRow], path: &Path) -> Result<()> {
    write_trace(rows, create(path)?)
}

pub fn read_trace<R: Read>(r: R) -> Result<Vec<IterationRow>> {
    let mut rdr = csv::Reader::from_reader(r);
    let header: Vec<String> = rdr.headers()?.iter().map(str::to_owned).collect();
    if header != TRACE_HEADER {
        return Err(BenchError::Usage(format!("unexpected trace header {header:?}")));
    }
    rdr.records()
        .map(|rec| {
            let rec = rec?;
            let k = rec[0].parse().map_err(|_| BenchError::Usage(format!("bad iteration index {:?}", &rec[0])))?;
            Ok(IterationRow {
                k,
                residual: parse_float(&rec[1])?,
                lambda: parse_float(&rec[2])?,
                theta: parse_opt(&rec[3])?,
                delta: parse_opt(&rec[4])?,
                h: parse_opt(&rec[5])?,
                main_slack: parse_opt(&rec[6])?,
                gap: parse_opt(&rec[7])?,
                step_norm: parse_opt(&rec[8])?,
            })
        })
        .collect()
}

pub fn write_trajectory<W: Write>(traj: &Trajectory, w: W) -> Result<()> {
    let mut out = csv_writer(w);
    out.write_record(TRAJECTORY_HEADER)?;
    for j in 0..traj.len() {
        out.write_record([
            fmt_float(traj.times[j]),
            fmt_float(traj.speed[j]),
            fmt_float(traj.residual_m[j]),
            fmt_float(traj.residual_xy[j]),
        ])?;
    }
    out.flush().map_err(|e| BenchError::io("<trajectory>", e))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub total_seconds: f64,
    pub per_iteration_seconds: f64,
}

/// The JSON summary of one solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub config: serde_json::Value,
    pub termination: Termination,
    pub iterations: usize,
    pub residual: f64,
    pub gap: Option<f64>,
    /// Omitted when timings are disabled, so that reruns are byte-identical.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timings: Option<Timings>,
}

impl Summary {
    pub fn new(config: serde_json::Value, rec: &RunRecord, gap: Option<f64>, with_timings: bool) -> Self {
        Summary {
            config,
            termination: rec.termination,
            iterations: rec.iterations_used,
            residual: rec.final_residual(),
            gap,
            timings: with_timings.then(|| Timings {
                total_seconds: rec.wall_time,
                per_iteration_seconds: rec.wall_time / rec.iterations_used.max(1) as f64,
            }),
        }
    }
}

pub fn write_summary<W: Write>(summary: &Summary, mut w: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut w, summary)?;
    writeln!(w).map_err(|e| BenchError::io("<summary>", e))
}

pub fn write_summary_file(summary: &Summary, path: &Path) -> Result<()> {
    write_summary(summary, create(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits() {
        assert_eq!(fmt_float(0.1), "1.0000000000000001e-1");
        assert_eq!(fmt_float(-2.0), "-2.0000000000000000e0");
        assert_eq!(fmt_opt(None), "");
    }

    #[test]
    fn empty_trace_is_header_only() {
        let mut buf = Vec::new();
        write_trace(&[], &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), "k,residual,lambda,theta,delta,h,main_slack,gap,step_norm\n");
    }
}
