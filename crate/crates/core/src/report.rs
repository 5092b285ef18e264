//! CSV reports. Every row starts with a schema tag so files from different
//! versions cannot be mixed silently.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::completion::{IterationTrace, Retraction};
use crate::decomp::{DecompReport, Mode};
use crate::error::Result;
use crate::tt::TtTensor;

pub const DECOMP_SCHEMA: &str = "ttutv-decomp-v1";
pub const TRACE_SCHEMA: &str = "ttutv-trace-v1";

pub const DECOMP_HEADER: &str = "schema,method,sweep,mode,ranks,eps,rse,psnr,bound_kind,bound,achieved_error,wall_time_ms,param_count";
pub const TRACE_HEADER: &str = "schema,retraction,iteration,rse_observed,rse_full,psnr,wall_time_ms";

/// `1-4-6-3-1`.
pub fn format_ranks(ranks: &[usize]) -> String {
    ranks
        .iter()
        .map(usize::to_string)
        .collect::<Vec<_>>()
        .join("-")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    pub schema: &'static str,
    pub method: String,
    pub sweep: String,
    pub mode: String,
    pub ranks: String,
    pub eps: Option<f64>,
    pub rse: Option<f64>,
    pub psnr: Option<f64>,
    pub bound_kind: String,
    pub bound: f64,
    pub achieved_error: Option<f64>,
    pub wall_time_ms: f64,
    pub param_count: usize,
}

impl ReportRow {
    pub fn from_decomp(mode: &Mode, report: &DecompReport, tt: &TtTensor, psnr: Option<f64>) -> Self {
        let (mode_name, eps) = match mode {
            Mode::FixedRank(_) => ("fixed_rank", None),
            Mode::FixedTol { eps, .. } => ("fixed_tol", Some(*eps)),
        };
        Self {
            schema: DECOMP_SCHEMA,
            method: report.method.name().to_string(),
            sweep: report.sweep.name().to_string(),
            mode: mode_name.to_string(),
            ranks: format_ranks(&report.ranks_chosen),
            eps,
            rse: report.achieved_rse(),
            psnr,
            bound_kind: report.bound_kind.name().to_string(),
            bound: report.bound,
            achieved_error: report.achieved_error,
            wall_time_ms: report.wall_time.as_secs_f64() * 1e3,
            param_count: tt.param_count(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRow {
    pub schema: &'static str,
    pub retraction: &'static str,
    pub iteration: usize,
    pub rse_observed: f64,
    pub rse_full: Option<f64>,
    pub psnr: Option<f64>,
    pub wall_time_ms: f64,
}

pub fn trace_rows(retraction: Retraction, trace: &IterationTrace) -> Vec<TraceRow> {
    trace
        .records
        .iter()
        .map(|r| TraceRow {
            schema: TRACE_SCHEMA,
            retraction: retraction.name(),
            iteration: r.iteration,
            rse_observed: r.rse_observed,
            rse_full: r.rse_full,
            psnr: r.psnr,
            wall_time_ms: r.wall_time.as_secs_f64() * 1e3,
        })
        .collect()
}

/// Write rows with a header line; LF line endings.
pub fn write_rows<W: Write, R: Serialize>(out: W, rows: &[R]) -> Result<()> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn write_rows_to_path<R: Serialize>(path: impl AsRef<Path>, rows: &[R]) -> Result<()> {
    write_rows(std::fs::File::create(path)?, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomp::{decompose, verify_bound, DecompConfig, Method, Sweep};
    use crate::gen::gen_planted_tt;

    fn csv_of<R: Serialize>(rows: &[R]) -> String {
        let mut buf = Vec::new();
        write_rows(&mut buf, rows).unwrap();
        String::from_utf8(buf).unwrap()
    }

    fn sample_row() -> ReportRow {
        let (a, _) = gen_planted_tt(&[3, 4, 5], &[1, 2, 2, 1], 1).unwrap();
        let cfg = DecompConfig::fixed_rank(Method::Ulv, Sweep::LeftToRight, vec![1, 2, 2, 1]);
        let (x, rep) = decompose(&a, &cfg).unwrap();
        let rep = verify_bound(&a, &x, &rep).unwrap();
        ReportRow::from_decomp(&cfg.mode, &rep, &x, None)
    }

    #[test]
    fn decomp_header_is_stable() {
        let text = csv_of(&[sample_row()]);
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), DECOMP_HEADER);
        let row: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(row.len(), 13);
        assert_eq!(&row[..6], &["ttutv-decomp-v1", "ulv", "l2r", "fixed_rank", "1-2-2-1", ""]);
        assert_eq!(row[7], "");
        assert_eq!(row[8], "sqrt_sum_sq");
        // 1·3·2 + 2·4·2 + 2·5·1
        assert_eq!(row[12], "32");
        assert!(!text.contains('\r'));
    }

    #[test]
    fn trace_header_is_stable() {
        let row = TraceRow {
            schema: TRACE_SCHEMA,
            retraction: "urv",
            iteration: 1,
            rse_observed: 0.5,
            rse_full: None,
            psnr: Some(f64::INFINITY),
            wall_time_ms: 1.0,
        };
        let text = csv_of(&[row]);
        assert_eq!(text.lines().next().unwrap(), TRACE_HEADER);
        assert_eq!(text.lines().nth(1).unwrap(), "ttutv-trace-v1,urv,1,0.5,,inf,1.0");
    }

    #[test]
    fn rank_format() {
        assert_eq!(format_ranks(&[1, 4, 6, 3, 1]), "1-4-6-3-1");
    }
}
