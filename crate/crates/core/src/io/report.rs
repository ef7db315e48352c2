//! Convergence-report serialization.
//!
//! CSV carries the per-iteration history (columns `k,relative_residual,
//! true_error`, the true error filled on the final row only, since it is
//! measured at exit); JSON carries the complete report and parses back to
//! an equal value. Both renderings are deterministic byte-for-byte for a
//! given report.

use super::IoError;
use crate::solvers::ConvergenceReport;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl std::str::FromStr for ReportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(format!("unknown report format '{other}' (csv|json)")),
        }
    }
}

/// One row per completed k-iteration.
pub fn render_csv(report: &ConvergenceReport) -> String {
    let mut out = String::from("k,relative_residual,true_error\n");
    for k in 1..=report.iterations {
        let res = report.residual_history[k];
        if k == report.iterations {
            let _ = writeln!(out, "{k},{res:e},{:e}", report.true_error);
        } else {
            let _ = writeln!(out, "{k},{res:e},");
        }
    }
    out
}

/// The full report as pretty JSON.
pub fn render_json(report: &ConvergenceReport) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("report serializes");
    s.push('\n');
    s
}

/// Parses a JSON report back; `parse(render(r)) == r`.
pub fn parse_json_report(text: &str) -> Result<ConvergenceReport, serde_json::Error> {
    serde_json::from_str(text)
}

/// Writes the report to `path` in the chosen format.
pub fn write_report(
    report: &ConvergenceReport,
    format: ReportFormat,
    path: &Path,
) -> Result<(), IoError> {
    let body = match format {
        ReportFormat::Csv => render_csv(report),
        ReportFormat::Json => render_json(report),
    };
    fs::write(path, body).map_err(|source| IoError::Write {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{cx, OpCounters};
    use crate::solvers::TerminationFlag;

    fn sample(iterations: usize) -> ConvergenceReport {
        ConvergenceReport {
            flag: TerminationFlag::Converged,
            iterations,
            residual_history: (0..=iterations).map(|k| 1.0 / (k + 1) as f64).collect(),
            true_error: 3.25e-9,
            residual_gap: 1.5e-12,
            counters: OpCounters {
                matvec_a: 7,
                matvec_ah: 1,
                precond_solves: 6,
                dot_products: 20,
                saxpys: 31,
            },
            setup_counters: OpCounters {
                matvec_a: 2,
                matvec_ah: 1,
                precond_solves: 2,
                dot_products: 2,
                saxpys: 0,
            },
            omega_history: vec![cx(0.5, -0.25)],
        }
    }

    #[test]
    fn one_iteration_report_is_header_plus_one_row() {
        let csv = render_csv(&sample(1));
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], "k,relative_residual,true_error");
        assert!(lines[1].starts_with("1,5e-1,"));
        assert!(lines[1].ends_with("3.25e-9"));
    }

    #[test]
    fn json_round_trips_exactly() {
        let report = sample(4);
        let parsed = parse_json_report(&render_json(&report)).unwrap();
        assert_eq!(report, parsed);
    }

    #[test]
    fn final_row_carries_a_subconverged_residual() {
        let report = sample(3);
        let csv = render_csv(&report);
        let last = csv.lines().last().unwrap();
        let fields: Vec<&str> = last.split(',').collect();
        assert_eq!(fields[0], "3");
        let res: f64 = fields[1].parse().unwrap();
        assert_eq!(res, *report.residual_history.last().unwrap());
    }

    #[test]
    fn write_report_produces_files() {
        let dir = tempfile::tempdir().unwrap();
        let report = sample(2);
        let csv_path = dir.path().join("r.csv");
        let json_path = dir.path().join("r.json");
        write_report(&report, ReportFormat::Csv, &csv_path).unwrap();
        write_report(&report, ReportFormat::Json, &json_path).unwrap();
        let csv = std::fs::read_to_string(&csv_path).unwrap();
        assert_eq!(csv, render_csv(&report));
        let parsed = parse_json_report(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
        assert_eq!(parsed, report);
    }
}
