//! `report.md`, `runs.csv` and `runs.jsonl`.
//!
//! The markdown summary and the CSV carry no timings, so two runs of the
//! same configuration produce byte-identical files. Timings go to the JSON
//! lines output only.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::Serialize;

use crate::runner::{Report, RunRow};
use crate::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Md,
    Csv,
    Jsonl,
}

impl Format {
    pub fn render(self, report: &Report) -> Result<String, BenchError> {
        match self {
            Format::Md => Ok(render_markdown(report)),
            Format::Csv => render_csv(report),
            Format::Jsonl => render_jsonl(report),
        }
    }
}

/// Writes all three files into `dir`, creating it if needed.
pub fn emit_report(report: &Report, dir: &Path) -> Result<(), BenchError> {
    if report.rows.is_empty() {
        return Err(BenchError::Runtime("report has no rows".into()));
    }
    let io = |e: std::io::Error| BenchError::Runtime(format!("{}: {e}", dir.display()));
    fs::create_dir_all(dir).map_err(io)?;
    fs::write(dir.join("report.md"), render_markdown(report)).map_err(io)?;
    fs::write(dir.join("runs.csv"), render_csv(report)?).map_err(io)?;
    fs::write(dir.join("runs.jsonl"), render_jsonl(report)?).map_err(io)?;
    Ok(())
}

fn median(mut v: Vec<f64>) -> Option<f64> {
    if v.is_empty() {
        return None;
    }
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    Some(if v.len().is_multiple_of(2) { (v[mid - 1] + v[mid]) / 2.0 } else { v[mid] })
}

fn cell(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.4}"))
}

pub fn render_markdown(report: &Report) -> String {
    let mut out = String::new();
    let seeds: Vec<String> = report.seeds.iter().map(u64::to_string).collect();
    let _ = writeln!(out, "# {}\n", report.dataset);
    let _ = writeln!(out, "- samples: {}, features: {}, clusters: {}", report.n, report.m, report.k);
    let _ = writeln!(out, "- selection: {} over {} restarts", report.selection, report.restarts);
    let _ = writeln!(out, "- seeds: {}", seeds.join(", "));
    let _ = writeln!(out, "- sha256: `{}`\n", report.checksum);

    let _ = writeln!(out, "| Metric | {} |", report.methods.join(" | "));
    let _ = writeln!(out, "|---|{}", "---:|".repeat(report.methods.len()));
    let column = |pick: fn(&RunRow) -> Option<f64>| -> Vec<String> {
        report
            .methods
            .iter()
            .map(|m| cell(median(report.rows.iter().filter(|r| &r.method == m).filter_map(pick).collect())))
            .collect()
    };
    let ss = column(|r| r.silhouette);
    let ari = column(|r| Some(r.ari));
    let _ = writeln!(out, "| Silhouette Score | {} |", ss.join(" | "));
    let _ = writeln!(out, "| Adjusted Rand Index | {} |", ari.join(" | "));
    let _ = writeln!(out, "\nMedians over seeds. Per-run detail is in `runs.csv`.");
    out
}

pub fn render_csv(report: &Report) -> Result<String, BenchError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in &report.rows {
        w.serialize(row).map_err(|e| BenchError::Runtime(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| BenchError::Runtime(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| BenchError::Runtime(e.to_string()))
}

#[derive(Serialize)]
struct Timed<'a> {
    #[serde(flatten)]
    row: &'a RunRow,
    runtime_ms: f64,
}

pub fn render_jsonl(report: &Report) -> Result<String, BenchError> {
    let mut out = String::new();
    for row in &report.rows {
        let line = serde_json::to_string(&Timed { row, runtime_ms: row.runtime_ms })
            .map_err(|e| BenchError::Runtime(e.to_string()))?;
        out.push_str(&line);
        out.push('\n');
    }
    Ok(out)
}

pub fn read_runs_csv(path: &Path) -> Result<Vec<RunRow>, BenchError> {
    let mut r = csv::Reader::from_path(path).map_err(|e| BenchError::Runtime(e.to_string()))?;
    r.deserialize().collect::<Result<_, _>>().map_err(|e| BenchError::Runtime(e.to_string()))
}
