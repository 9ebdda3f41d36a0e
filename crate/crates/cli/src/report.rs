use crate::config::ExperimentConfig;
use dixmier_core::verify::CheckResult;
use serde::Serialize;
use serde_json::Value;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Environment {
    pub version: String,
    pub os: String,
    pub arch: String,
    pub threads: usize,
}

impl Environment {
    pub fn current() -> Self {
        Environment {
            version: env!("CARGO_PKG_VERSION").to_string(),
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
            threads: rayon::current_num_threads(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Timings {
    pub total_seconds: f64,
    pub checks: Vec<(String, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub config: ExperimentConfig,
    pub checks: Vec<CheckResult>,
    pub results: Value,
    /// Files written while running, relative to the output directory.
    pub artifacts: Vec<String>,
    pub environment: Environment,
    pub timings: Timings,
}

impl RunReport {
    pub fn all_pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn push_check(&mut self, c: CheckResult) {
        self.timings.checks.push((c.id.clone(), c.seconds));
        self.checks.push(c);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Markdown,
}

/// JSON rendering of a number, shared by every format so values match verbatim.
fn num(x: f64) -> String {
    serde_json::to_string(&x).expect("f64 serializes")
}

fn cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

pub fn to_json(report: &RunReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes") + "\n"
}

pub fn to_markdown(report: &RunReport) -> String {
    let mut out = String::new();
    let pipeline = report.config.pipeline.map(|p| format!("{p:?}")).unwrap_or_default();
    let passed = report.checks.iter().filter(|c| c.pass).count();
    let _ = writeln!(out, "# Run report\n");
    let _ = writeln!(out, "- pipeline: {pipeline}");
    let _ = writeln!(out, "- checks passed: {passed} / {}", report.checks.len());
    let _ = writeln!(out, "- version {} on {}/{}\n", report.environment.version, report.environment.os, report.environment.arch);
    let _ = writeln!(out, "| id | name | status | computed | reference | tolerance | detail |");
    let _ = writeln!(out, "|---|---|---|---|---|---|---|");
    for c in &report.checks {
        let _ = writeln!(
            out,
            "| {} | {} | {} | {} | {} | {} | {} |",
            cell(&c.id),
            cell(&c.name),
            if c.pass { "PASS" } else { "FAIL" },
            num(c.computed),
            num(c.reference),
            num(c.tolerance),
            cell(&c.detail)
        );
    }
    out
}

pub fn to_csv(report: &RunReport) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["id", "name", "pass", "computed", "reference", "tolerance", "detail"]).expect("in-memory write");
    for c in &report.checks {
        w.write_record([
            c.id.as_str(),
            c.name.as_str(),
            if c.pass { "true" } else { "false" },
            &num(c.computed),
            &num(c.reference),
            &num(c.tolerance),
            c.detail.as_str(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf8")
}

pub fn render(report: &RunReport, format: Format) -> String {
    match format {
        Format::Json => to_json(report),
        Format::Csv => to_csv(report),
        Format::Markdown => to_markdown(report),
    }
}

/// Write the report in `format` into `dir`; returns the written path.
pub fn emit_report(report: &RunReport, format: Format, dir: &Path) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let name = match format {
        Format::Json => "report.json",
        Format::Csv => "checks.csv",
        Format::Markdown => "report.md",
    };
    let path = dir.join(name);
    std::fs::write(&path, render(report, format))?;
    Ok(path)
}
