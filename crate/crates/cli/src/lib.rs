//! Configuration-driven experiment runner over `dixmier-core`.

pub mod config;
pub mod report;

pub use config::{parse_config, ConfigError, ExperimentConfig, Pipeline, SpectrumMode};
pub use report::{emit_report, render, Environment, Format, RunReport, Timings};

use dixmier_core::catalog::standard_instances;
use dixmier_core::combinatorics::{enumerate_partitions, Partition};
use dixmier_core::conical::{conical_norm_sq, graded_dimension, rep_dimension, ConicalContext};
use dixmier_core::geometry::trace_formula_rhs;
use dixmier_core::models::haar::haar_sub_toeplitz;
use dixmier_core::models::{
    build_ball_model, build_rank_one_model, build_sub_hardy_model, sub_toeplitz, toeplitz_matrix, GradedBasis,
    ModelKind, TruncatedOperator,
};
use dixmier_core::seqclass::{membership_test, norm_ratio_samples, STANDARD_WINDOWS};
use dixmier_core::spectral::{dixmier_from_operator, hermitian_eigenvalues, singular_values, SpectralReport};
use dixmier_core::verify::{commutator_product, run_check, CheckResult, Context, VerifyOptions, CHECKS};
use dixmier_core::{descriptor_for, peirce1_data, to_f64, SymbolPolynomial};
use serde_json::{json, Value};
use std::path::Path;
use std::sync::Arc;
use std::time::Instant;

/// Name of the environment variable holding the worker count.
pub const THREADS_ENV: &str = "DIXMIER_THREADS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED_CHECK: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Size the global worker pool from [`THREADS_ENV`], if set.
pub fn init_threads() -> Result<(), ConfigError> {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .parse()
            .map_err(|_| ConfigError::at("", format!("{THREADS_ENV} must be a positive integer, got '{v}'")))?;
        // A second initialisation in the same process is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Build the model basis of a configured truncation.
pub fn build_model(kind: ModelKind, m: u32) -> dixmier_core::Result<Arc<GradedBasis>> {
    match kind {
        ModelKind::Ball { d } => build_ball_model(d, m),
        ModelKind::RankOne { r, s } => build_rank_one_model(r, s, m),
        ModelKind::SubHardy { r, s } => build_sub_hardy_model(r, s, m),
    }
}

/// Variable count of the symbols accepted for a model.
pub fn symbol_nvars(kind: ModelKind) -> usize {
    match kind {
        ModelKind::SubHardy { r, s } => (r * s) as usize,
        k => k.nvars(),
    }
}

/// The sub-Toeplitz or Toeplitz operator of `f` on `basis`.
pub fn operator_for(basis: &Arc<GradedBasis>, f: &SymbolPolynomial) -> dixmier_core::Result<TruncatedOperator> {
    match basis.kind() {
        ModelKind::SubHardy { .. } if f.is_holomorphic() => sub_toeplitz(basis, f),
        ModelKind::SubHardy { .. } if f.conj().is_holomorphic() => Ok(sub_toeplitz(basis, &f.conj())?.adjoint()),
        ModelKind::SubHardy { .. } => haar_sub_toeplitz(basis, f),
        _ => toeplitz_matrix(basis, f),
    }
}

fn failed(id: &str, name: &str, detail: String) -> CheckResult {
    CheckResult {
        id: id.into(),
        name: name.into(),
        computed: f64::NAN,
        reference: f64::NAN,
        tolerance: f64::NAN,
        pass: false,
        detail,
        seconds: 0.0,
    }
}

fn reference_check(id: &str, name: &str, computed: f64, cfg: &ExperimentConfig, seconds: f64) -> Option<CheckResult> {
    let reference = cfg.reference?;
    let tolerance = cfg.tolerance.unwrap_or(0.1) * reference.abs();
    Some(CheckResult {
        id: id.into(),
        name: name.into(),
        computed,
        reference,
        tolerance,
        pass: (computed - reference).abs() <= tolerance,
        detail: format!("relative tolerance {}", cfg.tolerance.unwrap_or(0.1)),
        seconds,
    })
}

fn write_values_csv(path: &Path, values: &[f64]) -> std::io::Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(["index", "value"])?;
    for (j, v) in values.iter().enumerate() {
        w.write_record([(j + 1).to_string(), serde_json::to_string(v).expect("f64 serializes")])?;
    }
    w.flush()
}

struct Run<'a> {
    cfg: &'a ExperimentConfig,
    report: RunReport,
}

impl Run<'_> {
    fn artifact(&mut self, name: &str, values: &[f64]) {
        let Some(dir) = self.cfg.out_dir.as_ref() else { return };
        let result = std::fs::create_dir_all(dir).and_then(|_| write_values_csv(&dir.join(name), values));
        match result {
            Ok(()) => self.report.artifacts.push(name.to_string()),
            Err(e) => self.report.push_check(failed("io", "artifact", format!("{name}: {e}"))),
        }
    }
}

fn catalog(cfg: &ExperimentConfig) -> dixmier_core::Result<Value> {
    let families = match &cfg.domain {
        Some(_) => vec![cfg.domain().map_err(|e| dixmier_core::Error::InvalidParameters(e.to_string()))?],
        None => standard_instances(),
    };
    families
        .into_iter()
        .map(|f| {
            let desc = descriptor_for(f)?;
            let mut v = desc.to_json();
            v["peirce1"] = serde_json::to_value(peirce1_data(&desc)?).expect("serializable");
            Ok(v)
        })
        .collect::<dixmier_core::Result<Vec<_>>>()
        .map(Value::Array)
}

fn norms(cfg: &ExperimentConfig) -> dixmier_core::Result<Value> {
    let desc = descriptor_for(cfg.domain().map_err(config_to_core)?)?;
    let ctx = ConicalContext::new(desc);
    let partitions: Vec<Partition> = match &cfg.partitions {
        Some(ps) => ps.iter().map(|p| Partition::new(p.clone())).collect::<dixmier_core::Result<_>>()?,
        None => (0..=cfg.max_degree.unwrap_or(4)).flat_map(|m| enumerate_partitions(ctx.desc.r as usize, m)).collect(),
    };
    let rows = partitions
        .iter()
        .map(|l| {
            let n = conical_norm_sq(&ctx, l)?;
            Ok(json!({
                "lambda": l.parts(),
                "norm_sq": n.to_string(),
                "norm_sq_f64": to_f64(&n),
                "dim": rep_dimension(&ctx, l)?.to_string(),
            }))
        })
        .collect::<dixmier_core::Result<Vec<_>>>()?;
    Ok(json!({ "domain": ctx.desc.family.to_string(), "rows": rows }))
}

fn dims(cfg: &ExperimentConfig) -> dixmier_core::Result<Value> {
    let desc = descriptor_for(cfg.domain().map_err(config_to_core)?)?;
    let ctx = ConicalContext::new(desc);
    let rows = (0..=cfg.max_degree.unwrap_or(6))
        .map(|m| {
            let total: dixmier_core::Result<num_bigint::BigInt> =
                enumerate_partitions(ctx.desc.r as usize, m).iter().map(|l| rep_dimension(&ctx, l)).sum();
            Ok(json!({ "m": m, "one_row": graded_dimension(&ctx, m)?.to_string(), "total": total?.to_string() }))
        })
        .collect::<dixmier_core::Result<Vec<_>>>()?;
    Ok(json!({ "domain": ctx.desc.family.to_string(), "rows": rows }))
}

fn sequence_fit(run: &mut Run) -> dixmier_core::Result<Value> {
    let cfg = run.cfg;
    let desc = descriptor_for(cfg.domain().map_err(config_to_core)?)?;
    let ctx = ConicalContext::new(desc);
    let alpha = Partition::new(cfg.alpha.clone().unwrap_or_default())?;
    let gamma = Partition::new(cfg.gamma.clone().unwrap_or_default())?;
    let k = cfg.k.unwrap_or(0);
    let windows = cfg.windows.clone().unwrap_or_else(|| STANDARD_WINDOWS.to_vec());
    let start = Instant::now();
    let samples = norm_ratio_samples(&ctx, &alpha, &gamma, k, &windows)?;
    let rep = membership_test(&samples, &windows)?;
    run.report.push_check(CheckResult {
        id: "sequence-fit".into(),
        name: "class-s-membership".into(),
        computed: rep.fits.iter().map(|f| f.remainder_bound).fold(0.0, f64::max),
        reference: 0.0,
        tolerance: 0.0,
        pass: rep.positive && rep.bounded,
        detail: format!("positive = {}, bounded remainders = {}", rep.positive, rep.bounded),
        seconds: start.elapsed().as_secs_f64(),
    });
    Ok(serde_json::to_value(&rep).expect("serializable"))
}

fn set_metadata(rep: &mut SpectralReport, kind: ModelKind, m: u32, op: &TruncatedOperator) {
    rep.metadata.model = kind.to_string();
    rep.metadata.truncation = m;
    rep.metadata.valid_degree = op.valid_degree();
}

fn spectrum(run: &mut Run) -> dixmier_core::Result<Value> {
    let cfg = run.cfg;
    let kind = cfg.model().map_err(config_to_core)?;
    let m = cfg.truncation().map_err(config_to_core)?;
    let f = cfg.symbol(symbol_nvars(kind)).map_err(config_to_core)?;
    let basis = build_model(kind, m)?;
    let op = operator_for(&basis, &f)?;
    let mut rep = match cfg.mode.unwrap_or_default() {
        SpectrumMode::Singular => singular_values(&op)?,
        SpectrumMode::Hermitian => hermitian_eigenvalues(&op)?,
    };
    set_metadata(&mut rep, kind, m, &op);
    run.artifact("spectrum.csv", rep.valid_values());
    Ok(serde_json::to_value(&rep).expect("serializable"))
}

fn dixmier(run: &mut Run) -> dixmier_core::Result<Value> {
    let cfg = run.cfg;
    let kind = cfg.model().map_err(config_to_core)?;
    let m = cfg.truncation().map_err(config_to_core)?;
    let pairs = cfg.pairs(symbol_nvars(kind)).map_err(config_to_core)?;
    let start = Instant::now();
    let basis = build_model(kind, m)?;
    let op = commutator_product(&|f| operator_for(&basis, f), &pairs)?;
    let (mut est, mut rep) = dixmier_from_operator(&op)?;
    set_metadata(&mut rep, kind, m, &op);
    est.metadata = rep.metadata.clone();
    run.artifact("eigenvalues.csv", rep.valid_values());
    if let Some(c) = reference_check("dixmier", "dixmier-limit", est.limit_re, cfg, start.elapsed().as_secs_f64()) {
        run.report.push_check(c);
    }
    Ok(json!({
        "limit": est.limit_re,
        "limit_imag": est.limit_im,
        "fit_curve": est.hermitian.fit_curve,
        "stderr": est.stderr,
        "valid_count": est.valid_count,
        "estimate": est,
    }))
}

fn rhs(run: &mut Run) -> dixmier_core::Result<Value> {
    let cfg = run.cfg;
    let desc = descriptor_for(cfg.domain().map_err(config_to_core)?)?;
    let pairs = cfg.pairs(desc.d as usize).map_err(config_to_core)?;
    let seed = cfg.seed().map_err(config_to_core)?;
    let start = Instant::now();
    let out = trace_formula_rhs(&pairs, &desc, cfg.samples.unwrap_or(200_000), seed)?;
    if let Some(c) = reference_check("rhs", "boundary-integral", out.value, cfg, start.elapsed().as_secs_f64()) {
        run.report.push_check(c);
    }
    Ok(serde_json::to_value(&out).expect("serializable"))
}

fn verify_all(run: &mut Run) -> dixmier_core::Result<Value> {
    let cfg = run.cfg;
    let mut opts = VerifyOptions::default();
    if let Some(n) = cfg.samples {
        opts.samples = n;
    }
    opts.seed = cfg.seed().map_err(config_to_core)?;
    if let Some(m) = cfg.truncation {
        opts.decay_truncation = m;
    }
    let ids: Vec<String> = match &cfg.checks {
        Some(ids) => ids.clone(),
        None => CHECKS.iter().map(|c| c.0.to_string()).collect(),
    };
    let ctx = Context::default();
    for id in &ids {
        run.report.push_check(run_check(id, &ctx, &opts));
    }
    Ok(json!({ "options": opts }))
}

fn config_to_core(e: ConfigError) -> dixmier_core::Error {
    dixmier_core::Error::InvalidParameters(e.to_string())
}

/// Execute the configured pipeline. Runtime failures become failed checks.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunReport, ConfigError> {
    cfg.validate()?;
    let pipeline = cfg.pipeline()?;
    let start = Instant::now();
    let mut run = Run {
        cfg,
        report: RunReport {
            config: cfg.clone(),
            checks: Vec::new(),
            results: Value::Null,
            artifacts: Vec::new(),
            environment: Environment::current(),
            timings: Timings::default(),
        },
    };
    let results = match pipeline {
        Pipeline::Catalog => catalog(cfg),
        Pipeline::Norms => norms(cfg),
        Pipeline::Dims => dims(cfg),
        Pipeline::SequenceFit => sequence_fit(&mut run),
        Pipeline::Spectrum => spectrum(&mut run),
        Pipeline::Dixmier => dixmier(&mut run),
        Pipeline::Rhs => rhs(&mut run),
        Pipeline::VerifyAll => verify_all(&mut run),
    };
    match results {
        Ok(v) => run.report.results = v,
        Err(e) => run.report.push_check(failed("pipeline", "pipeline", format!("error: {e}"))),
    }
    run.report.timings.total_seconds = start.elapsed().as_secs_f64();
    Ok(run.report)
}

/// Exit status of a completed run.
pub fn exit_code(report: &RunReport) -> i32 {
    if report.all_pass() {
        EXIT_OK
    } else {
        EXIT_FAILED_CHECK
    }
}
