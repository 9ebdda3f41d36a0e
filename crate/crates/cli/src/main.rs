use clap::{Args, Parser, Subcommand};
use dixmier_cli::{
    emit_report, exit_code, init_threads, parse_config, render, run_experiment, ConfigError, ExperimentConfig, Format,
    Pipeline, SpectrumMode, EXIT_CONFIG, THREADS_ENV,
};
use serde_json::Value;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dixmier", version, about = "Exact models and Dixmier trace experiments on bounded symmetric domains")]
struct Cli {
    /// JSON experiment configuration; subcommand options override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Directory for the report and CSV artifacts.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Worker threads (otherwise one per core).
    #[arg(long, global = true, env = THREADS_ENV)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Args, Default)]
struct Common {
    /// Domain, e.g. `ball:2`, `I:2:3`, `IV:5`.
    #[arg(long)]
    domain: Option<String>,
    /// Model, e.g. `ball:2`, `rank-one:2:2`, `sub-hardy:2:2`.
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    truncation: Option<u32>,
    /// Symbol as a JSON term list.
    #[arg(long)]
    symbol: Option<String>,
    /// Symbol pairs as a JSON list of `[f, g]`.
    #[arg(long)]
    pairs: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    reference: Option<f64>,
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Classification table of the standard instances.
    Catalog {
        #[arg(long)]
        domain: Option<String>,
    },
    /// Conical norms and representation dimensions.
    Norms {
        #[arg(long)]
        domain: String,
        #[arg(long = "max-weight")]
        max_weight: Option<u32>,
    },
    /// Graded dimensions of the polynomial levels.
    Dims {
        #[arg(long)]
        domain: String,
        #[arg(long = "max-degree")]
        max_degree: Option<u32>,
    },
    /// Asymptotic fit of a conical norm ratio sequence.
    SequenceFit {
        #[arg(long)]
        domain: String,
        /// Comma separated tail of the source partition.
        #[arg(long, value_delimiter = ',')]
        alpha: Vec<u32>,
        #[arg(long, value_delimiter = ',')]
        gamma: Vec<u32>,
        #[arg(long, default_value_t = 0)]
        k: u32,
    },
    /// Singular values or eigenvalues of one Toeplitz operator.
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        mode: Option<Mode>,
    },
    /// Dixmier trace estimate of a commutator product.
    Dixmier {
        #[command(flatten)]
        common: Common,
    },
    /// Boundary integral side of the trace formula.
    Rhs {
        #[command(flatten)]
        common: Common,
    },
    /// Run the named checks (all by default).
    VerifyAll {
        #[arg(long, value_delimiter = ',')]
        checks: Vec<String>,
        #[arg(long)]
        samples: Option<usize>,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Mode {
    Singular,
    Hermitian,
}

fn json_arg(s: &Option<String>, pointer: &str) -> Result<Option<Value>, ConfigError> {
    s.as_deref()
        .map(|t| serde_json::from_str(t).map_err(|e| ConfigError::at(pointer, e.to_string())))
        .transpose()
}

fn apply_common(cfg: &mut ExperimentConfig, c: &Common) -> Result<(), ConfigError> {
    if c.domain.is_some() {
        cfg.domain = c.domain.clone();
    }
    if c.model.is_some() {
        cfg.model = c.model.clone();
    }
    if c.truncation.is_some() {
        cfg.truncation = c.truncation;
    }
    if let Some(v) = json_arg(&c.symbol, "/symbol")? {
        cfg.symbol = Some(v);
    }
    if let Some(v) = json_arg(&c.pairs, "/pairs")? {
        cfg.pairs = Some(serde_json::from_value(v).map_err(|e| ConfigError::at("/pairs", e.to_string()))?);
    }
    if c.samples.is_some() {
        cfg.samples = c.samples;
    }
    if c.reference.is_some() {
        cfg.reference = c.reference;
    }
    if c.tolerance.is_some() {
        cfg.tolerance = c.tolerance;
    }
    Ok(())
}

fn build_config(cli: &Cli) -> Result<ExperimentConfig, ConfigError> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| ConfigError::at("", format!("cannot read {}: {e}", path.display())))?;
            parse_config(&text)?
        }
        None => ExperimentConfig::default(),
    };
    match &cli.command {
        None => {}
        Some(Command::Catalog { domain }) => {
            cfg.pipeline = Some(Pipeline::Catalog);
            if domain.is_some() {
                cfg.domain = domain.clone();
            }
        }
        Some(Command::Norms { domain, max_weight }) => {
            cfg.pipeline = Some(Pipeline::Norms);
            cfg.domain = Some(domain.clone());
            cfg.max_degree = max_weight.or(cfg.max_degree);
        }
        Some(Command::Dims { domain, max_degree }) => {
            cfg.pipeline = Some(Pipeline::Dims);
            cfg.domain = Some(domain.clone());
            cfg.max_degree = max_degree.or(cfg.max_degree);
        }
        Some(Command::SequenceFit { domain, alpha, gamma, k }) => {
            cfg.pipeline = Some(Pipeline::SequenceFit);
            cfg.domain = Some(domain.clone());
            cfg.alpha = Some(alpha.clone());
            cfg.gamma = Some(gamma.clone());
            cfg.k = Some(*k);
        }
        Some(Command::Spectrum { common, mode }) => {
            cfg.pipeline = Some(Pipeline::Spectrum);
            apply_common(&mut cfg, common)?;
            if let Some(m) = mode {
                cfg.mode = Some(match m {
                    Mode::Singular => SpectrumMode::Singular,
                    Mode::Hermitian => SpectrumMode::Hermitian,
                });
            }
        }
        Some(Command::Dixmier { common }) => {
            cfg.pipeline = Some(Pipeline::Dixmier);
            apply_common(&mut cfg, common)?;
        }
        Some(Command::Rhs { common }) => {
            cfg.pipeline = Some(Pipeline::Rhs);
            apply_common(&mut cfg, common)?;
        }
        Some(Command::VerifyAll { checks, samples }) => {
            cfg.pipeline = Some(Pipeline::VerifyAll);
            if !checks.is_empty() {
                cfg.checks = Some(checks.clone());
            }
            cfg.samples = samples.or(cfg.samples);
        }
    }
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    if cli.out.is_some() {
        cfg.out_dir = cli.out.clone();
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    } else if let Err(e) = init_threads() {
        eprintln!("error: {e}");
        return ExitCode::from(EXIT_CONFIG as u8);
    }
    let report = match build_config(&cli).and_then(|cfg| run_experiment(&cfg)) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG as u8);
        }
    };
    if let Some(dir) = &report.config.out_dir {
        let mut formats = vec![Format::Json];
        if cli.format != Format::Json {
            formats.push(cli.format);
        }
        for f in formats {
            if let Err(e) = emit_report(&report, f, dir) {
                eprintln!("error: cannot write report: {e}");
                return ExitCode::from(1);
            }
        }
    }
    print!("{}", render(&report, cli.format));
    ExitCode::from(exit_code(&report) as u8)
}
