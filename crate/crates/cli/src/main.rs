use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use cpsym_cli::config::{parse_cases, Cases, ConfigError, Format, RunConfig};
use cpsym_cli::expect;
use cpsym_cli::suite;

/// Verify the c-projective classification of Kähler surfaces: Kähler
/// property, HSC, mobility, generator algebras and lifts.
#[derive(Parser, Debug)]
#[command(name = "cpsym", version)]
struct Args {
    /// `all`, a comma-separated list of families, or a JSON case file
    #[arg(long, default_value = "all")]
    cases: String,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Sample points per check (at least 10)
    #[arg(long, default_value_t = 20)]
    points: usize,
    /// Jet truncation order
    #[arg(long, default_value_t = 4)]
    order: usize,
    /// Base tolerance; residual thresholds scale with it
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    /// `json` or `markdown`
    #[arg(long, default_value = "json")]
    format: String,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Print the configurations and exit
    #[arg(long)]
    list: bool,
}

fn config(a: &Args) -> Result<RunConfig, ConfigError> {
    let cfg = RunConfig {
        cases: parse_cases(&a.cases)?,
        seed: a.seed,
        points: a.points,
        order: a.order,
        tol: a.tol,
        format: a.format.parse::<Format>()?,
        out: a.out.clone(),
        jobs: a.jobs,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match config(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("cpsym: {e}");
            return ExitCode::from(2);
        }
    };
    if args.list {
        for r in cfg.rows() {
            let scenarios: Vec<String> = expect::scenarios(&r.spec).iter().map(|s| s.to_string()).collect();
            println!("{:<32} {}", r.label, scenarios.join(" "));
        }
        if cfg.cases == Cases::All {
            eprintln!("{} configurations", cfg.rows().len());
        }
        return ExitCode::SUCCESS;
    }
    let report = suite::run(&cfg);
    let text = match cfg.format {
        Format::Json => report.to_json(),
        Format::Markdown => report.to_markdown(),
    };
    match &cfg.out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("cpsym: {}: {e}", path.display());
                return ExitCode::from(2);
            }
        }
        None => println!("{text}"),
    }
    for c in report.failures() {
        eprintln!("FAIL {} residual {:.3e} threshold {:.1e}", c.id, c.residual, c.threshold);
    }
    ExitCode::from(report.exit_code() as u8)
}
