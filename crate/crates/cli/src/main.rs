use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use tau2_cli::report::pair;
use tau2_cli::{parse_config, run_suite, RunConfig, VerificationReport};
use tau2_core::eigenbasis::QuantumNumbers;

const EXIT_FAIL: u8 = 1;
const EXIT_CONFIG: u8 = 2;

#[derive(Parser)]
#[command(name = "tau2lab", version, about = "Residual-certified verification of the free-boundary tau2 model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the verification suite and write a JSON report.
    Verify(RunArgs),
    /// Print A0, s_l, r_k and the lambda grid.
    Spectrum(RunArgs),
    /// Dump the raising-operator eigenbasis as JSON.
    Eigenbasis(RunArgs),
    /// Re-render a saved JSON report as text.
    Report {
        /// Path to a report written by `verify`.
        path: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// Run configuration (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output path; overrides `output` in the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Comma-separated subset of checks to run.
    #[arg(long)]
    checks: Option<String>,
    /// Threshold override, NAME=VALUE; may be repeated.
    #[arg(long = "tolerance", value_name = "NAME=VALUE")]
    tolerances: Vec<String>,
    /// Write zero for every wall-time field.
    #[arg(long)]
    no_timing: bool,
}

enum Failure {
    Config(String),
    Run(String),
}

impl From<tau2_cli::ConfigError> for Failure {
    fn from(e: tau2_cli::ConfigError) -> Self {
        Failure::Config(e.to_string())
    }
}

fn load(args: &RunArgs) -> Result<RunConfig, Failure> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| Failure::Config(format!("cannot read {}: {e}", args.config.display())))?;
    let mut cfg = parse_config(&text)?;
    if let Some(list) = &args.checks {
        cfg.set_checks(list)?;
    }
    for t in &args.tolerances {
        cfg.set_tolerance(t)?;
    }
    if args.no_timing {
        cfg.timing = false;
    }
    if let Some(out) = &args.out {
        cfg.output = Some(out.clone());
    }
    Ok(cfg)
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Run(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verify(args: &RunArgs) -> Result<u8, Failure> {
    let cfg = load(args)?;
    let report = run_suite(&cfg);
    print!("{}", report.render_text());
    if let Some(p) = &cfg.output {
        write_output(Some(p), &report.to_json())?;
    }
    Ok(report.exit_code() as u8)
}

fn spectrum(args: &RunArgs) -> Result<u8, Failure> {
    let cfg = load(args)?;
    let spec = tau2_cli::suite::spectrum(&cfg).map_err(Failure::Run)?;
    let mut text = format!("A0 = {:+.12e} {:+.12e}i\n", spec.a0.re, spec.a0.im);
    for (l, s) in spec.s.iter().enumerate() {
        text.push_str(&format!("s_{l} = {:+.12e} {:+.12e}i\n", s.re, s.im));
    }
    for (k, r) in spec.r.iter().enumerate() {
        text.push_str(&format!("r_{} = {:+.12e} {:+.12e}i\n", k + 1, r.re, r.im));
    }
    for k in 0..spec.len {
        for p in 0..spec.n {
            let l = spec.lambda_at(p, k);
            text.push_str(&format!("lambda[p={p},k={}] = {:+.12e} {:+.12e}i\n", k + 1, l.re, l.im));
        }
    }
    write_output(cfg.output.as_deref(), &text)?;
    Ok(0)
}

#[derive(Serialize)]
struct BasisDump {
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "L")]
    len: usize,
    r: Vec<[f64; 2]>,
    states: Vec<StateDump>,
}

#[derive(Serialize)]
struct StateDump {
    quantum_numbers: Vec<usize>,
    amplitudes: Vec<[f64; 2]>,
}

fn eigenbasis(args: &RunArgs) -> Result<u8, Failure> {
    let cfg = load(args)?;
    let (spec, basis) = tau2_cli::suite::eigenbasis(&cfg).map_err(Failure::Run)?;
    let states = basis
        .states
        .iter()
        .enumerate()
        .map(|(i, v)| StateDump {
            quantum_numbers: QuantumNumbers::from_index(i, cfg.n, cfg.len).0,
            amplitudes: v.iter().copied().map(pair).collect(),
        })
        .collect();
    let dump = BasisDump {
        n: cfg.n,
        len: cfg.len,
        r: spec.r.iter().copied().map(pair).collect(),
        states,
    };
    let mut text = serde_json::to_string_pretty(&dump).expect("basis serializes");
    text.push('\n');
    write_output(cfg.output.as_deref(), &text)?;
    Ok(0)
}

fn report(path: &Path) -> Result<u8, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
    let report: VerificationReport =
        serde_json::from_str(&text).map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?;
    print!("{}", report.render_text());
    Ok(report.exit_code() as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Verify(args) => verify(args),
        Command::Spectrum(args) => spectrum(args),
        Command::Eigenbasis(args) => eigenbasis(args),
        Command::Report { path } => report(path),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            ExitCode::from(EXIT_CONFIG)
        }
        Err(Failure::Run(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}
