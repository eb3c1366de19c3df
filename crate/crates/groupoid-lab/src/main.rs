use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use groupoid_lab::auditors::registry;
use groupoid_lab::cert::{self, Certificate, Verdict};
use groupoid_lab::config::ExperimentConfig;

/// Machine-checks, at explicit finite scales with exact arithmetic, the
/// measure-theoretic and dynamical properties of truncated ample groupoids.
#[derive(Parser)]
#[command(name = "groupoid-lab", version, disable_help_subcommand = true)]
struct Cli {
    /// Auditor to run, or "report" to summarize an existing certificate
    subcommand: String,
    /// Experiment config (TOML), or the certificate JSON for "report"
    #[arg(long)]
    config: PathBuf,
    /// Write the certificate here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the seed from the config
    #[arg(long)]
    seed: Option<u64>,
}

fn fail(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(2)
}

fn main() -> ExitCode {
    let cli = Cli::parse();

    if cli.subcommand == "report" {
        let raw = match fs::read_to_string(&cli.config) {
            Ok(raw) => raw,
            Err(e) => return fail(format_args!("{}: {e}", cli.config.display())),
        };
        let cert = match Certificate::from_json(&raw) {
            Ok(cert) => cert,
            Err(e) => return fail(e),
        };
        // tolerate a closed pipe (e.g. piping into head)
        let _ = writeln!(std::io::stdout(), "{}", cert::report(&cert));
        return ExitCode::SUCCESS;
    }

    let auditors = registry();
    let Some(auditor) = auditors.get(cli.subcommand.as_str()) else {
        let known: Vec<&str> = auditors.keys().copied().collect();
        return fail(format_args!(
            "unknown subcommand {:?}; expected report or one of {}",
            cli.subcommand,
            known.join(", ")
        ));
    };

    let cfg = match ExperimentConfig::load(&cli.config) {
        Ok(cfg) => cfg,
        Err(e) => return fail(e),
    };
    let seed = cli.seed.unwrap_or(cfg.seed);

    let cert = match auditor.run(&cfg, seed) {
        Ok(cert) => cert,
        Err(e) => return fail(e),
    };
    let json = cert.to_json();
    if let Some(out) = &cli.out {
        if let Err(e) = fs::write(out, &json) {
            return fail(format_args!("{}: {e}", out.display()));
        }
    } else {
        let _ = writeln!(std::io::stdout(), "{json}");
    }
    match cert.verdict {
        Verdict::Pass | Verdict::Vacuous => ExitCode::SUCCESS,
        Verdict::Fail => ExitCode::from(1),
    }
}
