use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};
use kkindex::{parse_config, resolve_out, run_experiment, selection, write_report, Config, REGISTRY};

#[derive(Parser)]
#[command(name = "kkindex", version, about = "Deterministic index-theory experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment, or `all` of those listed in the config.
    Run {
        experiment: String,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory; `KKINDEX_OUT` takes precedence.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the registered experiments.
    List,
}

fn main() -> ExitCode {
    match Cli::parse().command {
        Command::List => {
            for e in REGISTRY {
                println!("{:<18} {}", e.name, e.about);
            }
            ExitCode::SUCCESS
        }
        Command::Run { experiment, config, out } => match run(&experiment, config, out) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
    }
}

fn run(target: &str, config: Option<PathBuf>, out: Option<PathBuf>) -> anyhow::Result<bool> {
    let cfg = match &config {
        Some(p) => parse_config(p)?,
        None => Config::default(),
    };
    let dir = resolve_out(out.as_deref(), &cfg);
    let mut summary = String::new();
    let mut ok = true;
    for name in selection(target, &cfg)? {
        let t = Instant::now();
        let report = run_experiment(&name, &cfg)?;
        write_report(&dir, &report)?;
        eprintln!("{name}: {} in {:.1?}", if report.passed() { "pass" } else { "FAIL" }, t.elapsed());
        ok &= report.passed();
        summary.push_str(&report.summary());
    }
    print!("{summary}");
    if target == "all" {
        std::fs::write(dir.join("summary.txt"), &summary)?;
    }
    Ok(ok)
}
