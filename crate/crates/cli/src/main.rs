//! Command-line entry point.
//!
//! Exit codes: 0 success, 1 usage/config errors, 2 data errors.

mod config;
mod error;
mod pipeline;
mod report;
mod synth;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use config::ResolvedConfig;
use error::CliError;

#[derive(Parser)]
#[command(
    name = "locdiag",
    version,
    about = "Cross-validates localization streams with subjective-logic opinions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the assessment pipeline and write per-pair series + manifest.
    Assess(CommonArgs),
    /// Generate per-system trajectory files for a synthetic scenario.
    Synth(CommonArgs),
    /// Re-emit pair series with the event threshold as a column.
    Plotdata(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory override (assess: report dir; plotdata: plot dir).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Overrides the config's run seed.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("locdiag: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Assess(args) => {
            let started = Instant::now();
            let cfg = ResolvedConfig::load(&args.config, args.seed, args.out.as_deref())?;
            let report = pipeline::run_assess(&cfg)?;
            let wall_ms = started.elapsed().as_millis();
            let written = report::write_report(&report, &cfg, cfg.output_dir(), wall_ms)?;
            eprintln!(
                "assessed {} steps over {} pairs; wrote {} files to {}",
                report.steps(),
                report.pairs.len(),
                written.len(),
                cfg.output_dir().display()
            );
            Ok(())
        }
        Command::Synth(args) => {
            // --out is not meaningful here; system paths come from the config
            let cfg = ResolvedConfig::load(&args.config, args.seed, None)?;
            synth::run_synth(&cfg)?;
            eprintln!("wrote {} system files", cfg.raw.systems.len());
            Ok(())
        }
        Command::Plotdata(args) => {
            let cfg = ResolvedConfig::load(&args.config, args.seed, None)?;
            let report_dir = cfg.output_dir().to_path_buf();
            let plot_dir = args.out.unwrap_or_else(|| report_dir.join("plot"));
            let ids = cfg.system_ids();
            let mut count = 0usize;
            for system in &ids {
                for reference in &ids {
                    if system != reference {
                        report::write_plotdata(
                            &report_dir,
                            &plot_dir,
                            system,
                            reference,
                            cfg.raw.assessor.event_threshold,
                        )?;
                        count += 1;
                    }
                }
            }
            eprintln!("wrote {count} plot files to {}", plot_dir.display());
            Ok(())
        }
    }
}
