mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use crate::config::ConfigError;

#[derive(Parser)]
#[command(
    name = "patchmatch",
    version,
    about = "Microstrip patch design and interdigital-capacitor matching"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(clap::Args)]
struct Common {
    /// JSON configuration file
    config: PathBuf,
    /// Report format on stdout
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Patch dimensions, line widths, resonant impedance and directivity
    Design {
        #[command(flatten)]
        common: Common,
        /// Also write design.json here
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Tune the interdigital capacitor for a match at f0
    Match {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
        /// Cross-check the optimizer against a 10^4-point grid
        #[arg(long, hide = true)]
        exhaustive: bool,
    },
    /// S11 sweep of an explicit layout (CSV, Touchstone, Smith points)
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Compare two or more feed designs
    Compare {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = ".")]
        out_dir: PathBuf,
    },
}

fn is_config_error(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.downcast_ref::<ConfigError>().is_some()
            || matches!(
                c.downcast_ref::<patchmatch::Error>(),
                Some(patchmatch::Error::Config(_))
            )
    })
}

fn run(cli: Cli) -> anyhow::Result<String> {
    let load = |c: &Common| -> anyhow::Result<config::DesignConfig> {
        let text = std::fs::read_to_string(&c.config)
            .map_err(|e| ConfigError(format!("cannot read {}: {e}", c.config.display())))?;
        Ok(config::parse(&text)?)
    };
    match cli.command {
        Command::Design { common, out_dir } => {
            commands::design(&load(&common)?, out_dir.as_deref(), common.format)
        }
        Command::Match {
            common,
            out_dir,
            exhaustive,
        } => commands::matching(&load(&common)?, &out_dir, common.format, exhaustive),
        Command::Sweep { common, out_dir } => {
            commands::sweep(&load(&common)?, &out_dir, common.format)
        }
        Command::Compare { common, out_dir } => {
            commands::compare(&load(&common)?, &out_dir, common.format)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            if is_config_error(&e) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
