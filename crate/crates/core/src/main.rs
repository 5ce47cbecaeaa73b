use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use shintani::cli::{run, Command, Overrides};
use shintani::suite::SuiteSize;

#[derive(Parser)]
#[command(name = "shintani", version, about = "Shintani pairings, Stickelberger elements and Gross regulators over real quadratic fields")]
struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the engine seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Writes the JSON report here instead of stdout.
    #[arg(long, global = true)]
    json: Option<PathBuf>,
    /// Richardson levels of the Abel oracle.
    #[arg(long, global = true)]
    precision: Option<usize>,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Exact Shintani pairing with the Abel cross-check.
    Pair,
    /// Stickelberger element Θ_{S,T,K}.
    Theta,
    /// Gross regulator, or R̂_𝔮 with --hat.
    Regulator {
        #[arg(long)]
        hat: bool,
    },
    /// b₀ from the Shintani pairings of D₀ and D₁.
    HatTheta,
    /// Checks the congruence selected by the config.
    Verify,
    /// Runs the randomized invariant suites.
    Suite {
        #[arg(long, value_enum, default_value_t = Size::Small)]
        size: Size,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Size {
    Small,
    Full,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let command = match cli.command {
        Cmd::Pair => Command::Pair,
        Cmd::Theta => Command::Theta,
        Cmd::Regulator { hat } => Command::Regulator { hat },
        Cmd::HatTheta => Command::HatTheta,
        Cmd::Verify => Command::Verify,
        Cmd::Suite { size } => Command::Suite(match size {
            Size::Small => SuiteSize::Small,
            Size::Full => SuiteSize::Full,
        }),
    };
    let text = match cli.config.as_ref().map(std::fs::read_to_string).transpose() {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read config: {e}");
            return ExitCode::from(2);
        }
    };
    let report = run(text.as_deref(), command, Overrides { seed: cli.seed, precision: cli.precision });
    let out = report.to_json();
    let target = cli.json.or_else(|| report.config.as_ref().and_then(|c| c.output.clone()).map(PathBuf::from));
    match target {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, out + "\n") {
                eprintln!("error: cannot write {}: {e}", path.display());
                return ExitCode::from(2);
            }
            eprintln!("{}: {}", report.command, report.verdict);
        }
        None => println!("{out}"),
    }
    if report.exit_code != 0 {
        eprintln!("error: {}", report.result.get("error").and_then(|e| e.as_str()).unwrap_or(&report.verdict));
    }
    ExitCode::from(report.exit_code as u8)
}
