use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use frenet_cli::{commands, CliError};

#[derive(Parser)]
#[command(name = "frenet", version, about = "Space curves from intrinsic angular data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize a curve from a JSON recipe and write it as CSV.
    Generate {
        #[arg(long)]
        recipe: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Number of samples (odd, at least 65).
        #[arg(long)]
        n: Option<usize>,
    },
    /// Recompute curvature, torsion and sigma from a curve CSV.
    Analyze {
        #[arg(long = "in")]
        input: PathBuf,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        json: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-3)]
        tol_rel: f64,
    },
    /// Run the consistency checks for a recipe.
    Verify {
        #[arg(long)]
        recipe: PathBuf,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Convert a curve CSV to OBJ or a gnuplot script.
    Export {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        format: String,
        #[arg(long)]
        out: PathBuf,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Generate { recipe, out, n } => {
            let msg = commands::generate(&recipe, &out, n)?;
            eprintln!("{msg}");
        }
        Command::Analyze { input, json, tol_rel } => {
            let r = commands::analyze(&input, json.as_deref(), tol_rel)?;
            let failed = r.checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(CliError::ChecksFailed(failed));
            }
        }
        Command::Verify { recipe, json } => {
            let r = commands::verify(&recipe, json.as_deref())?;
            let failed = r.checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                return Err(CliError::ChecksFailed(failed));
            }
        }
        Command::Export { input, format, out } => commands::export(&input, &format, &out)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("frenet: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
