use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use enriques::commands::{self, Outcome, EXIT_ERROR};
use enriques::scenarios::DataSource;
use enriques::CliError;

/// Exact divisor calculus on Enriques surfaces given by a graph of smooth
/// rational curves.
///
/// Exit codes: 0 when the answer is yes, 1 when it is no, 2 on errors.
#[derive(Parser)]
#[command(name = "enriques", version)]
struct Cli {
    /// Print machine-readable JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Configuration file; `bundled:NAME` selects a shipped one (e8_tilde,
    /// d8_tilde, e7_tilde, type_vii).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a configuration and its sequences.
    Check,
    /// Compute phi of a class, e.g. `phi "H1"`.
    Phi { class: String },
    /// Reflect a class of non-negative square into the nef cone.
    Reduce { class: String },
    /// Decide negative definiteness of an effective curve combination.
    Negdef {
        class: String,
        /// Use the unpruned search.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Build H from a 10-sequence and decide whether it is a Fano polarization.
    Fano {
        #[arg(long)]
        sequence: Option<String>,
    },
    /// Search for an effective representative of H - 2(F + T) for one block.
    Reye {
        #[arg(long)]
        sequence: Option<String>,
        #[arg(long = "half-fiber")]
        half_fiber: String,
    },
    /// Run the regression scenarios over the bundled surfaces.
    PaperVerify {
        /// Read the data files from this directory instead.
        #[arg(long, value_name = "DIR")]
        data_dir: Option<PathBuf>,
        /// Run a single scenario.
        #[arg(long)]
        scenario: Option<String>,
    },
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    let doc = || match &cli.config {
        Some(p) => commands::load_document(p),
        None => Err(CliError::Usage("this command needs --config".into())),
    };
    match &cli.command {
        Command::Check => commands::cmd_check(&doc()?),
        Command::Phi { class } => commands::cmd_phi(&doc()?, class),
        Command::Reduce { class } => commands::cmd_reduce(&doc()?, class),
        Command::Negdef { class, exhaustive } => commands::cmd_negdef(&doc()?, class, *exhaustive),
        Command::Fano { sequence } => commands::cmd_fano(&doc()?, sequence.as_deref()),
        Command::Reye { sequence, half_fiber } => commands::cmd_reye(&doc()?, sequence.as_deref(), half_fiber),
        Command::PaperVerify { data_dir, scenario } => {
            let source = data_dir.clone().map_or(DataSource::Bundled, DataSource::Dir);
            commands::cmd_paper_verify(&source, scenario.as_deref())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable"));
            } else {
                print!("{}", out.text);
            }
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            if cli.json {
                println!("{}", serde_json::json!({"error": e.to_string()}));
            }
            eprintln!("error: {e}");
            ExitCode::from(EXIT_ERROR as u8)
        }
    }
}
