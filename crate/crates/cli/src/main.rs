use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ols_cli::commands::{self, EmbedOptions, EmbeddingSource, Outcome, PairSource};
use ols_cli::verify::Which;
use ols_cli::{exit, CliError};
use serde_json::json;

/// Embed a pair of orthogonal partial latin squares in a pair of orthogonal
/// latin squares, and check the result.
#[derive(Parser)]
#[command(name = "ols-embed", version)]
struct Cli {
    /// Print a JSON envelope instead of text.
    #[arg(long, global = true)]
    json: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct PairArgs {
    /// JSON pair document `{"order", "P", "Q"}`.
    #[arg(required_unless_present_all = ["p", "q"], conflicts_with_all = ["p", "q"])]
    pair: Option<PathBuf>,

    /// Text grid for P (with --q instead of a pair document).
    #[arg(long, requires = "q")]
    p: Option<PathBuf>,

    /// Text grid for Q.
    #[arg(long, requires = "p")]
    q: Option<PathBuf>,
}

impl PairArgs {
    fn source(&self) -> PairSource {
        match (&self.pair, &self.p, &self.q) {
            (Some(path), _, _) => PairSource::Json(path.clone()),
            (None, Some(p), Some(q)) => PairSource::Grids {
                p: p.clone(),
                q: q.clone(),
            },
            _ => unreachable!("clap enforces one pair source"),
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Square {
    A,
    B,
}

#[derive(Subcommand)]
enum Command {
    /// Check that P and Q are orthogonal partial latin squares.
    VerifyPair(PairArgs),

    /// Build the embedding and write it out.
    Embed {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long)]
        out_a: Option<PathBuf>,
        #[arg(long)]
        out_b: Option<PathBuf>,
        /// JSON manifest from which any cell can be regenerated.
        #[arg(long)]
        manifest: Option<PathBuf>,
        /// Product construction only; P must not repeat a symbol.
        #[arg(long)]
        basic: bool,
        /// Allow orders above the dense threshold; no grids are written.
        #[arg(long)]
        lazy: bool,
        /// Write the applied trades as JSON.
        #[arg(long, value_name = "FILE")]
        dump_trades: Option<PathBuf>,
    },

    /// Check latinness, orthogonality and containment of an embedding.
    VerifyEmbedding {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, requires = "b", conflicts_with = "manifest")]
        a: Option<PathBuf>,
        #[arg(long, requires = "a")]
        b: Option<PathBuf>,
        #[arg(long, required_unless_present = "a")]
        manifest: Option<PathBuf>,
    },

    /// One cell of an embedding described by a manifest.
    Cell {
        manifest: PathBuf,
        row: u32,
        col: u32,
        #[arg(long, value_enum, default_value = "a")]
        square: Square,
    },
}

fn run(command: &Command) -> Result<(&'static str, Outcome), CliError> {
    match command {
        Command::VerifyPair(pair) => Ok(("verify-pair", commands::verify_pair(&pair.source())?)),
        Command::Embed {
            pair,
            out_a,
            out_b,
            manifest,
            basic,
            lazy,
            dump_trades,
        } => {
            let opts = EmbedOptions {
                basic: *basic,
                lazy: *lazy,
                out_a: out_a.clone(),
                out_b: out_b.clone(),
                manifest: manifest.clone(),
                dump_trades: dump_trades.clone(),
            };
            Ok(("embed", commands::embed(&pair.source(), &opts)?))
        }
        Command::VerifyEmbedding {
            pair,
            a,
            b,
            manifest,
        } => {
            let squares = match (a, b, manifest) {
                (Some(a), Some(b), _) => EmbeddingSource::Files {
                    a: a.clone(),
                    b: b.clone(),
                },
                (_, _, Some(m)) => EmbeddingSource::Manifest(m.clone()),
                _ => return Err(CliError::general("pass --a and --b, or --manifest")),
            };
            Ok((
                "verify-embedding",
                commands::verify_embedding(&pair.source(), &squares)?,
            ))
        }
        Command::Cell {
            manifest,
            row,
            col,
            square,
        } => {
            let which = match square {
                Square::A => Which::A,
                Square::B => Which::B,
            };
            Ok(("cell", commands::cell(manifest, *row, *col, which)?))
        }
    }
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::VerifyPair(_) => "verify-pair",
        Command::Embed { .. } => "embed",
        Command::VerifyEmbedding { .. } => "verify-embedding",
        Command::Cell { .. } => "cell",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok((name, outcome)) => {
            if cli.json {
                let env = json!({
                    "command": name,
                    "status": "ok",
                    "exit_code": exit::OK,
                    "result": outcome.details,
                });
                println!("{}", serde_json::to_string_pretty(&env).unwrap());
            } else {
                print!("{}", outcome.text);
            }
            ExitCode::SUCCESS
        }
        Err(err) => {
            if cli.json {
                let env = json!({
                    "command": command_name(&cli.command),
                    "status": "error",
                    "exit_code": err.code,
                    "message": err.message,
                });
                println!("{}", serde_json::to_string_pretty(&env).unwrap());
            } else {
                eprintln!("error: {err}");
            }
            ExitCode::from(err.code)
        }
    }
}
