//! The `blamelogic` command line.
//!
//! [`run`] takes the full argument vector and returns the exit code with
//! whatever would have been written to stdout and stderr, so the binary is
//! a thin wrapper and tests can call it directly.
//!
//! Exit codes: 0 when the property holds, 1 when it fails (false formula,
//! counterexample, empty blame report, rejected proof, fuzz failures) and 2
//! for usage or input errors.

use std::fs;
use std::path::{Path, PathBuf};

use blamelogic::harness::{soundness_sweep, SweepConfig};
use blamelogic::{
    bundled_script, check_proof, load, load_proof, parse, Checker, Formula, Game, Validity,
};
use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "blamelogic",
    version,
    about = "Model checking and proofs for coalition blame in strategic games"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print whether FORMULA holds at a play.
    Check {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        play: usize,
        #[arg(long)]
        formula: String,
    },
    /// Print "ok" if FORMULA holds at every play, else the first play where it fails.
    Valid {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        formula: String,
    },
    /// Print every coalition blamable for FORMULA at a play, as JSON.
    Blame {
        #[arg(long)]
        game: PathBuf,
        #[arg(long)]
        play: usize,
        #[arg(long)]
        formula: String,
        /// Largest coalition size considered (default: all agents).
        #[arg(long)]
        max_size: Option<usize>,
    },
    /// Check a proof script.
    Proof {
        #[arg(required_unless_present = "bundled", conflicts_with = "bundled")]
        file: Option<PathBuf>,
        /// Check one of the shipped scripts instead of a file.
        #[arg(long)]
        bundled: Option<String>,
    },
    /// Check the axiom schemas on random games and print the report as JSON.
    Fuzz {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        games: usize,
        #[arg(long, default_value_t = 20)]
        instances: usize,
    },
    /// Print FORMULA in canonical form.
    Fmt {
        #[arg(long)]
        formula: String,
    },
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: impl Into<String>) -> Outcome {
        Outcome {
            code,
            stdout: stdout.into(),
            stderr: String::new(),
        }
    }

    fn error(message: impl std::fmt::Display) -> Outcome {
        Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {message}\n"),
        }
    }
}

/// Runs the command line `argv`, where `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome::ok(0, text)
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    match execute(cli.command) {
        Ok(o) => o,
        Err(message) => Outcome::error(message),
    }
}

fn read_game(path: &Path) -> Result<Game, String> {
    let bytes = fs::read(path).map_err(|e| format!("{}: {e}", path.display()))?;
    load(&bytes).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_formula(text: &str) -> Result<Formula, String> {
    parse(text).map_err(|e| e.to_string())
}

fn execute(command: Command) -> Result<Outcome, String> {
    match command {
        Command::Check {
            game,
            play,
            formula,
        } => {
            let game = read_game(&game)?;
            let f = read_formula(&formula)?;
            let checker = Checker::new(&game).map_err(|e| e.to_string())?;
            let holds = checker.satisfies(play, &f).map_err(|e| e.to_string())?;
            Ok(Outcome::ok(if holds { 0 } else { 1 }, format!("{holds}\n")))
        }
        Command::Valid { game, formula } => {
            let game = read_game(&game)?;
            let f = read_formula(&formula)?;
            let checker = Checker::new(&game).map_err(|e| e.to_string())?;
            Ok(match checker.valid(&f).map_err(|e| e.to_string())? {
                Validity::Valid => Outcome::ok(0, "ok\n"),
                Validity::Counterexample(i) => {
                    Outcome::ok(1, format!("counterexample: play {i}\n"))
                }
            })
        }
        Command::Blame {
            game,
            play,
            formula,
            max_size,
        } => {
            let game = read_game(&game)?;
            let f = read_formula(&formula)?;
            let checker = Checker::new(&game).map_err(|e| e.to_string())?;
            let max_size = max_size.unwrap_or(game.agents.len());
            let report = checker
                .blamable_coalitions(play, &f, max_size)
                .map_err(|e| e.to_string())?;
            let json = serde_json::to_string_pretty(&report.to_json_value(&game))
                .expect("report serializes");
            Ok(Outcome::ok(
                if report.entries.is_empty() { 1 } else { 0 },
                json + "\n",
            ))
        }
        Command::Proof { file, bundled } => {
            let proof = match (file, bundled) {
                (_, Some(name)) => bundled_script(&name)
                    .ok_or_else(|| format!("no bundled script named {name}"))?,
                (Some(path), None) => {
                    let bytes = fs::read(&path).map_err(|e| format!("{}: {e}", path.display()))?;
                    load_proof(&bytes).map_err(|e| format!("{}: {e}", path.display()))?
                }
                (None, None) => return Err("give a proof file or --bundled NAME".into()),
            };
            Ok(match check_proof(&proof) {
                Ok(_) => Outcome::ok(0, "ok\n"),
                Err(e) => Outcome::ok(1, format!("{e}\n")),
            })
        }
        Command::Fuzz {
            seed,
            games,
            instances,
        } => {
            let report = soundness_sweep(&SweepConfig::new(seed, games, instances));
            let code = if report.failure_count() == 0 { 0 } else { 1 };
            Ok(Outcome::ok(code, report.to_json() + "\n"))
        }
        Command::Fmt { formula } => {
            let f = read_formula(&formula)?;
            Ok(Outcome::ok(0, format!("{f}\n")))
        }
    }
}
