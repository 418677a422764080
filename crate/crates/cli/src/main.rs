use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use spin3n::linalg::TOL_COMPOSE;
use spin3n::simulator::QubitSelection;
use spin3n_cli::{
    cmd_bench, cmd_convert, cmd_lie_dim, cmd_simulate, cmd_verify, cmd_verify_random, parse_selection,
    to_json, CliError, Mode,
};

#[derive(Parser)]
#[command(name = "spin3n", version, about = "Simulate Spin(3n) circuits in polynomial time")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Rotation,
    Dense,
}

#[derive(Subcommand)]
enum Command {
    /// Single-qubit measurement statistics of a circuit file.
    Simulate {
        circuit: PathBuf,
        #[arg(long, value_enum, default_value = "rotation")]
        mode: ModeArg,
        /// all, even, odd or a 1-based qubit index.
        #[arg(long, default_value = "all", value_parser = parse_selection)]
        measure: QubitSelection,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare the rotation engine with dense simulation.
    Verify {
        /// Circuit file; omit when using --random.
        circuit: Option<PathBuf>,
        /// Number of seeded random circuits to check instead of a file.
        #[arg(long, conflicts_with = "circuit")]
        random: Option<usize>,
        #[arg(long, default_value_t = 3)]
        lines: usize,
        #[arg(long, default_value_t = 20)]
        gates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = TOL_COMPOSE)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spin(6) coefficients and SO(6) rotation of a 4x4 unitary.
    Convert {
        matrix: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Lie-closure dimensions of the gate algebra on n lines.
    LieDim {
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Time compile and even-qubit measurement of a random circuit.
    Bench {
        #[arg(long, default_value_t = 100)]
        lines: usize,
        #[arg(long, default_value_t = 500)]
        gates: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit<T: Serialize>(value: &T, out: Option<&PathBuf>) -> Result<(), CliError> {
    let text = to_json(value);
    match out {
        Some(path) => std::fs::write(path, text + "\n").map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<bool, CliError> {
    match cli.command {
        Command::Simulate {
            circuit,
            mode,
            measure,
            out,
        } => {
            let mode = match mode {
                ModeArg::Rotation => Mode::Rotation,
                ModeArg::Dense => Mode::Dense,
            };
            emit(&cmd_simulate(&circuit, mode, measure)?, out.as_ref())?;
            Ok(true)
        }
        Command::Verify {
            circuit,
            random,
            lines,
            gates,
            seed,
            tol,
            out,
        } => {
            let report = match (circuit, random) {
                (Some(path), None) => cmd_verify(&path, tol)?,
                (None, Some(count)) => cmd_verify_random(count, lines, gates, seed, tol)?,
                _ => return Err(CliError::Input("give a circuit file or --random N".into())),
            };
            emit(&report, out.as_ref())?;
            Ok(report.pass)
        }
        Command::Convert { matrix, out } => {
            emit(&cmd_convert(&matrix)?, out.as_ref())?;
            Ok(true)
        }
        Command::LieDim { n, out } => {
            emit(&cmd_lie_dim(n)?, out.as_ref())?;
            Ok(true)
        }
        Command::Bench {
            lines,
            gates,
            seed,
            out,
        } => {
            emit(&cmd_bench(lines, gates, seed)?, out.as_ref())?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
