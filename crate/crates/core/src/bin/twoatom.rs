use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use twoatom::cli_runner::{figure_preset, parse_config, run_scenario, write_outputs, ResultTable};
use twoatom::quantum_jump::THREADS_ENV;
use twoatom::Error;

#[derive(Parser)]
#[command(name = "twoatom", version, about = "Two-atom collective dynamics: master equation, quantum jumps, correlations")]
struct Cli {
    /// Worker threads (default: TWOATOM_THREADS, else all cores)
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a scenario config file
    Run {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a figure preset (fig1, fig3 ... fig22)
    Figure {
        id: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Parse and validate a config file, printing the resolved form
    Validate { config: PathBuf },
}

fn exit_code(e: &Error) -> u8 {
    if e.is_numerical() {
        2
    } else {
        1
    }
}

fn emit(table: &ResultTable, out: Option<PathBuf>) -> Result<(), (u8, String)> {
    let path = out.or_else(|| table.config.output.as_ref().map(PathBuf::from));
    match path {
        Some(p) => write_outputs(table, &p).map_err(|e| (1, format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{}", table.to_csv());
            if !table.records.is_empty() {
                eprintln!("note: {} trajectory records not written (no output path)", table.records.len());
            }
            Ok(())
        }
    }
}

fn read(path: &PathBuf) -> Result<String, (u8, String)> {
    std::fs::read_to_string(path).map_err(|e| (1, format!("cannot read {}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<(), (u8, String)> {
    let threads = cli.threads.or_else(|| std::env::var(THREADS_ENV).ok().and_then(|s| s.parse().ok()));
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| (1, e.to_string()))?;
    }
    let fail = |e: Error| (exit_code(&e), e.to_string());
    match cli.command {
        Command::Run { config, out } => {
            let cfg = parse_config(&read(&config)?).map_err(fail)?;
            let table = run_scenario(&cfg).map_err(fail)?;
            emit(&table, out)
        }
        Command::Figure { id, out } => {
            let cfg = figure_preset(&id).map_err(fail)?;
            let table = run_scenario(&cfg).map_err(fail)?;
            emit(&table, out)
        }
        Command::Validate { config } => {
            let cfg = parse_config(&read(&config)?).map_err(fail)?;
            print!("{}", cfg.to_text());
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err((code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
