use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use klsearch::harness::config::{split_pair, RunConfig};
use klsearch::harness::{self, grid};
use klsearch::{Benchmark, Error};

#[derive(Parser)]
#[command(
    name = "klsearch",
    version,
    about = "Benchmark driver for variable depth search and friends"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run repeated trials and print cost/time statistics and ranks.
    Bench {
        /// Key-value config file; flags given here override it.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Algorithm id (hill, kls, kls1, kls2, sa, ga), comma list or `all`.
        #[arg(long)]
        algo: Option<String>,
        /// Function id (f1..f7), comma list or `all`.
        #[arg(long)]
        func: Option<String>,
        #[arg(long)]
        trials: Option<String>,
        #[arg(long)]
        seed: Option<String>,
        /// Evaluation budget per trial.
        #[arg(long)]
        budget: Option<String>,
        /// csv, json or md.
        #[arg(long)]
        format: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Algorithm parameter override, `key=value`; repeatable.
        #[arg(long = "param", value_name = "KEY=VALUE")]
        params: Vec<String>,
    },
    /// Sample a function over its bounds square as `x1,x2,f` rows.
    Grid {
        #[arg(long)]
        func: String,
        #[arg(long, default_value_t = 101)]
        res: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

enum Failure {
    Config(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Config(e)
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => {
            std::fs::write(path, text).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
        }
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string())),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Bench {
            config,
            algo,
            func,
            trials,
            seed,
            budget,
            format,
            out,
            params,
        } => {
            let mut cfg = match &config {
                Some(path) => RunConfig::from_file(path)?,
                None => RunConfig::default(),
            };
            let flags = [
                ("algo", algo),
                ("func", func),
                ("trials", trials),
                ("seed", seed),
                ("budget", budget),
                ("format", format),
            ];
            for (key, value) in flags {
                if let Some(v) = value {
                    cfg.set(key, &v)?;
                }
            }
            for p in &params {
                let (k, v) = split_pair(p)?;
                cfg.set(k, v)?;
            }
            if out.is_some() {
                cfg.out = out;
            }
            let report = harness::bench(&cfg)?;
            let text = report.render(cfg.format)?;
            emit(&text, cfg.out.as_deref())
        }
        Command::Grid { func, res, out } => {
            let func: Benchmark = func.parse()?;
            let samples = grid::surface_grid(func, res)?;
            emit(&grid::grid_csv(&samples), out.as_deref())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Config(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
