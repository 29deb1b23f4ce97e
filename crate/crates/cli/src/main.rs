//! `cspi`: partition functions from dual path integrals, with operator
//! references and deterministic CSV / JSON output.
//!
//! Exit status is 0 on success, 1 when an evaluator or cross-check fails
//! (a JSON error object goes to stderr) and 2 for invalid arguments or
//! configuration.

mod commands;
mod output;
mod params;

use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Map, Value};

use params::Params;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{error}")]
    Eval {
        error: cspi_core::Error,
        context: Map<String, Value>,
    },
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl From<cspi_core::Error> for CliError {
    fn from(error: cspi_core::Error) -> Self {
        CliError::Eval {
            error,
            context: Map::new(),
        }
    }
}

impl CliError {
    pub fn eval_with(error: cspi_core::Error, extra: Option<(&str, Value)>) -> Self {
        let mut context = Map::new();
        if let Some((k, v)) = extra {
            context.insert(k.to_string(), v);
        }
        CliError::Eval { error, context }
    }

    fn report(&self) -> ExitCode {
        match self {
            CliError::Config(msg) => {
                eprintln!("error: invalid configuration: {msg}");
                ExitCode::from(2)
            }
            CliError::Eval { error, context } => {
                let mut obj = context.clone();
                obj.insert("error".into(), json!(error.kind()));
                obj.insert("message".into(), json!(error.to_string()));
                if let cspi_core::Error::NonPositiveWeight { m, weight } = error {
                    obj.insert("m".into(), json!(m));
                    obj.insert("weight".into(), output::float(*weight));
                }
                eprint!("{}", String::from_utf8_lossy(&output::render_json(&Value::Object(obj))));
                ExitCode::from(1)
            }
            CliError::Io(e) => {
                let obj = json!({"error": "io", "message": e.to_string()});
                eprint!("{}", String::from_utf8_lossy(&output::render_json(&obj)));
                ExitCode::from(1)
            }
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "cspi", version, about = "Exact partition functions from dual coherent-state path integrals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Z by one method: dual-h, dual-H, wrong-I, wrong-II, wrong-III, oracle, dyson, spin-z, spin-x
    Partition(Params),
    /// asinh-squeezed level exponents of the exact spectrum and the three wrong actions
    Figure2(Params),
    /// Finite-N dual sums against the continuum, with harmonic determinant columns
    Converge(Params),
    /// Spin partition function with the jump expansion (x) or f(S_z) comparison (z)
    Spin(Params),
    /// Reordering and symbol coefficient tables for q up to 12
    Symbol(Params),
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("CSPI_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("CSPI_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    let (params, handler): (Params, fn(&Params) -> Result<Vec<u8>, CliError>) = match cli.command {
        Command::Partition(p) => (p, commands::partition),
        Command::Figure2(p) => (p, commands::figure2),
        Command::Converge(p) => (p, commands::converge),
        Command::Spin(p) => (p, commands::spin),
        Command::Symbol(p) => (p, commands::symbol),
    };
    let params = params.merge_config()?;
    let bytes = handler(&params)?;
    output::emit(&bytes, params.output.as_deref())?;
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => e.report(),
    }
}
