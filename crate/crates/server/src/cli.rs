//! `thermoprop` command line.
//!
//! ```text
//! thermoprop validate "CCO"
//! thermoprop psat --smiles CCO --T 350
//! thermoprop tboil --smiles CCO --p 101325
//! thermoprop activity --smiles CCCCCC CCO --model unifac --T 330
//! thermoprop vle --smiles CCCCCC CCO --model nrtl-demo --T 400 --out vle.csv
//! thermoprop fit --smiles CCCCCC CCO --model unifac --variant 6 --T-range 300 360
//! thermoprop serve --port 8080
//! ```
//!
//! Results go to stdout as CSV (or JSON with `--json`), or to `--out`.
//! Errors are printed to stderr as the same JSON object the HTTP service
//! returns; input errors exit with 2.

use std::ffi::OsString;
use std::io::{IsTerminal, Write};
use std::net::{IpAddr, SocketAddr};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use thermoprop::activity::NrtlVariant;
use thermoprop::registry::ProviderRegistry;

use crate::config::Config;
use crate::error::ApiError;
use crate::task::{run_task, validate_smiles, Task, TaskInput, TaskRequest};

#[derive(Debug, Parser)]
#[command(name = "thermoprop", version, about = "Vapor pressures, activity coefficients, NRTL fits and VLE diagrams")]
struct Cli {
    /// TOML configuration file
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse and canonicalize a SMILES string
    Validate { smiles: String },
    /// Vapor pressure at a temperature
    Psat(TaskArgs),
    /// Boiling temperature at a pressure
    Tboil(TaskArgs),
    /// ln gamma curves of a binary mixture
    Activity(TaskArgs),
    /// Isothermal or isobaric phase diagram
    Vle(TaskArgs),
    /// Fit NRTL parameters to a model's activity curves
    Fit(TaskArgs),
    /// Run the HTTP service
    Serve {
        #[arg(long)]
        port: Option<u16>,
        #[arg(long)]
        bind: Option<IpAddr>,
    },
}

#[derive(Debug, Args)]
struct TaskArgs {
    /// One SMILES for pure-component tasks, two for mixtures
    #[arg(long, num_args = 1..=2, value_name = "SMILES")]
    smiles: Vec<String>,
    /// Activity model name (see `GET /v1/models`)
    #[arg(long)]
    model: Option<String>,
    /// Temperature in K
    #[arg(long = "T", value_name = "K", allow_negative_numbers = true)]
    temperature: Option<f64>,
    /// Pressure in Pa
    #[arg(long = "p", value_name = "PA", allow_negative_numbers = true)]
    pressure: Option<f64>,
    /// Fit temperature range in K
    #[arg(long = "T-range", num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
    temperature_range: Option<Vec<f64>>,
    /// NRTL variant: 3, 6 or 10 parameters
    #[arg(long, value_parser = parse_variant)]
    variant: Option<NrtlVariant>,
    /// Write the result here instead of stdout
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// JSON instead of CSV
    #[arg(long)]
    json: bool,
}

fn parse_variant(s: &str) -> Result<NrtlVariant, String> {
    let n: u8 = s.parse().map_err(|_| format!("`{s}` is not a number"))?;
    NrtlVariant::try_from(n)
}

impl TaskArgs {
    fn request(&self, task: Task) -> TaskRequest {
        TaskRequest {
            task,
            input: TaskInput {
                smiles: self.smiles.clone(),
                model: self.model.clone(),
                temperature: self.temperature,
                pressure: self.pressure,
                temperature_range: self.temperature_range.as_ref().map(|v| [v[0], v[1]]),
                variant: self.variant,
            },
        }
    }
}

fn report(err: &mut dyn Write, e: &ApiError) -> i32 {
    let _ = writeln!(err, "{}", e.to_json());
    e.exit_code()
}

fn emit(text: &str, out_file: Option<&PathBuf>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let written = match out_file {
        Some(path) => std::fs::write(path, text).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => out.write_all(text.as_bytes()).map_err(|e| e.to_string()),
    };
    match written {
        Ok(()) => 0,
        Err(m) => {
            let _ = writeln!(err, "error: {m}");
            1
        }
    }
}

/// Runs the command line with `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = e.exit_code();
            let target: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let config = match Config::load(cli.config.as_deref()) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    let registry = match config.build_registry() {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 1;
        }
    };
    match cli.command {
        Command::Validate { smiles } => match validate_smiles(&smiles, &registry) {
            Ok(c) => emit(&format!("{}\n", serde_json::to_string_pretty(&c).expect("serializes")), None, out, err),
            Err(e) => report(err, &e),
        },
        Command::Psat(a) => run_one(Task::VaporPressure, &a, &registry, out, err),
        Command::Tboil(a) => run_one(Task::BoilingTemperature, &a, &registry, out, err),
        Command::Activity(a) => run_one(Task::Activity, &a, &registry, out, err),
        Command::Vle(a) => run_one(Task::Vle, &a, &registry, out, err),
        Command::Fit(a) => run_one(Task::NrtlFit, &a, &registry, out, err),
        Command::Serve { port, bind } => serve(config, registry, port, bind, err),
    }
}

fn run_one(task: Task, args: &TaskArgs, registry: &ProviderRegistry, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match run_task(&args.request(task), registry) {
        Ok(result) => {
            let text = if args.json {
                format!("{}\n", serde_json::to_string_pretty(&result.to_json()).expect("serializes"))
            } else {
                result.to_csv()
            };
            emit(&text, args.out.as_ref(), out, err)
        }
        Err(e) => report(err, &e),
    }
}

fn serve(config: Config, registry: ProviderRegistry, port: Option<u16>, bind: Option<IpAddr>, err: &mut dyn Write) -> i32 {
    let _ = tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_ansi(std::io::stderr().is_terminal())
        .try_init();
    let ip = match bind {
        Some(ip) => ip,
        None => match config.bind.parse() {
            Ok(ip) => ip,
            Err(_) => {
                let _ = writeln!(err, "error: bind address `{}` is not an IP address", config.bind);
                return 1;
            }
        },
    };
    let addr = SocketAddr::new(ip, port.unwrap_or(config.port));
    let result = tokio::runtime::Runtime::new().and_then(|rt| rt.block_on(crate::http::serve(registry, addr)));
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: cannot serve on {addr}: {e}");
            1
        }
    }
}
