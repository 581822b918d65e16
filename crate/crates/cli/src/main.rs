//! `clab`: resolutions of abelian quotient surface singularities, their
//! crepant threefold counterparts, and moduli of stable G-constellations.

mod commands;
mod config;
mod draw;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::{Failure, Outcome};
use crate::config::{
    parse_gens, parse_theta, Command, Format, RunConfig, Selector, DEFAULT_BUDGET, DEFAULT_SAMPLES, SCHEMA,
};
use clab_core::ActionSpec;

#[derive(Parser, Debug)]
#[command(name = "clab", version, about = "Resolutions of abelian quotient singularities C^2/G")]
struct Cli {
    /// Order of the ambient cyclic group of roots of unity.
    #[arg(long, global = true)]
    n: Option<u32>,
    /// Generator weights `a,b[;a,b...]`, acting by diag(z^a, z^b).
    #[arg(long, global = true, allow_hyphen_values = true)]
    gens: Option<String>,
    /// Stability parameter, one rational per character, summing to zero.
    #[arg(long, global = true, allow_hyphen_values = true)]
    theta: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Generic parameters sampled by `verify`.
    #[arg(long, global = true)]
    samples: Option<usize>,
    /// Draws allowed per resolution when `verify` searches for a realizing parameter.
    #[arg(long, global = true)]
    budget: Option<usize>,
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Replay a saved run configuration (or a previous JSON report); other flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Option<Sub>,
}

#[derive(Subcommand, Debug)]
enum Sub {
    /// Facts about the group: order, smallness, boundary divisor.
    Group,
    /// The minimal resolution.
    Minres,
    /// The maximal resolution.
    Maxres,
    /// All resolutions dominated by the maximal one.
    Resolutions,
    /// A crepant triangulation of the junior simplex containing a resolution.
    Triangulate {
        /// `min`, `max`, or an index into the `resolutions` listing.
        #[arg(long, default_value = "min")]
        resolution: Selector,
    },
    /// The moduli fan for a generic parameter (given, or sampled from the seed).
    Moduli,
    /// Audit that generic parameters realize exactly the dominated resolutions.
    Verify,
}

impl From<Sub> for Command {
    fn from(s: Sub) -> Command {
        match s {
            Sub::Group => Command::Group,
            Sub::Minres => Command::Minres,
            Sub::Maxres => Command::Maxres,
            Sub::Resolutions => Command::Resolutions,
            Sub::Triangulate { resolution } => Command::Triangulate { resolution },
            Sub::Moduli => Command::Moduli,
            Sub::Verify => Command::Verify,
        }
    }
}

fn resolve_config(cli: Cli) -> Result<RunConfig, String> {
    let base = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            Some(RunConfig::from_json(&text)?)
        }
        None => None,
    };
    let action = match (cli.n, &cli.gens, &base) {
        (Some(n), gens, _) => ActionSpec { n, gens: parse_gens(gens.as_deref().unwrap_or(""), n)? },
        (None, None, Some(b)) => b.action.clone(),
        (None, Some(_), _) => return Err("--gens needs --n".into()),
        (None, None, None) => return Err("--n is required".into()),
    };
    let command = match (cli.command, &base) {
        (Some(s), _) => s.into(),
        (None, Some(b)) => b.command,
        (None, None) => return Err("no subcommand given".into()),
    };
    let theta = match &cli.theta {
        Some(t) => Some(parse_theta(t)?),
        None => base.as_ref().and_then(|b| b.theta.clone()),
    };
    let pick = |flag: Option<usize>, saved: Option<usize>, default| flag.or(saved).unwrap_or(default);
    Ok(RunConfig {
        schema: SCHEMA,
        action,
        command,
        seed: cli.seed.or(base.as_ref().map(|b| b.seed)).unwrap_or(0),
        samples: pick(cli.samples, base.as_ref().map(|b| b.samples), DEFAULT_SAMPLES),
        budget: pick(cli.budget, base.as_ref().map(|b| b.budget), DEFAULT_BUDGET),
        theta,
        format: cli.format.or(base.as_ref().map(|b| b.format)).unwrap_or(Format::Json),
        out: cli.out.or(base.and_then(|b| b.out)),
    })
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("CLAB_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("CLAB_THREADS must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| e.to_string())
}

fn render(config: &RunConfig, outcome: &Outcome) -> Result<String, String> {
    match config.format {
        Format::Json => Ok(outcome.json.clone()),
        Format::Text => Ok(outcome.text.clone()),
        Format::Svg | Format::Dot => {
            let drawing = outcome.drawing.as_ref().ok_or("this command has no drawing; use json or text")?;
            Ok(if config.format == Format::Svg { draw::svg(drawing) } else { draw::dot(drawing) })
        }
    }
}

fn emit(config: &RunConfig, body: &str) -> Result<(), String> {
    match &config.out {
        Some(path) => std::fs::write(path, body).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout().lock().write_all(body.as_bytes()).map_err(|e| e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let usage = |msg: String| {
        eprintln!("clab: {msg}");
        ExitCode::from(2)
    };
    if let Err(msg) = configure_threads() {
        return usage(msg);
    }
    let config = match resolve_config(cli) {
        Ok(c) => c,
        Err(msg) => return usage(msg),
    };
    let outcome = match commands::run(&config) {
        Ok(o) => o,
        Err(Failure::Usage(msg)) => return usage(msg),
        Err(Failure::Runtime(msg)) => {
            eprintln!("clab: {msg}");
            return ExitCode::from(1);
        }
    };
    let body = match render(&config, &outcome) {
        Ok(b) => b,
        Err(msg) => return usage(msg),
    };
    if let Err(msg) = emit(&config, &body) {
        eprintln!("clab: {msg}");
        return ExitCode::from(1);
    }
    if outcome.passed {
        ExitCode::SUCCESS
    } else {
        eprintln!("clab: audit failed");
        ExitCode::from(1)
    }
}
