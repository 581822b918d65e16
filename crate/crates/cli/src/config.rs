use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clab_core::rational::parse_rat;
use clab_core::{AbelianAction, ActionSpec, Theta};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

pub const SCHEMA: u32 = 1;
pub const DEFAULT_SAMPLES: usize = 200;
pub const DEFAULT_BUDGET: usize = 10_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Dot,
    Svg,
    Text,
}

/// Which resolution `triangulate` should contain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Selector {
    Min,
    Max,
    /// Position in the ordered list of admissible resolutions.
    Index(usize),
}

impl FromStr for Selector {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "min" => Ok(Selector::Min),
            "max" => Ok(Selector::Max),
            _ => s
                .parse()
                .map(Selector::Index)
                .map_err(|_| format!("resolution selector must be min, max or an index, got {s:?}")),
        }
    }
}

impl TryFrom<String> for Selector {
    type Error = String;

    fn try_from(s: String) -> Result<Self, String> {
        s.parse()
    }
}

impl From<Selector> for String {
    fn from(s: Selector) -> String {
        s.to_string()
    }
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Selector::Min => write!(f, "min"),
            Selector::Max => write!(f, "max"),
            Selector::Index(i) => write!(f, "{i}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "lowercase")]
pub enum Command {
    Group,
    Minres,
    Maxres,
    Resolutions,
    Triangulate { resolution: Selector },
    Moduli,
    Verify,
}

/// Everything a run depends on. Persisting it and passing it back through
/// `--config` reproduces the run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub schema: u32,
    pub action: ActionSpec,
    pub command: Command,
    pub seed: u64,
    pub samples: usize,
    pub budget: usize,
    #[serde(default)]
    pub theta: Option<Theta>,
    pub format: Format,
    #[serde(default)]
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn action(&self) -> Result<AbelianAction, String> {
        AbelianAction::try_from(self.action.clone()).map_err(|e| e.to_string())
    }

    /// Reads a bare config, or the `config` field of a previous JSON report.
    pub fn from_json(text: &str) -> Result<Self, String> {
        #[derive(Deserialize)]
        struct Embedded {
            config: RunConfig,
        }
        let value: serde_json::Value = serde_json::from_str(text).map_err(|e| format!("config: {e}"))?;
        let parsed = if value.get("config").is_some() {
            serde_json::from_value::<Embedded>(value).map(|e| e.config)
        } else {
            serde_json::from_value::<RunConfig>(value)
        };
        let config = parsed.map_err(|e| format!("config: {e}"))?;
        if config.schema != SCHEMA {
            return Err(format!("config: unsupported schema {}", config.schema));
        }
        Ok(config)
    }
}

/// `"a,b;c,d"`, weights taken modulo `n` (so negative weights are allowed).
pub fn parse_gens(text: &str, n: u32) -> Result<Vec<[u32; 2]>, String> {
    if n == 0 {
        return Err("--n must be positive".into());
    }
    text.split(';')
        .map(str::trim)
        .filter(|g| !g.is_empty())
        .map(|g| {
            let parts: Vec<&str> = g.split(',').map(str::trim).collect();
            let [a, b] = parts[..] else {
                return Err(format!("generator {g:?} must be a pair a,b"));
            };
            let weight = |w: &str| {
                w.parse::<i64>()
                    .map(|w| w.rem_euclid(n as i64) as u32)
                    .map_err(|_| format!("weight {w:?} is not an integer"))
            };
            Ok([weight(a)?, weight(b)?])
        })
        .collect()
}

pub fn parse_theta(text: &str) -> Result<Theta, String> {
    let values = text
        .split(',')
        .map(|v| parse_rat(v.trim()).map_err(|e| e.to_string()))
        .collect::<Result<Vec<_>, _>>()?;
    Theta::new(values).map_err(|e| e.to_string())
}
