//! Command-line flags, TOML config files and the merged [`RunConfig`].
//!
//! Every parameter is kept as its original text until a command asks for it,
//! so a config echoed by `--dump-config` re-parses to the identical value and
//! parse errors can name the offending key.

use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Evaluate the CHSH value for one state and one set of settings.
    Eval,
    /// Sweep a real (alpha, omega) grid and write CSV or JSON.
    Scan,
    /// Check the closed forms against the truncated Fock-space oracle.
    Verify,
    /// Search for the largest CHSH violation.
    Optimize,
}

impl Command {
    /// Parameter keys the command understands.
    pub fn keys(self) -> &'static [&'static str] {
        match self {
            Self::Eval => &[
                "sigma",
                "eta",
                "phi",
                "z",
                "zp",
                "w",
                "wp",
                "paper-setting",
                "from-result",
                "cutoff",
            ],
            Self::Scan => &[
                "alpha-range",
                "omega-range",
                "steps",
                "phi",
                "z",
                "zp",
                "w",
                "wp",
                "paper-setting",
                "from-result",
                "out",
                "format",
            ],
            Self::Verify => &["cutoff", "samples", "seed", "literal-vacuum"],
            Self::Optimize => &[
                "sigma",
                "eta",
                "phi",
                "alpha-range",
                "omega-range",
                "setting-bound",
                "free-state",
                "budget",
                "restarts",
                "seed",
                "out",
                "format",
            ],
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Eval => "eval",
            Self::Scan => "scan",
            Self::Verify => "verify",
            Self::Optimize => "optimize",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "catbell",
    version,
    about = "Bell-CHSH correlations of entangled cat states with displaced vacuum-projector observables"
)]
pub struct Cli {
    /// Command to run. May be omitted when --config names one.
    #[arg(value_enum)]
    pub command: Option<Command>,

    /// TOML file with `command` and a `[parameters]` table; flags override it.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,

    /// Print the merged configuration as TOML and exit.
    #[arg(long)]
    pub dump_config: bool,

    /// Worker threads for scan and optimize (default: $CATBELL_WORKERS, else all cores).
    #[arg(long, value_name = "N")]
    pub workers: Option<usize>,

    #[command(flatten)]
    pub params: ParamArgs,
}

#[derive(Debug, Default, Args)]
pub struct ParamArgs {
    /// Mode-a cat amplitude, e.g. `0.4`, `1-0.5i` or `(1, -0.5)`.
    #[arg(long, allow_hyphen_values = true)]
    pub sigma: Option<String>,
    /// Mode-b cat amplitude.
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<String>,
    /// Relative phase of the two branches, e.g. `pi` or `1.3`.
    #[arg(long, allow_hyphen_values = true)]
    pub phi: Option<String>,
    /// Displacement of Alice's first observable.
    #[arg(long, allow_hyphen_values = true)]
    pub z: Option<String>,
    /// Displacement of Alice's second observable.
    #[arg(long, allow_hyphen_values = true)]
    pub zp: Option<String>,
    /// Displacement of Bob's first observable.
    #[arg(long, allow_hyphen_values = true)]
    pub w: Option<String>,
    /// Displacement of Bob's second observable.
    #[arg(long, allow_hyphen_values = true)]
    pub wp: Option<String>,
    /// Real alpha interval `min:max`.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_range: Option<String>,
    /// Real omega interval `min:max`.
    #[arg(long, allow_hyphen_values = true)]
    pub omega_range: Option<String>,
    /// Grid points per axis, `n` or `n_alpha,n_omega`.
    #[arg(long)]
    pub steps: Option<String>,
    /// Fock cutoff for the oracle.
    #[arg(long)]
    pub cutoff: Option<String>,
    /// Number of random tuples checked by verify.
    #[arg(long)]
    pub samples: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Objective evaluations shared by all restarts.
    #[arg(long)]
    pub budget: Option<String>,
    #[arg(long)]
    pub restarts: Option<String>,
    /// Per-component bound on the settings' real and imaginary parts.
    #[arg(long)]
    pub setting_bound: Option<String>,
    /// Free complex sigma, eta with components in [-BOUND, BOUND] and phi in [0, 2pi].
    #[arg(long, value_name = "BOUND")]
    pub free_state: Option<String>,
    /// Output file.
    #[arg(long)]
    pub out: Option<String>,
    /// Output format, `csv` or `json`.
    #[arg(long)]
    pub format: Option<String>,
    /// Optimizer JSON to take the state and settings from.
    #[arg(long, value_name = "FILE")]
    pub from_result: Option<String>,
    /// Use the settings z = z' = w = w' = 1 and phi = pi.
    #[arg(long)]
    pub paper_setting: bool,
    /// Also report the commutator of the two-mode-vacuum reflections.
    #[arg(long)]
    pub literal_vacuum: bool,
}

impl ParamArgs {
    /// Flags given on the command line, keyed by flag name.
    pub fn entries(&self) -> Vec<(&'static str, String)> {
        let text = [
            ("sigma", &self.sigma),
            ("eta", &self.eta),
            ("phi", &self.phi),
            ("z", &self.z),
            ("zp", &self.zp),
            ("w", &self.w),
            ("wp", &self.wp),
            ("alpha-range", &self.alpha_range),
            ("omega-range", &self.omega_range),
            ("steps", &self.steps),
            ("cutoff", &self.cutoff),
            ("samples", &self.samples),
            ("seed", &self.seed),
            ("budget", &self.budget),
            ("restarts", &self.restarts),
            ("setting-bound", &self.setting_bound),
            ("free-state", &self.free_state),
            ("out", &self.out),
            ("format", &self.format),
            ("from-result", &self.from_result),
        ];
        let flags = [
            ("paper-setting", self.paper_setting),
            ("literal-vacuum", self.literal_vacuum),
        ];
        text.into_iter()
            .filter_map(|(k, v)| v.clone().map(|v| (k, v)))
            .chain(
                flags
                    .into_iter()
                    .filter(|(_, on)| *on)
                    .map(|(k, _)| (k, "true".to_string())),
            )
            .collect()
    }
}

/// A command plus its parameters as text.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(default)]
    pub parameters: BTreeMap<String, String>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> std::result::Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("string map serializes")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_toml(&text).map_err(|message| CliError::Format {
            path: path.to_path_buf(),
            message,
        })
    }

    /// Merge the config file (if any) with command-line flags, which win.
    pub fn resolve(cli: &Cli) -> Result<Self> {
        let file = cli.config.as_deref().map(Self::load).transpose()?;
        let command = match (cli.command, file.as_ref().map(|f| f.command)) {
            (Some(a), Some(b)) if a != b => {
                return Err(CliError::Usage(format!(
                    "command `{a}` conflicts with `{b}` in the config file"
                )))
            }
            (Some(c), _) | (None, Some(c)) => c,
            (None, None) => {
                return Err(CliError::Usage(
                    "no command given; use one of eval, scan, verify, optimize or --config".into(),
                ))
            }
        };
        let mut parameters = file.map(|f| f.parameters).unwrap_or_default();
        for (k, v) in cli.params.entries() {
            parameters.insert(k.to_string(), v);
        }
        let config = Self {
            command,
            parameters,
        };
        config.check_keys()?;
        Ok(config)
    }

    pub fn check_keys(&self) -> Result<()> {
        let allowed = self.command.keys();
        match self
            .parameters
            .keys()
            .find(|k| !allowed.contains(&k.as_str()))
        {
            Some(k) => Err(CliError::param(
                k,
                format!("not a parameter of `{}`", self.command),
            )),
            None => Ok(()),
        }
    }

    pub fn params(&self) -> Params<'_> {
        Params {
            map: &self.parameters,
        }
    }
}

/// Typed, key-named access to a parameter map.
#[derive(Clone, Copy)]
pub struct Params<'a> {
    map: &'a BTreeMap<String, String>,
}

impl Params<'_> {
    pub fn has(&self, key: &str) -> bool {
        self.map.contains_key(key)
    }

    pub fn get<T>(
        &self,
        key: &str,
        parse: impl Fn(&str) -> std::result::Result<T, String>,
    ) -> Result<Option<T>> {
        self.map
            .get(key)
            .map(|v| parse(v).map_err(|m| CliError::param(key, m)))
            .transpose()
    }

    pub fn require<T>(
        &self,
        key: &str,
        parse: impl Fn(&str) -> std::result::Result<T, String>,
    ) -> Result<T> {
        self.get(key, parse)?
            .ok_or_else(|| CliError::param(key, "required but missing"))
    }

    pub fn or<T>(
        &self,
        key: &str,
        default: T,
        parse: impl Fn(&str) -> std::result::Result<T, String>,
    ) -> Result<T> {
        Ok(self.get(key, parse)?.unwrap_or(default))
    }

    pub fn flag(&self, key: &str) -> Result<bool> {
        self.or(key, false, crate::parse::boolean)
    }

    pub fn text(&self, key: &str) -> Option<&str> {
        self.map.get(key).map(String::as_str)
    }
}
