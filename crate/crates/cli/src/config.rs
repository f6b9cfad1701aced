//! JSON configuration documents, one per subcommand.
//!
//! Precedence: command-line flags override fields of the `--config` file,
//! which override the built-in defaults.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use walkbounds::graphwalk::{GraphFile, Mode};
use walkbounds::groups::GroupDescriptor;
use walkbounds::matapp::{BoundParams, GeneratorFile, GroupKind};

use crate::error::{CliError, CliResult};

/// Walk lengths: an explicit list or an inclusive range with a step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Lengths {
    List(Vec<usize>),
    Range {
        min: usize,
        max: usize,
        #[serde(default = "one")]
        step: usize,
    },
}

fn one() -> usize {
    1
}

impl Lengths {
    pub fn values(&self) -> CliResult<Vec<usize>> {
        let v: Vec<usize> = match self {
            Lengths::List(v) => v.clone(),
            Lengths::Range { min, max, step } => {
                if *step == 0 {
                    return Err(CliError::Config("length step must be positive".into()));
                }
                (*min..=*max).step_by(*step).collect()
            }
        };
        if v.is_empty() {
            return Err(CliError::Config("length range is empty".into()));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalksConfig {
    pub group: GroupDescriptor,
    pub graph: GraphFile,
    #[serde(default)]
    pub start: usize,
    #[serde(default)]
    pub end: usize,
    pub lengths: Lengths,
    #[serde(default)]
    pub mode: Mode,
}

impl Default for WalksConfig {
    fn default() -> Self {
        from_value(json!({
            "group": {"family": "cyclic", "m": 3},
            "graph": {"n": 2, "adjacency": [[1, 1], [1, 1]], "decorations": [0, 1]},
            "lengths": {"min": 1, "max": 20},
        }))
    }
}

/// A graph decorated with integer matrices, reduced modulo each modulus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftedGraph {
    pub adjacency: Vec<Vec<u64>>,
    pub decorations: Vec<Vec<Vec<i64>>>,
    #[serde(default)]
    pub undirected: bool,
}

/// The finite groups the decorations are read in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Ambient {
    /// `SL(n, Z/mZ)`.
    #[default]
    Sl,
    /// The subgroup generated by the reduced decorations.
    Generated,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauConfig {
    pub graph: LiftedGraph,
    pub moduli: Vec<u64>,
    #[serde(default)]
    pub ambient: Ambient,
    /// Externally supplied pair-separation constant, uniform in the modulus.
    #[serde(default)]
    pub epsilon1: Option<f64>,
}

impl Default for TauConfig {
    fn default() -> Self {
        from_value(json!({
            "graph": {
                "adjacency": [[1, 1], [1, 1]],
                "decorations": [[[1, 1], [0, 1]], [[1, 0], [1, 1]]],
            },
            "moduli": [3, 5, 7, 11, 13],
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum GeneratorSource {
    Builtin { kind: GroupKind, n: usize },
    Inline(GeneratorFile),
    Path(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PrimeSelection {
    pub c: f64,
    pub eps: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkGraph {
    pub adjacency: Vec<Vec<u64>>,
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IrreducibilityConfig {
    pub generators: GeneratorSource,
    pub lengths: Lengths,
    /// Fixed prime set; ignored when `prime_selection` is given.
    #[serde(default)]
    pub primes: Vec<u64>,
    /// One prime per length, chosen in a window around `c^{N/(n^2 - 1)}`.
    #[serde(default)]
    pub prime_selection: Option<PrimeSelection>,
    pub samples: usize,
    #[serde(default)]
    pub seed: u64,
    /// Walk graph over the generators; uniform words when absent.
    #[serde(default)]
    pub graph: Option<WalkGraph>,
    /// Constants for the predicted bounds written next to the measurements.
    #[serde(default)]
    pub predict: Option<BoundParams>,
}

impl Default for IrreducibilityConfig {
    fn default() -> Self {
        from_value(json!({
            "generators": {"builtin": {"kind": "sl", "n": 3}},
            "lengths": {"min": 10, "max": 60, "step": 10},
            "primes": [7],
            "samples": 10000,
            "seed": 42,
        }))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ShrinkConfig {
    pub lambda: f64,
    pub d: f64,
}

impl Default for ShrinkConfig {
    fn default() -> Self {
        Self { lambda: 0.5, d: 0.5 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralGapConfig {
    pub group: GroupDescriptor,
    pub graph: GraphFile,
}

impl Default for SpectralGapConfig {
    fn default() -> Self {
        from_value(json!({
            "group": {"family": "cyclic", "m": 3},
            "graph": {"n": 2, "adjacency": [[1, 1], [1, 1]], "decorations": [0, 1]},
        }))
    }
}

/// Source of the compression constant in an effective-rate schedule.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum RateSource {
    #[default]
    Exact,
    Quotient,
    Supplied,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KazhdanConfig {
    pub group: GroupDescriptor,
    /// Generating set; the decorations of `graph` when absent.
    #[serde(default)]
    pub generators: Option<Vec<Value>>,
    /// Use `S^{-1} S` and report the pair-separation constant.
    #[serde(default)]
    pub differences: bool,
    /// Optional decorated graph for an effective-rate schedule.
    #[serde(default)]
    pub graph: Option<GraphFile>,
    #[serde(default)]
    pub rate_source: RateSource,
    #[serde(default)]
    pub epsilon1: Option<f64>,
    #[serde(default)]
    pub start: usize,
    #[serde(default)]
    pub end: usize,
    #[serde(default = "twenty")]
    pub max_length: usize,
}

fn twenty() -> usize {
    20
}

impl Default for KazhdanConfig {
    fn default() -> Self {
        from_value(json!({
            "group": {"family": "cyclic", "m": 3},
            "generators": [1, 2],
        }))
    }
}

fn from_value<T: DeserializeOwned>(v: Value) -> T {
    serde_json::from_value(v).expect("built-in default configuration is valid")
}

/// Load a config document, or the default when no path is given.
pub fn load<T: DeserializeOwned + Default>(path: Option<&Path>) -> CliResult<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Config(format!("cannot read {}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))
        }
    }
}
