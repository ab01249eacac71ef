//! Study output formats: versioned CSV and JSON tables, the plain-text
//! configuration format, and run manifests for exact replay.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::GmicP;
use crate::sim::{
    default_noise_grid, default_p_sweep, means_noise_grid, seven_level_noise_grid, MeansResult,
    PowerResult, Relationship, SimConfig,
};

pub const POWER_SCHEMA: &str = "gmic.power.v1";
pub const MEANS_SCHEMA: &str = "gmic.means.v1";
pub const MANIFEST_SCHEMA: &str = "gmic.manifest.v1";

const CONFIG_KEYS: &str =
    "n, reps, null_reps, level, seed, alpha, clump_factor, noise_grid, p_grid, relationships, statistics";

fn fmt_f64(v: f64) -> String {
    format!("{v:?}")
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt_f64).unwrap_or_default()
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders a power study as CSV, one row per cell, with a version comment
/// on the first line.
pub fn power_csv(result: &PowerResult) -> String {
    let mut out = format!("# {POWER_SCHEMA}\n");
    out.push_str("relationship,statistic,noise,reps,power,se,cutoff,error\n");
    for c in &result.cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            c.relationship,
            c.statistic,
            fmt_f64(c.noise),
            c.reps,
            fmt_opt(c.power),
            fmt_opt(c.se),
            fmt_f64(c.cutoff),
            csv_field(c.error.as_deref().unwrap_or("")),
        ));
    }
    out
}

/// Renders a mean study as CSV, one row per cell.
pub fn means_csv(result: &MeansResult) -> String {
    let mut out = format!("# {MEANS_SCHEMA}\n");
    out.push_str("relationship,statistic,noise,reps,mean,se,error\n");
    for c in &result.cells {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            c.relationship,
            c.statistic,
            fmt_f64(c.noise),
            c.reps,
            fmt_opt(c.mean),
            fmt_opt(c.se),
            csv_field(c.error.as_deref().unwrap_or("")),
        ));
    }
    out
}

#[derive(Serialize)]
struct PowerCellJson {
    noise: f64,
    reps: usize,
    power: Option<f64>,
    se: Option<f64>,
    cutoff: f64,
    error: Option<String>,
}

#[derive(Serialize)]
struct PowerJson {
    schema: &'static str,
    config: String,
    cutoffs: BTreeMap<String, f64>,
    results: BTreeMap<String, BTreeMap<String, Vec<PowerCellJson>>>,
}

/// Renders a power study as JSON nested relationship -> statistic -> cells.
pub fn power_json(result: &PowerResult) -> String {
    let mut results: BTreeMap<String, BTreeMap<String, Vec<PowerCellJson>>> = BTreeMap::new();
    for c in &result.cells {
        results
            .entry(c.relationship.to_string())
            .or_default()
            .entry(c.statistic.clone())
            .or_default()
            .push(PowerCellJson {
                noise: c.noise,
                reps: c.reps,
                power: c.power,
                se: c.se,
                cutoff: c.cutoff,
                error: c.error.clone(),
            });
    }
    let doc = PowerJson {
        schema: POWER_SCHEMA,
        config: to_canonical_string(&result.config),
        cutoffs: result.cutoffs.iter().cloned().collect(),
        results,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
    text.push('\n');
    text
}

#[derive(Serialize)]
struct MeanCellJson {
    noise: f64,
    reps: usize,
    mean: Option<f64>,
    se: Option<f64>,
    error: Option<String>,
}

#[derive(Serialize)]
struct MeansJson {
    schema: &'static str,
    config: String,
    results: BTreeMap<String, BTreeMap<String, Vec<MeanCellJson>>>,
}

/// Renders a mean study as JSON nested relationship -> statistic -> cells.
pub fn means_json(result: &MeansResult) -> String {
    let mut results: BTreeMap<String, BTreeMap<String, Vec<MeanCellJson>>> = BTreeMap::new();
    for c in &result.cells {
        results
            .entry(c.relationship.to_string())
            .or_default()
            .entry(c.statistic.clone())
            .or_default()
            .push(MeanCellJson {
                noise: c.noise,
                reps: c.reps,
                mean: c.mean,
                se: c.se,
                error: c.error.clone(),
            });
    }
    let doc = MeansJson {
        schema: MEANS_SCHEMA,
        config: to_canonical_string(&result.config),
        results,
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("serializable");
    text.push('\n');
    text
}

/// Writes a config as `key = value` lines that [`parse_config_str`] maps
/// back to an equivalent config.
pub fn to_canonical_string(config: &SimConfig) -> String {
    let mut out = String::new();
    out.push_str(&format!("n = {}\n", config.n));
    out.push_str(&format!("reps = {}\n", config.reps));
    out.push_str(&format!("null_reps = {}\n", config.null_reps));
    out.push_str(&format!("level = {}\n", fmt_f64(config.level)));
    out.push_str(&format!("seed = {}\n", config.seed));
    out.push_str(&format!("alpha = {}\n", fmt_f64(config.params.alpha)));
    out.push_str(&format!("clump_factor = {}\n", config.params.clump_factor));
    let noise: Vec<String> = config.noise_grid.iter().map(|s| fmt_f64(*s)).collect();
    out.push_str(&format!("noise_grid = {}\n", noise.join(", ")));
    if !config.p_grid.is_empty() {
        let ps: Vec<String> = config.p_grid.iter().map(|p| p.to_string()).collect();
        out.push_str(&format!("p_grid = {}\n", ps.join(", ")));
    }
    let rels: Vec<&str> = config.relationships.iter().map(|r| r.name()).collect();
    out.push_str(&format!("relationships = {}\n", rels.join(", ")));
    let stats: Vec<String> = config.statistics.iter().map(|s| s.label()).collect();
    out.push_str(&format!("statistics = {}\n", stats.join(", ")));
    out
}

/// Parses `key = value` configuration text on top of `base`, rejecting
/// unknown keys, and validates the result.
pub fn parse_config_str(text: &str, base: SimConfig) -> Result<SimConfig> {
    let mut config = base;
    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw_line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
            line: line_no,
            message: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = key.trim();
        let value = value.trim();
        let bad = |what: &str| Error::Parse {
            line: line_no,
            message: format!("cannot parse {what} from `{value}`"),
        };
        match key {
            "n" => config.n = value.parse().map_err(|_| bad("n"))?,
            "reps" => config.reps = value.parse().map_err(|_| bad("reps"))?,
            "null_reps" => config.null_reps = value.parse().map_err(|_| bad("null_reps"))?,
            "level" => config.level = value.parse().map_err(|_| bad("level"))?,
            "seed" => config.seed = value.parse().map_err(|_| bad("seed"))?,
            "alpha" => config.params.alpha = value.parse().map_err(|_| bad("alpha"))?,
            "clump_factor" => {
                config.params.clump_factor = value.parse().map_err(|_| bad("clump_factor"))?
            }
            "noise_grid" => {
                config.noise_grid = match value {
                    "default" => default_noise_grid(),
                    "means" => means_noise_grid(),
                    "seven" => seven_level_noise_grid(),
                    _ => split_list(value)
                        .map(|v| v.parse::<f64>().map_err(|_| bad("a noise level")))
                        .collect::<Result<_>>()?,
                }
            }
            "p_grid" => {
                config.p_grid = match value {
                    "sweep" => default_p_sweep(),
                    "" => Vec::new(),
                    _ => split_list(value)
                        .map(|v| v.parse::<GmicP>().map_err(|_| bad("an exponent")))
                        .collect::<Result<_>>()?,
                }
            }
            "relationships" => {
                config.relationships = match value {
                    "all" => Relationship::ALL.to_vec(),
                    _ => split_list(value)
                        .map(|v| {
                            v.parse::<Relationship>().map_err(|e| Error::Parse {
                                line: line_no,
                                message: e.to_string(),
                            })
                        })
                        .collect::<Result<_>>()?,
                }
            }
            "statistics" => {
                config.statistics = split_list(value)
                    .map(|v| {
                        v.parse().map_err(|e: Error| Error::Parse {
                            line: line_no,
                            message: e.to_string(),
                        })
                    })
                    .collect::<Result<_>>()?
            }
            other => {
                return Err(Error::Parse {
                    line: line_no,
                    message: format!("unknown key `{other}`; valid keys are {CONFIG_KEYS}"),
                })
            }
        }
    }
    config.validate()?;
    Ok(config)
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value
        .split(',')
        .map(str::trim)
        .filter(|v| !v.is_empty())
}

/// Record of one study run, written next to its outputs; replaying the
/// stored config reproduces those outputs byte for byte.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub schema: String,
    /// The subcommand that produced the outputs, `power` or `means`.
    pub command: String,
    /// Canonical configuration text.
    pub config: String,
    pub seed: u64,
    /// Crate version that wrote the outputs.
    pub version: String,
    pub created_unix: u64,
    /// File names written alongside this manifest.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(command: &str, config: &SimConfig, outputs: Vec<String>) -> Self {
        let created_unix = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            schema: MANIFEST_SCHEMA.to_string(),
            command: command.to_string(),
            config: to_canonical_string(config),
            seed: config.seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            created_unix,
            outputs,
        }
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("serializable");
        text.push('\n');
        text
    }

    pub fn write_to_path(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let manifest: RunManifest =
            serde_json::from_str(text).map_err(|e| Error::Format(format!("bad manifest: {e}")))?;
        if manifest.schema != MANIFEST_SCHEMA {
            return Err(Error::Format(format!(
                "unsupported manifest schema `{}` (expected `{MANIFEST_SCHEMA}`)",
                manifest.schema
            )));
        }
        Ok(manifest)
    }

    pub fn read_from_path(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    /// Reconstructs the study configuration recorded in this manifest.
    pub fn sim_config(&self) -> Result<SimConfig> {
        let base = match self.command.as_str() {
            "means" => SimConfig::means_defaults(),
            _ => SimConfig::power_defaults(),
        };
        parse_config_str(&self.config, base)
    }
}
