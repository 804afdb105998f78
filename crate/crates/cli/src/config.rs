//! Flat key-value experiment configuration with parameter sweeps.

use rtt_core::Frac;
use std::collections::BTreeMap;
use std::path::PathBuf;

/// Hard cap on the sweep cross-product size.
pub const SWEEP_CAP: usize = 10_000;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("line {line}: {detail}")]
    Parse { line: usize, detail: String },
    #[error("missing required key {0:?}")]
    MissingKey(&'static str),
    #[error("keys `construction` and `input` are mutually exclusive")]
    AmbiguousSource,
    #[error("sweep cross-product has {0} points, cap is {SWEEP_CAP}")]
    SweepTooLarge(usize),
    #[error("bad rational {0:?}")]
    BadRational(String),
}

/// Where the instance graphs come from: a seeded construction literal
/// (possibly containing `{name}` sweep placeholders) or a single graph file.
#[derive(Debug, Clone)]
pub enum InstanceSource {
    Construction(String),
    InputFile(PathBuf),
}

/// One named sweep axis with its list of values, in declaration order.
#[derive(Debug, Clone)]
pub struct Sweep {
    pub name: String,
    pub values: Vec<String>,
}

/// Parsed experiment configuration.
#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub source: InstanceSource,
    pub pattern: String,
    pub eta: Frac,
    pub alpha: Option<Frac>,
    pub r: usize,
    pub solver_budget: u64,
    pub sweeps: Vec<Sweep>,
    pub seed_base: u64,
    pub output: PathBuf,
}

/// One fully substituted sweep point.
#[derive(Debug, Clone)]
pub struct SweepPoint {
    pub index: usize,
    pub bindings: Vec<(String, String)>,
    pub seed: u64,
}

fn parse_frac(s: &str) -> Result<Frac, ConfigError> {
    let bad = || ConfigError::BadRational(s.to_string());
    let frac = match s.split_once('/') {
        Some((num, den)) => Frac::new(
            num.trim().parse().map_err(|_| bad())?,
            den.trim().parse().map_err(|_| bad())?,
        ),
        None => Frac::from_integer(s.trim().parse().map_err(|_| bad())?),
    };
    Ok(frac)
}

impl ExperimentConfig {
    /// Parses the flat `key = value` grammar. Lines starting with `#` and
    /// blank lines are skipped; `sweep <name> = v1 v2 ...` declares an axis.
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut kv: BTreeMap<String, String> = BTreeMap::new();
        let mut sweeps: Vec<Sweep> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let (key, value) = trimmed.split_once('=').ok_or(ConfigError::Parse {
                line,
                detail: "expected `key = value`".to_string(),
            })?;
            let key = key.trim();
            let value = value.trim();
            if let Some(name) = key.strip_prefix("sweep ") {
                let name = name.trim().to_string();
                let values: Vec<String> =
                    value.split_whitespace().map(|v| v.to_string()).collect();
                if values.is_empty() {
                    return Err(ConfigError::Parse {
                        line,
                        detail: format!("sweep {name} has no values"),
                    });
                }
                if sweeps.iter().any(|s| s.name == name) {
                    return Err(ConfigError::Parse {
                        line,
                        detail: format!("duplicate sweep axis {name}"),
                    });
                }
                sweeps.push(Sweep { name, values });
            } else if kv.insert(key.to_string(), value.to_string()).is_some() {
                return Err(ConfigError::Parse {
                    line,
                    detail: format!("duplicate key {key}"),
                });
            }
        }
        let source = match (kv.get("construction"), kv.get("input")) {
            (Some(_), Some(_)) => return Err(ConfigError::AmbiguousSource),
            (Some(c), None) => InstanceSource::Construction(c.clone()),
            (None, Some(p)) => InstanceSource::InputFile(PathBuf::from(p)),
            (None, None) => return Err(ConfigError::MissingKey("construction")),
        };
        let config = ExperimentConfig {
            source,
            pattern: kv
                .get("pattern")
                .ok_or(ConfigError::MissingKey("pattern"))?
                .clone(),
            eta: parse_frac(kv.get("eta").ok_or(ConfigError::MissingKey("eta"))?)?,
            alpha: kv.get("alpha").map(|s| parse_frac(s)).transpose()?,
            r: kv
                .get("r")
                .map(|s| {
                    s.parse().map_err(|_| ConfigError::Parse {
                        line: 0,
                        detail: format!("bad r {s:?}"),
                    })
                })
                .transpose()?
                .unwrap_or(2),
            solver_budget: kv
                .get("budget")
                .map(|s| {
                    s.parse().map_err(|_| ConfigError::Parse {
                        line: 0,
                        detail: format!("bad budget {s:?}"),
                    })
                })
                .transpose()?
                .unwrap_or(1_000_000),
            sweeps,
            seed_base: kv
                .get("seed_base")
                .map(|s| {
                    s.parse().map_err(|_| ConfigError::Parse {
                        line: 0,
                        detail: format!("bad seed_base {s:?}"),
                    })
                })
                .transpose()?
                .unwrap_or(0),
            output: PathBuf::from(kv.get("output").map(String::as_str).unwrap_or("out.csv")),
        };
        let points = config
            .sweeps
            .iter()
            .map(|s| s.values.len())
            .product::<usize>();
        if points > SWEEP_CAP {
            return Err(ConfigError::SweepTooLarge(points));
        }
        Ok(config)
    }

    /// Expands the sweep cross product in declaration order (last axis
    /// fastest). A `seed` axis overrides the derived per-point seed.
    pub fn points(&self) -> Vec<SweepPoint> {
        let total: usize = self.sweeps.iter().map(|s| s.values.len()).product();
        let mut out = Vec::with_capacity(total);
        for index in 0..total {
            let mut rem = index;
            let mut bindings = Vec::with_capacity(self.sweeps.len());
            for sweep in self.sweeps.iter().rev() {
                let k = rem % sweep.values.len();
                rem /= sweep.values.len();
                bindings.push((sweep.name.clone(), sweep.values[k].clone()));
            }
            bindings.reverse();
            let seed = bindings
                .iter()
                .find(|(name, _)| name == "seed")
                .and_then(|(_, v)| v.parse().ok())
                .unwrap_or(self.seed_base + index as u64);
            out.push(SweepPoint {
                index,
                bindings,
                seed,
            });
        }
        out
    }

    /// Substitutes `{name}` placeholders in the construction literal. The
    /// implicit `{seed}` binding is always available.
    pub fn substitute(&self, point: &SweepPoint) -> String {
        match &self.source {
            InstanceSource::InputFile(p) => p.display().to_string(),
            InstanceSource::Construction(template) => {
                let mut s = template.clone();
                for (name, value) in &point.bindings {
                    s = s.replace(&format!("{{{name}}}"), value);
                }
                s.replace("{seed}", &point.seed.to_string())
            }
        }
    }
}
