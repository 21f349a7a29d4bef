//! TOML run configuration.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::check::Check;
use crate::data::AlgebraSpec;
use crate::error::HarnessError;
use crate::family::Family;
use crate::trial::Judging;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            _ => Err(format!("unknown output format `{s}`")),
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Json => "json",
            OutputFormat::Csv => "csv",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub path: PathBuf,
    #[serde(default = "default_format")]
    pub format: OutputFormat,
}

fn default_format() -> OutputFormat {
    OutputFormat::Json
}

/// Algebra descriptor; weights default to the normalized trace.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraEntry {
    pub block_dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace_weights: Option<Vec<f64>>,
}

impl AlgebraEntry {
    pub fn spec(&self) -> AlgebraSpec {
        let total: usize = self.block_dims.iter().sum();
        let weights = self.trace_weights.clone().unwrap_or_else(|| {
            vec![1.0 / total.max(1) as f64; self.block_dims.len()]
        });
        AlgebraSpec {
            block_dims: self.block_dims.clone(),
            trace_weights: weights,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HarnessConfig {
    pub master_seed: u64,
    /// Trials per (algebra, family).
    pub trials: usize,
    /// Leading trials of each (algebra, family) that also run the superoperator checks.
    #[serde(default)]
    pub superop_trials: usize,
    /// Haar unitaries sampled per fidelity oracle.
    #[serde(default)]
    pub oracle_samples: usize,
    pub invertibility_floor: f64,
    pub families: Vec<Family>,
    #[serde(default)]
    pub skip: Vec<String>,
    #[serde(default)]
    pub tolerances: BTreeMap<String, f64>,
    pub algebras: Vec<AlgebraEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputConfig>,
}

impl HarnessConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn skip_set(&self) -> Result<BTreeSet<Check>, HarnessError> {
        self.skip
            .iter()
            .map(|s| s.parse::<Check>().map_err(HarnessError::Config))
            .collect()
    }

    /// Slack floors for every check, defaults overridden by the config.
    pub fn judging(&self) -> Result<Judging, HarnessError> {
        let mut judging = Judging {
            skip: self.skip_set()?,
            ..Judging::default()
        };
        for (name, &tol) in &self.tolerances {
            let check = name.parse::<Check>().map_err(HarnessError::Config)?;
            if !(tol >= 0.0) || !tol.is_finite() {
                return Err(HarnessError::Config(format!("tolerance `{name}` must be a finite value ≥ 0")));
            }
            judging.tolerances.insert(check, tol);
        }
        Ok(judging)
    }

    /// Checks that no trial of this config can produce.
    pub fn unexercised(&self) -> BTreeSet<Check> {
        let has = |f: Family| self.families.contains(&f);
        let mut out = BTreeSet::new();
        if self.superop_trials == 0 {
            out.extend(Check::ALL.into_iter().filter(|c| c.is_superop()));
        }
        if self.oracle_samples == 0 {
            out.insert(Check::OracleDominance);
            out.insert(Check::PolarAttainment);
        }
        if !has(Family::Unitary) {
            out.insert(Check::UnitaryEquality);
            if !has(Family::Pinching) {
                out.insert(Check::Sufficiency);
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let cfg = |m: String| Err(HarnessError::Config(m));
        if self.trials == 0 {
            return cfg("trials must be ≥ 1".into());
        }
        if self.families.is_empty() {
            return cfg("at least one channel family is required".into());
        }
        if self.algebras.is_empty() {
            return cfg("at least one algebra is required".into());
        }
        let floor = self.invertibility_floor;
        if !(floor > 0.0) || !floor.is_finite() {
            return cfg("invertibility_floor must be positive".into());
        }
        for entry in &self.algebras {
            let spec = entry.spec();
            let alg = spec
                .build()
                .map_err(|e| HarnessError::Config(format!("algebra {:?}: {e}", entry.block_dims)))?;
            if floor >= alg.floor_bound() {
                return cfg(format!(
                    "invertibility_floor {floor} is infeasible for {} (needs < {})",
                    spec.label(),
                    alg.floor_bound()
                ));
            }
        }
        let judging = self.judging()?;
        let silent: Vec<&str> = self
            .unexercised()
            .into_iter()
            .filter(|c| !judging.skip.contains(c))
            .map(Check::name)
            .collect();
        if !silent.is_empty() {
            return cfg(format!(
                "checks never exercised by this config must be listed in `skip`: {}",
                silent.join(", ")
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = r#"
master_seed = 7
trials = 3
superop_trials = 1
oracle_samples = 5
invertibility_floor = 1e-6
families = ["unitary", "pinching"]

[tolerances]
dpi = 1e-9

[[algebras]]
block_dims = [2]

[[algebras]]
block_dims = [2, 2]
trace_weights = [0.125, 0.375]
"#;

    #[test]
    fn parses_and_validates() {
        let c = HarnessConfig::from_toml(BASE).unwrap();
        c.validate().unwrap();
        assert_eq!(c.algebras[0].spec().trace_weights, vec![0.5]);
        assert_eq!(c.judging().unwrap().tolerance(Check::Dpi), 1e-9);
    }

    #[test]
    fn rejects_bad_values() {
        let bad = [
            BASE.replace("trials = 3", "trials = 0"),
            BASE.replace("dpi = 1e-9", "dpi = -1e-9"),
            BASE.replace("dpi = 1e-9", "nonsense = 1e-9"),
            BASE.replace("invertibility_floor = 1e-6", "invertibility_floor = 1.0"),
            BASE.replace("[0.125, 0.375]", "[0.2, 0.2]"),
        ];
        for text in bad {
            let c = HarnessConfig::from_toml(&text).unwrap();
            assert!(matches!(c.validate(), Err(HarnessError::Config(_))), "{text}");
        }
        assert!(HarnessConfig::from_toml(&BASE.replace("trials = 3", "trails = 3")).is_err());
    }

    #[test]
    fn unexercised_checks_must_be_skipped() {
        let text = BASE.replace("superop_trials = 1", "superop_trials = 0");
        let c = HarnessConfig::from_toml(&text).unwrap();
        assert!(c.validate().is_err());
        let mut c2 = c.clone();
        c2.skip = Check::ALL.iter().filter(|k| k.is_superop()).map(|k| k.name().to_string()).collect();
        c2.validate().unwrap();
        let mut c3 = HarnessConfig::from_toml(BASE).unwrap();
        c3.families = vec![Family::Trace];
        let missing = c3.unexercised();
        assert!(missing.contains(&Check::UnitaryEquality) && missing.contains(&Check::Sufficiency));
    }
}
