//! Run configuration: the model parameters at top level plus one block per
//! command family.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::models::{ModelSpec, SpinCase};
use crate::opalg::Tolerances;
use crate::resolvent::{default_shifts, Shift};

pub const SCHEMA_VERSION: u32 = 1;

/// The published JSON schema for [`RunConfig`].
pub const SCHEMA: &str = include_str!("../../schema/run_config.schema.json");

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScanConfig {
    pub kz_min: f64,
    pub kz_max: f64,
    pub points: usize,
}

impl Default for ScanConfig {
    fn default() -> Self {
        ScanConfig {
            kz_min: -2.0,
            kz_max: 2.0,
            points: 81,
        }
    }
}

impl ScanConfig {
    pub fn grid(&self) -> Vec<f64> {
        let step = self.spacing();
        (0..self.points).map(|i| self.kz_min + step * i as f64).collect()
    }

    pub fn spacing(&self) -> f64 {
        (self.kz_max - self.kz_min) / (self.points - 1) as f64
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResolventConfig {
    /// Defaults to `{i, −i, 1 + i, 0.3 i mc², 2mc² + i}` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub shifts: Option<Vec<Shift>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitsConfig {
    pub c_list: Vec<f64>,
}

impl Default for LimitsConfig {
    fn default() -> Self {
        LimitsConfig {
            c_list: vec![1.0, 10.0, 100.0],
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub json_path: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub csv_path: Option<PathBuf>,
}

fn default_case() -> SpinCase {
    SpinCase::Dirac
}
fn two() -> f64 {
    2.0
}
fn one() -> f64 {
    1.0
}
fn zero() -> f64 {
    0.0
}
fn default_n_fock() -> usize {
    32
}
fn default_buffer() -> usize {
    4
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub schema_version: u32,
    #[serde(default = "default_case")]
    pub case: SpinCase,
    #[serde(default = "two")]
    pub g: f64,
    #[serde(default = "one")]
    pub omega_c: f64,
    #[serde(default = "zero")]
    pub k_z: f64,
    #[serde(default = "one")]
    pub m: f64,
    #[serde(default = "one")]
    pub c: f64,
    #[serde(default = "one")]
    pub hbar: f64,
    #[serde(default = "default_n_fock")]
    pub n_fock: usize,
    #[serde(default = "default_buffer")]
    pub buffer: usize,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub scan: ScanConfig,
    #[serde(default)]
    pub resolvent: ResolventConfig,
    #[serde(default)]
    pub limits: LimitsConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::from_spec(&ModelSpec::default())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("invalid configuration: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported schema_version {found}, expected {SCHEMA_VERSION}")]
    Version { found: u32 },
    #[error("invalid configuration: {0}")]
    Invalid(String),
}

impl RunConfig {
    pub fn from_spec(spec: &ModelSpec) -> Self {
        RunConfig {
            schema_version: SCHEMA_VERSION,
            case: spec.case,
            g: spec.g,
            omega_c: spec.omega_c,
            k_z: spec.k_z,
            m: spec.m,
            c: spec.c,
            hbar: spec.hbar,
            n_fock: spec.n_fock,
            buffer: spec.buffer,
            tolerances: spec.tolerances,
            scan: ScanConfig::default(),
            resolvent: ResolventConfig::default(),
            limits: LimitsConfig::default(),
            output: OutputConfig::default(),
        }
    }

    pub fn spec(&self) -> ModelSpec {
        ModelSpec {
            case: self.case,
            g: self.g,
            omega_c: self.omega_c,
            k_z: self.k_z,
            m: self.m,
            c: self.c,
            hbar: self.hbar,
            n_fock: self.n_fock,
            buffer: self.buffer,
            tolerances: self.tolerances,
        }
    }

    pub fn shifts(&self) -> Vec<Shift> {
        self.resolvent
            .shifts
            .clone()
            .unwrap_or_else(|| default_shifts(self.spec().rest_energy()))
    }

    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        let value: serde_json::Value = serde_json::from_str(text)?;
        if let Some(v) = value.get("schema_version").and_then(|v| v.as_u64()) {
            if v != SCHEMA_VERSION as u64 {
                return Err(ConfigError::Version { found: v as u32 });
            }
        }
        let cfg: RunConfig = serde_json::from_value(value)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(ConfigError::Version {
                found: self.schema_version,
            });
        }
        self.spec().validate().map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let s = &self.scan;
        if !(s.kz_min.is_finite() && s.kz_max.is_finite() && s.kz_min < s.kz_max) || s.points < 3 {
            return Err(ConfigError::Invalid(
                "scan needs finite kz_min < kz_max and at least 3 points".into(),
            ));
        }
        if let Some(shifts) = &self.resolvent.shifts {
            if shifts.is_empty() || shifts.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
                return Err(ConfigError::Invalid("resolvent shifts must be finite and non-empty".into()));
            }
        }
        let c = &self.limits.c_list;
        if c.is_empty() || c.iter().any(|v| !(v.is_finite() && *v > 0.0)) || c.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ConfigError::Invalid(
                "limits.c_list must be positive and strictly ascending".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config_gets_defaults() {
        let cfg = RunConfig::from_json(r#"{"schema_version": 1}"#).unwrap();
        assert_eq!(cfg, RunConfig::default());
        assert_eq!(cfg.spec(), ModelSpec::default());
        assert_eq!(cfg.scan.grid().len(), 81);
        assert!((cfg.scan.spacing() - 0.05).abs() < 1e-15);
        assert_eq!(cfg.shifts().len(), 5);
    }

    #[test]
    fn rejects_unknown_keys_and_versions() {
        assert!(matches!(
            RunConfig::from_json(r#"{"schema_version": 1, "omega": 2}"#),
            Err(ConfigError::Parse(_))
        ));
        assert!(matches!(
            RunConfig::from_json(r#"{"schema_version": 1, "scan": {"kz_min": 0, "kz_max": 1, "points": 5, "x": 1}}"#),
            Err(ConfigError::Parse(_))
        ));
        assert!(matches!(
            RunConfig::from_json(r#"{"schema_version": 2}"#),
            Err(ConfigError::Version { found: 2 })
        ));
        assert!(RunConfig::from_json(r#"{}"#).is_err());
        assert!(matches!(
            RunConfig::from_json(r#"{"schema_version": 1, "n_fock": 4, "buffer": 4}"#),
            Err(ConfigError::Invalid(_))
        ));
        assert!(matches!(
            RunConfig::from_json(r#"{"schema_version": 1, "limits": {"c_list": [10, 1]}}"#),
            Err(ConfigError::Invalid(_))
        ));
    }

    #[test]
    fn schema_lists_every_top_level_key() {
        let schema: serde_json::Value = serde_json::from_str(SCHEMA).unwrap();
        let props = schema["properties"].as_object().unwrap();
        let mut full = RunConfig::default();
        full.resolvent.shifts = Some(vec![Shift::new(0.0, 1.0)]);
        full.output.json_path = Some("r.json".into());
        full.output.csv_path = Some("r.csv".into());
        let value = serde_json::to_value(&full).unwrap();
        for (key, sub) in value.as_object().unwrap() {
            let p = props.get(key).unwrap_or_else(|| panic!("schema lacks {key}"));
            if let Some(obj) = sub.as_object() {
                let inner = p["properties"].as_object().unwrap();
                for k in obj.keys() {
                    assert!(inner.contains_key(k), "schema lacks {key}.{k}");
                }
                assert_eq!(p["additionalProperties"], false, "{key}");
            }
        }
        assert_eq!(props.len(), value.as_object().unwrap().len());
        assert_eq!(schema["additionalProperties"], false);
    }
}
