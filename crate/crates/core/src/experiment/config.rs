//! TOML experiment configuration.
//!
//! ```toml
//! [experiment]
//! kind = "coherence"      # gamma | nonmarkov-scan | coherence | revival-verify | longterm | grape
//! name = "fig3c"          # optional prefix of the output files
//!
//! [params]
//! alpha = 0.5
//! omega0 = 0.2514
//! omega_j = 50.0
//! omega_k = 1.0
//! t_max = 100.0
//! basis = "z"
//! members = 500
//! seed = 1
//!
//! [output]
//! dir = "out"
//! format = "csv"          # csv | json
//! ```
//!
//! `alpha`, `omega0`, `omega_j` and `omega_k` accept a list where a kind
//! sweeps them. Unknown keys are rejected.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use super::ExperimentError;
use crate::state::Basis;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Kind {
    Gamma,
    NonmarkovScan,
    Coherence,
    RevivalVerify,
    Longterm,
    Grape,
}

impl Kind {
    pub fn as_str(&self) -> &'static str {
        match self {
            Kind::Gamma => "gamma",
            Kind::NonmarkovScan => "nonmarkov-scan",
            Kind::Coherence => "coherence",
            Kind::RevivalVerify => "revival-verify",
            Kind::Longterm => "longterm",
            Kind::Grape => "grape",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// A scalar or a list of scalars.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Values {
    One(f64),
    Many(Vec<f64>),
}

impl Values {
    pub fn to_vec(&self) -> Vec<f64> {
        match self {
            Values::One(x) => vec![*x],
            Values::Many(v) => v.clone(),
        }
    }
}

impl From<f64> for Values {
    fn from(x: f64) -> Self {
        Values::One(x)
    }
}

impl From<Vec<f64>> for Values {
    fn from(v: Vec<f64>) -> Self {
        Values::Many(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// Every parameter any kind reads; each kind documents the subset it needs.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<Values>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega0: Option<Values>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_j: Option<Values>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega_k: Option<Values>,
    /// Spectral exponent `p` (`0` is white noise).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub basis: Option<Basis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,

    // gamma
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fitted: Option<bool>,

    // nonmarkov-scan
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega0_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega0_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub omega0_step: Option<f64>,

    // revival-verify
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub value_floor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prominence: Option<f64>,

    // longterm
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha_step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,

    // grape
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_qubits: Option<usize>,
    /// `identity`, `x`, `h`, `rz`, `haar` (1 qubit) or `cnot` (2 qubits).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    /// Rotation angle of the `rz` target.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angle: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub segments: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_iter: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub df_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target_fidelity: Option<f64>,
    /// Coefficient of a `σz` drift on every spin.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub drift_z: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "default_dir")]
    pub dir: PathBuf,
    #[serde(default)]
    pub format: Format,
}

fn default_dir() -> PathBuf {
    PathBuf::from(".")
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            dir: default_dir(),
            format: Format::Csv,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentSection,
    #[serde(default)]
    pub params: Params,
    #[serde(default)]
    pub output: OutputSection,
}

impl ExperimentConfig {
    pub fn new(kind: Kind, name: &str, params: Params) -> Self {
        Self {
            experiment: ExperimentSection {
                kind,
                name: Some(name.to_string()),
            },
            params,
            output: OutputSection::default(),
        }
    }

    pub fn parse(text: &str) -> Result<Self, ExperimentError> {
        toml::from_str(text).map_err(|e| ExperimentError::Config(e.to_string()))
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, ExperimentError> {
        let text = std::fs::read_to_string(path).map_err(|source| ExperimentError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&text).map_err(|e| match e {
            ExperimentError::Config(msg) => ExperimentError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serialises")
    }

    /// Output file stem prefix.
    pub fn label(&self) -> &str {
        self.experiment.name.as_deref().unwrap_or(self.experiment.kind.as_str())
    }

    /// `section.key = value` lines of the canonical TOML form.
    pub fn echo(&self) -> Vec<(String, String)> {
        let value = toml::Value::try_from(self).expect("config serialises");
        let mut out = Vec::new();
        if let toml::Value::Table(sections) = value {
            for (section, body) in sections {
                if let toml::Value::Table(keys) = body {
                    for (k, v) in keys {
                        out.push((format!("config.{section}.{k}"), v.to_string()));
                    }
                }
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_scalars_and_lists() {
        let cfg = ExperimentConfig::parse(
            r#"
            [experiment]
            kind = "gamma"
            [params]
            alpha = 1
            omega0 = [0.06285, 0.1258]
            omega_j = 50
            t_max = 100
            "#,
        )
        .unwrap();
        assert_eq!(cfg.experiment.kind, Kind::Gamma);
        assert_eq!(cfg.params.alpha, Some(Values::One(1.0)));
        assert_eq!(cfg.params.omega0.unwrap().to_vec(), vec![0.06285, 0.1258]);
        assert_eq!(cfg.output.format, Format::Csv);
    }

    #[test]
    fn unknown_field_is_reported_with_location() {
        let err = ExperimentConfig::parse("[experiment]\nkind = \"gamma\"\n[params]\nalpah = 0.5\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("alpah") && msg.contains("line 4"), "{msg}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn unknown_kind() {
        assert!(ExperimentConfig::parse("[experiment]\nkind = \"plot\"\n").is_err());
    }

    #[test]
    fn toml_round_trip() {
        let cfg = ExperimentConfig::parse("[experiment]\nkind = \"coherence\"\n[params]\nalpha = [0.5, 1.0]\nbasis = \"x\"\n").unwrap();
        assert_eq!(ExperimentConfig::parse(&cfg.to_toml()).unwrap(), cfg);
        assert!(cfg.echo().iter().any(|(k, v)| k == "config.params.basis" && v == "\"x\""));
    }
}
