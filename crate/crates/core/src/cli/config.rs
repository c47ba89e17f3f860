use std::path::PathBuf;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chain::{ChainSpec, MAX_SITES};
use crate::decomposition::Split;
use crate::error::{Error, Result};
use crate::rmatrix::Kernel;
use crate::scalar::{Mode, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Xxx,
    Xxz,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Rmatrix,
    Rtt,
    Commutation,
    Vacuum,
    TransferCommute,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Rmatrix,
        Suite::Rtt,
        Suite::Commutation,
        Suite::Vacuum,
        Suite::TransferCommute,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Rmatrix => "rmatrix",
            Suite::Rtt => "rtt",
            Suite::Commutation => "commutation",
            Suite::Vacuum => "vacuum",
            Suite::TransferCommute => "transfer-commute",
        }
    }
}

/// Thresholds for float-mode checks. Exact-mode checks always require 0.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Operator identities and vector reconstructions.
    pub residual: f64,
    /// `max_k |𝒴(λₖ)|` of a solved root set.
    pub bethe: f64,
    /// Relative eigenvector residual of a solved root set.
    pub eigen: f64,
    /// Distance between a certified `τ` and its dense eigenvalue.
    pub spectrum: f64,
    /// Invariant-subspace residual for two probes of the transfer matrix.
    pub eigenspace: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            residual: 1e-11,
            bethe: 1e-10,
            eigen: 1e-10,
            spectrum: 1e-9,
            eigenspace: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SplitSelection {
    /// Only `"all"` is accepted.
    Keyword(String),
    Cuts(Vec<Vec<usize>>),
}

impl Default for SplitSelection {
    fn default() -> Self {
        SplitSelection::Keyword("all".into())
    }
}

fn default_suites() -> Vec<Suite> {
    Suite::ALL.to_vec()
}

fn default_samples() -> usize {
    5
}

fn default_guesses() -> usize {
    24
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: Model,
    #[serde(rename = "N", alias = "n")]
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub xi: Option<Vec<Scalar>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub homogeneous: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<Scalar>,
    /// Defaults to exact for xxx and float for xxz.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_suites")]
    pub suites: Vec<Suite>,
    #[serde(rename = "M", alias = "m", default)]
    pub m_values: Vec<usize>,
    #[serde(default)]
    pub splits: SplitSelection,
    /// Adds the homogeneous closed-form row even for inhomogeneous chains.
    #[serde(default)]
    pub closed_form: bool,
    /// Random draws per verification check.
    #[serde(default = "default_samples")]
    pub samples: usize,
    /// Seeded starting points per excitation number.
    #[serde(default = "default_guesses")]
    pub guesses: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub probe: Option<Scalar>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

fn invalid(message: impl Into<String>) -> Error {
    Error::ConfigInvalid(message.into())
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| invalid(e.to_string()))
    }

    pub fn mode(&self) -> Mode {
        self.mode.unwrap_or(match self.model {
            Model::Xxx => Mode::Exact,
            Model::Xxz => Mode::Float,
        })
    }

    /// Checks every field and builds the chain. No computation happens
    /// before this succeeds.
    pub fn validate(&self) -> Result<ChainSpec> {
        if self.n == 0 || self.n > MAX_SITES {
            return Err(invalid(format!(
                "N = {} must lie in 1..={MAX_SITES}",
                self.n
            )));
        }
        let xi = match (&self.xi, &self.homogeneous) {
            (Some(xi), None) => {
                if xi.len() != self.n {
                    return Err(invalid(format!(
                        "xi has {} entries but N = {}",
                        xi.len(),
                        self.n
                    )));
                }
                xi.clone()
            }
            (None, Some(value)) => vec![value.clone(); self.n],
            _ => {
                return Err(invalid(
                    "exactly one of \"xi\" and \"homogeneous\" is required",
                ))
            }
        };
        let kernel = match (self.model, &self.eta) {
            (Model::Xxx, None) => Kernel::Rational,
            (Model::Xxx, Some(_)) => return Err(invalid("eta applies to xxz only")),
            (Model::Xxz, Some(eta)) => {
                let eta: Complex64 = eta.to_complex();
                Kernel::trigonometric(eta).map_err(|e| invalid(e.to_string()))?
            }
            (Model::Xxz, None) => return Err(invalid("xxz requires eta")),
        };
        if let Some(&m) = self.m_values.iter().find(|&&m| m > self.n) {
            return Err(invalid(format!("M = {m} exceeds N = {}", self.n)));
        }
        self.splits()?;
        let t = &self.tolerances;
        if [t.residual, t.bethe, t.eigen, t.spectrum, t.eigenspace]
            .iter()
            .any(|x| !x.is_finite() || *x <= 0.0)
        {
            return Err(invalid("tolerances must be positive and finite"));
        }
        if self.samples == 0 || self.guesses == 0 {
            return Err(invalid("samples and guesses must be positive"));
        }
        let spec = ChainSpec::new(kernel, xi, self.mode()).map_err(|e| invalid(e.to_string()))?;
        if let Some(p) = &self.probe {
            spec.coerce(p).map_err(|e| invalid(format!("probe: {e}")))?;
        }
        Ok(spec)
    }

    pub fn splits(&self) -> Result<Vec<Split>> {
        match &self.splits {
            SplitSelection::Keyword(k) if k == "all" => Ok(Split::all(self.n)),
            SplitSelection::Keyword(k) => Err(invalid(format!("unknown split keyword {k:?}"))),
            SplitSelection::Cuts(list) => list
                .iter()
                .map(|cuts| Split::new(self.n, cuts.clone()).map_err(|e| invalid(e.to_string())))
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_config() {
        let cfg = RunConfig::from_json(r#"{"model":"xxx","N":3,"xi":["0","1/2",-1]}"#).unwrap();
        let spec = cfg.validate().unwrap();
        assert_eq!(spec.mode(), Mode::Exact);
        assert_eq!(spec.xi()[1], Scalar::ratio(1, 2));
        assert_eq!(cfg.suites, Suite::ALL.to_vec());
        assert_eq!(cfg.splits().unwrap().len(), 4);
    }

    #[test]
    fn rejects_bad_configs() {
        let cases = [
            r#"{"model":"xxx","N":3,"xi":["0","1"]}"#,
            r#"{"model":"xxx","N":2}"#,
            r#"{"model":"xxz","N":2,"homogeneous":0}"#,
            r#"{"model":"xxz","N":2,"homogeneous":0,"eta":0.5,"mode":"exact"}"#,
            r#"{"model":"xxx","N":2,"homogeneous":0,"M":[3]}"#,
            r#"{"model":"xxx","N":2,"homogeneous":0,"splits":[[2]]}"#,
            r#"{"model":"xxx","N":2,"homogeneous":0,"splits":"some"}"#,
            r#"{"model":"xxx","N":2,"homogeneous":0,"unknown":1}"#,
            r#"{"model":"xxx","N":13,"homogeneous":0}"#,
            r#"{"model":"xxx","N":2,"homogeneous":0,"suites":["nope"]}"#,
        ];
        for text in cases {
            let result = RunConfig::from_json(text).and_then(|c| c.validate());
            assert!(matches!(result, Err(Error::ConfigInvalid(_))), "{text}");
        }
    }

    #[test]
    fn xxz_defaults_to_float() {
        let cfg =
            RunConfig::from_json(r#"{"model":"xxz","N":2,"homogeneous":0,"eta":[0.5,0]}"#).unwrap();
        assert_eq!(cfg.validate().unwrap().mode(), Mode::Float);
    }
}
