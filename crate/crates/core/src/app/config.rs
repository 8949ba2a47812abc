use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::darboux::Convention;
use crate::error::{Error, Result};
use crate::kink::{kink_params, solve_cubic};

/// Run configuration as read from a JSON file and `--set` overrides.
/// Every key is optional; [`RunConfig::resolve`] fills defaults and
/// derives `(beta, gamma)` from the kink endpoints.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub alpha1: Option<f64>,
    pub alpha2: Option<f64>,
    pub sigma: Option<f64>,
    pub beta: Option<f64>,
    pub gamma: Option<f64>,
    pub epsilon: Option<f64>,
    pub epsilon0: Option<f64>,
    pub amplitude: Option<f64>,
    pub lambda: Option<f64>,
    pub convention: Option<Convention>,
    pub xi_min: Option<f64>,
    pub xi_max: Option<f64>,
    pub n: Option<usize>,
}

/// Fully resolved configuration. Serializing it and reading it back
/// resolves to the same value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EffectiveConfig {
    pub alpha1: Option<f64>,
    pub alpha2: Option<f64>,
    pub sigma: Option<f64>,
    pub beta: f64,
    pub gamma: f64,
    pub epsilon: f64,
    pub epsilon0: f64,
    pub amplitude: f64,
    pub lambda: f64,
    pub convention: Convention,
    pub xi_min: f64,
    pub xi_max: f64,
    pub n: usize,
}

pub const DEFAULT_ALPHA1: f64 = 1.0;
pub const DEFAULT_ALPHA2: f64 = -1.5;
pub const DEFAULT_EPSILON: f64 = 0.1;
pub const DEFAULT_LAMBDA: f64 = 10.0;
pub const DEFAULT_XI_MIN: f64 = -8.0;
pub const DEFAULT_XI_MAX: f64 = 8.0;
pub const DEFAULT_N: usize = 4001;

const CONSISTENCY_TOL: f64 = 1e-10;

fn parse_f64(key: &str, value: &str) -> Result<f64> {
    value.trim().parse::<f64>().map_err(|_| Error::Config(format!("`{key}` expects a number, got `{value}`")))
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Applies one `key=value` override.
    pub fn set(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("expected key=value, got `{assignment}`")))?;
        let key = key.trim();
        let slot = match key {
            "alpha1" => &mut self.alpha1,
            "alpha2" => &mut self.alpha2,
            "sigma" => &mut self.sigma,
            "beta" => &mut self.beta,
            "gamma" => &mut self.gamma,
            "epsilon" => &mut self.epsilon,
            "epsilon0" => &mut self.epsilon0,
            "amplitude" => &mut self.amplitude,
            "lambda" => &mut self.lambda,
            "xi_min" => &mut self.xi_min,
            "xi_max" => &mut self.xi_max,
            "convention" => {
                self.convention = Some(value.trim().parse()?);
                return Ok(());
            }
            "n" => {
                let n = value.trim().parse::<usize>().map_err(|_| Error::Config(format!("`n` expects a count, got `{value}`")))?;
                self.n = Some(n);
                return Ok(());
            }
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        };
        *slot = Some(parse_f64(key, value)?);
        Ok(())
    }

    pub fn resolve(&self) -> Result<EffectiveConfig> {
        let alphas = match (self.alpha1, self.alpha2) {
            (Some(a1), Some(a2)) => {
                if let Some(s) = self.sigma {
                    for a in [a1, a2] {
                        if (a * a * a - a - s).abs() > CONSISTENCY_TOL {
                            return Err(Error::Config(format!("alpha = {a} is not a root of psi^3 - psi - {s}")));
                        }
                    }
                }
                Some((a1, a2))
            }
            (None, None) => match self.sigma {
                Some(s) => {
                    let r = solve_cubic(s).map_err(|e| Error::Config(e.to_string()))?;
                    Some((r.alpha1, r.alpha2))
                }
                None if self.beta.is_none() && self.gamma.is_none() => Some((DEFAULT_ALPHA1, DEFAULT_ALPHA2)),
                None => None,
            },
            _ => return Err(Error::Config("alpha1 and alpha2 must be given together".into())),
        };
        let derived = alphas
            .map(|(a1, a2)| kink_params(a1, a2, false).map_err(|e| Error::Config(e.to_string())))
            .transpose()?;
        let pick = |name: &str, explicit: Option<f64>, derived: Option<f64>| -> Result<f64> {
            match (explicit, derived) {
                (Some(e), Some(d)) if (e - d).abs() > CONSISTENCY_TOL * (1.0 + d.abs()) => Err(Error::Config(format!(
                    "{name} = {e} disagrees with the value {d} derived from alpha1, alpha2"
                ))),
                (Some(e), _) => Ok(e),
                (None, Some(d)) => Ok(d),
                (None, None) => Err(Error::Config(format!("{name} is required when alpha1, alpha2 are not given"))),
            }
        };
        let beta = pick("beta", self.beta, derived.map(|k| k.beta))?;
        let gamma = pick("gamma", self.gamma, derived.map(|k| k.gamma))?;
        let cfg = EffectiveConfig {
            alpha1: alphas.map(|a| a.0),
            alpha2: alphas.map(|a| a.1),
            sigma: self.sigma,
            beta,
            gamma,
            epsilon: self.epsilon.unwrap_or(DEFAULT_EPSILON),
            epsilon0: self.epsilon0.unwrap_or(0.0),
            amplitude: self.amplitude.unwrap_or(1.0),
            lambda: self.lambda.unwrap_or(DEFAULT_LAMBDA),
            convention: self.convention.unwrap_or(Convention::PaperFigure),
            xi_min: self.xi_min.unwrap_or(DEFAULT_XI_MIN),
            xi_max: self.xi_max.unwrap_or(DEFAULT_XI_MAX),
            n: self.n.unwrap_or(DEFAULT_N),
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

impl EffectiveConfig {
    pub fn defaults() -> Self {
        RunConfig::default().resolve().expect("defaults resolve")
    }

    fn validate(&self) -> Result<()> {
        let wrap = |e: Error| Error::Config(e.to_string());
        crate::susy::SusyParams::new(self.beta, self.gamma, self.epsilon, self.epsilon0, self.amplitude).map_err(wrap)?;
        crate::darboux::DeformationParams::new(self.lambda, self.convention).map_err(wrap)?;
        crate::numerics::make_grid(self.xi_min, self.xi_max, self.n).map_err(wrap)?;
        Ok(())
    }

    pub fn to_run_config(&self) -> RunConfig {
        RunConfig {
            alpha1: self.alpha1,
            alpha2: self.alpha2,
            sigma: self.sigma,
            beta: Some(self.beta),
            gamma: Some(self.gamma),
            epsilon: Some(self.epsilon),
            epsilon0: Some(self.epsilon0),
            amplitude: Some(self.amplitude),
            lambda: Some(self.lambda),
            convention: Some(self.convention),
            xi_min: Some(self.xi_min),
            xi_max: Some(self.xi_max),
            n: Some(self.n),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_run_config()).expect("config serializes")
    }
}
