//! Experiment configuration (JSON). Unknown keys are rejected and every
//! validation error names the offending field.

use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::agora::MSource;
use crate::classifier::{Classifier, ClassifierKind};
use crate::error::{Error, Result};
use crate::geometry::{ManifoldSpec, Shape};
use crate::hyper::{HyperparamAtom, HyperparamSet, HyperparamSpace};
use crate::models::{BallMemoryClassifier, LogisticModel, MlpModel, OracleSocrates, RandomClassifier, MAX_NOISE_RATE};
use crate::tau::{TauFunction, TauMode, DEFAULT_MAX_REJECTIONS};
use crate::trainer::decode_theta;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ShapeName {
    Circle,
    Sphere,
    Segment,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifoldConfig {
    pub shape: ShapeName,
    #[serde(default)]
    pub radius: Option<f64>,
    #[serde(default)]
    pub length: Option<f64>,
    #[serde(default)]
    pub ambient_dim: Option<usize>,
    #[serde(default = "half")]
    pub positive_fraction: f64,
    #[serde(default)]
    pub mu_cap: Option<f64>,
}

fn half() -> f64 {
    0.5
}

impl ManifoldConfig {
    pub fn to_spec(&self) -> Result<ManifoldSpec> {
        let at = |f: &str, e: Error| Error::config(format!("manifold.{f}"), e.to_string());
        let shape = match self.shape {
            ShapeName::Circle | ShapeName::Sphere => {
                if self.length.is_some() {
                    return Err(Error::config("manifold.length", "only valid for a segment"));
                }
                let radius = self
                    .radius
                    .ok_or_else(|| Error::config("manifold.radius", "required for this shape"))?;
                if self.shape == ShapeName::Circle {
                    Shape::Circle { radius }
                } else {
                    Shape::Sphere { radius }
                }
            }
            ShapeName::Segment => {
                if self.radius.is_some() {
                    return Err(Error::config("manifold.radius", "not valid for a segment"));
                }
                Shape::Segment {
                    length: self
                        .length
                        .ok_or_else(|| Error::config("manifold.length", "required for a segment"))?,
                }
            }
        };
        let natural = match shape {
            Shape::Circle { .. } => 2,
            Shape::Sphere { .. } => 3,
            Shape::Segment { .. } => 1,
        };
        let mut spec = ManifoldSpec::new(shape, natural, 0.5).map_err(|e| match shape {
            Shape::Segment { .. } => at("length", e),
            _ => at("radius", e),
        })?;
        if let Some(n) = self.ambient_dim {
            spec = spec.with_ambient_dim(n).map_err(|e| at("ambient_dim", e))?;
        }
        spec = spec
            .with_positive_fraction(self.positive_fraction)
            .map_err(|e| at("positive_fraction", e))?;
        if let Some(c) = self.mu_cap {
            spec = spec.with_mu_cap(c).map_err(|e| at("mu_cap", e))?;
        }
        Ok(spec)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataConfig {
    pub d_size: usize,
    pub e_size: usize,
    #[serde(default = "yes")]
    pub d_representative: bool,
    /// Share of the manifold D is drawn from when not representative.
    #[serde(default = "half")]
    pub d_region_fraction: f64,
}

fn yes() -> bool {
    true
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TauConfig {
    pub rho: f64,
    #[serde(default = "faithful")]
    pub mode: TauMode,
    #[serde(default = "default_rejections")]
    pub max_rejections: usize,
}

fn faithful() -> TauMode {
    TauMode::Faithful
}

fn default_rejections() -> usize {
    DEFAULT_MAX_REJECTIONS
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct SocratesConfig {
    #[serde(default)]
    pub noise_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimaeusConfig {
    pub kind: ClassifierKind,
    /// Ball memory: defaults to the perturbation radius ρ/4.
    #[serde(default)]
    pub match_radius: Option<f64>,
    /// MLP hidden width (a `hidden` atom overrides it).
    #[serde(default)]
    pub hidden: Option<usize>,
    /// Random classifier: initial positive probability.
    #[serde(default)]
    pub p_pos: Option<f64>,
}

/// Either explicit sets (objects of key → value, in order) or a cartesian
/// grid (object of key → list of values; the last key varies fastest).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "snake_case")]
pub enum ThetaConfig {
    Sets(Vec<Map<String, Value>>),
    Grid(Map<String, Value>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub manifold: ManifoldConfig,
    pub data: DataConfig,
    pub tau: TauConfig,
    #[serde(default)]
    pub socrates: SocratesConfig,
    pub timaeus: TimaeusConfig,
    pub theta: ThetaConfig,
    #[serde(default)]
    pub m_source: MSource,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub parallel_workers: Option<usize>,
    /// Constant C multiplying the step-count bound in the run summary.
    #[serde(default = "one")]
    pub runtime_constant: f64,
}

fn one() -> f64 {
    1.0
}

/// Canonical text form of an atom value.
fn atom_text(field: &str, v: &Value) -> Result<String> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        Value::Bool(b) => Ok(b.to_string()),
        _ => Err(Error::config(field, "hyperparameter values must be strings, numbers or booleans")),
    }
}

impl ThetaConfig {
    pub fn to_space(&self) -> Result<HyperparamSpace> {
        let space = match self {
            ThetaConfig::Sets(sets) => {
                if sets.is_empty() {
                    return Err(Error::config("theta.sets", "must contain at least one set"));
                }
                let built = sets
                    .iter()
                    .enumerate()
                    .map(|(i, obj)| {
                        let atoms = obj
                            .iter()
                            .map(|(k, v)| Ok(HyperparamAtom::new(k.clone(), atom_text(&format!("theta.sets[{i}].{k}"), v)?)))
                            .collect::<Result<Vec<_>>>()?;
                        HyperparamSet::new(i, atoms).map_err(|e| Error::config(format!("theta.sets[{i}]"), e.to_string()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                HyperparamSpace::new(built)?
            }
            ThetaConfig::Grid(axes) => {
                if axes.is_empty() {
                    return Err(Error::config("theta.grid", "must contain at least one axis"));
                }
                let axes = axes
                    .iter()
                    .map(|(k, v)| {
                        let field = format!("theta.grid.{k}");
                        let values = v
                            .as_array()
                            .ok_or_else(|| Error::config(&field, "must be a list of values"))?;
                        if values.is_empty() {
                            return Err(Error::config(&field, "must not be empty"));
                        }
                        let texts = values.iter().map(|x| atom_text(&field, x)).collect::<Result<Vec<_>>>()?;
                        Ok((k.clone(), texts))
                    })
                    .collect::<Result<Vec<_>>>()?;
                HyperparamSpace::grid(&axes)?
            }
        };
        for s in space.sets() {
            decode_theta(s).map_err(|e| Error::config(format!("theta[{}]", s.id()), e.to_string()))?;
        }
        Ok(space)
    }
}

/// Everything derived from a validated configuration.
#[derive(Debug, Clone)]
pub struct Validated {
    pub spec: ManifoldSpec,
    pub tau: TauFunction,
    pub timaeus: Classifier,
    pub socrates: Classifier,
    pub theta: HyperparamSpace,
}

impl ExperimentConfig {
    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::config("config", e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::config("config", format!("cannot read {}: {e}", path.display())))?;
        ExperimentConfig::from_json(&text)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Checks every precondition of every module before anything runs.
    pub fn validate(&self) -> Result<Validated> {
        let spec = self.manifold.to_spec()?;
        let m = spec.ambient_dim();

        if self.data.d_size == 0 {
            return Err(Error::config("data.d_size", "must be ≥ 1"));
        }
        if self.data.e_size == 0 {
            return Err(Error::config("data.e_size", "must be ≥ 1"));
        }
        let f = self.data.d_region_fraction;
        if !(f > 0.0 && f <= 1.0) {
            return Err(Error::config("data.d_region_fraction", "must satisfy 0 < f ≤ 1"));
        }

        let tau = TauFunction::new(self.tau.rho, self.tau.mode, Some(spec.clone()))
            .and_then(|t| t.with_max_rejections(self.tau.max_rejections))
            .map_err(|e| Error::config("tau", e.to_string()))?;

        let noise = self.socrates.noise_rate;
        if !(0.0..=MAX_NOISE_RATE).contains(&noise) {
            return Err(Error::config("socrates.noise_rate", "must lie in [0, 1/3]"));
        }
        let socrates = Classifier::Oracle(OracleSocrates::new(spec.clone(), noise)?);

        let tc = &self.timaeus;
        let unused = |field: &str, set: bool| {
            if set {
                Err(Error::config(format!("timaeus.{field}"), format!("not used by kind {}", tc.kind.name())))
            } else {
                Ok(())
            }
        };
        let timaeus = match tc.kind {
            ClassifierKind::BallMemory => {
                unused("hidden", tc.hidden.is_some())?;
                unused("p_pos", tc.p_pos.is_some())?;
                let r = tc.match_radius.unwrap_or(tau.radius());
                Classifier::BallMemory(
                    BallMemoryClassifier::new(m, r).map_err(|e| Error::config("timaeus.match_radius", e.to_string()))?,
                )
            }
            ClassifierKind::Random => {
                unused("hidden", tc.hidden.is_some())?;
                unused("match_radius", tc.match_radius.is_some())?;
                Classifier::Random(
                    RandomClassifier::new(m, tc.p_pos.unwrap_or(0.5))
                        .map_err(|e| Error::config("timaeus.p_pos", e.to_string()))?,
                )
            }
            ClassifierKind::Logistic => {
                unused("hidden", tc.hidden.is_some())?;
                unused("match_radius", tc.match_radius.is_some())?;
                unused("p_pos", tc.p_pos.is_some())?;
                Classifier::Logistic(LogisticModel::new(m))
            }
            ClassifierKind::Mlp => {
                unused("match_radius", tc.match_radius.is_some())?;
                unused("p_pos", tc.p_pos.is_some())?;
                let h = tc.hidden.unwrap_or(8);
                if h == 0 {
                    return Err(Error::config("timaeus.hidden", "must be ≥ 1"));
                }
                Classifier::Mlp(MlpModel::new(m, h))
            }
            ClassifierKind::Oracle | ClassifierKind::NoisyOracle => {
                return Err(Error::config("timaeus.kind", "the oracle is a teacher, not a trainable model"));
            }
        };

        let theta = self.theta.to_space()?;
        if let Some(w) = self.parallel_workers {
            if w == 0 {
                return Err(Error::config("parallel_workers", "must be ≥ 1"));
            }
        }
        if !(self.runtime_constant.is_finite() && self.runtime_constant > 0.0) {
            return Err(Error::config("runtime_constant", "must be finite and > 0"));
        }
        Ok(Validated {
            spec,
            tau,
            timaeus,
            socrates,
            theta,
        })
    }
}
