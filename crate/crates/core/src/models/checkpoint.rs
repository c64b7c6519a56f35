use serde::{Deserialize, Serialize};

use crate::classifier::{Classifier, ClassifierKind};
use crate::data::LabeledPoint;
use crate::error::{Error, Result};
use crate::geometry::ManifoldSpec;

use super::{BallMemoryClassifier, GradientModel, LogisticModel, MlpModel, OracleSocrates, RandomClassifier};

/// JSON checkpoint record for any [`Classifier`].
///
/// `weights` is a flat array: logistic `[w…, b]`; MLP `[W1 (row-major), b1,
/// w2, b2]`; ball memory one `[x…, y]` row per entry; empty otherwise.
/// `architecture` is `[m, 1]`, `[m, hidden, 1]` or `[m]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Checkpoint {
    pub kind: ClassifierKind,
    pub m: usize,
    pub weights: Vec<f64>,
    pub architecture: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub match_radius: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_pos: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noise_rate: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub manifold: Option<ManifoldSpec>,
}

fn bad(msg: &str) -> Error {
    Error::InvalidData(format!("checkpoint: {msg}"))
}

impl Checkpoint {
    pub fn from_classifier(f: &Classifier) -> Checkpoint {
        let base = Checkpoint {
            kind: f.kind(),
            m: f.dim(),
            weights: Vec::new(),
            architecture: vec![f.dim()],
            match_radius: None,
            p_pos: None,
            noise_rate: None,
            manifold: None,
        };
        match f {
            Classifier::Random(rc) => Checkpoint {
                p_pos: Some(rc.p_pos()),
                ..base
            },
            Classifier::BallMemory(bm) => Checkpoint {
                weights: bm
                    .memory()
                    .iter()
                    .flat_map(|p| p.x.iter().copied().chain(std::iter::once(f64::from(p.y))))
                    .collect(),
                match_radius: Some(bm.match_radius()),
                p_pos: Some(bm.fallback().p_pos()),
                ..base
            },
            Classifier::Logistic(lm) => Checkpoint {
                weights: lm.params(),
                architecture: vec![lm.dim(), 1],
                ..base
            },
            Classifier::Mlp(mm) => Checkpoint {
                weights: mm.params(),
                architecture: vec![mm.dim(), mm.hidden(), 1],
                ..base
            },
            Classifier::Oracle(o) => Checkpoint {
                noise_rate: Some(o.noise_rate()),
                manifold: Some(o.spec().clone()),
                ..base
            },
        }
    }

    pub fn into_classifier(self) -> Result<Classifier> {
        let m = self.m;
        let expect_len = |n: usize| {
            if self.weights.len() == n {
                Ok(())
            } else {
                Err(bad(&format!("expected {n} weights, found {}", self.weights.len())))
            }
        };
        Ok(match self.kind {
            ClassifierKind::Random => {
                Classifier::Random(RandomClassifier::new(m, self.p_pos.ok_or_else(|| bad("missing p_pos"))?)?)
            }
            ClassifierKind::BallMemory => {
                if !self.weights.len().is_multiple_of(m + 1) {
                    return Err(bad("memory rows must have m + 1 entries"));
                }
                let memory = self
                    .weights
                    .chunks(m + 1)
                    .map(|row| {
                        let y = match row[m] {
                            0.0 => 0,
                            1.0 => 1,
                            _ => return Err(bad("memory label must be 0 or 1")),
                        };
                        LabeledPoint::new(row[..m].to_vec(), y)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Classifier::BallMemory(BallMemoryClassifier::from_parts(
                    m,
                    self.match_radius.ok_or_else(|| bad("missing match_radius"))?,
                    memory,
                    self.p_pos.unwrap_or(0.5),
                )?)
            }
            ClassifierKind::Logistic => {
                expect_len(m + 1)?;
                let mut lm = LogisticModel::new(m);
                lm.set_params(&self.weights);
                Classifier::Logistic(lm)
            }
            ClassifierKind::Mlp => {
                let hidden = match self.architecture.as_slice() {
                    [a, h, 1] if *a == m => *h,
                    _ => return Err(bad("mlp architecture must be [m, hidden, 1]")),
                };
                expect_len(hidden * m + 2 * hidden + 1)?;
                let mut mm = MlpModel::new(m, hidden);
                mm.set_params(&self.weights);
                Classifier::Mlp(mm)
            }
            ClassifierKind::Oracle | ClassifierKind::NoisyOracle => {
                let spec = self.manifold.ok_or_else(|| bad("oracle needs its manifold"))?;
                Classifier::Oracle(OracleSocrates::new(spec, self.noise_rate.unwrap_or(0.0))?)
            }
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Checkpoint> {
        Ok(serde_json::from_str(s)?)
    }
}
