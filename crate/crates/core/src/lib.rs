//! Train → augment → prune hyperparameter search for binary classifiers
//! under scarce, non-representative training data.
//!
//! The loop ([`agora::run_agora`]) trains one candidate per hyperparameter
//! set, perturbs the evaluation points the best candidate misses
//! ([`tau`]), has a teacher label the perturbations, grows the training set,
//! and drops every set sharing the atom most associated with the worst
//! scores. Synthetic manifolds ([`geometry`]) with known reach and volume
//! supply ground truth, sample-size bounds and cover checks; [`bounds`]
//! holds the loop's own accuracy and step-count bounds.

pub mod agora;
pub mod bounds;
pub mod classifier;
pub mod data;
pub mod error;
pub mod geometry;
pub mod harness;
pub mod hyper;
pub mod models;
pub mod rng;
pub mod tau;
pub mod trainer;

pub use classifier::{acc, err, estimate_true_error, Classifier, ClassifierKind};
pub use data::{Dataset, Label, LabeledPoint};
pub use error::{Error, Result};
pub use hyper::{HyperparamAtom, HyperparamSet, HyperparamSpace};
pub use rng::Seed;
