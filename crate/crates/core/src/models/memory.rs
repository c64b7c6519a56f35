use rand::Rng;

use crate::data::{Dataset, Label, LabeledPoint};
use crate::error::{Error, Result};
use crate::geometry::sq_dist;

use super::random::RandomClassifier;

/// Radius-limited nearest-neighbour memorizer.
///
/// A query takes the label of the nearest memorized point within
/// `match_radius` (first entry wins on ties); with no entry in range it falls
/// back to a [`RandomClassifier`] fit on the training labels. Entries are
/// never evicted or relabeled: training only appends points that are farther
/// than `match_radius` from every existing entry.
#[derive(Debug, Clone, PartialEq)]
pub struct BallMemoryClassifier {
    dim: usize,
    match_radius: f64,
    memory: Vec<LabeledPoint>,
    fallback: RandomClassifier,
}

impl BallMemoryClassifier {
    pub fn new(dim: usize, match_radius: f64) -> Result<Self> {
        if !(match_radius.is_finite() && match_radius > 0.0) {
            return Err(Error::range("match_radius must be > 0"));
        }
        Ok(BallMemoryClassifier {
            dim,
            match_radius,
            memory: Vec::new(),
            fallback: RandomClassifier::new(dim, 0.5)?,
        })
    }

    pub(crate) fn from_parts(dim: usize, match_radius: f64, memory: Vec<LabeledPoint>, p_pos: f64) -> Result<Self> {
        let mut bm = BallMemoryClassifier::new(dim, match_radius)?;
        bm.memory = memory;
        bm.fallback = RandomClassifier::new(dim, p_pos)?;
        Ok(bm)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn match_radius(&self) -> f64 {
        self.match_radius
    }

    pub fn memory(&self) -> &[LabeledPoint] {
        &self.memory
    }

    pub fn fallback(&self) -> &RandomClassifier {
        &self.fallback
    }

    /// Memorizes every point of `d` not already within `match_radius` of an
    /// entry, in order, and refits the fallback on `d`'s labels.
    pub fn memory_train(&self, d: &Dataset) -> Self {
        let r2 = self.match_radius * self.match_radius;
        let mut memory = self.memory.clone();
        for p in d.iter() {
            if !memory.iter().any(|m| sq_dist(&m.x, &p.x) <= r2) {
                memory.push(p.clone());
            }
        }
        BallMemoryClassifier {
            dim: self.dim,
            match_radius: self.match_radius,
            memory,
            fallback: self.fallback.fit(d),
        }
    }

    /// Label of the nearest entry within `match_radius`, if any.
    pub fn recall(&self, x: &[f64]) -> Option<Label> {
        let r2 = self.match_radius * self.match_radius;
        let mut best: Option<(f64, Label)> = None;
        for m in &self.memory {
            let d = sq_dist(&m.x, x);
            if d <= r2 && best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, m.y));
            }
        }
        best.map(|(_, y)| y)
    }

    pub fn predict<R: Rng + ?Sized>(&self, x: &[f64], rng: &mut R) -> Label {
        match self.recall(x) {
            Some(y) => y,
            None => self.fallback.predict(rng),
        }
    }
}
