//! Labeled points, datasets and the dataset CSV format.
//!
//! Equality between points is exact coordinate equality. Generated points are
//! never rounded, so two independently sampled reals collide with probability
//! zero; the checks exist for the measure-zero case and for user-supplied data.

use std::collections::HashSet;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, Result};

/// Binary label, always `0` or `1`.
pub type Label = u8;

#[derive(Debug, Clone, PartialEq)]
pub struct LabeledPoint {
    pub x: Vec<f64>,
    pub y: Label,
}

impl LabeledPoint {
    pub fn new(x: Vec<f64>, y: Label) -> Result<Self> {
        if y > 1 {
            return Err(Error::InvalidData(format!("label must be 0 or 1, got {y}")));
        }
        if let Some(v) = x.iter().find(|v| !v.is_finite()) {
            return Err(Error::InvalidData(format!("non-finite coordinate {v}")));
        }
        Ok(LabeledPoint { x, y })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }
}

/// Hashable exact-equality key for a coordinate vector. `-0.0` and `0.0`
/// compare equal as reals, so both map to the same key.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoordKey(Vec<u64>);

impl CoordKey {
    pub fn of(x: &[f64]) -> Self {
        CoordKey(
            x.iter()
                .map(|&v| if v == 0.0 { 0u64 } else { v.to_bits() })
                .collect(),
        )
    }
}

/// An ordered collection of labeled points sharing one dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    id: String,
    dim: usize,
    points: Vec<LabeledPoint>,
}

impl Dataset {
    pub fn empty(id: impl Into<String>, dim: usize) -> Self {
        Dataset {
            id: id.into(),
            dim,
            points: Vec::new(),
        }
    }

    pub fn new(id: impl Into<String>, dim: usize, points: Vec<LabeledPoint>) -> Result<Self> {
        for p in &points {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: p.dim(),
                });
            }
        }
        Ok(Dataset {
            id: id.into(),
            dim,
            points,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[LabeledPoint] {
        &self.points
    }

    pub fn iter(&self) -> std::slice::Iter<'_, LabeledPoint> {
        self.points.iter()
    }

    pub fn positive_fraction(&self) -> f64 {
        if self.points.is_empty() {
            return 0.0;
        }
        self.points.iter().filter(|p| p.y == 1).count() as f64 / self.points.len() as f64
    }

    pub fn keys(&self) -> HashSet<CoordKey> {
        self.points.iter().map(|p| CoordKey::of(&p.x)).collect()
    }

    pub fn contains_x(&self, x: &[f64]) -> bool {
        self.points.iter().any(|p| p.x.len() == x.len() && p.x.iter().zip(x).all(|(a, b)| a == b))
    }

    /// True when no coordinate vector occurs in both datasets.
    pub fn is_disjoint(&self, other: &Dataset) -> bool {
        let keys = self.keys();
        other.points.iter().all(|p| !keys.contains(&CoordKey::of(&p.x)))
    }

    /// Set union on coordinates: additions are appended in order unless their
    /// `x` already occurs, in which case the existing point (and label) wins.
    pub fn union_dedup<I>(&self, additions: I) -> Result<Dataset>
    where
        I: IntoIterator<Item = LabeledPoint>,
    {
        let mut keys = self.keys();
        let mut points = self.points.clone();
        for p in additions {
            if p.dim() != self.dim {
                return Err(Error::DimensionMismatch {
                    expected: self.dim,
                    found: p.dim(),
                });
            }
            if keys.insert(CoordKey::of(&p.x)) {
                points.push(p);
            }
        }
        Ok(Dataset {
            id: self.id.clone(),
            dim: self.dim,
            points,
        })
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        let mut header: Vec<String> = (0..self.dim).map(|i| format!("x{i}")).collect();
        header.push("y".into());
        out.write_record(&header)?;
        for p in &self.points {
            // `{}` on f64 prints the shortest string that round-trips.
            let mut row: Vec<String> = p.x.iter().map(|v| format!("{v}")).collect();
            row.push(p.y.to_string());
            out.write_record(&row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn read_csv<R: Read>(id: impl Into<String>, r: R) -> Result<Dataset> {
        let mut rdr = csv::Reader::from_reader(r);
        let header = rdr.headers()?.clone();
        let dim = header.len().checked_sub(1).ok_or_else(|| {
            Error::InvalidData("dataset header needs at least the `y` column".into())
        })?;
        for (i, name) in header.iter().enumerate() {
            let expected = if i == dim { "y".to_string() } else { format!("x{i}") };
            if name != expected {
                return Err(Error::InvalidData(format!(
                    "unexpected column `{name}` at position {i}, expected `{expected}`"
                )));
            }
        }
        let mut points = Vec::new();
        for rec in rdr.records() {
            let rec = rec?;
            let x = rec
                .iter()
                .take(dim)
                .map(|s| {
                    s.trim()
                        .parse::<f64>()
                        .map_err(|e| Error::InvalidData(format!("bad coordinate `{s}`: {e}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let y = match rec.get(dim).map(str::trim) {
                Some("0") => 0,
                Some("1") => 1,
                other => {
                    return Err(Error::InvalidData(format!("bad label {other:?}")));
                }
            };
            points.push(LabeledPoint::new(x, y)?);
        }
        Dataset::new(id, dim, points)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path)?;
        self.write_csv(std::io::BufWriter::new(f))
    }

    pub fn load(id: impl Into<String>, path: &Path) -> Result<Dataset> {
        let f = std::fs::File::open(path)?;
        Dataset::read_csv(id, std::io::BufReader::new(f))
    }
}
