//! Hyperparameter atoms, sets and spaces.
//!
//! An atom is a `(key, value)` pair with the value kept in a canonical text
//! form, so atom equality is plain string equality. The keys `eta`,
//! `batch_size`, `seed` and `epochs` are reserved for the trainer.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HyperparamAtom {
    pub key: String,
    pub value: String,
}

impl HyperparamAtom {
    pub fn new(key: impl Into<String>, value: impl Into<String>) -> Self {
        HyperparamAtom {
            key: key.into(),
            value: value.into(),
        }
    }
}

impl fmt::Display for HyperparamAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.key, self.value)
    }
}

/// One configuration θ: an ordered list of atoms with distinct keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperparamSet {
    id: usize,
    atoms: Vec<HyperparamAtom>,
}

impl HyperparamSet {
    pub fn new(id: usize, atoms: Vec<HyperparamAtom>) -> Result<Self> {
        for (i, a) in atoms.iter().enumerate() {
            if atoms[..i].iter().any(|b| b.key == a.key) {
                return Err(Error::InvalidHyperparameter(format!(
                    "duplicate hyperparameter key `{}` in set {id}",
                    a.key
                )));
            }
        }
        Ok(HyperparamSet { id, atoms })
    }

    /// Convenience constructor from `(key, value)` pairs.
    pub fn from_pairs<K, V>(id: usize, pairs: impl IntoIterator<Item = (K, V)>) -> Result<Self>
    where
        K: Into<String>,
        V: Into<String>,
    {
        HyperparamSet::new(
            id,
            pairs
                .into_iter()
                .map(|(k, v)| HyperparamAtom::new(k, v))
                .collect(),
        )
    }

    pub fn id(&self) -> usize {
        self.id
    }

    pub fn atoms(&self) -> &[HyperparamAtom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn contains(&self, atom: &HyperparamAtom) -> bool {
        self.atoms.contains(atom)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.atoms
            .iter()
            .find(|a| a.key == key)
            .map(|a| a.value.as_str())
    }
}

impl fmt::Display for HyperparamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{} {{", self.id)?;
        for (i, a) in self.atoms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, "}}")
    }
}

/// The search space Θ, in id order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HyperparamSpace {
    sets: Vec<HyperparamSet>,
}

impl HyperparamSpace {
    pub fn new(sets: Vec<HyperparamSet>) -> Result<Self> {
        for (i, s) in sets.iter().enumerate() {
            if sets[..i].iter().any(|t| t.id == s.id) {
                return Err(Error::InvalidHyperparameter(format!(
                    "duplicate hyperparameter set id {}",
                    s.id
                )));
            }
        }
        Ok(HyperparamSpace { sets })
    }

    /// Cartesian product over `(key, values)` axes; the last axis varies
    /// fastest and ids are assigned in enumeration order.
    pub fn grid(axes: &[(String, Vec<String>)]) -> Result<Self> {
        let mut combos: Vec<Vec<HyperparamAtom>> = vec![Vec::new()];
        for (key, values) in axes {
            if values.is_empty() {
                return Err(Error::InvalidHyperparameter(format!(
                    "grid axis `{key}` has no values"
                )));
            }
            combos = combos
                .into_iter()
                .flat_map(|prefix| {
                    values.iter().map(move |v| {
                        let mut c = prefix.clone();
                        c.push(HyperparamAtom::new(key.clone(), v.clone()));
                        c
                    })
                })
                .collect();
        }
        let sets = combos
            .into_iter()
            .enumerate()
            .map(|(i, atoms)| HyperparamSet::new(i, atoms))
            .collect::<Result<Vec<_>>>()?;
        HyperparamSpace::new(sets)
    }

    pub fn sets(&self) -> &[HyperparamSet] {
        &self.sets
    }

    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Largest set size |θ| in the space.
    pub fn max_set_size(&self) -> usize {
        self.sets.iter().map(HyperparamSet::len).max().unwrap_or(0)
    }

    pub fn ids(&self) -> Vec<usize> {
        self.sets.iter().map(HyperparamSet::id).collect()
    }

    /// Drops every set containing `atom`. The atom must occur somewhere, so
    /// the result is strictly smaller than `self`.
    pub fn prune(&self, atom: &HyperparamAtom) -> HyperparamSpace {
        let sets: Vec<_> = self
            .sets
            .iter()
            .filter(|s| !s.contains(atom))
            .cloned()
            .collect();
        assert!(
            sets.len() < self.sets.len(),
            "pruning atom {atom} occurs in no hyperparameter set"
        );
        HyperparamSpace { sets }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicate_keys_rejected() {
        assert!(HyperparamSet::from_pairs(0, [("eta", "0.1"), ("eta", "0.2")]).is_err());
    }

    #[test]
    fn duplicate_ids_rejected() {
        let a = HyperparamSet::from_pairs(0, [("eta", "0.1")]).unwrap();
        assert!(HyperparamSpace::new(vec![a.clone(), a]).is_err());
    }

    #[test]
    fn grid_enumerates_last_axis_fastest() {
        let g = HyperparamSpace::grid(&[
            ("eta".into(), vec!["0.1".into(), "0.01".into()]),
            ("batch_size".into(), vec!["16".into(), "32".into()]),
        ])
        .unwrap();
        assert_eq!(g.len(), 4);
        assert_eq!(g.sets()[1].get("eta"), Some("0.1"));
        assert_eq!(g.sets()[1].get("batch_size"), Some("32"));
        assert_eq!(g.sets()[2].get("eta"), Some("0.01"));
        assert_eq!(g.ids(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn prune_removes_every_set_with_atom() {
        let g = HyperparamSpace::grid(&[
            ("eta".into(), vec!["0.1".into(), "0.01".into()]),
            ("batch_size".into(), vec!["16".into(), "32".into()]),
        ])
        .unwrap();
        let atom = HyperparamAtom::new("eta", "0.1");
        let p = g.prune(&atom);
        assert_eq!(p.len(), 2);
        assert!(p.sets().iter().all(|s| !s.contains(&atom)));
    }

    #[test]
    #[should_panic(expected = "occurs in no hyperparameter set")]
    fn prune_with_absent_atom_panics() {
        let g = HyperparamSpace::grid(&[("eta".into(), vec!["0.1".into()])]).unwrap();
        g.prune(&HyperparamAtom::new("eta", "9"));
    }
}
