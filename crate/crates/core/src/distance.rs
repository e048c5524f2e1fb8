//! Model-to-model, model-to-formula and model-to-profile distances.
//!
//! Every supported distance factors through the Hamming count: the drastic
//! distance maps any positive count to 1 and a [`HammingTable`] remaps counts
//! through an explicit table.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::{model_list, Formula, Model, Profile, Universe, DEFAULT_ENUMERATION_LIMIT};

/// Remapping of Hamming counts. Entry `k` of `values` is the distance for
/// count `k`; counts past the end map to `default`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HammingTable {
    values: Vec<u64>,
    default: u64,
}

impl HammingTable {
    /// Builds a table from `(count, distance)` pairs with keys `0, 1, 2, ...`.
    pub fn new(pairs: &[(u64, u64)], default: u64) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidDistance("table must map 0".into()));
        }
        let mut values = Vec::with_capacity(pairs.len());
        for (expected, &(key, value)) in pairs.iter().enumerate() {
            if key != expected as u64 {
                return Err(Error::InvalidDistance(format!(
                    "table keys must be 0, 1, 2, ... without gaps; found {key} at position {expected}"
                )));
            }
            if key == 0 && value != 0 {
                return Err(Error::InvalidDistance("table must send 0 to 0".into()));
            }
            if key > 0 && value == 0 {
                return Err(Error::InvalidDistance(format!(
                    "table must send {key} to a positive value"
                )));
            }
            values.push(value);
        }
        if default == 0 {
            return Err(Error::InvalidDistance("default must be positive".into()));
        }
        Ok(HammingTable { values, default })
    }

    /// The table used for the IC4 counterexample: 0, 1, 2 for 2..=4, 5 beyond.
    pub fn coarse_example() -> Self {
        HammingTable::new(&[(0, 0), (1, 1), (2, 2), (3, 2), (4, 2), (5, 5)], 5)
            .expect("valid table")
    }

    /// Table equivalent to the drastic distance.
    pub fn binary() -> Self {
        HammingTable::new(&[(0, 0)], 1).expect("valid table")
    }

    pub fn apply(&self, count: u64) -> u64 {
        self.values
            .get(count as usize)
            .copied()
            .unwrap_or(self.default)
    }

    pub fn pairs(&self) -> Vec<(u64, u64)> {
        self.values
            .iter()
            .enumerate()
            .map(|(k, &v)| (k as u64, v))
            .collect()
    }

    pub fn default_value(&self) -> u64 {
        self.default
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum DistanceKind {
    Drastic,
    Hamming,
    Table(HammingTable),
}

impl DistanceKind {
    /// Distance for two models differing in `count` variables.
    pub fn from_hamming(&self, count: u64) -> u64 {
        match self {
            DistanceKind::Drastic => u64::from(count > 0),
            DistanceKind::Hamming => count,
            DistanceKind::Table(t) => t.apply(count),
        }
    }

    /// Largest value the distance takes over an `n`-variable universe.
    pub fn max_value(&self, n: usize) -> u64 {
        (0..=n as u64).map(|c| self.from_hamming(c)).max().unwrap_or(0)
    }

    /// Distinct values the distance takes over an `n`-variable universe.
    pub fn codomain(&self, n: usize) -> BTreeSet<u64> {
        (0..=n as u64).map(|c| self.from_hamming(c)).collect()
    }

    /// Whether `d(I,K) + d(K,J) >= d(I,J)` for all models of an
    /// `n`-variable universe. Counts `a = h(I,K)`, `b = h(K,J)`,
    /// `c = h(I,J)` co-occur iff `|a-b| <= c <= a+b`, `a+b+c` is even and
    /// `a+b+c <= 2n`.
    pub fn satisfies_triangle_inequality(&self, n: usize) -> bool {
        let n = n as u64;
        for a in 0..=n {
            for b in 0..=n {
                for c in a.abs_diff(b)..=(a + b).min(n) {
                    if (a + b + c) % 2 != 0 || a + b + c > 2 * n {
                        continue;
                    }
                    if self.from_hamming(a) + self.from_hamming(b) < self.from_hamming(c) {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Parses `drastic`, `hamming`, or a table given as JSON
    /// `{"table": [[0,0],[1,1]], "default": 2}`.
    pub fn parse(text: &str) -> Result<Self> {
        match text.trim() {
            "drastic" => Ok(DistanceKind::Drastic),
            "hamming" => Ok(DistanceKind::Hamming),
            other if other.starts_with('{') => {
                let spec: DistanceSpec = serde_json::from_str(other)
                    .map_err(|e| Error::InvalidDistance(e.to_string()))?;
                spec.into_kind()
            }
            other => Err(Error::InvalidDistance(format!("unknown distance `{other}`"))),
        }
    }

    pub fn to_spec(&self) -> DistanceSpec {
        match self {
            DistanceKind::Drastic => DistanceSpec::Name("drastic".into()),
            DistanceKind::Hamming => DistanceSpec::Name("hamming".into()),
            DistanceKind::Table(t) => DistanceSpec::Table {
                table: t.pairs().into_iter().map(|(k, v)| [k, v]).collect(),
                default: t.default,
            },
        }
    }
}

impl fmt::Display for DistanceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DistanceKind::Drastic => write!(f, "drastic"),
            DistanceKind::Hamming => write!(f, "hamming"),
            DistanceKind::Table(_) => {
                write!(f, "{}", serde_json::to_string(&self.to_spec()).unwrap_or_default())
            }
        }
    }
}

/// Serialized form of a [`DistanceKind`] inside instance files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DistanceSpec {
    Name(String),
    Table { table: Vec<[u64; 2]>, default: u64 },
}

impl DistanceSpec {
    pub fn into_kind(self) -> Result<DistanceKind> {
        match self {
            DistanceSpec::Name(name) => match name.as_str() {
                "drastic" => Ok(DistanceKind::Drastic),
                "hamming" => Ok(DistanceKind::Hamming),
                other => Err(Error::InvalidDistance(format!("unknown distance `{other}`"))),
            },
            DistanceSpec::Table { table, default } => {
                let pairs: Vec<(u64, u64)> = table.iter().map(|p| (p[0], p[1])).collect();
                Ok(DistanceKind::Table(HammingTable::new(&pairs, default)?))
            }
        }
    }
}

/// Distances from one model to each profile entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct DistanceVector(pub Vec<u64>);

impl DistanceVector {
    pub fn new(values: Vec<u64>) -> Self {
        DistanceVector(values)
    }

    pub fn zeros(m: usize) -> Self {
        DistanceVector(vec![0; m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[u64] {
        &self.0
    }

    pub fn get(&self, i: usize) -> u64 {
        self.0[i]
    }

    pub fn concat(&self, other: &DistanceVector) -> DistanceVector {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        DistanceVector(v)
    }

    pub fn add(&self, other: &DistanceVector) -> Result<DistanceVector> {
        check_len(self.len(), other.len())?;
        Ok(DistanceVector(
            self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect(),
        ))
    }
}

impl From<Vec<u64>> for DistanceVector {
    fn from(v: Vec<u64>) -> Self {
        DistanceVector(v)
    }
}

impl fmt::Display for DistanceVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, found })
    }
}

pub fn model_distance(kind: &DistanceKind, i: &Model, j: &Model) -> Result<u64> {
    Ok(kind.from_hamming(u64::from(i.hamming(j)?)))
}

/// Minimum distance from `i` to a model of `f`.
pub fn formula_distance(
    kind: &DistanceKind,
    i: &Model,
    f: &Formula,
    universe: &Universe,
) -> Result<u64> {
    let models = model_list(f, universe, DEFAULT_ENUMERATION_LIMIT)?;
    distance_to_models(kind, i, &models)
}

fn distance_to_models(kind: &DistanceKind, i: &Model, models: &[Model]) -> Result<u64> {
    let mut best: Option<u64> = None;
    for j in models {
        let d = model_distance(kind, i, j)?;
        if d == 0 {
            return Ok(0);
        }
        best = Some(best.map_or(d, |b| b.min(d)));
    }
    best.ok_or(Error::InfiniteDistance)
}

pub fn profile_distance_vector(
    kind: &DistanceKind,
    i: &Model,
    profile: &Profile,
    universe: &Universe,
) -> Result<DistanceVector> {
    DistanceOracle::new(kind.clone(), profile, universe)?.vector(i)
}

/// Indices of the profile entries satisfied by `i`.
pub fn subsat(i: &Model, profile: &Profile) -> BTreeSet<usize> {
    profile
        .entries()
        .iter()
        .enumerate()
        .filter(|(_, f)| f.evaluate(i))
        .map(|(idx, _)| idx)
        .collect()
}

/// Profile distances with the models of each entry enumerated once.
#[derive(Debug, Clone)]
pub struct DistanceOracle {
    kind: DistanceKind,
    entries: Vec<Vec<Model>>,
}

impl DistanceOracle {
    /// Fails with [`Error::InconsistentEntry`] naming the first unsatisfiable entry.
    pub fn new(kind: DistanceKind, profile: &Profile, universe: &Universe) -> Result<Self> {
        Self::from_formulae(kind, profile.entries(), universe)
    }

    pub fn from_formulae(kind: DistanceKind, formulae: &[Formula], universe: &Universe) -> Result<Self> {
        let mut entries = Vec::with_capacity(formulae.len());
        for (idx, f) in formulae.iter().enumerate() {
            let models = model_list(f, universe, DEFAULT_ENUMERATION_LIMIT)?;
            if models.is_empty() {
                return Err(Error::InconsistentEntry(idx));
            }
            entries.push(models);
        }
        Ok(DistanceOracle { kind, entries })
    }

    pub fn kind(&self) -> &DistanceKind {
        &self.kind
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn distance(&self, i: &Model, entry: usize) -> Result<u64> {
        distance_to_models(&self.kind, i, &self.entries[entry])
    }

    pub fn vector(&self, i: &Model) -> Result<DistanceVector> {
        (0..self.entries.len())
            .map(|e| self.distance(i, e))
            .collect::<Result<Vec<_>>>()
            .map(DistanceVector)
    }
}
