//! Weighted-sum merging under integrity constraints for every weight scheme.

use std::collections::{BTreeMap, BTreeSet};

use num_rational::BigRational;

use crate::distance::{check_len, DistanceKind, DistanceOracle, DistanceVector};
use crate::error::{Error, Result};
use crate::formula::{model_list, Formula, Model, ModelSet, Profile, Universe, DEFAULT_ENUMERATION_LIMIT};
use crate::lp::{self, Feasibility, LinSystem};
use crate::weights::{dominates, expand_scheme, strictly_dominates, weighted_distance, Expansion, WeightScheme, WeightVector};

/// Integrity constraints plus a profile over one universe, with the models of
/// the constraints enumerated once.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Instance {
    universe: Universe,
    constraints: Formula,
    profile: Profile,
    mu_models: Vec<Model>,
}

impl Instance {
    /// Validates that every formula fits the universe, that the constraints
    /// are consistent and that every profile entry is consistent.
    pub fn new(universe: Universe, constraints: Formula, profile: Profile) -> Result<Self> {
        if !constraints.fits(&universe) {
            return Err(Error::InvalidInstance("constraints mention unknown variables".into()));
        }
        for (idx, f) in profile.entries().iter().enumerate() {
            if !f.fits(&universe) {
                return Err(Error::InvalidInstance(format!(
                    "profile entry {idx} mentions unknown variables"
                )));
            }
            if model_list(f, &universe, DEFAULT_ENUMERATION_LIMIT)?.is_empty() {
                return Err(Error::InconsistentEntry(idx));
            }
        }
        let mu_models = model_list(&constraints, &universe, DEFAULT_ENUMERATION_LIMIT)?;
        if mu_models.is_empty() {
            return Err(Error::InconsistentConstraints);
        }
        Ok(Instance { universe, constraints, profile, mu_models })
    }

    pub fn universe(&self) -> &Universe {
        &self.universe
    }

    pub fn constraints(&self) -> &Formula {
        &self.constraints
    }

    pub fn profile(&self) -> &Profile {
        &self.profile
    }

    /// Number of profile entries.
    pub fn m(&self) -> usize {
        self.profile.len()
    }

    /// Number of variables.
    pub fn n(&self) -> usize {
        self.universe.len()
    }

    /// Models of the constraints in increasing order.
    pub fn mu_models(&self) -> &[Model] {
        &self.mu_models
    }

    pub fn with_constraints(&self, constraints: Formula) -> Result<Instance> {
        Instance::new(self.universe.clone(), constraints, self.profile.clone())
    }

    pub fn with_profile(&self, profile: Profile) -> Result<Instance> {
        Instance::new(self.universe.clone(), self.constraints.clone(), profile)
    }

    /// Each model of the constraints with its distance vector.
    pub fn points(&self, kind: &DistanceKind) -> Result<Vec<(Model, DistanceVector)>> {
        let oracle = DistanceOracle::new(kind.clone(), &self.profile, &self.universe)?;
        self.mu_models
            .iter()
            .map(|i| Ok((*i, oracle.vector(i)?)))
            .collect()
    }

    fn vector_of(&self, i: &Model, kind: &DistanceKind) -> Result<DistanceVector> {
        self.require_model(i)?;
        DistanceOracle::new(kind.clone(), &self.profile, &self.universe)?.vector(i)
    }

    fn require_model(&self, i: &Model) -> Result<()> {
        if i.len() != self.universe.len() {
            return Err(Error::UniverseMismatch);
        }
        if self.mu_models.binary_search(i).is_err() {
            return Err(Error::NotAModel);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MergeResult {
    pub models: ModelSet,
    /// A weight vector under which each selected model is minimal.
    pub witnesses: BTreeMap<Model, WeightVector>,
}

/// Sources, each a non-empty set of formulae.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceProfile {
    sources: Vec<Vec<Formula>>,
}

impl SourceProfile {
    pub fn new(sources: Vec<Vec<Formula>>) -> Result<Self> {
        if sources.is_empty() {
            return Err(Error::InvalidInstance("at least one source is required".into()));
        }
        if let Some(idx) = sources.iter().position(|s| s.is_empty()) {
            return Err(Error::InvalidInstance(format!("source {idx} is empty")));
        }
        Ok(SourceProfile { sources })
    }

    pub fn len(&self) -> usize {
        self.sources.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sources.is_empty()
    }

    pub fn sources(&self) -> &[Vec<Formula>] {
        &self.sources
    }

    /// All formulae, source by source.
    pub fn flatten(&self) -> Vec<Formula> {
        self.sources.iter().flatten().cloned().collect()
    }
}

/// Models of minimal weighted distance under `w`.
pub fn merge_fixed(inst: &Instance, w: &WeightVector, kind: &DistanceKind) -> Result<ModelSet> {
    check_len(inst.m(), w.len())?;
    merge_fixed_points(&inst.points(kind)?, w)
}

pub fn merge_fixed_points(points: &[(Model, DistanceVector)], w: &WeightVector) -> Result<ModelSet> {
    let mut best: Option<BigRational> = None;
    let mut out = ModelSet::new();
    for (model, d) in points {
        let v = weighted_distance(w, d)?;
        match &best {
            Some(b) if v > *b => {}
            Some(b) if v == *b => {
                out.insert(*model);
            }
            _ => {
                best = Some(v);
                out.clear();
                out.insert(*model);
            }
        }
    }
    Ok(out)
}

fn distinct_vectors(points: &[(Model, DistanceVector)]) -> Vec<DistanceVector> {
    points
        .iter()
        .map(|(_, d)| d.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect()
}

/// Integer weight vector making `d` minimal among `all`, if one exists.
pub fn positive_witness(d: &DistanceVector, all: &[DistanceVector]) -> Result<Option<WeightVector>> {
    let mut others = Vec::new();
    for o in all {
        if strictly_dominates(o, d)? {
            return Ok(None);
        }
        // rows against vectors that `d` dominates hold for every positive w
        if !dominates(d, o)? {
            others.push(o.clone());
        }
    }
    let system = lp::minimality_system(d, &others)?;
    match lp::feasible(&system)? {
        Feasibility::Infeasible => Ok(None),
        Feasibility::Witness(p) => Ok(Some(lp::integer_witness(&p)?)),
    }
}

/// Integer weight vector under which `i` has minimal weighted distance.
pub fn minimal_for_some_positive(
    i: &Model,
    inst: &Instance,
    kind: &DistanceKind,
) -> Result<Option<WeightVector>> {
    let d = inst.vector_of(i, kind)?;
    let all = distinct_vectors(&inst.points(kind)?);
    positive_witness(&d, &all)
}

/// Merge under every strictly positive weight vector, one LP per distinct
/// distance vector.
pub fn merge_all_positive_points(points: &[(Model, DistanceVector)]) -> Result<MergeResult> {
    let all = distinct_vectors(points);
    let mut verdicts: BTreeMap<&DistanceVector, Option<WeightVector>> = BTreeMap::new();
    for d in &all {
        verdicts.insert(d, positive_witness(d, &all)?);
    }
    let mut result = MergeResult::default();
    for (model, d) in points {
        if let Some(w) = &verdicts[d] {
            result.models.insert(*model);
            result.witnesses.insert(*model, w.clone());
        }
    }
    Ok(result)
}

/// Union of the fixed-weight merges over a finite list of vectors; each model
/// is credited to the first vector selecting it.
pub fn merge_finite_points(
    points: &[(Model, DistanceVector)],
    vectors: &[WeightVector],
) -> Result<MergeResult> {
    let mut result = MergeResult::default();
    for w in vectors {
        for model in merge_fixed_points(points, w)? {
            if result.models.insert(model) {
                result.witnesses.insert(model, w.clone());
            }
        }
    }
    Ok(result)
}

/// Merge of pre-computed points under a scheme; `Expert` must be resolved.
pub fn merge_points(points: &[(Model, DistanceVector)], m: usize, s: &WeightScheme) -> Result<MergeResult> {
    match expand_scheme(s, m)? {
        Expansion::AllPositive => merge_all_positive_points(points),
        Expansion::Finite(vectors) => merge_finite_points(points, &vectors),
    }
}

pub fn merge_scheme(inst: &Instance, s: &WeightScheme, kind: &DistanceKind) -> Result<MergeResult> {
    let s = s.resolved(kind, inst.n(), inst.m());
    merge_points(&inst.points(kind)?, inst.m(), &s)
}

/// Models whose distance vector is not strictly dominated.
pub fn undominated(inst: &Instance, kind: &DistanceKind) -> Result<ModelSet> {
    undominated_points(&inst.points(kind)?)
}

pub fn undominated_points(points: &[(Model, DistanceVector)]) -> Result<ModelSet> {
    let all = distinct_vectors(points);
    let mut out = ModelSet::new();
    for (model, d) in points {
        let mut dominated = false;
        for o in &all {
            if strictly_dominates(o, d)? {
                dominated = true;
                break;
            }
        }
        if !dominated {
            out.insert(*model);
        }
    }
    Ok(out)
}

/// For a model excluded under all positive weights, at most `m` other models
/// whose minimality constraints alone are infeasible. Subsets are scanned by
/// size, then lexicographically over the distinct vectors.
pub fn excluding_subset(i: &Model, inst: &Instance, kind: &DistanceKind) -> Result<Option<Vec<Model>>> {
    let d = inst.vector_of(i, kind)?;
    let points = inst.points(kind)?;
    let all = distinct_vectors(&points);
    if positive_witness(&d, &all)?.is_some() {
        return Ok(None);
    }
    let candidates: Vec<&DistanceVector> = all.iter().filter(|o| **o != d).collect();
    let m = inst.m();
    for size in 1..=m.min(candidates.len()) {
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let subset: Vec<DistanceVector> = idx.iter().map(|&k| candidates[k].clone()).collect();
            let system = lp::minimality_system(&d, &subset)?;
            if !lp::feasible(&system)?.is_feasible() {
                let models = subset
                    .iter()
                    .map(|v| {
                        points
                            .iter()
                            .find(|(_, pd)| pd == v)
                            .map(|(mdl, _)| *mdl)
                            .expect("vector comes from a model")
                    })
                    .collect();
                return Ok(Some(models));
            }
            if !next_combination(&mut idx, candidates.len()) {
                break;
            }
        }
    }
    Err(Error::MissingCertificate(m))
}

pub(crate) fn next_combination(idx: &mut [usize], n: usize) -> bool {
    let k = idx.len();
    let Some(pos) = (0..k).rev().find(|&p| idx[p] < n - k + p) else {
        return false;
    };
    idx[pos] += 1;
    for q in pos + 1..k {
        idx[q] = idx[q - 1] + 1;
    }
    true
}

/// A single weight vector under which every vector in `group` is minimal
/// among `all`, if one exists.
pub fn common_witness(group: &[DistanceVector], all: &[DistanceVector]) -> Result<Option<WeightVector>> {
    let Some(first) = group.first() else {
        return Err(Error::OutOfRange("group must not be empty".into()));
    };
    let m = first.len();
    let mut system = LinSystem::new(m)?;
    for d in group {
        for c in lp::minimality_system(d, all)?.constraints() {
            system.push(c.clone())?;
        }
    }
    match lp::feasible(&system)? {
        Feasibility::Infeasible => Ok(None),
        Feasibility::Witness(p) => Ok(Some(lp::integer_witness(&p)?)),
    }
}

/// Per-source aggregated distance vectors for the models of `mu`.
pub fn source_points(
    universe: &Universe,
    mu: &Formula,
    sp: &SourceProfile,
    kind: &DistanceKind,
) -> Result<Vec<(Model, DistanceVector)>> {
    if !mu.fits(universe) {
        return Err(Error::InvalidInstance("constraints mention unknown variables".into()));
    }
    let oracles = sp
        .sources()
        .iter()
        .map(|s| DistanceOracle::from_formulae(kind.clone(), s, universe))
        .collect::<Result<Vec<_>>>()?;
    let models = model_list(mu, universe, DEFAULT_ENUMERATION_LIMIT)?;
    if models.is_empty() {
        return Err(Error::InconsistentConstraints);
    }
    models
        .into_iter()
        .map(|i| {
            let d = oracles
                .iter()
                .map(|o| Ok(o.vector(&i)?.values().iter().sum()))
                .collect::<Result<Vec<u64>>>()?;
            Ok((i, DistanceVector::new(d)))
        })
        .collect()
}

/// Merge where each source contributes the sum of its formulae's distances.
pub fn multi_source_merge(
    universe: &Universe,
    mu: &Formula,
    sp: &SourceProfile,
    s: &WeightScheme,
    kind: &DistanceKind,
) -> Result<MergeResult> {
    let points = source_points(universe, mu, sp, kind)?;
    let m = sp.len();
    let s = match s {
        WeightScheme::Expert(None) => {
            let largest = sp.sources().iter().map(Vec::len).max().unwrap_or(1) as u64;
            WeightScheme::Expert(Some((kind.max_value(universe.len()) * largest * m as u64 + 1).max(2)))
        }
        other => other.clone(),
    };
    merge_points(&points, m, &s)
}
