//! Per-instance checkers for the IC postulates, majority, arbitration and the
//! disjunctive property, plus the closest-pairs operator.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use serde::Serialize;

use crate::distance::{DistanceKind, HammingTable};
use crate::error::{Error, Result};
use crate::formula::{equivalent, model_list, parse_formula, Formula, Model, ModelSet, Profile, Universe, DEFAULT_ENUMERATION_LIMIT};
use crate::instancegen::{model_at, random_instance, random_suite, realize, VectorSpec};
use crate::merge::{merge_scheme, Instance, MergeResult};
use crate::weights::{WeightScheme, WeightVector};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorConfig {
    pub kind: DistanceKind,
    pub scheme: WeightScheme,
}

impl OperatorConfig {
    pub fn new(kind: DistanceKind, scheme: WeightScheme) -> Self {
        OperatorConfig { kind, scheme }
    }

    pub fn merge(&self, inst: &Instance) -> Result<MergeResult> {
        merge_scheme(inst, &self.scheme, &self.kind)
    }

    /// Merge under `inst`'s profile and the given constraints; inconsistent
    /// constraints give the empty result.
    fn merge_with(&self, inst: &Instance, constraints: Formula) -> Result<MergeResult> {
        match inst.with_constraints(constraints) {
            Ok(i) => self.merge(&i),
            Err(Error::InconsistentConstraints) => Ok(MergeResult::default()),
            Err(e) => Err(e),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    /// The postulate's premise does not hold on this input.
    VacuousPass,
    Fail,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::VacuousPass => "vacuous-pass",
            Status::Fail => "fail",
        })
    }
}

/// Evidence for a failure: the offending models and weight vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub note: String,
    pub models: Vec<String>,
    pub weights: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl Verdict {
    pub fn pass() -> Self {
        Verdict { status: Status::Pass, witness: None }
    }

    pub fn vacuous() -> Self {
        Verdict { status: Status::VacuousPass, witness: None }
    }

    fn fail(note: impl Into<String>, universe: &Universe, models: &[Model], weights: &[&WeightVector]) -> Self {
        Verdict {
            status: Status::Fail,
            witness: Some(Witness {
                note: note.into(),
                models: models.iter().map(|m| m.display(universe).to_string()).collect(),
                weights: weights.iter().map(|w| w.to_string()).collect(),
            }),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Postulate {
    Ic0,
    Ic1,
    Ic2,
    Ic3,
    Ic4,
    Ic5,
    Ic6,
    Ic7,
    Ic8,
}

/// Extra input some postulates need.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum Aux {
    #[default]
    None,
    /// Second profile (and constraints) to compare against; entry `i` must
    /// be equivalent to entry `permutation[i]` of the instance.
    Equivalent {
        profile: Profile,
        permutation: Vec<usize>,
        constraints: Formula,
    },
    /// Split after `k` entries with the scheme for each part; the whole is
    /// merged with their concatenation product.
    Split {
        k: usize,
        left: WeightScheme,
        right: WeightScheme,
    },
    /// Additional constraints `mu'`.
    Constraints(Formula),
}

fn witness_of<'a>(r: &'a MergeResult, m: &Model) -> Vec<&'a WeightVector> {
    r.witnesses.get(m).into_iter().collect()
}

fn satisfies_any(profile: &[Formula], m: &Model) -> bool {
    profile.iter().any(|f| f.evaluate(m))
}

/// Evaluates one postulate on one instance.
pub fn check_postulate(id: Postulate, cfg: &OperatorConfig, inst: &Instance, aux: &Aux) -> Result<Verdict> {
    let u = inst.universe();
    match id {
        Postulate::Ic0 => {
            let r = cfg.merge(inst)?;
            match r.models.iter().find(|m| !inst.constraints().evaluate(m)) {
                Some(bad) => Ok(Verdict::fail("merged model violates the constraints", u, &[*bad], &witness_of(&r, bad))),
                None => Ok(Verdict::pass()),
            }
        }
        Postulate::Ic1 => {
            let r = cfg.merge(inst)?;
            if r.models.is_empty() {
                Ok(Verdict::fail("consistent constraints, empty merge", u, &[], &[]))
            } else {
                Ok(Verdict::pass())
            }
        }
        Postulate::Ic2 => {
            let conj = Formula::conjunction(inst.profile().entries().iter().cloned()).and(inst.constraints().clone());
            let expected: ModelSet = model_list(&conj, u, DEFAULT_ENUMERATION_LIMIT)?.into_iter().collect();
            if expected.is_empty() {
                return Ok(Verdict::vacuous());
            }
            let r = cfg.merge(inst)?;
            match r.models.symmetric_difference(&expected).next() {
                Some(diff) => Ok(Verdict::fail(
                    "merge differs from the conjunction of profile and constraints",
                    u,
                    &[*diff],
                    &witness_of(&r, diff),
                )),
                None => Ok(Verdict::pass()),
            }
        }
        Postulate::Ic3 => {
            let Aux::Equivalent { profile, permutation, constraints } = aux else {
                return Err(Error::MalformedAux("IC3 needs an equivalent profile".into()));
            };
            let m = inst.m();
            let mut sorted = permutation.clone();
            sorted.sort_unstable();
            if profile.len() != m || sorted != (0..m).collect::<Vec<_>>() {
                return Err(Error::MalformedAux("permutation does not match the profile".into()));
            }
            for (i, &p) in permutation.iter().enumerate() {
                if !equivalent(profile.get(i), inst.profile().get(p), u)? {
                    return Err(Error::MalformedAux(format!("entry {i} is not equivalent to entry {p}")));
                }
            }
            if !equivalent(constraints, inst.constraints(), u)? {
                return Err(Error::MalformedAux("constraints are not equivalent".into()));
            }
            let other = Instance::new(u.clone(), constraints.clone(), profile.clone())?;
            let scheme = cfg.scheme.resolved(&cfg.kind, inst.n(), m).permuted(permutation);
            let a = cfg.merge(inst)?;
            let b = merge_scheme(&other, &scheme, &cfg.kind)?;
            match a.models.symmetric_difference(&b.models).next() {
                Some(diff) => Ok(Verdict::fail("equivalent profiles merge differently", u, &[*diff], &[])),
                None => Ok(Verdict::pass()),
            }
        }
        Postulate::Ic4 => {
            if inst.m() != 2 {
                return Err(Error::Arity { expected: 2, found: inst.m() });
            }
            let (f1, f2) = (inst.profile().get(0), inst.profile().get(1));
            let entails_mu = |f: &Formula| -> Result<bool> {
                Ok(model_list(f, u, DEFAULT_ENUMERATION_LIMIT)?.iter().all(|m| inst.constraints().evaluate(m)))
            };
            if !entails_mu(f1)? || !entails_mu(f2)? {
                return Ok(Verdict::vacuous());
            }
            let r = cfg.merge(inst)?;
            let with1 = r.models.iter().find(|m| f1.evaluate(m));
            let with2 = r.models.iter().find(|m| f2.evaluate(m));
            match (with1, with2) {
                (Some(m), None) => Ok(Verdict::fail(
                    "merge is consistent with the first formula only",
                    u,
                    &[*m],
                    &witness_of(&r, m),
                )),
                (None, Some(m)) => Ok(Verdict::fail(
                    "merge is consistent with the second formula only",
                    u,
                    &[*m],
                    &witness_of(&r, m),
                )),
                _ => Ok(Verdict::pass()),
            }
        }
        Postulate::Ic5 | Postulate::Ic6 => {
            let Aux::Split { k, left, right } = aux else {
                return Err(Error::MalformedAux("IC5/IC6 need a split point and two schemes".into()));
            };
            let (k, m, n) = (*k, inst.m(), inst.n());
            if k == 0 || k >= m {
                return Err(Error::MalformedAux(format!("split point {k} not in 1..{m}")));
            }
            let left = left.resolved(&cfg.kind, n, k);
            let right = right.resolved(&cfg.kind, n, m - k);
            let whole = left.product(k, &right, m - k)?;
            let entries = inst.profile().entries();
            let first = inst.with_profile(Profile::new(entries[..k].to_vec())?)?;
            let second = inst.with_profile(Profile::new(entries[k..].to_vec())?)?;
            let a = merge_scheme(&first, &left, &cfg.kind)?;
            let b = merge_scheme(&second, &right, &cfg.kind)?;
            let c = merge_scheme(inst, &whole, &cfg.kind)?;
            let both: ModelSet = a.models.intersection(&b.models).copied().collect();
            if id == Postulate::Ic5 {
                match both.iter().find(|m| !c.models.contains(m)) {
                    Some(m) => Ok(Verdict::fail(
                        "model selected by both parts but not by the whole",
                        u,
                        &[*m],
                        &[&a.witnesses[m], &b.witnesses[m]],
                    )),
                    None => Ok(Verdict::pass()),
                }
            } else if both.is_empty() {
                Ok(Verdict::vacuous())
            } else {
                match c.models.iter().find(|m| !both.contains(m)) {
                    Some(m) => Ok(Verdict::fail(
                        "model selected by the whole but not by both parts",
                        u,
                        &[*m],
                        &witness_of(&c, m),
                    )),
                    None => Ok(Verdict::pass()),
                }
            }
        }
        Postulate::Ic7 | Postulate::Ic8 => {
            let Aux::Constraints(extra) = aux else {
                return Err(Error::MalformedAux("IC7/IC8 need additional constraints".into()));
            };
            if !extra.fits(u) {
                return Err(Error::MalformedAux("additional constraints mention unknown variables".into()));
            }
            let base = cfg.merge(inst)?;
            let restricted: ModelSet = base.models.iter().filter(|m| extra.evaluate(m)).copied().collect();
            let narrowed = cfg.merge_with(inst, inst.constraints().clone().and(extra.clone()))?;
            if id == Postulate::Ic7 {
                match restricted.iter().find(|m| !narrowed.models.contains(m)) {
                    Some(m) => Ok(Verdict::fail(
                        "model lost when the constraints are narrowed",
                        u,
                        &[*m],
                        &witness_of(&base, m),
                    )),
                    None => Ok(Verdict::pass()),
                }
            } else if restricted.is_empty() {
                Ok(Verdict::vacuous())
            } else {
                match narrowed.models.iter().find(|m| !restricted.contains(m)) {
                    Some(m) => Ok(Verdict::fail(
                        "narrowed constraints select a model the original merge excluded",
                        u,
                        &[*m],
                        &witness_of(&narrowed, m),
                    )),
                    None => Ok(Verdict::pass()),
                }
            }
        }
    }
}

/// Models in some Hamming-closest pair of `Mod(f1) x Mod(f2)`.
pub fn closest_pairs_merge(universe: &Universe, f1: &Formula, f2: &Formula) -> Result<ModelSet> {
    let a = model_list(f1, universe, DEFAULT_ENUMERATION_LIMIT)?;
    let b = model_list(f2, universe, DEFAULT_ENUMERATION_LIMIT)?;
    if a.is_empty() {
        return Err(Error::InconsistentEntry(0));
    }
    if b.is_empty() {
        return Err(Error::InconsistentEntry(1));
    }
    let mut best = u32::MAX;
    let mut out = ModelSet::new();
    for i in &a {
        for j in &b {
            let d = i.hamming(j)?;
            if d < best {
                best = d;
                out.clear();
            }
            if d == best {
                out.insert(*i);
                out.insert(*j);
            }
        }
    }
    Ok(out)
}

/// Merges `f1` with `reps` copies of `f2` under no constraints; passes iff the
/// result entails `f2`.
pub fn check_majority(universe: &Universe, cfg: &OperatorConfig, f1: &Formula, f2: &Formula, reps: usize) -> Result<Verdict> {
    if reps == 0 {
        return Err(Error::OutOfRange("repetitions must be at least 1".into()));
    }
    let mut entries = vec![f1.clone()];
    entries.extend(std::iter::repeat_n(f2.clone(), reps));
    let inst = Instance::new(universe.clone(), Formula::Const(true), Profile::new(entries)?)?;
    let r = cfg.merge(&inst)?;
    match r.models.iter().find(|m| !f2.evaluate(m)) {
        Some(m) => Ok(Verdict::fail(
            "repeated formula not entailed by the merge",
            universe,
            &[*m],
            &witness_of(&r, m),
        )),
        None => Ok(Verdict::pass()),
    }
}

/// Every merged model satisfies some profile entry. Vacuous when some entry
/// is inconsistent with the constraints.
pub fn check_disjunctive(cfg: &OperatorConfig, inst: &Instance) -> Result<Verdict> {
    for f in inst.profile().entries() {
        if !inst.mu_models().iter().any(|m| f.evaluate(m)) {
            return Ok(Verdict::vacuous());
        }
    }
    let r = cfg.merge(inst)?;
    match r.models.iter().find(|m| !satisfies_any(inst.profile().entries(), m)) {
        Some(m) => Ok(Verdict::fail(
            "merged model satisfies no profile entry",
            inst.universe(),
            &[*m],
            &witness_of(&r, m),
        )),
        None => Ok(Verdict::pass()),
    }
}

/// Merge with all positive weights is unchanged by repeating the last entry.
pub fn check_arbitration_duplicate(cfg: &OperatorConfig, inst: &Instance) -> Result<Verdict> {
    if cfg.scheme != WeightScheme::AllPositive {
        return Err(Error::InvalidScheme(
            "duplicate invariance is only claimed for all positive weights".into(),
        ));
    }
    let mut entries = inst.profile().entries().to_vec();
    entries.push(entries.last().expect("profile is non-empty").clone());
    let dup = inst.with_profile(Profile::new(entries)?)?;
    let a = cfg.merge(inst)?;
    let b = cfg.merge(&dup)?;
    match a.models.symmetric_difference(&b.models).next() {
        Some(m) => Ok(Verdict::fail("duplicating the last entry changes the merge", inst.universe(), &[*m], &[])),
        None => Ok(Verdict::pass()),
    }
}

/// The five-variable instance with the coarse table distance and weights
/// `{[5,2],[2,5]}` on which IC4 fails.
pub fn ic4_counterexample() -> Result<(Instance, OperatorConfig)> {
    let names = ["x1", "x2", "x3", "x4", "x5"];
    let u = Universe::new(&names)?;
    let f1 = parse_formula("x1 & x2 & x3 & x4 & x5", &u)?;
    let f2 = parse_formula("!x1 & !x2 & !x3 & !x4 & !x5", &u)?;
    let third = parse_formula("x1 & !x2 & !x3 & !x4 & !x5", &u)?;
    let mu = f1.clone().or(f2.clone()).or(third);
    let inst = Instance::new(u, mu, Profile::new(vec![f1, f2])?)?;
    let scheme = WeightScheme::explicit(vec![
        WeightVector::from_integers(&[5, 2])?,
        WeightVector::from_integers(&[2, 5])?,
    ])?;
    Ok((inst, OperatorConfig::new(DistanceKind::Table(HammingTable::coarse_example()), scheme)))
}

/// The instance with distance vectors `[1,0]`, `[0,1]`, `[0,2]` (models
/// `I`, `J`, `K`) and the extra constraints whose models are `I` and `K`.
pub fn ic8_counterexample() -> Result<(Instance, Formula, Model)> {
    let inst = realize(&VectorSpec::parse("1,0;0,1;0,2")?, None)?;
    let i = model_at(&inst, &[1, 0])?.expect("realized");
    let k = model_at(&inst, &[0, 2])?.expect("realized");
    Ok((inst, Formula::from_models([&i, &k]), k))
}

/// Named checks runnable over a seeded suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Postulate(Postulate),
    Majority,
    Arbitration,
    Disjunctive,
}

impl FromStr for Check {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "ic0" => Check::Postulate(Postulate::Ic0),
            "ic1" => Check::Postulate(Postulate::Ic1),
            "ic2" => Check::Postulate(Postulate::Ic2),
            "ic3" => Check::Postulate(Postulate::Ic3),
            "ic4" => Check::Postulate(Postulate::Ic4),
            "ic5" => Check::Postulate(Postulate::Ic5),
            "ic6" => Check::Postulate(Postulate::Ic6),
            "ic7" => Check::Postulate(Postulate::Ic7),
            "ic8" => Check::Postulate(Postulate::Ic8),
            "majority" => Check::Majority,
            "arbitration" => Check::Arbitration,
            "disjunctive" => Check::Disjunctive,
            other => return Err(Error::OutOfRange(format!("unknown check `{other}`"))),
        })
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Check::Postulate(p) => write!(f, "{}", format!("{p:?}").to_ascii_lowercase()),
            Check::Majority => f.write_str("majority"),
            Check::Arbitration => f.write_str("arbitration"),
            Check::Disjunctive => f.write_str("disjunctive"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub check: String,
    pub total: usize,
    pub passed: usize,
    pub vacuous: usize,
    pub failed: usize,
    /// Index within the suite and verdict of the first failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<(usize, Verdict)>,
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

/// Instance `k` of the suite for `check`, with whatever extra input the
/// check needs. Sizes stay small: at most 4 variables and 3 formulae.
fn suite_case(check: Check, cfg: &OperatorConfig, k: usize, seed: u64) -> Result<Verdict> {
    let s = seed.wrapping_add(k as u64);
    let n = 1 + (s % 4) as usize;
    let d = half();
    match check {
        Check::Postulate(p @ Postulate::Ic4) => {
            let base = random_instance(n, 2, s, &d)?;
            let (f1, f2) = (base.profile().get(0).clone(), base.profile().get(1).clone());
            let inst = base.with_constraints(base.constraints().clone().or(f1).or(f2))?;
            check_postulate(p, cfg, &inst, &Aux::None)
        }
        Check::Postulate(p @ (Postulate::Ic5 | Postulate::Ic6)) => {
            let inst = random_instance(n, 2 + (s as usize / 4) % 2, s, &d)?;
            let aux = Aux::Split { k: inst.m() / 2, left: cfg.scheme.clone(), right: cfg.scheme.clone() };
            check_postulate(p, cfg, &inst, &aux)
        }
        Check::Postulate(p) => {
            let inst = random_instance(n, 1 + (s as usize / 4) % 3, s, &d)?;
            let aux = match p {
                Postulate::Ic3 => {
                    let m = inst.m();
                    let permutation: Vec<usize> = (0..m).rev().collect();
                    let profile = Profile::new(
                        permutation.iter().map(|&i| inst.profile().get(i).clone().negate().negate()).collect(),
                    )?;
                    Aux::Equivalent {
                        profile,
                        permutation,
                        constraints: inst.constraints().clone().and(Formula::Const(true)),
                    }
                }
                Postulate::Ic7 | Postulate::Ic8 => {
                    let other = random_instance(n, 1, s ^ 0x9e37_79b9_7f4a_7c15, &d)?;
                    Aux::Constraints(other.profile().get(0).clone())
                }
                _ => Aux::None,
            };
            check_postulate(p, cfg, &inst, &aux)
        }
        Check::Majority => {
            let inst = random_instance(n, 2, s, &d)?;
            let reps = 1 + k % 5;
            check_majority(inst.universe(), cfg, inst.profile().get(0), inst.profile().get(1), reps)
        }
        Check::Arbitration => {
            let inst = random_instance(n, 1 + (s as usize / 4) % 3, s, &d)?;
            check_arbitration_duplicate(cfg, &inst)
        }
        Check::Disjunctive => {
            let inst = random_instance(n, 1 + (s as usize / 4) % 3, s, &d)?;
            check_disjunctive(cfg, &inst)
        }
    }
}

/// Runs `check` on `count` seeded instances and tallies the verdicts.
pub fn run_suite(check: Check, cfg: &OperatorConfig, count: usize, seed: u64) -> Result<SuiteReport> {
    let mut report = SuiteReport {
        check: check.to_string(),
        total: count,
        passed: 0,
        vacuous: 0,
        failed: 0,
        first_failure: None,
    };
    for k in 0..count {
        let v = suite_case(check, cfg, k, seed)?;
        match v.status {
            Status::Pass => report.passed += 1,
            Status::VacuousPass => report.vacuous += 1,
            Status::Fail => {
                report.failed += 1;
                if report.first_failure.is_none() {
                    report.first_failure = Some((k, v));
                }
            }
        }
    }
    Ok(report)
}

/// Convenience wrapper: the random suite used by the property tests.
pub fn standard_suite(count: usize, seed: u64) -> Result<Vec<Instance>> {
    random_suite(count, seed, 1..=4, 1..=3, &half())
}

/// Expert weights `k * m` and `k * m + 1`, where `k` is the largest value of
/// the distance on `n` variables (weights below 2 are dropped).
pub fn disjunctive_expert_weights(kind: &DistanceKind, n: usize, m: usize) -> BTreeSet<u64> {
    let k = kind.max_value(n);
    [k * m as u64, k * m as u64 + 1].into_iter().filter(|&a| a >= 2).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::merge::merge_fixed;

    const H: DistanceKind = DistanceKind::Hamming;

    fn cfg(kind: DistanceKind, s: &str) -> OperatorConfig {
        OperatorConfig::new(kind, WeightScheme::parse(s).unwrap())
    }

    #[test]
    fn ic8_fails_on_the_three_point_instance() {
        let (inst, extra, k) = ic8_counterexample().unwrap();
        let v = check_postulate(Postulate::Ic8, &cfg(H, "all"), &inst, &Aux::Constraints(extra.clone())).unwrap();
        assert_eq!(v.status, Status::Fail);
        let w = v.witness.unwrap();
        assert_eq!(w.models, vec![k.display(inst.universe()).to_string()]);
        let narrowed = inst.with_constraints(inst.constraints().clone().and(extra)).unwrap();
        assert!(merge_fixed(&narrowed, &WeightVector::from_integers(&[2, 1]).unwrap(), &H).unwrap().contains(&k));
        let v7 = check_postulate(Postulate::Ic7, &cfg(H, "all"), &inst, &Aux::Constraints(
            ic8_counterexample().unwrap().1,
        ))
        .unwrap();
        assert_eq!(v7.status, Status::Pass);
    }

    #[test]
    fn ic4_fails_with_coarse_table_and_asymmetric_pair() {
        let (inst, c) = ic4_counterexample().unwrap();
        let points = inst.points(&c.kind).unwrap();
        let vs: BTreeSet<Vec<u64>> = points.iter().map(|(_, d)| d.values().to_vec()).collect();
        assert_eq!(vs, BTreeSet::from([vec![0, 5], vec![2, 1], vec![5, 0]]));
        let v = check_postulate(Postulate::Ic4, &c, &inst, &Aux::None).unwrap();
        assert_eq!(v.status, Status::Fail);
        assert_eq!(v.witness.unwrap().note, "merge is consistent with the first formula only");
        assert!(!c.kind.satisfies_triangle_inequality(5));
        assert!(c.scheme.is_permutation_closed());
    }

    #[test]
    fn ic4_fails_for_a_single_skewed_vector() {
        let u = Universe::new(&["x"]).unwrap();
        let inst = Instance::new(u.clone(), Formula::Const(true), Profile::parse(&["x", "!x"], &u).unwrap()).unwrap();
        let v = check_postulate(Postulate::Ic4, &cfg(H, "list:2,1"), &inst, &Aux::None).unwrap();
        assert_eq!(v.status, Status::Fail);
        for s in ["equal", "all", "expert:3", "list:2,1;1,2"] {
            for kind in [H, DistanceKind::Drastic] {
                let v = check_postulate(Postulate::Ic4, &cfg(kind, s), &inst, &Aux::None).unwrap();
                assert_eq!(v.status, Status::Pass);
            }
        }
    }

    #[test]
    fn ic2_on_consistent_profile() {
        let u = Universe::new(&["a", "b"]).unwrap();
        let inst = Instance::new(u.clone(), parse_formula("a | b", &u).unwrap(), Profile::parse(&["a", "a | !b"], &u).unwrap()).unwrap();
        for s in ["equal", "all", "expert", "list:1,4"] {
            assert_eq!(check_postulate(Postulate::Ic2, &cfg(H, s), &inst, &Aux::None).unwrap().status, Status::Pass);
        }
    }

    #[test]
    fn ic3_rejects_non_equivalent_aux() {
        let u = Universe::new(&["a", "b"]).unwrap();
        let inst = Instance::new(u.clone(), Formula::Const(true), Profile::parse(&["a", "b"], &u).unwrap()).unwrap();
        let aux = Aux::Equivalent {
            profile: Profile::parse(&["b", "!!a"], &u).unwrap(),
            permutation: vec![1, 0],
            constraints: parse_formula("a | !a", &u).unwrap(),
        };
        assert_eq!(check_postulate(Postulate::Ic3, &cfg(H, "list:3,1"), &inst, &aux).unwrap().status, Status::Pass);
        let bad = Aux::Equivalent {
            profile: Profile::parse(&["a", "a"], &u).unwrap(),
            permutation: vec![0, 1],
            constraints: Formula::Const(true),
        };
        assert!(matches!(check_postulate(Postulate::Ic3, &cfg(H, "all"), &inst, &bad), Err(Error::MalformedAux(_))));
        assert!(check_postulate(Postulate::Ic3, &cfg(H, "all"), &inst, &Aux::None).is_err());
    }

    #[test]
    fn closest_pairs() {
        let u = Universe::new(&["x", "y"]).unwrap();
        let f1 = parse_formula("x & y", &u).unwrap();
        let f2 = parse_formula("!x & !y", &u).unwrap();
        let r = closest_pairs_merge(&u, &f1, &f2).unwrap();
        assert_eq!(r.len(), 2);
        let g = parse_formula("x", &u).unwrap();
        let both = closest_pairs_merge(&u, &f1, &g).unwrap();
        assert_eq!(both, crate::formula::models_of(&f1, &u).unwrap());
        assert!(closest_pairs_merge(&u, &f1, &Formula::Const(false)).is_err());
    }

    #[test]
    fn majority_fails_only_without_fixed_weights() {
        let u = Universe::new(&["a"]).unwrap();
        let a = parse_formula("a", &u).unwrap();
        let na = parse_formula("!a", &u).unwrap();
        for reps in 1..=5 {
            let v = check_majority(&u, &cfg(H, "all"), &a, &na, reps).unwrap();
            assert_eq!(v.status, Status::Fail);
        }
        assert_eq!(check_majority(&u, &cfg(H, "equal"), &a, &na, 2).unwrap().status, Status::Pass);
        assert_eq!(check_majority(&u, &cfg(H, "all"), &a, &a, 3).unwrap().status, Status::Pass);
        assert!(check_majority(&u, &cfg(H, "all"), &a, &a, 0).is_err());
    }

    #[test]
    fn disjunctive_examples() {
        let u = Universe::new(&["x", "y"]).unwrap();
        let inst = Instance::new(u.clone(), Formula::Const(true), Profile::parse(&["x & y", "!x & !y"], &u).unwrap()).unwrap();
        assert_eq!(check_disjunctive(&cfg(H, "equal"), &inst).unwrap().status, Status::Fail);
        assert_eq!(check_disjunctive(&cfg(H, "expert:5"), &inst).unwrap().status, Status::Pass);
        let single = Instance::new(u.clone(), parse_formula("x", &u).unwrap(), Profile::parse(&["x | y"], &u).unwrap()).unwrap();
        assert_eq!(check_disjunctive(&cfg(H, "equal"), &single).unwrap().status, Status::Pass);
        let vac = Instance::new(u.clone(), parse_formula("x", &u).unwrap(), Profile::parse(&["!x"], &u).unwrap()).unwrap();
        assert_eq!(check_disjunctive(&cfg(H, "equal"), &vac).unwrap().status, Status::VacuousPass);
    }

    #[test]
    fn arbitration_needs_all_positive() {
        let u = Universe::new(&["a"]).unwrap();
        let inst = Instance::new(u.clone(), Formula::Const(true), Profile::parse(&["a", "!a"], &u).unwrap()).unwrap();
        assert_eq!(check_arbitration_duplicate(&cfg(H, "all"), &inst).unwrap().status, Status::Pass);
        assert!(check_arbitration_duplicate(&cfg(H, "equal"), &inst).is_err());
        let single = Instance::new(u.clone(), Formula::Const(true), Profile::parse(&["a"], &u).unwrap()).unwrap();
        assert_eq!(check_arbitration_duplicate(&cfg(H, "all"), &single).unwrap().status, Status::Pass);
    }

    #[test]
    fn ic5_holds_for_products_and_ic6_for_single_vectors() {
        for s in ["equal", "all", "expert"] {
            let c = cfg(H, s);
            let r = run_suite(Check::Postulate(Postulate::Ic5), &c, 40, 3).unwrap();
            assert_eq!(r.failed, 0, "{s}: {:?}", r.first_failure);
        }
        let r = run_suite(Check::Postulate(Postulate::Ic6), &cfg(H, "equal"), 40, 3).unwrap();
        assert_eq!(r.failed, 0);
        let aux = Aux::Split {
            k: 1,
            left: WeightScheme::parse("list:1;3").unwrap(),
            right: WeightScheme::parse("list:2;1").unwrap(),
        };
        for inst in standard_suite(40, 5).unwrap().into_iter().filter(|i| i.m() == 2) {
            let v = check_postulate(Postulate::Ic5, &cfg(H, "all"), &inst, &aux).unwrap();
            assert!(v.passed());
        }
    }

    /// With several vectors per part, a model can win on the whole profile
    /// while losing on one part, even though the parts agree on another
    /// model.
    #[test]
    fn ic6_can_fail_for_unions_of_vectors() {
        let spec = VectorSpec::parse("2,2,0;3,0,5;0,3,5;3,0,0").unwrap();
        let inst = realize(&spec, None).unwrap();
        let c = cfg(H, "all");
        let aux = Aux::Split { k: 2, left: WeightScheme::AllPositive, right: WeightScheme::AllPositive };
        let v = check_postulate(Postulate::Ic6, &c, &inst, &aux).unwrap();
        assert_eq!(v.status, Status::Fail);
        let i = model_at(&inst, &[2, 2, 0]).unwrap().unwrap();
        assert!(merge_fixed(&inst, &WeightVector::from_integers(&[3, 1, 2]).unwrap(), &H).unwrap().contains(&i));
        assert_eq!(check_postulate(Postulate::Ic5, &c, &inst, &aux).unwrap().status, Status::Pass);
    }

    #[test]
    fn basic_postulates_hold_on_suites() {
        for kind in [H, DistanceKind::Drastic] {
            for s in ["equal", "expert", "all"] {
                let c = cfg(kind.clone(), s);
                for p in [Postulate::Ic0, Postulate::Ic1, Postulate::Ic2, Postulate::Ic3, Postulate::Ic7] {
                    let r = run_suite(Check::Postulate(p), &c, 25, 11).unwrap();
                    assert_eq!(r.failed, 0, "{p:?} {s} {kind}: {:?}", r.first_failure);
                }
            }
        }
    }

    #[test]
    fn check_names_round_trip() {
        for name in ["ic0", "ic4", "ic8", "majority", "arbitration", "disjunctive"] {
            assert_eq!(name.parse::<Check>().unwrap().to_string(), name);
        }
        assert!("ic9".parse::<Check>().is_err());
    }

    #[test]
    fn disjunctive_weights() {
        assert_eq!(disjunctive_expert_weights(&H, 3, 2), BTreeSet::from([6, 7]));
        assert_eq!(disjunctive_expert_weights(&DistanceKind::Drastic, 3, 1), BTreeSet::from([2]));
    }
}
