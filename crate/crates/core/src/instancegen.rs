//! Instance generators: realizing distance vectors, replicated blocks and
//! seeded random instances.

use std::collections::BTreeSet;
use std::ops::RangeInclusive;

use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::Xoshiro256StarStar;

use crate::distance::{DistanceKind, DistanceVector};
use crate::error::{Error, Result};
use crate::formula::{Formula, Model, Profile, Universe};
use crate::merge::Instance;

/// Upper bound on generation attempts before giving up.
pub const MAX_RETRIES: usize = 1000;

/// A non-empty set of distance vectors of common length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectorSpec {
    vectors: BTreeSet<DistanceVector>,
    m: usize,
}

impl VectorSpec {
    pub fn new(vectors: Vec<DistanceVector>) -> Result<Self> {
        let Some(first) = vectors.first() else {
            return Err(Error::OutOfRange("at least one vector is required".into()));
        };
        let m = first.len();
        if m == 0 {
            return Err(Error::OutOfRange("vectors must not be empty".into()));
        }
        for v in &vectors {
            if v.len() != m {
                return Err(Error::LengthMismatch { expected: m, found: v.len() });
            }
        }
        Ok(VectorSpec { vectors: vectors.into_iter().collect(), m })
    }

    /// Parses `3,0;1,1;0,3`.
    pub fn parse(text: &str) -> Result<Self> {
        let vectors = text
            .split(';')
            .map(|part| {
                part.split(',')
                    .map(|x| {
                        x.trim()
                            .parse::<u64>()
                            .map_err(|_| Error::OutOfRange(format!("bad distance `{x}`")))
                    })
                    .collect::<Result<Vec<u64>>>()
                    .map(DistanceVector::new)
            })
            .collect::<Result<Vec<_>>>()?;
        VectorSpec::new(vectors)
    }

    pub fn vectors(&self) -> &BTreeSet<DistanceVector> {
        &self.vectors
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Largest entry, at least 1.
    pub fn bound(&self) -> u64 {
        self.vectors
            .iter()
            .flat_map(|v| v.values().iter().copied())
            .max()
            .unwrap_or(0)
            .max(1)
    }
}

fn block_names(first_formula: usize, count: usize, n: usize) -> Vec<String> {
    (first_formula..first_formula + count)
        .flat_map(|i| (1..=n).map(move |j| format!("x{j}_{i}")))
        .collect()
}

/// Term fixing block `i` (0-based, variables `i*n .. i*n+n`) so that its
/// first `d` variables are false and the rest true.
fn block_literals(i: usize, n: usize, d: u64) -> impl Iterator<Item = Formula> {
    (0..n).map(move |j| Formula::literal(i * n + j, (j as u64) >= d))
}

/// Builds constraints and profile whose constraint models have exactly the
/// given Hamming distance vectors. Block `i` holds variables `x1_i .. xn_i`,
/// `F_i` is their conjunction, and each vector contributes one full term.
pub fn realize(spec: &VectorSpec, bound: Option<u64>) -> Result<Instance> {
    let n = match bound {
        Some(b) if b < spec.bound() => {
            return Err(Error::OutOfRange(format!(
                "bound {b} is below the largest entry {}",
                spec.bound()
            )))
        }
        Some(b) => b,
        None => spec.bound(),
    } as usize;
    let m = spec.m();
    let universe = Universe::new(&block_names(1, m, n))?;
    let profile = Profile::new(
        (0..m)
            .map(|i| Formula::conjunction(block_literals(i, n, 0)))
            .collect(),
    )?;
    let mu = Formula::disjunction(spec.vectors().iter().map(|v| {
        Formula::conjunction((0..m).flat_map(|i| block_literals(i, n, v.get(i))))
    }));
    let inst = Instance::new(universe, mu, profile)?;
    verify(&inst, spec.vectors())?;
    Ok(inst)
}

fn verify(inst: &Instance, expected: &BTreeSet<DistanceVector>) -> Result<()> {
    let points = inst.points(&DistanceKind::Hamming)?;
    let got: BTreeSet<DistanceVector> = points.iter().map(|(_, d)| d.clone()).collect();
    if points.len() != expected.len() || &got != expected {
        return Err(Error::RealizationMismatch);
    }
    Ok(())
}

/// `k` disjoint copies of the three-scenario construction for vectors
/// `[3,0]`, `[1,1]`, `[0,3]`; the constraints are the conjunction of the
/// per-block constraints.
pub fn replicated_blocks(k: usize) -> Result<Instance> {
    if !(1..=3).contains(&k) {
        return Err(Error::OutOfRange(format!("block count {k} not in 1..=3")));
    }
    const N: usize = 3;
    let base: [[u64; 2]; 3] = [[3, 0], [1, 1], [0, 3]];
    let m = 2 * k;
    let universe = Universe::new(&block_names(1, m, N))?;
    let profile = Profile::new(
        (0..m)
            .map(|i| Formula::conjunction(block_literals(i, N, 0)))
            .collect(),
    )?;
    let mu = Formula::conjunction((0..k).map(|b| {
        Formula::disjunction(base.iter().map(|v| {
            Formula::conjunction(
                block_literals(2 * b, N, v[0]).chain(block_literals(2 * b + 1, N, v[1])),
            )
        }))
    }));
    let inst = Instance::new(universe, mu, profile)?;
    let mut expected: BTreeSet<DistanceVector> = BTreeSet::from([DistanceVector::new(vec![])]);
    for _ in 0..k {
        expected = expected
            .iter()
            .flat_map(|prefix| base.iter().map(move |v| prefix.concat(&DistanceVector::new(v.to_vec()))))
            .collect();
    }
    verify(&inst, &expected)?;
    Ok(inst)
}

struct Sampler {
    rng: Xoshiro256StarStar,
}

impl Sampler {
    fn below(&mut self, k: u64) -> u64 {
        self.rng.next_u64() % k
    }

    fn chance(&mut self, num: u64, den: u64) -> bool {
        self.below(den) < num
    }

    fn term(&mut self, n: usize, num: u64, den: u64) -> Formula {
        let mut literals = Vec::new();
        for v in 0..n {
            if self.chance(num, den) {
                literals.push(Formula::literal(v, self.below(2) == 1));
            }
        }
        Formula::conjunction(literals)
    }

    fn dnf(&mut self, n: usize, terms: usize, num: u64, den: u64) -> Formula {
        Formula::disjunction((0..terms).map(|_| self.term(n, num, den)).collect::<Vec<_>>())
    }
}

fn density_parts(density: &BigRational) -> Result<(u64, u64)> {
    if density.is_negative() || *density > BigRational::one() {
        return Err(Error::OutOfRange("density must lie in [0, 1]".into()));
    }
    let num = density.numer().to_u64();
    let den = density.denom().to_u64();
    match (num, den) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => Err(Error::OutOfRange("density too large to sample".into())),
    }
}

/// Seeded instance over variables `x1 .. xn`: each profile entry is a
/// disjunction of 1-3 random terms, the constraints are `true` with
/// probability 1/4 and otherwise a disjunction of 1-4 terms. A term contains
/// each variable with probability `density`, with random polarity.
pub fn random_instance(n: usize, m: usize, seed: u64, density: &BigRational) -> Result<Instance> {
    if !(1..=12).contains(&n) {
        return Err(Error::OutOfRange(format!("variable count {n} not in 1..=12")));
    }
    if !(1..=5).contains(&m) {
        return Err(Error::OutOfRange(format!("profile length {m} not in 1..=5")));
    }
    let (num, den) = density_parts(density)?;
    let names: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let universe = Universe::new(&names)?;
    let mut s = Sampler { rng: Xoshiro256StarStar::seed_from_u64(seed) };
    for _ in 0..MAX_RETRIES {
        let entries: Vec<Formula> = (0..m)
            .map(|_| {
                let t = 1 + s.below(3) as usize;
                s.dnf(n, t, num, den)
            })
            .collect();
        let mu = if s.chance(1, 4) {
            Formula::Const(true)
        } else {
            let t = 1 + s.below(4) as usize;
            s.dnf(n, t, num, den)
        };
        match Instance::new(universe.clone(), mu, Profile::new(entries)?) {
            Ok(inst) => return Ok(inst),
            Err(Error::InconsistentConstraints | Error::InconsistentEntry(_)) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::RetryExhausted(MAX_RETRIES))
}

/// Deterministic family of random instances: instance `k` draws its sizes
/// from the given ranges and uses seed `seed + k`.
pub fn random_suite(
    count: usize,
    seed: u64,
    n_range: RangeInclusive<usize>,
    m_range: RangeInclusive<usize>,
    density: &BigRational,
) -> Result<Vec<Instance>> {
    let mut sizes = Xoshiro256StarStar::seed_from_u64(seed ^ 0x5eed_5eed_5eed_5eed);
    let pick = |rng: &mut Xoshiro256StarStar, r: &RangeInclusive<usize>| {
        r.start() + (rng.next_u64() % (r.end() - r.start() + 1) as u64) as usize
    };
    (0..count)
        .map(|k| {
            let n = pick(&mut sizes, &n_range);
            let m = pick(&mut sizes, &m_range);
            random_instance(n, m, seed.wrapping_add(k as u64), density)
        })
        .collect()
}

/// The model of `inst` whose Hamming distance vector is `v`, if any.
pub fn model_at(inst: &Instance, v: &[u64]) -> Result<Option<Model>> {
    Ok(inst
        .points(&DistanceKind::Hamming)?
        .into_iter()
        .find(|(_, d)| d.values() == v)
        .map(|(mdl, _)| mdl))
}
