//! Exact feasibility of linear inequality systems by Fourier–Motzkin elimination.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::distance::{check_len, DistanceVector};
use crate::error::{Error, Result};
use crate::weights::WeightVector;

pub const DEFAULT_CONSTRAINT_LIMIT: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Relation {
    Le,
    Lt,
    Eq,
}

/// `coefficients . x  relation  rhs`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LinConstraint {
    pub coefficients: Vec<BigRational>,
    pub relation: Relation,
    pub rhs: BigRational,
}

impl LinConstraint {
    pub fn new(coefficients: Vec<BigRational>, relation: Relation, rhs: BigRational) -> Self {
        LinConstraint { coefficients, relation, rhs }
    }

    /// Integer-coefficient convenience constructor.
    pub fn from_ints(coefficients: &[i64], relation: Relation, rhs: i64) -> Self {
        LinConstraint::new(
            coefficients.iter().map(|&c| int(c)).collect(),
            relation,
            int(rhs),
        )
    }

    /// `coefficients . x >= rhs`, stored as `-coefficients . x <= -rhs`.
    pub fn ge(coefficients: &[BigRational], rhs: BigRational) -> Self {
        LinConstraint::new(coefficients.iter().map(|c| -c).collect(), Relation::Le, -rhs)
    }

    pub fn lhs(&self, point: &[BigRational]) -> BigRational {
        self.coefficients
            .iter()
            .zip(point)
            .fold(BigRational::zero(), |acc, (a, x)| acc + a * x)
    }

    pub fn holds(&self, point: &[BigRational]) -> bool {
        let lhs = self.lhs(point);
        match self.relation {
            Relation::Le => lhs <= self.rhs,
            Relation::Lt => lhs < self.rhs,
            Relation::Eq => lhs == self.rhs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinSystem {
    dimension: usize,
    constraints: Vec<LinConstraint>,
}

impl LinSystem {
    pub fn new(dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::OutOfRange("system dimension must be at least 1".into()));
        }
        Ok(LinSystem { dimension, constraints: Vec::new() })
    }

    pub fn with_constraints(dimension: usize, constraints: Vec<LinConstraint>) -> Result<Self> {
        let mut s = LinSystem::new(dimension)?;
        for c in constraints {
            s.push(c)?;
        }
        Ok(s)
    }

    pub fn push(&mut self, c: LinConstraint) -> Result<()> {
        check_len(self.dimension, c.coefficients.len())?;
        self.constraints.push(c);
        Ok(())
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn constraints(&self) -> &[LinConstraint] {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn holds(&self, point: &[BigRational]) -> bool {
        point.len() == self.dimension && self.constraints.iter().all(|c| c.holds(point))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Infeasible,
    Witness(Vec<BigRational>),
}

impl Feasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, Feasibility::Witness(_))
    }

    pub fn witness(&self) -> Option<&[BigRational]> {
        match self {
            Feasibility::Witness(p) => Some(p),
            Feasibility::Infeasible => None,
        }
    }
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Internal row: `coeffs . x (< or <=) rhs`, plus the set of input rows it
/// was derived from (used for redundancy pruning).
#[derive(Debug, Clone)]
struct Row {
    coeffs: Vec<BigRational>,
    strict: bool,
    rhs: BigRational,
    history: BTreeSet<usize>,
}

enum Normalized {
    Trivial,
    Contradiction,
    Row(Row),
}

fn normalize(mut row: Row) -> Normalized {
    let Some(lead) = row.coeffs.iter().find(|c| !c.is_zero()).map(|c| c.abs()) else {
        let ok = if row.strict {
            row.rhs.is_positive()
        } else {
            !row.rhs.is_negative()
        };
        return if ok { Normalized::Trivial } else { Normalized::Contradiction };
    };
    if !lead.is_one() {
        for c in &mut row.coeffs {
            *c = &*c / &lead;
        }
        row.rhs = &row.rhs / &lead;
    }
    Normalized::Row(row)
}

fn at_least_as_tight(a: &Row, b: &Row) -> bool {
    a.rhs < b.rhs || (a.rhs == b.rhs && (a.strict || !b.strict))
}

/// Drops rows implied by a parallel row that is at least as tight and whose
/// history is a subset (so pruning decisions stay sound); `None` on a
/// contradiction.
fn reduce(rows: Vec<Row>) -> Option<Vec<Row>> {
    let mut groups: BTreeMap<Vec<BigRational>, Vec<Row>> = BTreeMap::new();
    for row in rows {
        let row = match normalize(row) {
            Normalized::Trivial => continue,
            Normalized::Contradiction => return None,
            Normalized::Row(r) => r,
        };
        let group = groups.entry(row.coeffs.clone()).or_default();
        let covered = group
            .iter()
            .any(|g| at_least_as_tight(g, &row) && g.history.is_subset(&row.history));
        if covered {
            continue;
        }
        group.retain(|g| !(at_least_as_tight(&row, g) && row.history.is_subset(&g.history)));
        group.push(row);
    }
    Some(groups.into_values().flatten().collect())
}

/// Decides feasibility with the default resource guard.
pub fn feasible(s: &LinSystem) -> Result<Feasibility> {
    feasible_with_limit(s, DEFAULT_CONSTRAINT_LIMIT)
}

pub fn feasible_with_limit(s: &LinSystem, limit: usize) -> Result<Feasibility> {
    solve(s, limit, true)
}

fn solve(s: &LinSystem, limit: usize, prune: bool) -> Result<Feasibility> {
    let dim = s.dimension;
    let mut rows = Vec::new();
    for c in &s.constraints {
        check_len(dim, c.coefficients.len())?;
        let mut push = |coeffs: Vec<BigRational>, rhs: BigRational, strict: bool| {
            let history = [rows.len()].into();
            rows.push(Row { coeffs, strict, rhs, history });
        };
        match c.relation {
            Relation::Le => push(c.coefficients.clone(), c.rhs.clone(), false),
            Relation::Lt => push(c.coefficients.clone(), c.rhs.clone(), true),
            Relation::Eq => {
                push(c.coefficients.clone(), c.rhs.clone(), false);
                push(c.coefficients.iter().map(|a| -a).collect(), -&c.rhs, false);
            }
        }
    }
    if rows.len() > limit {
        return Err(Error::ResourceLimit { count: rows.len(), limit });
    }
    // History-based pruning is only applied to purely non-strict systems.
    let prune = prune && rows.iter().all(|r| !r.strict);

    let Some(mut current) = reduce(rows) else {
        return Ok(Feasibility::Infeasible);
    };
    let mut remaining: Vec<usize> = (0..dim).collect();
    // (eliminated variable, rows that still mentioned it)
    let mut stages: Vec<(usize, Vec<Row>)> = Vec::with_capacity(dim);
    let mut eliminated = 0usize;

    while !remaining.is_empty() {
        let (pos_in_remaining, var) = remaining
            .iter()
            .enumerate()
            .map(|(p, &v)| {
                let pos = current.iter().filter(|r| r.coeffs[v].is_positive()).count();
                let neg = current.iter().filter(|r| r.coeffs[v].is_negative()).count();
                ((pos * neg) as isize - (pos + neg) as isize, p, v)
            })
            .min()
            .map(|(_, p, v)| (p, v))
            .expect("remaining is non-empty");
        remaining.remove(pos_in_remaining);
        eliminated += 1;

        let (mut uppers, mut lowers, mut rest) = (Vec::new(), Vec::new(), Vec::new());
        for r in &current {
            if r.coeffs[var].is_positive() {
                uppers.push(r);
            } else if r.coeffs[var].is_negative() {
                lowers.push(r);
            } else {
                rest.push(r.clone());
            }
        }
        let count = rest.len() + uppers.len() * lowers.len();
        if count > limit {
            return Err(Error::ResourceLimit { count, limit });
        }
        let mut next = rest;
        for u in &uppers {
            for l in &lowers {
                let history: BTreeSet<usize> = u.history.union(&l.history).copied().collect();
                if prune && history.len() > eliminated + 1 {
                    continue;
                }
                // scale so the eliminated coefficients cancel
                let a = &u.coeffs[var];
                let b = -&l.coeffs[var];
                let coeffs: Vec<BigRational> = u
                    .coeffs
                    .iter()
                    .zip(&l.coeffs)
                    .map(|(cu, cl)| cu * &b + cl * a)
                    .collect();
                next.push(Row {
                    coeffs,
                    strict: u.strict || l.strict,
                    rhs: &u.rhs * &b + &l.rhs * a,
                    history,
                });
            }
        }
        let mentioned: Vec<Row> = current
            .into_iter()
            .filter(|r| !r.coeffs[var].is_zero())
            .collect();
        stages.push((var, mentioned));
        match reduce(next) {
            Some(rows) => current = rows,
            None => return Ok(Feasibility::Infeasible),
        }
    }

    let mut point = vec![BigRational::zero(); dim];
    for (var, rows) in stages.iter().rev() {
        point[*var] = choose_value(*var, rows, &point);
    }
    debug_assert!(s.holds(&point), "back-substitution produced an invalid witness");
    Ok(Feasibility::Witness(point))
}

/// Picks a value for `var` given the other coordinates already fixed: the
/// midpoint of the feasible interval, the bound itself when only one
/// non-strict bound exists, one unit inside a lone strict bound, 0 if free.
fn choose_value(var: usize, rows: &[Row], point: &[BigRational]) -> BigRational {
    let mut lower: Option<(BigRational, bool)> = None;
    let mut upper: Option<(BigRational, bool)> = None;
    for r in rows {
        let a = &r.coeffs[var];
        let rest = r
            .coeffs
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != var)
            .fold(BigRational::zero(), |acc, (j, c)| acc + c * &point[j]);
        let bound = (&r.rhs - rest) / a;
        if a.is_positive() {
            let tighter = match &upper {
                None => true,
                Some((v, s)) => bound < *v || (bound == *v && r.strict && !s),
            };
            if tighter {
                upper = Some((bound, r.strict));
            }
        } else {
            let tighter = match &lower {
                None => true,
                Some((v, s)) => bound > *v || (bound == *v && r.strict && !s),
            };
            if tighter {
                lower = Some((bound, r.strict));
            }
        }
    }
    match (lower, upper) {
        (Some((lo, _)), Some((hi, _))) => (lo + hi) / int(2),
        (Some((lo, false)), None) => lo,
        (Some((lo, true)), None) => lo + int(1),
        (None, Some((hi, false))) => hi,
        (None, Some((hi, true))) => hi - int(1),
        (None, None) => BigRational::zero(),
    }
}

/// System in `w` stating that `d_i` is at least as good as every vector in
/// `others`: `w . (d_i - d_j) <= 0` for each `d_j`, plus `w_k >= 1`.
pub fn minimality_system(d_i: &DistanceVector, others: &[DistanceVector]) -> Result<LinSystem> {
    let m = d_i.len();
    let mut s = LinSystem::new(m)?;
    for d_j in others {
        check_len(m, d_j.len())?;
        let coeffs = d_i
            .values()
            .iter()
            .zip(d_j.values())
            .map(|(&a, &b)| BigRational::from_integer(BigInt::from(a) - BigInt::from(b)))
            .collect();
        s.push(LinConstraint::new(coeffs, Relation::Le, BigRational::zero()))?;
    }
    for k in 0..m {
        let mut coeffs = vec![BigRational::zero(); m];
        coeffs[k] = int(1);
        s.push(LinConstraint::ge(&coeffs, int(1)))?;
    }
    Ok(s)
}

/// Clears denominators of a positive rational vector.
pub fn integer_witness(w: &[BigRational]) -> Result<WeightVector> {
    if w.iter().any(|x| !x.is_positive()) {
        return Err(Error::NonPositiveWeight);
    }
    let lcm = w
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let scaled: Vec<BigRational> = w
        .iter()
        .map(|x| BigRational::from_integer((x * BigRational::from_integer(lcm.clone())).to_integer()))
        .collect();
    WeightVector::new(scaled)
}
