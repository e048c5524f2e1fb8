//! Weight vectors, weight schemes, dominance and scalar-product aggregation.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::distance::{check_len, DistanceKind, DistanceVector};
use crate::error::{Error, Result};

/// Strictly positive rational weights, one per source.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WeightVector(Vec<BigRational>);

impl WeightVector {
    pub fn new(weights: Vec<BigRational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidScheme("weight vector must not be empty".into()));
        }
        if weights.iter().any(|w| !w.is_positive()) {
            return Err(Error::NonPositiveWeight);
        }
        Ok(WeightVector(weights))
    }

    pub fn from_integers(weights: &[u64]) -> Result<Self> {
        WeightVector::new(
            weights
                .iter()
                .map(|&w| BigRational::from_integer(BigInt::from(w)))
                .collect(),
        )
    }

    pub fn ones(m: usize) -> Self {
        WeightVector(vec![BigRational::from_integer(1.into()); m])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weights(&self) -> &[BigRational] {
        &self.0
    }

    pub fn scale(&self, factor: &BigRational) -> Result<Self> {
        WeightVector::new(self.0.iter().map(|w| w * factor).collect())
    }

    /// Integer entries, if every weight is an integer.
    pub fn as_integers(&self) -> Option<Vec<BigInt>> {
        self.0
            .iter()
            .map(|w| w.is_integer().then(|| w.to_integer()))
            .collect()
    }

    pub fn concat(&self, other: &WeightVector) -> WeightVector {
        let mut v = self.0.clone();
        v.extend(other.0.iter().cloned());
        WeightVector(v)
    }

    pub fn permuted(&self, perm: &[usize]) -> WeightVector {
        WeightVector(perm.iter().map(|&i| self.0[i].clone()).collect())
    }
}

impl fmt::Display for WeightVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|w| w.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightScheme {
    /// The single vector `[1, ..., 1]`.
    Equal,
    /// One expert among ignorants: every permutation of `[a, 1, ..., 1]`.
    /// `None` defers the choice of `a` to [`WeightScheme::resolved`].
    Expert(Option<u64>),
    /// Every strictly positive vector.
    AllPositive,
    Explicit(Vec<WeightVector>),
}

/// Result of expanding a scheme for a given profile length.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expansion {
    Finite(Vec<WeightVector>),
    AllPositive,
}

impl WeightScheme {
    /// Expert weight that makes one source decisive: `k * m + 1`, where `k`
    /// bounds the distance (1 for drastic, `n` for Hamming).
    pub fn default_expert_weight(kind: &DistanceKind, n: usize, m: usize) -> u64 {
        kind.max_value(n) * m as u64 + 1
    }

    /// Fixes an unspecified expert weight for the given distance and sizes.
    pub fn resolved(&self, kind: &DistanceKind, n: usize, m: usize) -> WeightScheme {
        match self {
            WeightScheme::Expert(None) => {
                WeightScheme::Expert(Some(Self::default_expert_weight(kind, n, m).max(2)))
            }
            other => other.clone(),
        }
    }

    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        match text {
            "equal" => return Ok(WeightScheme::Equal),
            "expert" => return Ok(WeightScheme::Expert(None)),
            "all" => return Ok(WeightScheme::AllPositive),
            _ => {}
        }
        if let Some(a) = text.strip_prefix("expert:") {
            let a: u64 = a
                .trim()
                .parse()
                .map_err(|_| Error::InvalidScheme(format!("bad expert weight `{a}`")))?;
            if a < 2 {
                return Err(Error::InvalidScheme("expert weight must be at least 2".into()));
            }
            return Ok(WeightScheme::Expert(Some(a)));
        }
        if let Some(list) = text.strip_prefix("list:") {
            let mut vectors = Vec::new();
            for part in list.split(';') {
                let ws = part
                    .split(',')
                    .map(|w| {
                        w.trim()
                            .parse::<BigRational>()
                            .map_err(|_| Error::InvalidScheme(format!("bad weight `{w}`")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                vectors.push(WeightVector::new(ws)?);
            }
            return WeightScheme::explicit(vectors);
        }
        Err(Error::InvalidScheme(format!("unknown scheme `{text}`")))
    }

    pub fn explicit(vectors: Vec<WeightVector>) -> Result<Self> {
        if vectors.is_empty() {
            return Err(Error::InvalidScheme("explicit scheme must not be empty".into()));
        }
        let m = vectors[0].len();
        for v in &vectors {
            check_len(m, v.len())?;
        }
        Ok(WeightScheme::Explicit(vectors))
    }

    /// Whether the scheme contains every permutation of each of its vectors.
    pub fn is_permutation_closed(&self) -> bool {
        match self {
            WeightScheme::Explicit(vs) => vs.iter().all(|v| {
                let mut sorted = v.0.clone();
                sorted.sort();
                permutations(&sorted)
                    .into_iter()
                    .all(|p| vs.iter().any(|w| w.0 == p))
            }),
            _ => true,
        }
    }

    /// Scheme whose vectors are `v[perm[0]], v[perm[1]], ...` for each `v`.
    pub fn permuted(&self, perm: &[usize]) -> WeightScheme {
        match self {
            WeightScheme::Explicit(vs) => {
                WeightScheme::Explicit(vs.iter().map(|v| v.permuted(perm)).collect())
            }
            other => other.clone(),
        }
    }

    /// Concatenation product `{W' W'' | W' in self, W'' in other}`.
    pub fn product(&self, m_left: usize, other: &WeightScheme, m_right: usize) -> Result<Self> {
        match (self, other) {
            (WeightScheme::AllPositive, WeightScheme::AllPositive) => Ok(WeightScheme::AllPositive),
            (WeightScheme::Equal, WeightScheme::Equal) => Ok(WeightScheme::Equal),
            (WeightScheme::AllPositive, _) | (_, WeightScheme::AllPositive) => Err(
                Error::MalformedAux("product of a finite scheme with all positive vectors".into()),
            ),
            (l, r) => {
                let (Expansion::Finite(ls), Expansion::Finite(rs)) =
                    (expand_scheme(l, m_left)?, expand_scheme(r, m_right)?)
                else {
                    unreachable!("finite schemes expand to finite lists")
                };
                let mut out = Vec::with_capacity(ls.len() * rs.len());
                for a in &ls {
                    for b in &rs {
                        out.push(a.concat(b));
                    }
                }
                WeightScheme::explicit(out)
            }
        }
    }
}

fn permutations<T: Clone + Ord>(items: &[T]) -> Vec<Vec<T>> {
    // distinct permutations via next-permutation on a sorted copy
    let mut cur = items.to_vec();
    cur.sort();
    let mut out = vec![cur.clone()];
    loop {
        let Some(i) = (0..cur.len().saturating_sub(1)).rev().find(|&i| cur[i] < cur[i + 1]) else {
            return out;
        };
        let j = (i + 1..cur.len()).rev().find(|&j| cur[j] > cur[i]).expect("pivot exists");
        cur.swap(i, j);
        cur[i + 1..].reverse();
        out.push(cur.clone());
    }
}

impl fmt::Display for WeightScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightScheme::Equal => write!(f, "equal"),
            WeightScheme::Expert(None) => write!(f, "expert"),
            WeightScheme::Expert(Some(a)) => write!(f, "expert:{a}"),
            WeightScheme::AllPositive => write!(f, "all"),
            WeightScheme::Explicit(vs) => {
                let parts: Vec<String> = vs
                    .iter()
                    .map(|v| {
                        v.0.iter()
                            .map(|w| w.to_string())
                            .collect::<Vec<_>>()
                            .join(",")
                    })
                    .collect();
                write!(f, "list:{}", parts.join(";"))
            }
        }
    }
}

pub fn expand_scheme(s: &WeightScheme, m: usize) -> Result<Expansion> {
    if m == 0 {
        return Err(Error::OutOfRange("profile length must be at least 1".into()));
    }
    match s {
        WeightScheme::Equal => Ok(Expansion::Finite(vec![WeightVector::ones(m)])),
        WeightScheme::Expert(None) => Err(Error::InvalidScheme(
            "expert weight not resolved for this distance".into(),
        )),
        WeightScheme::Expert(Some(a)) => {
            if *a < 2 {
                return Err(Error::InvalidScheme("expert weight must be at least 2".into()));
            }
            let vectors = (0..m)
                .map(|i| {
                    let mut w = vec![1u64; m];
                    w[i] = *a;
                    WeightVector::from_integers(&w)
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(Expansion::Finite(vectors))
        }
        WeightScheme::AllPositive => Ok(Expansion::AllPositive),
        WeightScheme::Explicit(vs) => {
            if vs.is_empty() {
                return Err(Error::InvalidScheme("explicit scheme must not be empty".into()));
            }
            for v in vs {
                check_len(m, v.len())?;
            }
            Ok(Expansion::Finite(vs.clone()))
        }
    }
}

/// Exact scalar product `w . d`.
pub fn weighted_distance(w: &WeightVector, d: &DistanceVector) -> Result<BigRational> {
    check_len(w.len(), d.len())?;
    Ok(w
        .0
        .iter()
        .zip(d.values())
        .fold(BigRational::zero(), |acc, (wi, &di)| {
            acc + wi * BigRational::from_integer(BigInt::from(di))
        }))
}

/// Componentwise `d1 <= d2`.
pub fn dominates(d1: &DistanceVector, d2: &DistanceVector) -> Result<bool> {
    check_len(d1.len(), d2.len())?;
    Ok(d1.values().iter().zip(d2.values()).all(|(a, b)| a <= b))
}

/// `d1 <= d2` and `d1 != d2`.
pub fn strictly_dominates(d1: &DistanceVector, d2: &DistanceVector) -> Result<bool> {
    Ok(dominates(d1, d2)? && d1 != d2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dv(v: &[u64]) -> DistanceVector {
        DistanceVector::new(v.to_vec())
    }

    fn wv(v: &[u64]) -> WeightVector {
        WeightVector::from_integers(v).unwrap()
    }

    fn int(v: i64) -> BigRational {
        BigRational::from_integer(v.into())
    }

    #[test]
    fn expert_expansion_permutes_the_expert() {
        let e = expand_scheme(&WeightScheme::Expert(Some(3)), 2).unwrap();
        assert_eq!(e, Expansion::Finite(vec![wv(&[3, 1]), wv(&[1, 3])]));
    }

    #[test]
    fn equal_expansion() {
        assert_eq!(
            expand_scheme(&WeightScheme::Equal, 4).unwrap(),
            Expansion::Finite(vec![wv(&[1, 1, 1, 1])])
        );
    }

    #[test]
    fn explicit_expansion_is_verbatim() {
        let s = WeightScheme::explicit(vec![wv(&[5, 2]), wv(&[2, 5])]).unwrap();
        assert_eq!(
            expand_scheme(&s, 2).unwrap(),
            Expansion::Finite(vec![wv(&[5, 2]), wv(&[2, 5])])
        );
        assert!(expand_scheme(&s, 3).is_err());
        assert_eq!(expand_scheme(&WeightScheme::AllPositive, 3).unwrap(), Expansion::AllPositive);
    }

    #[test]
    fn default_expert_weights() {
        assert_eq!(WeightScheme::default_expert_weight(&DistanceKind::Drastic, 5, 3), 4);
        assert_eq!(WeightScheme::default_expert_weight(&DistanceKind::Hamming, 5, 3), 16);
        assert_eq!(
            WeightScheme::Expert(None).resolved(&DistanceKind::Hamming, 2, 2),
            WeightScheme::Expert(Some(5))
        );
    }

    #[test]
    fn scalar_products() {
        assert_eq!(weighted_distance(&wv(&[2, 1]), &dv(&[3, 0])).unwrap(), int(6));
        assert_eq!(weighted_distance(&wv(&[1, 1]), &dv(&[1, 1])).unwrap(), int(2));
        assert_eq!(weighted_distance(&wv(&[7, 3, 9]), &dv(&[0, 0, 0])).unwrap(), int(0));
        assert!(matches!(
            weighted_distance(&wv(&[1]), &dv(&[1, 1])),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn dominance_cases() {
        assert!(dominates(&dv(&[0, 1]), &dv(&[1, 1])).unwrap());
        assert!(!dominates(&dv(&[3, 0]), &dv(&[2, 2])).unwrap());
        assert!(!dominates(&dv(&[2, 2]), &dv(&[3, 0])).unwrap());
        assert!(dominates(&dv(&[2, 2]), &dv(&[2, 2])).unwrap());
        assert!(strictly_dominates(&dv(&[0, 1]), &dv(&[0, 2])).unwrap());
        assert!(!strictly_dominates(&dv(&[2, 2]), &dv(&[2, 2])).unwrap());
        assert!(!strictly_dominates(&dv(&[1, 0]), &dv(&[0, 1])).unwrap());
        assert!(dominates(&dv(&[1]), &dv(&[1, 2])).is_err());
    }

    #[test]
    fn weights_must_be_positive() {
        assert!(matches!(WeightVector::from_integers(&[1, 0]), Err(Error::NonPositiveWeight)));
        assert!(WeightVector::new(vec![int(-1)]).is_err());
    }

    #[test]
    fn scheme_syntax_round_trips() {
        for text in ["equal", "expert", "expert:7", "all", "list:2,1;1,2", "list:1/2,3"] {
            let s = WeightScheme::parse(text).unwrap();
            assert_eq!(s.to_string(), text);
        }
        assert!(WeightScheme::parse("expert:1").is_err());
        assert!(WeightScheme::parse("list:1,2;1").is_err());
        assert!(WeightScheme::parse("list:0,1").is_err());
        assert!(WeightScheme::parse("some").is_err());
    }

    #[test]
    fn permutation_closure() {
        assert!(WeightScheme::parse("list:5,2;2,5").unwrap().is_permutation_closed());
        assert!(!WeightScheme::parse("list:2,1").unwrap().is_permutation_closed());
        assert!(WeightScheme::parse("list:1,1").unwrap().is_permutation_closed());
        assert!(WeightScheme::parse("list:3,1,1;1,3,1;1,1,3")
            .unwrap()
            .is_permutation_closed());
        assert!(!WeightScheme::parse("list:3,1,1;1,3,1").unwrap().is_permutation_closed());
        assert!(WeightScheme::AllPositive.is_permutation_closed());
    }

    #[test]
    fn product_concatenates() {
        let l = WeightScheme::parse("list:1;2").unwrap();
        let r = WeightScheme::parse("list:3,4").unwrap();
        assert_eq!(
            l.product(1, &r, 2).unwrap(),
            WeightScheme::parse("list:1,3,4;2,3,4").unwrap()
        );
        assert_eq!(
            WeightScheme::AllPositive.product(2, &WeightScheme::AllPositive, 1).unwrap(),
            WeightScheme::AllPositive
        );
        assert!(WeightScheme::AllPositive.product(2, &WeightScheme::Equal, 1).is_err());
    }

    fn rat() -> impl Strategy<Value = BigRational> {
        (1i64..50, 1i64..20).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
    }

    proptest! {
        #[test]
        fn weighted_distance_is_linear(
            ws in proptest::collection::vec(rat(), 3),
            a in proptest::collection::vec(0u64..20, 3),
            b in proptest::collection::vec(0u64..20, 3),
        ) {
            let w = WeightVector::new(ws).unwrap();
            let (da, db) = (dv(&a), dv(&b));
            let sum = da.add(&db).unwrap();
            prop_assert_eq!(
                weighted_distance(&w, &sum).unwrap(),
                weighted_distance(&w, &da).unwrap() + weighted_distance(&w, &db).unwrap()
            );
        }

        #[test]
        fn strict_dominance_wins_for_every_weight(
            ws in proptest::collection::vec(rat(), 4),
            base in proptest::collection::vec(0u64..10, 4),
            bump in proptest::collection::vec(0u64..3, 4),
        ) {
            let dj = dv(&base);
            let di = dv(&base.iter().zip(&bump).map(|(a, b)| a + b).collect::<Vec<_>>());
            let w = WeightVector::new(ws).unwrap();
            if strictly_dominates(&dj, &di).unwrap() {
                prop_assert!(weighted_distance(&w, &dj).unwrap() < weighted_distance(&w, &di).unwrap());
            }
        }

        #[test]
        fn argmin_is_scale_invariant(
            ws in proptest::collection::vec(rat(), 2),
            pts in proptest::collection::vec(proptest::collection::vec(0u64..8, 2), 1..8),
            c in rat(),
        ) {
            let w = WeightVector::new(ws).unwrap();
            let cw = w.scale(&c).unwrap();
            let argmin = |w: &WeightVector| {
                let vals: Vec<BigRational> = pts.iter().map(|p| weighted_distance(w, &dv(p)).unwrap()).collect();
                let min = vals.iter().min().unwrap().clone();
                vals.iter().enumerate().filter(|(_, v)| **v == min).map(|(i, _)| i).collect::<Vec<_>>()
            };
            prop_assert_eq!(argmin(&w), argmin(&cw));
        }
    }
}
