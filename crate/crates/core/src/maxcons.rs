//! Maximal subsets of the profile consistent with the integrity constraints.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::formula::{Model, ModelSet};
use crate::merge::Instance;

/// Largest profile handled by subset enumeration.
pub const MAX_PROFILE: usize = 24;

/// Indices (0-based) of profile entries jointly consistent with the
/// constraints; the constraints themselves are implicit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Maxcon {
    pub indices: BTreeSet<usize>,
}

impl Maxcon {
    fn from_mask(mask: u32, m: usize) -> Self {
        Maxcon { indices: (0..m).filter(|i| mask >> i & 1 == 1).collect() }
    }

    fn mask(&self) -> u32 {
        self.indices.iter().fold(0, |acc, i| acc | 1 << i)
    }
}

impl fmt::Display for Maxcon {
    /// 1-based, matching the usual `F_1 .. F_m` numbering.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.indices.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(", "))
    }
}

/// Bitmask of satisfied profile entries for each model of the constraints.
fn satisfaction_masks(inst: &Instance) -> Result<Vec<(Model, u32)>> {
    let m = inst.m();
    if m > MAX_PROFILE {
        return Err(Error::OutOfRange(format!(
            "profile of {m} formulae exceeds the limit of {MAX_PROFILE}"
        )));
    }
    Ok(inst
        .mu_models()
        .iter()
        .map(|i| {
            let mask = inst
                .profile()
                .entries()
                .iter()
                .enumerate()
                .filter(|(_, f)| f.evaluate(i))
                .fold(0u32, |acc, (k, _)| acc | 1 << k);
            (*i, mask)
        })
        .collect())
}

/// All maxcons, in lexicographic order of their index sets.
///
/// Subsets are visited by decreasing size; a subset contained in a maxcon
/// already found is skipped, and consistency means some model of the
/// constraints satisfies every chosen entry.
pub fn maxcons(inst: &Instance) -> Result<Vec<Maxcon>> {
    let m = inst.m();
    let masks = satisfaction_masks(inst)?;
    let mut found: Vec<u32> = Vec::new();
    let mut by_size: Vec<Vec<u32>> = vec![Vec::new(); m + 1];
    for s in 0..(1u32 << m) {
        by_size[s.count_ones() as usize].push(s);
    }
    for size in (0..=m).rev() {
        for &s in &by_size[size] {
            if found.iter().any(|&f| f & s == s) {
                continue;
            }
            if masks.iter().any(|(_, mask)| mask & s == s) {
                found.push(s);
            }
        }
    }
    let mut out: Vec<Maxcon> = found.into_iter().map(|s| Maxcon::from_mask(s, m)).collect();
    out.sort();
    Ok(out)
}

/// Models of the disjunction of all maxcons (each conjoined with the
/// constraints).
pub fn maxcons_disjunction(inst: &Instance) -> Result<ModelSet> {
    let masks = satisfaction_masks(inst)?;
    let cons: Vec<u32> = maxcons(inst)?.iter().map(Maxcon::mask).collect();
    Ok(masks
        .into_iter()
        .filter(|(_, mask)| cons.iter().any(|&c| mask & c == c))
        .map(|(i, _)| i)
        .collect())
}
