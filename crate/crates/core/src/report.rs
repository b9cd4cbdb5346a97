//! Shatter reports shared by the explicit set-system engine and the
//! free-group decision procedure.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Shattered,
    NotShattered,
}

/// One cut-out subset of the target together with a family member achieving it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutWitness<P, W> {
    pub subset: Vec<P>,
    pub witness: W,
}

/// Outcome of checking every subset of `target`.
///
/// Subsets are listed in the order of their bitmask over the positions of
/// `target` (bit `i` set means `target[i]` is included).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShatterReport<P, W> {
    pub target: Vec<P>,
    pub verdict: Verdict,
    pub missing: Vec<Vec<P>>,
    pub witnesses: Vec<CutWitness<P, W>>,
}

impl<P: Clone, W> ShatterReport<P, W> {
    /// Assembles a report from per-mask results. `results[mask]` is the
    /// witness for the subset selected by `mask`, if any.
    pub(crate) fn from_masks(target: Vec<P>, results: Vec<Option<W>>) -> Self {
        let mut missing = Vec::new();
        let mut witnesses = Vec::new();
        for (mask, result) in results.into_iter().enumerate() {
            let subset = select(&target, mask as u64);
            match result {
                Some(witness) => witnesses.push(CutWitness { subset, witness }),
                None => missing.push(subset),
            }
        }
        let verdict = if missing.is_empty() {
            Verdict::Shattered
        } else {
            Verdict::NotShattered
        };
        ShatterReport {
            target,
            verdict,
            missing,
            witnesses,
        }
    }

    pub fn is_shattered(&self) -> bool {
        self.verdict == Verdict::Shattered
    }
}

pub(crate) fn select<P: Clone>(items: &[P], mask: u64) -> Vec<P> {
    items
        .iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, p)| p.clone())
        .collect()
}
