//! Explicit finite set systems.
//!
//! A [`SetSystem`] is a finite ground set of opaque labels together with a
//! deduplicated family of subsets, each stored as a [`PointSet`] bitmask over
//! ground positions. Grounds of up to 64 points fit in a single machine word;
//! larger grounds spill into additional words transparently.

use std::collections::HashSet;
use std::fmt;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::report::ShatterReport;

/// Default cap on the size of a target set for [`SetSystem::shatters`].
pub const DEFAULT_SHATTER_CAP: usize = 20;

/// Membership mask over the positions of a ground set.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PointSet {
    words: SmallVec<[u64; 1]>,
}

impl PointSet {
    pub fn empty(universe: usize) -> Self {
        PointSet {
            words: SmallVec::from_elem(0, universe.div_ceil(64).max(1)),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut s = Self::empty(universe);
        for i in 0..universe {
            s.insert(i);
        }
        s
    }

    pub fn from_indices(universe: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut s = Self::empty(universe);
        for i in indices {
            if i >= universe {
                return Err(Error::domain(format!(
                    "point index {i} outside ground of size {universe}"
                )));
            }
            s.insert(i);
        }
        Ok(s)
    }

    pub fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    pub fn contains(&self, i: usize) -> bool {
        self.words
            .get(i / 64)
            .is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.words
            .iter()
            .zip(other.words.iter().chain(std::iter::repeat(&0)))
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        PointSet {
            words: self
                .words
                .iter()
                .zip(other.words.iter())
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// Complement relative to a universe of `universe` points.
    pub fn complement(&self, universe: usize) -> PointSet {
        let mut out = PointSet::empty(universe);
        for i in (0..universe).filter(|&i| !self.contains(i)) {
            out.insert(i);
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            (0..64)
                .filter(move |b| w >> b & 1 == 1)
                .map(move |b| wi * 64 + b)
        })
    }

    /// Packs `self ∩ positions` into a compact code: bit `j` is set iff
    /// `positions[j]` is a member.
    fn trace_code(&self, positions: &[usize]) -> u64 {
        positions
            .iter()
            .enumerate()
            .fold(0, |acc, (j, &p)| acc | (self.contains(p) as u64) << j)
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite ground set with a deduplicated family of subsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetSystem {
    ground: Vec<String>,
    family: Vec<PointSet>,
}

#[derive(Serialize, Deserialize)]
struct SetSystemFile {
    ground: Vec<String>,
    family: Vec<Vec<usize>>,
}

impl SetSystem {
    /// Builds a system from labels and index lists. Duplicate family members
    /// are dropped, keeping the first occurrence.
    pub fn new(ground: Vec<String>, family: Vec<Vec<usize>>) -> Result<Self> {
        let n = ground.len();
        let members = family
            .into_iter()
            .map(|ix| PointSet::from_indices(n, ix))
            .collect::<Result<Vec<_>>>()?;
        Self::from_sets(ground, members)
    }

    pub fn from_sets(ground: Vec<String>, family: Vec<PointSet>) -> Result<Self> {
        let mut seen = HashSet::new();
        if let Some(dup) = ground.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::domain(format!("duplicate ground label {dup:?}")));
        }
        let full = PointSet::full(ground.len());
        let mut seen = HashSet::new();
        let mut members = Vec::with_capacity(family.len());
        for s in family {
            if !s.is_subset(&full) {
                return Err(Error::domain("family member is not a subset of the ground"));
            }
            let s = s.intersection(&full);
            if seen.insert(s.clone()) {
                members.push(s);
            }
        }
        Ok(SetSystem {
            ground,
            family: members,
        })
    }

    /// Ground labelled `0..n` by decimal strings.
    pub fn with_numbered_ground(n: usize, family: Vec<Vec<usize>>) -> Result<Self> {
        Self::new((0..n).map(|i| i.to_string()).collect(), family)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SetSystemFile =
            serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        Self::new(file.ground, file.family)
    }

    pub fn to_json(&self) -> String {
        let file = SetSystemFile {
            ground: self.ground.clone(),
            family: self.family.iter().map(|s| s.iter().collect()).collect(),
        };
        serde_json::to_string(&file).expect("set system serializes")
    }

    pub fn ground(&self) -> &[String] {
        &self.ground
    }

    pub fn family(&self) -> &[PointSet] {
        &self.family
    }

    pub fn ground_size(&self) -> usize {
        self.ground.len()
    }

    /// Resolves labels to a point set over this ground.
    pub fn point_set<S: AsRef<str>>(&self, labels: &[S]) -> Result<PointSet> {
        let mut out = PointSet::empty(self.ground.len());
        for l in labels {
            let l = l.as_ref();
            let i = self
                .ground
                .iter()
                .position(|g| g == l)
                .ok_or_else(|| Error::domain(format!("label {l:?} not in ground")))?;
            out.insert(i);
        }
        Ok(out)
    }

    fn labels(&self, s: &PointSet) -> Vec<String> {
        s.iter().map(|i| self.ground[i].clone()).collect()
    }

    fn check_in_ground(&self, s: &PointSet, what: &str) -> Result<()> {
        if s.is_subset(&PointSet::full(self.ground.len())) {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "{what} is not a subset of the ground"
            )))
        }
    }

    /// Index of some family member `S` with `S ∩ target = sub`.
    pub fn cuts_out(&self, target: &PointSet, sub: &PointSet) -> Result<Option<usize>> {
        self.check_in_ground(target, "target")?;
        if !sub.is_subset(target) {
            return Err(Error::domain("subset is not contained in the target"));
        }
        Ok(self
            .family
            .iter()
            .position(|s| s.intersection(target) == *sub))
    }

    pub fn shatters(&self, target: &PointSet) -> Result<ShatterReport<String, Vec<String>>> {
        self.shatters_with_cap(target, DEFAULT_SHATTER_CAP)
    }

    /// Enumerates all `2^|target|` subsets; refuses targets larger than `cap`.
    pub fn shatters_with_cap(
        &self,
        target: &PointSet,
        cap: usize,
    ) -> Result<ShatterReport<String, Vec<String>>> {
        self.check_in_ground(target, "target")?;
        let positions: Vec<usize> = target.iter().collect();
        if positions.len() > cap.min(63) {
            return Err(Error::resource("shatter target size", cap as u64));
        }
        let mut witness: Vec<Option<usize>> = vec![None; 1 << positions.len()];
        for (fi, s) in self.family.iter().enumerate() {
            let slot = &mut witness[s.trace_code(&positions) as usize];
            if slot.is_none() {
                *slot = Some(fi);
            }
        }
        let labels = positions.iter().map(|&i| self.ground[i].clone()).collect();
        let results = witness
            .into_iter()
            .map(|w| w.map(|fi| self.labels(&self.family[fi])))
            .collect();
        Ok(ShatterReport::from_masks(labels, results))
    }

    fn is_shattered(&self, positions: &[usize]) -> bool {
        let needed = 1usize << positions.len();
        if self.family.len() < needed {
            return false;
        }
        let mut hit = vec![false; needed];
        let mut count = 0;
        for s in &self.family {
            let code = s.trace_code(positions) as usize;
            if !hit[code] {
                hit[code] = true;
                count += 1;
                if count == needed {
                    return true;
                }
            }
        }
        false
    }

    /// Exact VC dimension. `None` for the empty family, which shatters no set
    /// at all (not even the empty one).
    pub fn vc_dimension_exact(&self) -> Result<Option<usize>> {
        self.vc_dimension_with_cap(DEFAULT_SHATTER_CAP)
    }

    /// Searches subset sizes in ascending order and stops at the first size
    /// with no shattered subset; shattering is closed under taking subsets.
    /// Fails with a resource error carrying the certified lower bound if the
    /// search would have to examine sets larger than `cap`.
    pub fn vc_dimension_with_cap(&self, cap: usize) -> Result<Option<usize>> {
        if self.family.is_empty() {
            return Ok(None);
        }
        let n = self.ground.len();
        let mut best = 0;
        for size in 1..=n {
            if size > cap.min(63) {
                return Err(Error::Resource {
                    what: "VC dimension subset size".into(),
                    limit: cap as u64,
                    lower_bound: Some(best as u64),
                });
            }
            let found = (0..n)
                .combinations(size)
                .par_bridge()
                .any(|c| self.is_shattered(&c));
            if !found {
                break;
            }
            best = size;
        }
        Ok(Some(best))
    }

    /// `max_{|A| = n} |{S ∩ A : S ∈ family}|`.
    pub fn shatter_function(&self, n: usize) -> Result<u64> {
        if n > self.ground.len() {
            return Err(Error::domain(format!(
                "n = {n} exceeds ground size {}",
                self.ground.len()
            )));
        }
        if n > DEFAULT_SHATTER_CAP {
            return Err(Error::resource(
                "shatter function argument",
                DEFAULT_SHATTER_CAP as u64,
            ));
        }
        let best = (0..self.ground.len())
            .combinations(n)
            .par_bridge()
            .map(|positions| {
                let mut codes: Vec<u64> = self
                    .family
                    .iter()
                    .map(|s| s.trace_code(&positions))
                    .collect();
                codes.sort_unstable();
                codes.dedup();
                codes.len() as u64
            })
            .max()
            .unwrap_or(0);
        Ok(best)
    }

    /// `{X \ S : S ∈ family}`.
    pub fn complement_system(&self) -> SetSystem {
        let n = self.ground.len();
        let family = self.family.iter().map(|s| s.complement(n)).collect();
        SetSystem::from_sets(self.ground.clone(), family).expect("complements stay in ground")
    }

    /// `{S1 ∩ S2 : S1 ∈ self, S2 ∈ other}` over a shared ground.
    pub fn intersection_system(&self, other: &SetSystem) -> Result<SetSystem> {
        if self.ground != other.ground {
            return Err(Error::domain("intersection requires identical grounds"));
        }
        let family = self
            .family
            .iter()
            .cartesian_product(other.family.iter())
            .map(|(a, b)| a.intersection(b))
            .collect();
        SetSystem::from_sets(self.ground.clone(), family)
    }

    /// `{f⁻¹(S) : S ∈ family}` where `map[i]` is the image in this ground of
    /// the `i`-th point of `new_ground`.
    pub fn preimage_system(&self, new_ground: Vec<String>, map: &[usize]) -> Result<SetSystem> {
        if map.len() != new_ground.len() {
            return Err(Error::domain("map length differs from the new ground"));
        }
        if let Some(&bad) = map.iter().find(|&&y| y >= self.ground.len()) {
            return Err(Error::domain(format!("map image {bad} outside the ground")));
        }
        let family = self
            .family
            .iter()
            .map(|s| {
                PointSet::from_indices(
                    new_ground.len(),
                    (0..map.len()).filter(|&x| s.contains(map[x])),
                )
            })
            .collect::<Result<Vec<_>>>()?;
        SetSystem::from_sets(new_ground, family)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Cosets of {0, 3} in Z/6.
    fn cosets_z6() -> SetSystem {
        SetSystem::with_numbered_ground(6, vec![vec![0, 3], vec![1, 4], vec![2, 5]]).unwrap()
    }

    fn intervals(lo: i64, hi: i64) -> SetSystem {
        let ground: Vec<String> = (lo..=hi).map(|v| v.to_string()).collect();
        let n = ground.len();
        let mut family = vec![vec![]];
        for a in 0..n {
            for b in a..n {
                family.push((a..=b).collect());
            }
        }
        SetSystem::new(ground, family).unwrap()
    }

    fn powerset(n: usize) -> SetSystem {
        let family = (0..1u64 << n)
            .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
            .collect();
        SetSystem::with_numbered_ground(n, family).unwrap()
    }

    #[test]
    fn cuts_out_coset_examples() {
        let sys = cosets_z6();
        let target = PointSet::from_indices(6, [0, 1]).unwrap();
        let sub = PointSet::from_indices(6, [0]).unwrap();
        let w = sys.cuts_out(&target, &sub).unwrap().unwrap();
        assert_eq!(sys.family()[w], PointSet::from_indices(6, [0, 3]).unwrap());

        let target = PointSet::from_indices(6, [0, 3]).unwrap();
        assert_eq!(sys.cuts_out(&target, &sub).unwrap(), None);

        let empty = PointSet::empty(6);
        assert!(sys.cuts_out(&empty, &empty).unwrap().is_some());
    }

    #[test]
    fn cuts_out_rejects_bad_subsets() {
        let sys = cosets_z6();
        let target = PointSet::from_indices(6, [0]).unwrap();
        let sub = PointSet::from_indices(6, [1]).unwrap();
        assert!(matches!(sys.cuts_out(&target, &sub), Err(Error::Domain(_))));
        let outside = PointSet::from_indices(8, [7]).unwrap();
        assert!(matches!(
            sys.cuts_out(&outside, &PointSet::empty(8)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn shatters_intervals() {
        let sys = intervals(-20, 20);
        let pair = sys.point_set(&["0", "5"]).unwrap();
        let report = sys.shatters(&pair).unwrap();
        assert!(report.is_shattered());
        assert_eq!(report.witnesses.len(), 4);
        for w in &report.witnesses {
            let member = sys.point_set(&w.witness).unwrap();
            assert_eq!(
                member.intersection(&pair),
                sys.point_set(&w.subset).unwrap()
            );
        }

        let triple = sys.point_set(&["0", "5", "10"]).unwrap();
        let report = sys.shatters(&triple).unwrap();
        assert!(!report.is_shattered());
        assert_eq!(
            report.missing,
            vec![vec!["0".to_string(), "10".to_string()]]
        );

        assert!(sys.shatters(&PointSet::empty(41)).unwrap().is_shattered());
    }

    #[test]
    fn shatter_cap_is_enforced() {
        let sys = powerset(4);
        let all = PointSet::full(4);
        assert!(matches!(
            sys.shatters_with_cap(&all, 3),
            Err(Error::Resource { .. })
        ));
    }

    #[test]
    fn vc_dimension_examples() {
        assert_eq!(cosets_z6().vc_dimension_exact().unwrap(), Some(1));
        assert_eq!(powerset(3).vc_dimension_exact().unwrap(), Some(3));
        assert_eq!(intervals(-20, 20).vc_dimension_exact().unwrap(), Some(2));
        let whole = SetSystem::with_numbered_ground(6, vec![(0..6).collect()]).unwrap();
        assert_eq!(whole.vc_dimension_exact().unwrap(), Some(0));
        let none = SetSystem::with_numbered_ground(3, vec![]).unwrap();
        assert_eq!(none.vc_dimension_exact().unwrap(), None);
    }

    #[test]
    fn vc_dimension_cap_reports_lower_bound() {
        match powerset(5).vc_dimension_with_cap(2) {
            Err(Error::Resource { lower_bound, .. }) => assert_eq!(lower_bound, Some(2)),
            other => panic!("expected resource error, got {other:?}"),
        }
    }

    #[test]
    fn shatter_function_examples() {
        let sys = cosets_z6();
        assert_eq!(sys.shatter_function(2).unwrap(), 3);
        assert_eq!(sys.shatter_function(0).unwrap(), 1);
        // min{n + 1, [G : H]}
        for n in 0..=6 {
            assert_eq!(sys.shatter_function(n).unwrap(), (n as u64 + 1).min(3));
        }
        assert_eq!(powerset(3).shatter_function(3).unwrap(), 8);
        assert!(matches!(sys.shatter_function(7), Err(Error::Domain(_))));
    }

    #[test]
    fn constructions() {
        let sys = cosets_z6();
        let comp = sys.complement_system();
        let expected: Vec<PointSet> = [[1, 2, 4, 5], [0, 2, 3, 5], [0, 1, 3, 4]]
            .iter()
            .map(|ix| PointSet::from_indices(6, ix.iter().copied()).unwrap())
            .collect();
        assert_eq!(comp.family(), expected.as_slice());

        let whole = SetSystem::with_numbered_ground(6, vec![(0..6).collect()]).unwrap();
        assert_eq!(sys.intersection_system(&whole).unwrap(), sys);

        let fold: Vec<usize> = (0..12).map(|x| x % 6).collect();
        let pre = sys
            .preimage_system((0..12).map(|i| i.to_string()).collect(), &fold)
            .unwrap();
        assert_eq!(pre.family().len(), 3);
        assert!(pre.family().iter().all(|s| s.len() == 4));
        assert_eq!(
            pre.family()[0],
            PointSet::from_indices(12, [0, 3, 6, 9]).unwrap()
        );

        assert!(matches!(
            sys.preimage_system(vec!["x".into()], &[6]),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn family_is_deduplicated_and_validated() {
        let sys = SetSystem::with_numbered_ground(3, vec![vec![0], vec![0], vec![1, 0]]).unwrap();
        assert_eq!(sys.family().len(), 2);
        assert!(SetSystem::with_numbered_ground(3, vec![vec![3]]).is_err());
        assert!(SetSystem::new(vec!["a".into(), "a".into()], vec![]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"ground": ["x", "y", "z"], "family": [[0, 1], [2], []]}"#;
        let sys = SetSystem::from_json(text).unwrap();
        assert_eq!(SetSystem::from_json(&sys.to_json()).unwrap(), sys);
        assert!(matches!(SetSystem::from_json("{"), Err(Error::Parse(_))));
    }

    #[test]
    fn wide_grounds_use_multiword_masks() {
        let n = 130;
        let sys = SetSystem::with_numbered_ground(n, vec![vec![0, 64, 129], vec![129]]).unwrap();
        let target = PointSet::from_indices(n, [64, 129]).unwrap();
        let report = sys.shatters(&target).unwrap();
        assert_eq!(report.witnesses.len(), 2);
        assert_eq!(sys.complement_system().family()[1].len(), n - 1);
    }
}
