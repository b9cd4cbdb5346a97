//! Translated progressions `gP(N̄)` and the cut-out decision procedure.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use super::tree::{minimal_tree, TreeSlice};
use super::word::{dist_vector, FWord};
use crate::error::{Error, Result};
use crate::report::ShatterReport;

/// Default cap on `|X|` for the exhaustive shatter check.
pub const DEFAULT_FREE_SHATTER_CAP: usize = 14;

/// `translate · P(bounds)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FProgressionSpec {
    pub translate: FWord,
    pub bounds: Vec<u64>,
}

impl FProgressionSpec {
    pub fn new(translate: FWord, bounds: Vec<u64>) -> Result<Self> {
        if bounds.len() != translate.rank() as usize {
            return Err(Error::domain(format!(
                "{} bounds given for rank {}",
                bounds.len(),
                translate.rank()
            )));
        }
        Ok(FProgressionSpec { translate, bounds })
    }

    pub fn contains(&self, x: &FWord) -> Result<bool> {
        let d = dist_vector(&self.translate, x)?;
        Ok(d.iter().zip(&self.bounds).all(|(d, n)| d <= n))
    }
}

impl fmt::Display for FProgressionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let bounds: Vec<String> = self.bounds.iter().map(u64::to_string).collect();
        write!(f, "{} P({})", self.translate, bounds.join(","))
    }
}

/// `x ∈ gP(N̄)` iff `d_i(g, x) ≤ N_i` for all `i`.
pub fn progression_contains(spec: &FProgressionSpec, x: &FWord) -> Result<bool> {
    spec.contains(x)
}

/// Re-centres `gP(N̄)` at the vertex `h` of the connected slice closest to
/// `g`, with `M_i = N_i − d_i(g, h)`, so that both progressions have the same
/// trace on the slice. `None` when the progression misses the slice.
///
/// Every path from `g` into the slice enters through `h`, so
/// `d_i(g, p) = d_i(g, h) + d_i(h, p)` for each vertex `p` of the slice.
pub fn normalize_entry_point(
    slice: &TreeSlice,
    spec: &FProgressionSpec,
) -> Result<Option<FProgressionSpec>> {
    if slice.rank() != spec.translate.rank() {
        return Err(Error::domain("rank mismatch between slice and progression"));
    }
    let mut hit = false;
    for v in slice.vertices() {
        if spec.contains(v)? {
            hit = true;
            break;
        }
    }
    if !hit {
        return Ok(None);
    }
    let h = slice.closest_vertex(&spec.translate)?;
    let offset = dist_vector(&spec.translate, &h)?;
    let bounds = spec
        .bounds
        .iter()
        .zip(&offset)
        .map(|(n, d)| n.checked_sub(*d))
        .collect::<Option<Vec<u64>>>()
        .expect("entry point lies inside the progression");
    Ok(Some(FProgressionSpec {
        translate: h,
        bounds,
    }))
}

/// Precomputed distances for deciding which subsets of a finite `X` are cut
/// out by some `gP(N̄)`.
///
/// Completeness: if `gP(N̄)` cuts out a nonempty `S`, re-centring it at its
/// entry point into `T(X)` preserves the trace, so some centre `h ∈ T(X)`
/// works. For a fixed centre the trace only depends on which points fall
/// under each threshold, and the smallest thresholds containing `S`,
/// `N_i = max_{s ∈ S} d_i(h, s)`, admit the fewest extra points; if they
/// admit one outside `S`, every admissible choice does. So trying each
/// `h ∈ T(X)` with those thresholds decides the question exactly.
#[derive(Debug, Clone)]
pub struct CutSearch {
    rank: usize,
    points: Vec<FWord>,
    centers: Vec<FWord>,
    /// `dists[(h * |X| + x) * k + (i - 1)] = d_i(centers[h], points[x])`.
    dists: Vec<u64>,
}

impl CutSearch {
    /// Points are deduplicated, keeping first occurrences in order.
    pub fn new(x: &[FWord]) -> Result<Self> {
        Self::with_cap(x, DEFAULT_FREE_SHATTER_CAP)
    }

    pub fn with_cap(x: &[FWord], cap: usize) -> Result<Self> {
        let mut points: Vec<FWord> = Vec::with_capacity(x.len());
        for p in x {
            if !points.contains(p) {
                points.push(p.clone());
            }
        }
        if points.len() > cap.min(63) {
            return Err(Error::resource("free-group point set size", cap as u64));
        }
        let tree = minimal_tree(&points)?;
        let rank = tree.rank() as usize;
        let centers: Vec<FWord> = tree.vertices().iter().cloned().collect();
        let mut dists = Vec::with_capacity(centers.len() * points.len() * rank);
        for h in &centers {
            for p in &points {
                dists.extend(dist_vector(h, p)?);
            }
        }
        Ok(CutSearch {
            rank,
            points,
            centers,
            dists,
        })
    }

    pub fn points(&self) -> &[FWord] {
        &self.points
    }

    fn d(&self, h: usize, x: usize) -> &[u64] {
        let n = self.points.len();
        let at = (h * n + x) * self.rank;
        &self.dists[at..at + self.rank]
    }

    fn mask_of(&self, subset: &[FWord]) -> Result<u64> {
        let mut mask = 0u64;
        for s in subset {
            let i = self
                .points
                .iter()
                .position(|p| p == s)
                .ok_or_else(|| Error::domain(format!("{s} is not a point of X")))?;
            mask |= 1 << i;
        }
        Ok(mask)
    }

    fn centre_works(&self, h: usize, mask: u64, bounds: &mut [u64]) -> bool {
        bounds.iter_mut().for_each(|b| *b = 0);
        let n = self.points.len();
        for x in (0..n).filter(|x| mask >> x & 1 == 1) {
            for (b, &d) in bounds.iter_mut().zip(self.d(h, x)) {
                *b = (*b).max(d);
            }
        }
        (0..n)
            .filter(|x| mask >> x & 1 == 0)
            .all(|x| self.d(h, x).iter().zip(bounds.iter()).any(|(d, b)| d > b))
    }

    /// A progression whose trace on `X` is the subset selected by `mask`.
    /// Centres are tried in shortlex order.
    pub fn find(&self, mask: u64) -> Option<FProgressionSpec> {
        let mut bounds = vec![0u64; self.rank];
        for h in 0..self.centers.len() {
            if self.centre_works(h, mask, &mut bounds) {
                return Some(FProgressionSpec {
                    translate: self.centers[h].clone(),
                    bounds,
                });
            }
        }
        if mask == 0 {
            // T(X) = X: step off the tree, to a word longer than every point.
            let far = self.points.iter().map(FWord::len).max().unwrap_or(0) + 1;
            let g = FWord::generator_power(self.points[0].rank(), 1, far as i64)
                .expect("rank is at least 1");
            return Some(FProgressionSpec {
                translate: g,
                bounds: vec![0; self.rank],
            });
        }
        None
    }

    pub fn cuts_out(&self, subset: &[FWord]) -> Result<Option<FProgressionSpec>> {
        Ok(self.find(self.mask_of(subset)?))
    }

    /// Whether every subset is cut out; stops at the first failure.
    pub fn shatters(&self) -> bool {
        let mut bounds = vec![0u64; self.rank];
        (0..1u64 << self.points.len()).all(|mask| {
            mask == 0 || (0..self.centers.len()).any(|h| self.centre_works(h, mask, &mut bounds))
        })
    }

    pub fn report(&self) -> ShatterReport<FWord, FProgressionSpec> {
        let results: Vec<Option<FProgressionSpec>> = (0..1u64 << self.points.len())
            .into_par_iter()
            .map(|mask| self.find(mask))
            .collect();
        ShatterReport::from_masks(self.points.clone(), results)
    }
}

/// Some `hP(N̄)` with `X ∩ hP(N̄) = S`, or `None` if no translated
/// progression cuts `S` out of `X`.
pub fn cuts_out_free(x: &[FWord], s: &[FWord]) -> Result<Option<FProgressionSpec>> {
    CutSearch::new(x)?.cuts_out(s)
}

pub fn is_shattered_free(x: &[FWord]) -> Result<ShatterReport<FWord, FProgressionSpec>> {
    is_shattered_free_with_cap(x, DEFAULT_FREE_SHATTER_CAP)
}

pub fn is_shattered_free_with_cap(
    x: &[FWord],
    cap: usize,
) -> Result<ShatterReport<FWord, FProgressionSpec>> {
    Ok(CutSearch::with_cap(x, cap)?.report())
}

/// A translate of `P(N̄)` cutting exactly `{a_i : i ∈ subset}` out of the
/// generators: `a_1^{N_1+2}` for the empty subset, otherwise
/// `a_j · a_{i_1}^{N_{i_1}} ⋯ a_{i_t}^{N_{i_t}}` with `j` the least chosen
/// index and `i_1 < … < i_t` the excluded ones.
pub fn generator_shatter_witness(
    rank: u32,
    bounds: &[u64],
    subset: &[u32],
) -> Result<FProgressionSpec> {
    if bounds.len() != rank as usize {
        return Err(Error::domain("one bound per generator required"));
    }
    if bounds.contains(&0) {
        return Err(Error::domain("all bounds must be at least 1"));
    }
    if let Some(bad) = subset.iter().find(|&&i| i == 0 || i > rank) {
        return Err(Error::domain(format!("generator {bad} out of range")));
    }
    let chosen: BTreeSet<u32> = subset.iter().copied().collect();
    let translate = match chosen.first() {
        None => FWord::generator_power(rank, 1, bounds[0] as i64 + 2)?,
        Some(&j) => {
            let mut g = FWord::generator_power(rank, j, 1)?;
            for i in (1..=rank).filter(|i| !chosen.contains(i)) {
                g = g.multiply(&FWord::generator_power(
                    rank,
                    i,
                    bounds[i as usize - 1] as i64,
                )?)?;
            }
            g
        }
    };
    let spec = FProgressionSpec::new(translate, bounds.to_vec())?;
    for i in 1..=rank {
        let inside = spec.contains(&FWord::generator_power(rank, i, 1)?)?;
        if inside != chosen.contains(&i) {
            return Err(Error::domain(format!(
                "constructed {spec} misclassifies generator {i}"
            )));
        }
    }
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rank: u32, s: &str) -> FWord {
        FWord::parse(rank, s).unwrap()
    }

    fn spec(g: FWord, b: &[u64]) -> FProgressionSpec {
        FProgressionSpec::new(g, b.to_vec()).unwrap()
    }

    #[test]
    fn containment_examples() {
        let p = spec(w(2, "e"), &[10, 10]);
        for s in ["1^10", "2^-10", "e"] {
            assert!(p.contains(&w(2, s)).unwrap());
        }
        let p0 = spec(w(2, "e"), &[0, 0]);
        assert!(p0.contains(&w(2, "e")).unwrap());
        assert!(!p0.contains(&w(2, "1")).unwrap());

        let q = spec(w(2, "1^10"), &[10, 1]);
        assert!(q.contains(&w(2, "1^10")).unwrap());
        assert!(!q.contains(&w(2, "1^-5")).unwrap());
        assert!(FProgressionSpec::new(w(2, "e"), vec![1]).is_err());
        assert!(q.contains(&w(1, "e")).is_err());
    }

    #[test]
    fn entry_point_examples() {
        let line =
            TreeSlice::connected(1, (0..=3).map(|n| FWord::generator_power(1, 1, n).unwrap()))
                .unwrap();
        let s = spec(w(1, "1^2"), &[4]);
        assert_eq!(normalize_entry_point(&line, &s).unwrap(), Some(s.clone()));

        let far = spec(w(1, "1^5"), &[3]);
        assert_eq!(
            normalize_entry_point(&line, &far).unwrap(),
            Some(spec(w(1, "1^3"), &[1]))
        );
        let miss = spec(w(1, "1^9"), &[2]);
        assert_eq!(normalize_entry_point(&line, &miss).unwrap(), None);
    }

    #[test]
    fn cut_examples_in_rank_one() {
        let x = vec![w(1, "e"), w(1, "1^5"), w(1, "1^10")];
        assert_eq!(cuts_out_free(&x, &[w(1, "e"), w(1, "1^10")]).unwrap(), None);
        let all = cuts_out_free(&x, &x).unwrap().unwrap();
        assert!(x.iter().all(|p| all.contains(p).unwrap()));
        let report = is_shattered_free(&x).unwrap();
        assert!(!report.is_shattered());
        assert_eq!(report.missing, vec![vec![w(1, "e"), w(1, "1^10")]]);
        assert!(cuts_out_free(&x, &[w(1, "1^3")]).is_err());
    }

    #[test]
    fn empty_subset_when_tree_equals_points() {
        let x = vec![w(1, "e"), w(1, "1")];
        let s = cuts_out_free(&x, &[]).unwrap().unwrap();
        assert!(x.iter().all(|p| !s.contains(p).unwrap()));
    }

    #[test]
    fn shatter_cap() {
        let x: Vec<FWord> = (0..15)
            .map(|n| FWord::generator_power(1, 1, n).unwrap())
            .collect();
        assert!(matches!(is_shattered_free(&x), Err(Error::Resource { .. })));
    }

    #[test]
    fn generator_witness_examples() {
        let s = generator_shatter_witness(2, &[1, 1], &[1]).unwrap();
        assert_eq!(s.translate, w(2, "1*2"));
        let full = generator_shatter_witness(3, &[2, 1, 2], &[2, 3]).unwrap();
        assert_eq!(full.translate, w(3, "2*1^2"));
        let all = generator_shatter_witness(3, &[2, 1, 2], &[1, 2, 3]).unwrap();
        assert_eq!(all.translate, w(3, "1"));
        let none = generator_shatter_witness(2, &[3, 1], &[]).unwrap();
        assert_eq!(none.translate, w(2, "1^5"));
        assert!(generator_shatter_witness(2, &[0, 1], &[1]).is_err());
        assert!(generator_shatter_witness(2, &[1, 1], &[3]).is_err());
    }
}
