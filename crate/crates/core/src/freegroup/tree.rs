//! Geometry of finite pieces of the Cayley tree of `F_k`.

use std::collections::{BTreeSet, HashSet, VecDeque};

use serde::Serialize;

use super::word::{dist_i, FWord, Letter};
use crate::error::{Error, Result};

/// The vertices of the unique path from `v` to `w`: `v` times each prefix of
/// the reduced word `v⁻¹w`.
pub fn path(v: &FWord, w: &FWord) -> Result<Vec<FWord>> {
    v.same_rank(w)?;
    let step = v.invert().mul_unchecked(w);
    Ok(step.prefixes().map(|p| v.mul_unchecked(&p)).collect())
}

/// A finite vertex set of the Cayley tree; edges are the Cayley edges between
/// members (`u ~ v` iff `u⁻¹v` is a single letter).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TreeSlice {
    rank: u32,
    vertices: BTreeSet<FWord>,
}

impl TreeSlice {
    /// Wraps a vertex set, rejecting disconnected ones.
    pub fn connected(rank: u32, vertices: impl IntoIterator<Item = FWord>) -> Result<Self> {
        let vertices: BTreeSet<FWord> = vertices.into_iter().collect();
        if vertices.iter().any(|v| v.rank() != rank) {
            return Err(Error::domain("tree slice vertices must share the rank"));
        }
        let slice = TreeSlice { rank, vertices };
        if !slice.is_connected() {
            return Err(Error::domain(
                "vertex set is not connected in the Cayley tree",
            ));
        }
        Ok(slice)
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn vertices(&self) -> &BTreeSet<FWord> {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: &FWord) -> bool {
        self.vertices.contains(v)
    }

    fn letters(&self) -> impl Iterator<Item = Letter> {
        let k = self.rank as Letter;
        (1..=k).flat_map(|i| [i, -i])
    }

    pub fn neighbors<'a>(&'a self, v: &'a FWord) -> impl Iterator<Item = FWord> + 'a {
        self.letters()
            .map(move |l| v.times_letter(l))
            .filter(move |u| self.vertices.contains(u))
    }

    pub fn degree(&self, v: &FWord) -> usize {
        self.neighbors(v).count()
    }

    /// Vertices of degree at most one.
    pub fn leaves(&self) -> BTreeSet<FWord> {
        self.vertices
            .iter()
            .filter(|v| self.degree(v) <= 1)
            .cloned()
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        let Some(start) = self.vertices.iter().next() else {
            return true;
        };
        self.component(start, None).len() == self.vertices.len()
    }

    /// Flood fill from `start`, never entering `blocked`.
    fn component(&self, start: &FWord, blocked: Option<&FWord>) -> BTreeSet<FWord> {
        let mut seen = HashSet::from([start.clone()]);
        let mut queue = VecDeque::from([start.clone()]);
        while let Some(v) = queue.pop_front() {
            for u in self.neighbors(&v) {
                if Some(&u) != blocked && seen.insert(u.clone()) {
                    queue.push_back(u);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Connected components of the slice with `p` removed.
    pub fn branches(&self, p: &FWord) -> Result<Branches> {
        if !self.contains(p) {
            return Err(Error::domain(format!("{p} is not a vertex of the tree")));
        }
        let mut components: Vec<BTreeSet<FWord>> = Vec::new();
        for start in self.neighbors(p) {
            if components.iter().all(|c| !c.contains(&start)) {
                components.push(self.component(&start, Some(p)));
            }
        }
        components.sort();
        Ok(Branches {
            center: p.clone(),
            components,
        })
    }

    /// The vertex minimizing the word metric to `g`. In a connected slice it
    /// is unique; ties could only arise otherwise and go to the shortlex-least.
    pub fn closest_vertex(&self, g: &FWord) -> Result<FWord> {
        let mut best: Option<(u64, &FWord)> = None;
        for v in &self.vertices {
            let d = super::word::dist(g, v)?;
            if best.is_none_or(|(bd, _)| d < bd) {
                best = Some((d, v));
            }
        }
        best.map(|(_, v)| v.clone())
            .ok_or_else(|| Error::domain("empty tree slice"))
    }
}

fn check_points(x: &[FWord]) -> Result<u32> {
    let first = x
        .first()
        .ok_or_else(|| Error::domain("point set must be nonempty"))?;
    for p in x {
        first.same_rank(p)?;
    }
    Ok(first.rank())
}

/// `T(X)`: the union of paths from the first point to every other point.
/// Every connected set containing `X` contains these paths, and their union
/// is itself connected, so this is the smallest one.
pub fn minimal_tree(x: &[FWord]) -> Result<TreeSlice> {
    let rank = check_points(x)?;
    let base = &x[0];
    let mut vertices = BTreeSet::new();
    for p in x {
        vertices.extend(path(base, p)?);
    }
    Ok(TreeSlice { rank, vertices })
}

/// `L(X)`: the leaves of `T(X)`.
pub fn leaves(x: &[FWord]) -> Result<BTreeSet<FWord>> {
    Ok(minimal_tree(x)?.leaves())
}

/// `br_X(p)`; [`Branches::star`] gives `br*_X(p)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Branches {
    pub center: FWord,
    pub components: Vec<BTreeSet<FWord>>,
}

impl Branches {
    /// The components plus the singleton `{p}`; together they partition `T(X)`.
    pub fn star(&self) -> Vec<BTreeSet<FWord>> {
        let mut parts = vec![BTreeSet::from([self.center.clone()])];
        parts.extend(self.components.iter().cloned());
        parts
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }
}

pub fn branches(x: &[FWord], p: &FWord) -> Result<Branches> {
    minimal_tree(x)?.branches(p)
}

/// Choice functions `f_B : [k] → X \ B` for each part `B` of `br*_X(p)`.
///
/// `center_map[i-1]` is `f_{p}(i)`; `part_maps[j][i-1]` is `f_B(i)` for
/// `B = parts[j]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DominatingSequence {
    pub center: FWord,
    pub center_map: Vec<FWord>,
    pub parts: Vec<BTreeSet<FWord>>,
    pub part_maps: Vec<Vec<FWord>>,
}

impl DominatingSequence {
    /// The union of the images of all choice functions.
    pub fn image(&self) -> BTreeSet<FWord> {
        self.center_map
            .iter()
            .chain(self.part_maps.iter().flatten())
            .cloned()
            .collect()
    }
}

/// The point of `pool` farthest from `p` in `d_i`, shortlex-least on ties.
fn farthest<'a>(i: u32, p: &FWord, pool: impl Iterator<Item = &'a FWord>) -> Option<&'a FWord> {
    let mut best: Option<(u64, &FWord)> = None;
    for x in pool {
        let d = dist_i(i, x, p).expect("ranks checked");
        let better = match best {
            None => true,
            Some((bd, bx)) => d > bd || (d == bd && x < bx),
        };
        if better {
            best = Some((d, x));
        }
    }
    best.map(|(_, x)| x)
}

/// Builds a dominating sequence for `X` around `p ∈ T(X) \ X`: `f_{p}(i)`
/// maximizes `d_i(·, p)` over `X`, and `f_B(i)` keeps that choice when it
/// lies outside `B`, otherwise re-maximizes over `X \ B`.
pub fn dominating_sequence(x: &[FWord], p: &FWord) -> Result<DominatingSequence> {
    let tree = minimal_tree(x)?;
    if x.contains(p) {
        return Err(Error::domain(format!("{p} must not be a point of X")));
    }
    let br = tree.branches(p)?;
    let k = tree.rank();
    let center_map: Vec<FWord> = (1..=k)
        .map(|i| farthest(i, p, x.iter()).expect("X is nonempty").clone())
        .collect();
    let mut part_maps = Vec::with_capacity(br.len());
    for part in &br.components {
        if x.iter().all(|y| part.contains(y)) {
            return Err(Error::domain("some branch contains all of X"));
        }
        let map = (1..=k)
            .map(|i| {
                let fp = &center_map[i as usize - 1];
                if !part.contains(fp) {
                    fp.clone()
                } else {
                    farthest(i, p, x.iter().filter(|y| !part.contains(y)))
                        .expect("X \\ B is nonempty")
                        .clone()
                }
            })
            .collect();
        part_maps.push(map);
    }
    Ok(DominatingSequence {
        center: p.clone(),
        center_map,
        parts: br.components,
        part_maps,
    })
}

/// A vertex of `T(X) \ X` with exactly three branches, each holding `k`
/// points of `X`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Tripod {
    pub center: FWord,
    pub branches: Vec<BTreeSet<FWord>>,
}

/// Searches `T(X) \ X` (shortlex order) for a tripod centre with `k`
/// points per branch, `k` the rank. Requires `|X| = 3k`. A shatterable `X`
/// of that size must have one, so `None` certifies that `X` is not shattered.
pub fn tripod_profile(x: &[FWord]) -> Result<Option<Tripod>> {
    let k = check_points(x)? as usize;
    tripod_profile_with_arm(x, k)
}

/// As [`tripod_profile`] with an explicit number of points per branch;
/// requires `|X| = 3·arm`.
pub fn tripod_profile_with_arm(x: &[FWord], arm: usize) -> Result<Option<Tripod>> {
    let tree = minimal_tree(x)?;
    let distinct: BTreeSet<&FWord> = x.iter().collect();
    if distinct.len() != 3 * arm {
        return Err(Error::domain(format!(
            "tripod profile needs exactly {} distinct points, got {}",
            3 * arm,
            distinct.len()
        )));
    }
    for p in tree.vertices().iter().filter(|v| !distinct.contains(v)) {
        let br = tree.branches(p)?;
        if br.len() == 3
            && br
                .components
                .iter()
                .all(|c| c.iter().filter(|v| distinct.contains(v)).count() == arm)
        {
            return Ok(Some(Tripod {
                center: p.clone(),
                branches: br.components,
            }));
        }
    }
    Ok(None)
}
