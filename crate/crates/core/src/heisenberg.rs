//! The integer Heisenberg group and generalized progressions `P(N1, N2)`
//! generated by `A = (1,0,0)` and `B = (0,1,0)`.
//!
//! Elements are triples `(a, b, c)` with
//! `(x,y,z) * (x',y',z') = (x+x', y+y', z+z'+x·y')`, i.e. the upper-triangular
//! unipotent matrix with `x, y` on the superdiagonal and `z` in the corner.
//! API-level points ([`HPoint`]) use arbitrary-precision integers; the
//! enumeration oracle runs on [`SmallPoint`] with checked 64-bit arithmetic.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::ser::SerializeTuple;
use serde::{Serialize, Serializer};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::report::ShatterReport;

/// Default cap on `n1 + n2` for [`enumerate_progression`].
pub const DEFAULT_ENUMERATION_CAP: u32 = 12;

/// Longest word [`witness_word`] will build.
const MAX_WITNESS_LETTERS: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HPoint {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl HPoint {
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>) -> Self {
        HPoint {
            a: a.into(),
            b: b.into(),
            c: c.into(),
        }
    }

    pub fn identity() -> Self {
        HPoint::new(0, 0, 0)
    }

    pub fn is_identity(&self) -> bool {
        self.a.is_zero() && self.b.is_zero() && self.c.is_zero()
    }

    /// `(−a, −b, ab − c)`.
    pub fn inv(&self) -> HPoint {
        HPoint {
            a: -&self.a,
            b: -&self.b,
            c: &self.a * &self.b - &self.c,
        }
    }

    pub fn to_small(&self) -> Option<SmallPoint> {
        Some(SmallPoint {
            a: self.a.to_i64()?,
            b: self.b.to_i64()?,
            c: self.c.to_i64()?,
        })
    }
}

impl Mul for &HPoint {
    type Output = HPoint;

    fn mul(self, rhs: &HPoint) -> HPoint {
        HPoint {
            a: &self.a + &rhs.a,
            b: &self.b + &rhs.b,
            c: &self.c + &rhs.c + &self.a * &rhs.b,
        }
    }
}

impl Mul for HPoint {
    type Output = HPoint;

    fn mul(self, rhs: HPoint) -> HPoint {
        &self * &rhs
    }
}

impl fmt::Display for HPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.a, self.b, self.c)
    }
}

impl FromStr for HPoint {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected \"a,b,c\", got {s:?}")));
        }
        let parse = |t: &str| {
            t.parse::<BigInt>()
                .map_err(|_| Error::Parse(format!("bad integer {t:?} in point {s:?}")))
        };
        Ok(HPoint {
            a: parse(parts[0])?,
            b: parse(parts[1])?,
            c: parse(parts[2])?,
        })
    }
}

/// Serialized as a three-element array; components outside `i64` become
/// decimal strings.
impl Serialize for HPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(3)?;
        for v in [&self.a, &self.b, &self.c] {
            match v.to_i64() {
                Some(x) => t.serialize_element(&x)?,
                None => t.serialize_element(&v.to_string())?,
            }
        }
        t.end()
    }
}

/// Fixed-width point for enumeration loops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SmallPoint {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl SmallPoint {
    pub const IDENTITY: SmallPoint = SmallPoint { a: 0, b: 0, c: 0 };

    pub fn checked_mul(self, rhs: SmallPoint) -> Result<SmallPoint> {
        let of = || Error::Overflow("Heisenberg multiplication");
        let cross = self.a.checked_mul(rhs.b).ok_or_else(of)?;
        Ok(SmallPoint {
            a: self.a.checked_add(rhs.a).ok_or_else(of)?,
            b: self.b.checked_add(rhs.b).ok_or_else(of)?,
            c: self
                .c
                .checked_add(rhs.c)
                .and_then(|c| c.checked_add(cross))
                .ok_or_else(of)?,
        })
    }

    pub fn checked_inv(self) -> Result<SmallPoint> {
        let of = || Error::Overflow("Heisenberg inversion");
        Ok(SmallPoint {
            a: self.a.checked_neg().ok_or_else(of)?,
            b: self.b.checked_neg().ok_or_else(of)?,
            c: self
                .a
                .checked_mul(self.b)
                .and_then(|ab| ab.checked_sub(self.c))
                .ok_or_else(of)?,
        })
    }
}

impl From<SmallPoint> for HPoint {
    fn from(p: SmallPoint) -> HPoint {
        HPoint::new(p.a, p.b, p.c)
    }
}

/// One of `A, A⁻¹, B, B⁻¹`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum HLetter {
    A,
    AInv,
    B,
    BInv,
}

impl HLetter {
    pub fn is_a(self) -> bool {
        matches!(self, HLetter::A | HLetter::AInv)
    }

    pub fn is_b(self) -> bool {
        matches!(self, HLetter::B | HLetter::BInv)
    }

    /// The exponent `±1`.
    pub fn sign(self) -> i64 {
        match self {
            HLetter::A | HLetter::B => 1,
            HLetter::AInv | HLetter::BInv => -1,
        }
    }

    pub fn to_small(self) -> SmallPoint {
        match self {
            HLetter::A => SmallPoint { a: 1, b: 0, c: 0 },
            HLetter::AInv => SmallPoint { a: -1, b: 0, c: 0 },
            HLetter::B => SmallPoint { a: 0, b: 1, c: 0 },
            HLetter::BInv => SmallPoint { a: 0, b: -1, c: 0 },
        }
    }

    fn flip_a(self) -> HLetter {
        match self {
            HLetter::A => HLetter::AInv,
            HLetter::AInv => HLetter::A,
            other => other,
        }
    }

    fn flip_b(self) -> HLetter {
        match self {
            HLetter::B => HLetter::BInv,
            HLetter::BInv => HLetter::B,
            other => other,
        }
    }

    fn symbol(self) -> char {
        match self {
            HLetter::A => 'A',
            HLetter::AInv => 'a',
            HLetter::B => 'B',
            HLetter::BInv => 'b',
        }
    }
}

/// An unreduced formal word over `A, A⁻¹, B, B⁻¹`.
///
/// Text form uses `A`, `B` and lowercase `a`, `b` for the inverses, so
/// `"ABab"` is the commutator `A B A⁻¹ B⁻¹`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct HWord {
    pub letters: Vec<HLetter>,
}

impl HWord {
    pub fn new(letters: Vec<HLetter>) -> Self {
        HWord { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn count(&self, letter: HLetter) -> u64 {
        self.letters.iter().filter(|&&l| l == letter).count() as u64
    }

    /// `n⁺_A(w)`.
    pub fn n_plus_a(&self) -> u64 {
        self.count(HLetter::A)
    }

    pub fn n_minus_a(&self) -> u64 {
        self.count(HLetter::AInv)
    }

    pub fn n_plus_b(&self) -> u64 {
        self.count(HLetter::B)
    }

    pub fn n_minus_b(&self) -> u64 {
        self.count(HLetter::BInv)
    }

    /// `n_A(w) = n⁺_A(w) + n⁻_A(w)`.
    pub fn n_a(&self) -> u64 {
        self.letters.iter().filter(|l| l.is_a()).count() as u64
    }

    pub fn n_b(&self) -> u64 {
        self.letters.iter().filter(|l| l.is_b()).count() as u64
    }

    pub fn reversed(&self) -> HWord {
        HWord::new(self.letters.iter().rev().copied().collect())
    }

    /// Swaps `A ↔ A⁻¹`.
    pub fn flip_a(&self) -> HWord {
        HWord::new(self.letters.iter().map(|l| l.flip_a()).collect())
    }

    /// Swaps `B ↔ B⁻¹`.
    pub fn flip_b(&self) -> HWord {
        HWord::new(self.letters.iter().map(|l| l.flip_b()).collect())
    }

    pub fn concat(&self, other: &HWord) -> HWord {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        HWord::new(letters)
    }

    fn power(letter: HLetter, inverse: HLetter, exp: i64) -> impl Iterator<Item = HLetter> {
        let l = if exp >= 0 { letter } else { inverse };
        std::iter::repeat_n(l, exp.unsigned_abs() as usize)
    }
}

impl fmt::Display for HWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.letters
            .iter()
            .try_for_each(|l| write!(f, "{}", l.symbol()))
    }
}

impl FromStr for HWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .filter(|c| !c.is_whitespace())
            .map(|c| match c {
                'A' => Ok(HLetter::A),
                'a' => Ok(HLetter::AInv),
                'B' => Ok(HLetter::B),
                'b' => Ok(HLetter::BInv),
                other => Err(Error::Parse(format!("unexpected letter {other:?} in word"))),
            })
            .collect::<Result<Vec<_>>>()
            .map(HWord::new)
    }
}

/// `(a, b, c)` with `a`, `b` the signed letter counts and
/// `c = Σ_{i<j, E_i = A, E_j = B} ε_i ε_j`, accumulated in one pass.
pub fn word_eval(w: &HWord) -> HPoint {
    let (mut a, mut b, mut c) = (0i64, 0i64, 0i64);
    for l in &w.letters {
        if l.is_a() {
            a += l.sign();
        } else {
            b += l.sign();
            c += a * l.sign();
        }
    }
    HPoint::new(a, b, c)
}

/// Left-to-right product of the letters under the group law.
pub fn word_eval_by_fold(w: &HWord) -> HPoint {
    w.letters.iter().fold(HPoint::identity(), |acc, l| {
        &acc * &HPoint::from(l.to_small())
    })
}

/// Output of the word-reduction algorithm: pairs `(w_i, j_i)` with
/// `⌜w_i⌝ · C^{j_i}` constant along the sequence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionTrace {
    pub steps: Vec<(HWord, i64)>,
}

impl ReductionTrace {
    pub fn last(&self) -> &(HWord, i64) {
        self.steps
            .last()
            .expect("trace has at least the initial step")
    }
}

/// Lazily runs the reduction algorithm: repeatedly swap the right-most
/// adjacent `A^δ B^ε` to `B^ε A^δ` and add `δε` to the counter.
///
/// Each swap removes exactly one pair `(i < j)` with an `A`-letter at `i`
/// and a `B`-letter at `j`, so the run stops after at most `n_A · n_B` swaps.
pub struct ReductionSteps {
    word: Vec<HLetter>,
    j: i64,
    started: bool,
    done: bool,
    remaining: u64,
}

impl ReductionSteps {
    pub fn new(w: &HWord) -> Self {
        ReductionSteps {
            word: w.letters.clone(),
            j: 0,
            started: false,
            done: false,
            remaining: w.n_a() * w.n_b(),
        }
    }

    fn swap_rightmost(&mut self) -> bool {
        let Some(i) = (0..self.word.len().saturating_sub(1))
            .rev()
            .find(|&i| self.word[i].is_a() && self.word[i + 1].is_b())
        else {
            return false;
        };
        self.j += self.word[i].sign() * self.word[i + 1].sign();
        self.word.swap(i, i + 1);
        true
    }
}

impl Iterator for ReductionSteps {
    type Item = (HWord, i64);

    fn next(&mut self) -> Option<(HWord, i64)> {
        if self.done {
            return None;
        }
        if !self.started {
            self.started = true;
            return Some((HWord::new(self.word.clone()), self.j));
        }
        if self.swap_rightmost() {
            assert!(self.remaining > 0, "reduction exceeded n_A·n_B swaps");
            self.remaining -= 1;
            Some((HWord::new(self.word.clone()), self.j))
        } else {
            self.done = true;
            None
        }
    }
}

pub fn reduction_trace(w: &HWord) -> ReductionTrace {
    ReductionTrace {
        steps: ReductionSteps::new(w).collect(),
    }
}

/// `gP(N1, N2)`; the identity translate gives `P(N1, N2)` itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HProgressionSpec {
    n1: BigInt,
    n2: BigInt,
    pub translate: HPoint,
}

impl HProgressionSpec {
    pub fn new(n1: impl Into<BigInt>, n2: impl Into<BigInt>, translate: HPoint) -> Result<Self> {
        let (n1, n2) = (n1.into(), n2.into());
        if n1.is_negative() || n2.is_negative() {
            return Err(Error::domain("progression bounds must be non-negative"));
        }
        Ok(HProgressionSpec { n1, n2, translate })
    }

    pub fn untranslated(n1: impl Into<BigInt>, n2: impl Into<BigInt>) -> Result<Self> {
        Self::new(n1, n2, HPoint::identity())
    }

    pub fn n1(&self) -> &BigInt {
        &self.n1
    }

    pub fn n2(&self) -> &BigInt {
        &self.n2
    }
}

/// `⌊(n1 + a)/2⌋ · ⌊(n2 + b)/2⌋` for `0 ≤ a ≤ n1`, `0 ≤ b ≤ n2`: the largest
/// central coordinate reachable over `(a, b)` within the budgets.
pub fn max_central(
    a: impl Into<BigInt>,
    b: impl Into<BigInt>,
    n1: impl Into<BigInt>,
    n2: impl Into<BigInt>,
) -> Result<BigInt> {
    let (a, b, n1, n2) = (a.into(), b.into(), n1.into(), n2.into());
    if a.is_negative() || b.is_negative() || a > n1 || b > n2 {
        return Err(Error::domain(format!(
            "max_central needs 0 ≤ a ≤ n1 and 0 ≤ b ≤ n2 (a={a}, b={b}, n1={n1}, n2={n2})"
        )));
    }
    Ok(corner(&a, &b, &n1, &n2))
}

fn corner(a: &BigInt, b: &BigInt, n1: &BigInt, n2: &BigInt) -> BigInt {
    let two = BigInt::from(2);
    (n1 + a).div_floor(&two) * (n2 + b).div_floor(&two)
}

/// Closed-form membership in the untranslated `P(n1, n2)`, split by the signs
/// of `a` and `b`.
pub fn in_progression(n1: &BigInt, n2: &BigInt, p: &HPoint) -> bool {
    let (a, b, c) = (&p.a, &p.b, &p.c);
    if a.abs() > *n1 || b.abs() > *n2 {
        return false;
    }
    let ab = a * b;
    match (a.is_negative(), b.is_negative()) {
        (false, false) => {
            let m = corner(a, b, n1, n2);
            &ab - &m <= *c && *c <= m
        }
        (true, true) => {
            let m = corner(&-a, &-b, n1, n2);
            &ab - &m <= *c && *c <= m
        }
        (false, true) => {
            let m = corner(a, &-b, n1, n2);
            -&m <= *c && *c <= &ab + &m
        }
        (true, false) => {
            let m = corner(&-a, b, n1, n2);
            -&m <= *c && *c <= &ab + &m
        }
    }
}

/// Whether `p ∈ spec.translate · P(n1, n2)`.
pub fn membership(spec: &HProgressionSpec, p: &HPoint) -> bool {
    let local = &spec.translate.inv() * p;
    in_progression(&spec.n1, &spec.n2, &local)
}

/// Reachable set of `P(n1, n2)` by breadth-first search over
/// `(element, A-letters used, B-letters used)`.
///
/// Letter budgets only grow along a word, so a state is reachable iff some
/// word with that prefix budget evaluates to its element; collapsing words
/// onto states loses nothing.
pub fn enumerate_progression(n1: u32, n2: u32) -> Result<BTreeSet<HPoint>> {
    enumerate_progression_with_cap(n1, n2, DEFAULT_ENUMERATION_CAP)
}

pub fn enumerate_progression_with_cap(n1: u32, n2: u32, cap: u32) -> Result<BTreeSet<HPoint>> {
    if n1.saturating_add(n2) > cap {
        return Err(Error::resource("enumeration budget n1 + n2", cap as u64));
    }
    let moves = [HLetter::A, HLetter::AInv, HLetter::B, HLetter::BInv];
    let start = (SmallPoint::IDENTITY, 0u32, 0u32);
    let mut seen = HashSet::from([start]);
    let mut queue = VecDeque::from([start]);
    let mut elements = HashSet::from([SmallPoint::IDENTITY]);
    while let Some((p, used_a, used_b)) = queue.pop_front() {
        for m in moves {
            let next = if m.is_a() {
                if used_a == n1 {
                    continue;
                }
                (p.checked_mul(m.to_small())?, used_a + 1, used_b)
            } else {
                if used_b == n2 {
                    continue;
                }
                (p.checked_mul(m.to_small())?, used_a, used_b + 1)
            };
            if seen.insert(next) {
                elements.insert(next.0);
                queue.push_back(next);
            }
        }
    }
    Ok(elements.into_iter().map(HPoint::from).collect())
}

/// Sorted `[[a, b, c], ...]` JSON for an enumerated set.
pub fn progression_to_json(points: &BTreeSet<HPoint>) -> String {
    serde_json::to_string(&points.iter().collect::<Vec<_>>()).expect("points serialize")
}

/// One `a,b,c` line per point, with a header.
pub fn progression_to_csv(points: &BTreeSet<HPoint>) -> String {
    let mut out = String::from("a,b,c\n");
    for p in points {
        out.push_str(&p.to_string());
        out.push('\n');
    }
    out
}

/// A word in `W(n1, n2)` evaluating to `p`.
///
/// Normalizes `p` into the quadrant `a, b ≥ 0` (flipping `A` before `B`),
/// starts from the corner word `B^{b−β} A^α B^β A^{a−α}` with
/// `α = ⌊(n1+a)/2⌋`, `β = ⌊(n2+b)/2⌋`, and walks its reduction trace to the
/// first word whose central coordinate is the target. Targets below zero are
/// reached through the reverse word, which maps `c` to `ab − c`.
pub fn witness_word(p: &HPoint, n1: u64, n2: u64) -> Result<HWord> {
    let spec = HProgressionSpec::untranslated(n1, n2)?;
    if !membership(&spec, p) {
        return Err(Error::domain(format!("{p} is not in P({n1},{n2})")));
    }
    if p.is_identity() {
        return Ok(HWord::default());
    }
    if n1.saturating_add(n2) > MAX_WITNESS_LETTERS {
        return Err(Error::resource("witness word length", MAX_WITNESS_LETTERS));
    }
    let small = p.to_small().ok_or(Error::Overflow("witness point"))?;
    let (mut a, mut b, mut c) = (small.a, small.b, small.c);
    let flip_a = a < 0;
    if flip_a {
        a = -a;
        c = -c;
    }
    let flip_b = b < 0;
    if flip_b {
        b = -b;
        c = -c;
    }
    let word = quadrant_witness(a, b, c, n1 as i64, n2 as i64);
    let word = if flip_b { word.flip_b() } else { word };
    Ok(if flip_a { word.flip_a() } else { word })
}

fn quadrant_witness(a: i64, b: i64, c: i64, n1: i64, n2: i64) -> HWord {
    let alpha = (n1 + a).div_euclid(2);
    let beta = (n2 + b).div_euclid(2);
    let top = alpha * beta;
    if c < 0 {
        return quadrant_witness(a, b, a * b - c, n1, n2).reversed();
    }
    let corner: Vec<HLetter> = HWord::power(HLetter::B, HLetter::BInv, b - beta)
        .chain(HWord::power(HLetter::A, HLetter::AInv, alpha))
        .chain(HWord::power(HLetter::B, HLetter::BInv, beta))
        .chain(HWord::power(HLetter::A, HLetter::AInv, a - alpha))
        .collect();
    let corner = HWord::new(corner);
    ReductionSteps::new(&corner)
        .find(|(_, j)| top - j == c)
        .map(|(w, _)| w)
        .expect("trace counter passes through every value between 0 and the corner")
}

/// Largest translate window accepted by [`window_shatter_search`].
pub const MAX_TRANSLATE_WINDOW: u32 = 40;

/// Experimental: which subsets of `x` are cut out by `gP(n1, n2)` with the
/// translate `g = (a, b, c)` restricted to `|a|, |b|, |c| ≤ window`.
///
/// This is a heuristic. Nothing bounds where useful translates live, so a
/// subset reported missing may still be cut out by a translate outside the
/// window. A `Shattered` verdict is a genuine certificate.
pub fn window_shatter_search(
    x: &[HPoint],
    n1: u64,
    n2: u64,
    window: u32,
) -> Result<ShatterReport<HPoint, HPoint>> {
    if window > MAX_TRANSLATE_WINDOW {
        return Err(Error::resource(
            "translate window",
            MAX_TRANSLATE_WINDOW as u64,
        ));
    }
    let mut points: Vec<HPoint> = Vec::with_capacity(x.len());
    for p in x {
        if !points.contains(p) {
            points.push(p.clone());
        }
    }
    if points.len() > 16 {
        return Err(Error::resource("point set size", 16));
    }
    let spec = HProgressionSpec::untranslated(n1, n2)?;
    let w = window as i64;
    let found: Vec<Vec<Option<HPoint>>> = (-w..=w)
        .into_par_iter()
        .map(|a| {
            let mut local = vec![None; 1 << points.len()];
            for b in -w..=w {
                for c in -w..=w {
                    let g = HPoint::new(a, b, c);
                    let g_inv = g.inv();
                    let mask = points
                        .iter()
                        .enumerate()
                        .filter(|(_, p)| in_progression(&spec.n1, &spec.n2, &(&g_inv * *p)))
                        .fold(0usize, |m, (i, _)| m | 1 << i);
                    local[mask].get_or_insert(g);
                }
            }
            local
        })
        .collect();
    // Earliest translate in (a, b, c) order wins, independent of scheduling.
    let results = (0..1usize << points.len())
        .map(|mask| found.iter().find_map(|slab| slab[mask].clone()))
        .collect();
    Ok(ShatterReport::from_masks(points, results))
}
