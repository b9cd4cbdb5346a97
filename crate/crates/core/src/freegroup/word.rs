use std::cmp::Ordering;
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A signed generator index: `i` is `a_i`, `-i` is `a_i⁻¹`.
pub type Letter = i32;

/// A reduced word in `F_k`.
///
/// Ordering is shortlex: shorter words first, then letter by letter with
/// `a_1 < a_1⁻¹ < a_2 < a_2⁻¹ < …`. All tie-breaking in this module uses it.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FWord {
    rank: u32,
    letters: Vec<Letter>,
}

fn letter_key(l: Letter) -> (u32, bool) {
    (l.unsigned_abs(), l < 0)
}

impl Ord for FWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| {
                self.letters
                    .iter()
                    .map(|&l| letter_key(l))
                    .cmp(other.letters.iter().map(|&l| letter_key(l)))
            })
            .then(self.rank.cmp(&other.rank))
    }
}

impl PartialOrd for FWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl FWord {
    pub fn identity(rank: u32) -> Result<Self> {
        if rank == 0 {
            return Err(Error::domain("rank must be at least 1"));
        }
        Ok(FWord {
            rank,
            letters: Vec::new(),
        })
    }

    /// Freely reduces `letters`, cancelling adjacent inverse pairs.
    pub fn reduce(rank: u32, letters: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut out = Self::identity(rank)?;
        for l in letters {
            if l == 0 || l.unsigned_abs() > rank {
                return Err(Error::domain(format!(
                    "generator index {l} out of range for rank {rank}"
                )));
            }
            out.push(l);
        }
        Ok(out)
    }

    /// `a_i^e`.
    pub fn generator_power(rank: u32, i: u32, e: i64) -> Result<Self> {
        let l = if e >= 0 { i as Letter } else { -(i as Letter) };
        Self::reduce(rank, std::iter::repeat_n(l, e.unsigned_abs() as usize))
    }

    fn push(&mut self, l: Letter) {
        if self.letters.last() == Some(&-l) {
            self.letters.pop();
        } else {
            self.letters.push(l);
        }
    }

    pub fn rank(&self) -> u32 {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub(crate) fn same_rank(&self, other: &FWord) -> Result<()> {
        if self.rank == other.rank {
            Ok(())
        } else {
            Err(Error::domain(format!(
                "rank mismatch: {} vs {}",
                self.rank, other.rank
            )))
        }
    }

    /// Reduced product `self · other`.
    pub fn multiply(&self, other: &FWord) -> Result<FWord> {
        self.same_rank(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &FWord) -> FWord {
        let mut out = self.clone();
        for &l in &other.letters {
            out.push(l);
        }
        out
    }

    pub(crate) fn times_letter(&self, l: Letter) -> FWord {
        let mut out = self.clone();
        out.push(l);
        out
    }

    pub fn invert(&self) -> FWord {
        FWord {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| -l).collect(),
        }
    }

    /// Number of `a_i^{±1}` letters.
    pub fn count(&self, i: u32) -> u64 {
        self.letters
            .iter()
            .filter(|l| l.unsigned_abs() == i)
            .count() as u64
    }

    /// Prefixes of the word, from the identity up to the word itself.
    pub fn prefixes(&self) -> impl Iterator<Item = FWord> + '_ {
        (0..=self.letters.len()).map(|n| FWord {
            rank: self.rank,
            letters: self.letters[..n].to_vec(),
        })
    }

    /// Parses `i^e` tokens joined by `*` (`e` alone is the identity, a bare
    /// `i` means `i^1`), e.g. `2^5*1^3` or `1^-5`.
    pub fn parse(rank: u32, text: &str) -> Result<Self> {
        let text = text.trim();
        let mut letters = Vec::new();
        if text != "e" && !text.is_empty() {
            for token in text.split('*').map(str::trim) {
                let bad = || Error::Parse(format!("malformed word token {token:?}"));
                let (gen, exp) = match token.split_once('^') {
                    Some((g, e)) => (g.trim(), e.trim().parse::<i64>().map_err(|_| bad())?),
                    None => (token, 1),
                };
                let gen: u32 = gen.parse().map_err(|_| bad())?;
                if gen == 0 || gen > rank {
                    return Err(Error::Parse(format!(
                        "generator {gen} out of range for rank {rank} in token {token:?}"
                    )));
                }
                let l = if exp >= 0 {
                    gen as Letter
                } else {
                    -(gen as Letter)
                };
                letters.extend(std::iter::repeat_n(l, exp.unsigned_abs() as usize));
            }
        }
        Self::reduce(rank, letters)
    }
}

impl fmt::Display for FWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let run = self.letters[i..].iter().take_while(|&&x| x == l).count();
            let exp = if l < 0 { -(run as i64) } else { run as i64 };
            if !first {
                write!(f, "*")?;
            }
            write!(f, "{}^{}", l.unsigned_abs(), exp)?;
            first = false;
            i += run;
        }
        Ok(())
    }
}

impl Serialize for FWord {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// `d_i(x, y)`: the number of `a_i^{±1}` letters in the reduced `x⁻¹y`.
pub fn dist_i(i: u32, x: &FWord, y: &FWord) -> Result<u64> {
    x.same_rank(y)?;
    if i == 0 || i > x.rank {
        return Err(Error::domain(format!("coordinate {i} out of range")));
    }
    Ok(x.invert().mul_unchecked(y).count(i))
}

/// The word metric, `Σ_i d_i(x, y)`.
pub fn dist(x: &FWord, y: &FWord) -> Result<u64> {
    x.same_rank(y)?;
    Ok(x.invert().mul_unchecked(y).len() as u64)
}

/// `(d_1(x, y), …, d_k(x, y))`.
pub fn dist_vector(x: &FWord, y: &FWord) -> Result<Vec<u64>> {
    x.same_rank(y)?;
    let z = x.invert().mul_unchecked(y);
    Ok((1..=x.rank).map(|i| z.count(i)).collect())
}
