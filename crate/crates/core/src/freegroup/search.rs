//! Seeded random search for shattered point sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::progression::CutSearch;
use super::word::{FWord, Letter};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub rank: u32,
    /// Number of distinct points per sampled set.
    pub size: usize,
    pub samples: u64,
    /// Longest reduced word drawn.
    pub max_len: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub shattered_count: u64,
    /// Sample indices whose set was shattered, with the set itself.
    pub shattered: Vec<(u64, Vec<FWord>)>,
}

/// A uniformly random length in `0..=max_len`, then uniformly random
/// letters subject to staying reduced.
pub fn random_reduced_word<R: Rng + ?Sized>(
    rng: &mut R,
    rank: u32,
    max_len: usize,
) -> Result<FWord> {
    let len = rng.gen_range(0..=max_len);
    let k = rank as Letter;
    let mut letters: Vec<Letter> = Vec::with_capacity(len);
    while letters.len() < len {
        let l = match rng.gen_range(0..2 * k) {
            r if r < k => r + 1,
            r => -(r - k + 1),
        };
        if letters.last() != Some(&-l) {
            letters.push(l);
        }
    }
    FWord::reduce(rank, letters)
}

/// The point set for sample `index`: words are drawn until `size` distinct
/// ones are collected. Each index has its own ChaCha stream under `seed`.
pub fn sample_point_set(config: &SearchConfig, index: u64) -> Result<Vec<FWord>> {
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(index);
    let mut points: Vec<FWord> = Vec::with_capacity(config.size);
    while points.len() < config.size {
        let w = random_reduced_word(&mut rng, config.rank, config.max_len)?;
        if !points.contains(&w) {
            points.push(w);
        }
    }
    Ok(points)
}

fn available_words(rank: u32, max_len: usize) -> f64 {
    // 1 + 2k Σ_{l<L} (2k-1)^l
    let k = rank as f64;
    1.0 + (0..max_len)
        .map(|l| 2.0 * k * (2.0 * k - 1.0).powi(l as i32))
        .sum::<f64>()
}

/// Runs the search in parallel; the report does not depend on the thread
/// count.
pub fn search_shattered(config: &SearchConfig) -> Result<SearchReport> {
    if config.rank == 0 {
        return Err(Error::domain("rank must be at least 1"));
    }
    if config.size as f64 > available_words(config.rank, config.max_len) {
        return Err(Error::domain(format!(
            "only {} words of length at most {} exist",
            available_words(config.rank, config.max_len),
            config.max_len
        )));
    }
    let hits: Vec<Option<(u64, Vec<FWord>)>> = (0..config.samples)
        .into_par_iter()
        .map(|i| -> Result<_> {
            let points = sample_point_set(config, i)?;
            let shattered = CutSearch::new(&points)?.shatters();
            Ok(shattered.then_some((i, points)))
        })
        .collect::<Result<_>>()?;
    let shattered: Vec<_> = hits.into_iter().flatten().collect();
    Ok(SearchReport {
        config: config.clone(),
        shattered_count: shattered.len() as u64,
        shattered,
    })
}
