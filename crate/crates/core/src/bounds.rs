//! Exact evaluation of the VC-dimension bound functions.
//!
//! Every `log` here is base 2 and every `log(x) < n` comparison is carried
//! out as the integer inequality `x < 2^n`, so no result depends on floating
//! point. The one exception is [`f_upper_estimate`], which involves `e` and a
//! fractional power and is explicitly approximate.

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ceiling for the `min { n : ... }` scans.
pub const DEFAULT_SCAN_CEILING: u64 = 1_000_000;

/// Number of traces of the parity conjunct (cosets of `2Z × 2Z`).
const PARITY_TRACES: u64 = 4;
/// Index of `2Z × 2Z × Z` in the Heisenberg group.
const COSET_INDEX: u64 = 4;
/// Polynomial count, degree and parameter counts of the semialgebraic
/// description of translated progressions in the Heisenberg group.
const KM_POLYNOMIALS: u64 = 14;
const KM_DEGREE: u64 = 2;
const KM_PARAMS_TRANSLATES: u64 = 5;
const KM_PARAMS_FIXED: u64 = 3;
/// Number of parity cases joined by the outer disjunction.
const PARITY_CASES: u32 = 4;

pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// `𝔠_d(n) = Σ_{i=0}^{d} C(n, i)`.
pub fn capital_c(d: u64, n: u64) -> BigUint {
    let mut term = BigUint::one();
    let mut sum = BigUint::one();
    for i in 0..d.min(n) {
        term *= n - i;
        term /= i + 1;
        sum += &term;
    }
    sum
}

fn pow2(n: u64) -> BigUint {
    BigUint::one() << n
}

fn scan_min(ceiling: u64, mut pred: impl FnMut(u64) -> bool) -> Result<u64> {
    (0..=ceiling)
        .find(|&n| pred(n))
        .ok_or_else(|| Error::resource("bound scan", ceiling))
}

fn require_k(k: u64) -> Result<()> {
    if k == 0 {
        Err(Error::domain("k must be at least 1"))
    } else {
        Ok(())
    }
}

/// `𝔣(d, k) = min { n : k·log 𝔠_d(n) < n }`, i.e. the least `n` with
/// `𝔠_d(n)^k < 2^n`.
pub fn f_bound(d: u64, k: u64) -> Result<u64> {
    f_bound_with_ceiling(d, k, DEFAULT_SCAN_CEILING)
}

pub fn f_bound_with_ceiling(d: u64, k: u64, ceiling: u64) -> Result<u64> {
    require_k(k)?;
    scan_min(ceiling, |n| capital_c(d, n).pow(k as u32) < pow2(n))
}

/// `𝔤(d, k) = k·(min { n : log(k·𝔠_d(n)) < n } − 1)`.
pub fn g_bound(d: u64, k: u64) -> Result<u64> {
    g_bound_with_ceiling(d, k, DEFAULT_SCAN_CEILING)
}

pub fn g_bound_with_ceiling(d: u64, k: u64, ceiling: u64) -> Result<u64> {
    require_k(k)?;
    // k·𝔠_d(0) = k ≥ 1 = 2^0, so the minimum is at least 1.
    let n = scan_min(ceiling, |n| capital_c(d, n) * k < pow2(n))?;
    Ok(k * (n - 1))
}

/// Upper estimate `d·k·log(c·k·log(c·k))` with `c = 2^{1/(dk)}(e + log e)`.
///
/// Approximate: evaluated in `f64`, with `e` and `log e` replaced by upper
/// approximations and the result nudged upward by a few ulps.
pub fn f_upper_estimate(d: u64, k: u64) -> Result<f64> {
    require_k(k)?;
    if d == 0 {
        return Err(Error::domain("d must be at least 1"));
    }
    const E_UP: f64 = 2.718_281_828_459_046;
    const LOG2_E_UP: f64 = 1.442_695_040_888_964;
    let dk = (d * k) as f64;
    let c = 2f64.powf(1.0 / dk) * (E_UP + LOG2_E_UP);
    let ck = c * k as f64;
    let v = dk * (ck * ck.log2()).log2();
    Ok(v * (1.0 + 8.0 * f64::EPSILON))
}

/// The Karpinski–Macintyre bound `d·(2d−1)^{ℓ−1}·Σ_{i=0}^{ℓ} 2^i·C(s·n, i)`.
pub fn km_bound(d: u64, l: u64, s: u64, n: u64) -> Result<BigUint> {
    Ok(km_prefactor(d, l)? * km_sum(l, s, n)?)
}

/// `d·(2d−1)^{ℓ−1}`, the Betti-number factor of [`km_bound`].
pub fn km_prefactor(d: u64, l: u64) -> Result<BigUint> {
    if d == 0 || l == 0 {
        return Err(Error::domain(
            "Karpinski–Macintyre bound needs d ≥ 1 and l ≥ 1",
        ));
    }
    Ok(BigUint::from(d) * BigUint::from(2 * d - 1).pow((l - 1) as u32))
}

fn km_sum(l: u64, s: u64, n: u64) -> Result<BigUint> {
    if s == 0 {
        return Err(Error::domain("Karpinski–Macintyre bound needs s ≥ 1"));
    }
    let sn = s.checked_mul(n).ok_or(Error::Overflow("s·n"))?;
    Ok((0..=l).map(|i| pow2(i) * binomial(sn, i)).sum())
}

/// Outcome of reproducing a threshold inequality.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub check: String,
    pub holds_at: Vec<u64>,
    pub fails_at: Vec<u64>,
    pub bound: u64,
}

/// Per-conjunct constant for translated progressions: parity traces times
/// the Karpinski–Macintyre prefactor with `d = 2`, `ℓ = 5` (`4·162 = 648`).
pub fn translate_family_constant() -> BigUint {
    BigUint::from(PARITY_TRACES) * km_prefactor(KM_DEGREE, KM_PARAMS_TRANSLATES).unwrap()
}

/// Coset-union constant for a fixed progression: `4·(4·18) = 288`.
pub fn fixed_progression_constant() -> BigUint {
    BigUint::from(COSET_INDEX)
        * BigUint::from(PARITY_TRACES)
        * km_prefactor(KM_DEGREE, KM_PARAMS_FIXED).unwrap()
}

/// `(648·Σ_{i=0}^{5} 2^i C(14n, i))^4 < 2^n`; when it holds the translate
/// family has VC dimension at most `n − 1`.
pub fn translate_family_inequality(n: u64) -> bool {
    let inner =
        translate_family_constant() * km_sum(KM_PARAMS_TRANSLATES, KM_POLYNOMIALS, n).unwrap();
    inner.pow(PARITY_CASES) < pow2(n)
}

/// `2^n ≤ 288·Σ_{i=0}^{3} 2^i C(14n, i)`; if `VC(P) > 4(n−1)` this must hold.
pub fn fixed_progression_inequality(n: u64) -> bool {
    pow2(n) <= fixed_progression_constant() * km_sum(KM_PARAMS_FIXED, KM_POLYNOMIALS, n).unwrap()
}

/// Finds the least `n ≥ 1` at which [`translate_family_inequality`] holds.
/// Reports the failure just below it and the bound `n − 1`.
pub fn verify_heisenberg_translate_threshold() -> ThresholdReport {
    let n = (1..)
        .find(|&n| translate_family_inequality(n))
        .expect("polynomial loses to 2^n");
    ThresholdReport {
        check: "heisenberg-translate-family".into(),
        holds_at: vec![n],
        fails_at: vec![n - 1],
        bound: n - 1,
    }
}

/// Finds the least `n ≥ 1` at which [`fixed_progression_inequality`] fails;
/// the coset-union argument then gives `VC ≤ 4·(n − 1)`.
pub fn verify_heisenberg_fixed_threshold() -> ThresholdReport {
    let n = (1..)
        .find(|&n| !fixed_progression_inequality(n))
        .expect("polynomial loses to 2^n");
    ThresholdReport {
        check: "heisenberg-fixed-progression".into(),
        holds_at: vec![n - 1],
        fails_at: vec![n],
        bound: COSET_INDEX * (n - 1),
    }
}
