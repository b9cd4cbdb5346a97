//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits non-zero on any unexpected outcome.
//!
//! Criterion 5 compares against the published example tables, four entries
//! of which contradict the example's own points. It reports FAIL for that
//! reason; the run still succeeds as long as those four entries are the only
//! discrepancies and their corrections verify.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use progvc_core::bounds::{
    capital_c, fixed_progression_inequality, translate_family_inequality,
    verify_heisenberg_fixed_threshold, verify_heisenberg_translate_threshold,
};
use progvc_core::freegroup::{
    dist_vector, generator_shatter_witness, is_shattered_free, search_shattered, CutSearch,
    F2Example, FProgressionSpec, FWord, SearchConfig,
};
use progvc_core::heisenberg::{
    enumerate_progression, in_progression, word_eval, HLetter, HPoint, HWord,
};
use progvc_core::SetSystem;

struct Outcome {
    pass: bool,
    detail: String,
    /// A failure that is documented and whose shape was confirmed.
    expected_failure: bool,
}

impl Outcome {
    fn check(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
            expected_failure: false,
        }
    }
}

fn c1_oracle_equivalence() -> Outcome {
    let mut cells = 0;
    let mut bad = Vec::new();
    for n1 in 0..=5u32 {
        for n2 in 0..=5u32 {
            let bfs = enumerate_progression(n1, n2).unwrap();
            let (b1, b2) = (BigInt::from(n1), BigInt::from(n2));
            let top = (n1 * n2 + 1) as i64;
            let mut closed = BTreeSet::new();
            for a in -(n1 as i64)..=n1 as i64 {
                for b in -(n2 as i64)..=n2 as i64 {
                    for c in -top..=top {
                        let p = HPoint::new(a, b, c);
                        if in_progression(&b1, &b2, &p) {
                            closed.insert(p);
                        }
                    }
                }
            }
            cells += 1;
            if bfs != closed {
                bad.push(format!("({n1},{n2})"));
            }
        }
    }
    Outcome::check(
        bad.is_empty(),
        format!("{cells} cells, mismatches: {bad:?}"),
    )
}

fn c2_small_goldens() -> Outcome {
    let p11 = enumerate_progression(1, 1).unwrap();
    let p22 = enumerate_progression(2, 2).unwrap();
    let both = p22.contains(&HPoint::new(0, 0, 1)) && p22.contains(&HPoint::new(0, 0, -1));
    let closed = in_progression(&BigInt::from(2), &BigInt::from(2), &HPoint::new(0, 0, 1))
        && in_progression(&BigInt::from(2), &BigInt::from(2), &HPoint::new(0, 0, -1));
    Outcome::check(
        p11.len() == 13 && both && closed,
        format!(
            "|P(1,1)| = {}, P(2,2) ∋ (0,0,±1): {}",
            p11.len(),
            both && closed
        ),
    )
}

fn c3_word_properties() -> Outcome {
    const WORDS: usize = 100_000;
    let letters = [HLetter::A, HLetter::AInv, HLetter::B, HLetter::BInv];
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut violations = 0u64;
    for _ in 0..WORDS {
        let len = rng.gen_range(0..=40);
        let w = HWord::new((0..len).map(|_| letters[rng.gen_range(0..4)]).collect());
        let cut = rng.gen_range(0..=len);
        let (u, v) = (
            HWord::new(w.letters[..cut].to_vec()),
            HWord::new(w.letters[cut..].to_vec()),
        );
        let p = word_eval(&w);
        let s = p.to_small().unwrap();
        let (a, b, c) = (s.a, s.b, s.c);
        let ok = word_eval(&u) * word_eval(&v) == p
            && word_eval(&w.reversed()) == HPoint::new(a, b, a * b - c)
            && w.n_a() as i64 + a == 2 * w.n_plus_a() as i64
            && w.n_b() as i64 + b == 2 * w.n_plus_b() as i64
            && a.unsigned_abs() <= w.n_a()
            && b.unsigned_abs() <= w.n_b()
            && (a < 0 || b < 0 || c <= (w.n_plus_a() * w.n_plus_b()) as i64);
        if !ok {
            violations += 1;
        }
    }
    Outcome::check(
        violations == 0,
        format!("{WORDS} words, {violations} violations"),
    )
}

/// Independent evaluation of `Σ_{i≤ℓ} 2^i C(14n, i)` by falling products.
fn km_sum(l: u64, n: u64) -> BigUint {
    let sn = 14 * n;
    let mut total = BigUint::from(0u32);
    for i in 0..=l {
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        for j in 0..i {
            num *= sn - j;
            den *= j + 1;
        }
        total += (BigUint::one() << i) * (num / den);
    }
    total
}

fn c4_thresholds() -> Outcome {
    let translate = |n: u64| (BigUint::from(648u32) * km_sum(5, n)).pow(4) < BigUint::one() << n;
    let fixed = |n: u64| BigUint::one() << n <= BigUint::from(288u32) * km_sum(3, n);
    let oracle = !translate(267) && translate(268) && fixed(35) && !fixed(36);
    let library = !translate_family_inequality(267)
        && translate_family_inequality(268)
        && fixed_progression_inequality(35)
        && !fixed_progression_inequality(36);
    let t = verify_heisenberg_translate_threshold();
    let f = verify_heisenberg_fixed_threshold();
    Outcome::check(
        oracle && library && t.bound == 267 && f.bound == 140,
        format!(
            "translate family fails 267 / holds 268 -> {}; fixed progression holds 35 / fails 36 -> {}",
            t.bound, f.bound
        ),
    )
}

fn c5_f2_example() -> Outcome {
    let ex = F2Example::shipped();
    let check = ex.check().unwrap();
    // Second route: recompute every listed distance and row trace here.
    let mut independent = true;
    for entry in &ex.distances {
        let d = dist_vector(&ex.word(&entry.from).unwrap(), &ex.word(&entry.to).unwrap()).unwrap();
        independent &= d == entry.d;
    }
    let points = ex.point_words().unwrap();
    for row in &ex.rows {
        let spec =
            FProgressionSpec::new(ex.word(&row.translate).unwrap(), row.bounds.clone()).unwrap();
        let got: BTreeSet<FWord> = points
            .iter()
            .filter(|p| spec.contains(p).unwrap())
            .cloned()
            .collect();
        let listed: BTreeSet<FWord> = row.subset.iter().map(|n| ex.word(n).unwrap()).collect();
        independent &= got == listed;
    }
    let shattered = is_shattered_free(&points).unwrap();
    let corrected_ok = check.passed()
        && independent
        && shattered.is_shattered()
        && shattered.witnesses.len() == 16;
    let detail = format!(
        "printed tables: {}/{} rows, {}/{} distances; corrected: {}/{} rows, {}/{} distances; X shattered: {}; errata: {}",
        check.printed_rows_verified,
        check.rows_total,
        check.printed_distances_matched,
        check.distances_total,
        check.rows_verified,
        check.rows_total,
        check.distances_matched,
        check.distances_total,
        shattered.is_shattered(),
        check.errata.join("; ")
    );
    let exact = check.printed_tables_exact();
    Outcome {
        pass: exact && corrected_ok,
        detail,
        expected_failure: !exact
            && corrected_ok
            && check.printed_rows_verified == 13
            && check.printed_distances_matched == 9
            && check.errata.len() == 4,
    }
}

fn c6_rank_one_vc() -> Outcome {
    let window: Vec<i64> = (-20..=20).collect();
    let word = |e: i64| FWord::generator_power(1, 1, e).unwrap();
    let pair = CutSearch::new(&[word(0), word(1)]).unwrap().shatters();
    let mut shattered_triples = 0;
    let mut triples = 0;
    for (i, &a) in window.iter().enumerate() {
        for (j, &b) in window.iter().enumerate().skip(i + 1) {
            for &c in &window[j + 1..] {
                triples += 1;
                if CutSearch::new(&[word(a), word(b), word(c)])
                    .unwrap()
                    .shatters()
                {
                    shattered_triples += 1;
                }
            }
        }
    }
    // Second route: the traces on the window are the empty set and all runs
    // of consecutive points.
    let n = window.len();
    let mut family = vec![vec![]];
    for lo in 0..n {
        for hi in lo..n {
            family.push((lo..=hi).collect());
        }
    }
    let labels = window.iter().map(i64::to_string).collect();
    let explicit = SetSystem::new(labels, family)
        .unwrap()
        .vc_dimension_exact()
        .unwrap();
    Outcome::check(
        pair && shattered_triples == 0 && explicit == Some(2),
        format!(
            "{{0,1}} shattered: {pair}; {shattered_triples}/{triples} triples shattered; explicit interval system VC = {explicit:?}"
        ),
    )
}

fn c7_generator_shattering() -> Outcome {
    let mut cases = 0;
    let mut failures = 0;
    for k in [2u32, 3] {
        for combo in 0..1u32 << k {
            let bounds: Vec<u64> = (0..k).map(|i| 1 + (combo >> i & 1) as u64).collect();
            let generators: Vec<FWord> = (1..=k)
                .map(|i| FWord::generator_power(k, i, 1).unwrap())
                .collect();
            for mask in 0..1u32 << k {
                cases += 1;
                let y: Vec<u32> = (1..=k).filter(|i| mask >> (i - 1) & 1 == 1).collect();
                let ok = generator_shatter_witness(k, &bounds, &y).is_ok_and(|spec| {
                    (1..=k).all(|i| {
                        spec.contains(&generators[i as usize - 1]).unwrap() == y.contains(&i)
                    })
                });
                if !ok {
                    failures += 1;
                }
            }
            if !is_shattered_free(&generators).unwrap().is_shattered() {
                failures += 1;
            }
        }
    }
    Outcome::check(
        failures == 0,
        format!("{cases} subset cases, {failures} failures"),
    )
}

fn c8_upper_bound_search() -> Outcome {
    let config = SearchConfig {
        rank: 2,
        size: 6,
        samples: 10_000,
        max_len: 12,
        seed: 42,
    };
    let report = search_shattered(&config).unwrap();
    let rank_one = search_shattered(&SearchConfig {
        rank: 1,
        size: 3,
        samples: 10_000,
        max_len: 12,
        seed: 42,
    })
    .unwrap();
    // Positive control: the same detector does find shattered 4-sets.
    let control = search_shattered(&SearchConfig {
        size: 4,
        ..config.clone()
    })
    .unwrap();
    Outcome::check(
        report.shattered_count == 0 && rank_one.shattered_count == 0 && control.shattered_count > 0,
        format!(
            "seed 42: {} shattered of {} six-point sets in F2, {} of {} three-point sets in F1; control: {} shattered four-point sets",
            report.shattered_count,
            config.samples,
            rank_one.shattered_count,
            rank_one.config.samples,
            control.shattered_count
        ),
    )
}

fn random_system(rng: &mut ChaCha8Rng, n: usize, max_family: usize) -> SetSystem {
    let size = rng.gen_range(0..=max_family);
    let family = (0..size)
        .map(|_| (0..n).filter(|_| rng.gen_bool(0.5)).collect())
        .collect();
    SetSystem::with_numbered_ground(n, family).unwrap()
}

fn c9_set_system_properties() -> Outcome {
    const SYSTEMS: usize = 1_000;
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut violations = Vec::new();
    for t in 0..SYSTEMS {
        let n = rng.gen_range(1..=12);
        let s = random_system(&mut rng, n, 24);
        let other = random_system(&mut rng, n, 8);
        let m = rng.gen_range(1..=12);
        let map: Vec<usize> = (0..m).map(|_| rng.gen_range(0..n)).collect();
        let pre = s
            .preimage_system((0..m).map(|i| format!("q{i}")).collect(), &map)
            .unwrap();
        let both = s.intersection_system(&other).unwrap();
        let comp = s.complement_system();
        let d = s.vc_dimension_exact().unwrap();
        let pi: Vec<u64> = (0..=n).map(|k| s.shatter_function(k).unwrap()).collect();
        for (k, &pk) in pi.iter().enumerate() {
            if let Some(d) = d {
                if BigUint::from(pk) > capital_c(d as u64, k as u64) {
                    violations.push(format!("system {t}: sauer-shelah at n={k}"));
                }
            }
            if comp.shatter_function(k).unwrap() != pk {
                violations.push(format!("system {t}: complement at n={k}"));
            }
            if both.shatter_function(k).unwrap() > pk * other.shatter_function(k).unwrap() {
                violations.push(format!("system {t}: product at n={k}"));
            }
        }
        for k in 0..=m {
            let best = pi[..=k.min(n)].iter().copied().max().unwrap();
            if pre.shatter_function(k).unwrap() > best {
                violations.push(format!("system {t}: preimage at n={k}"));
            }
        }
    }
    Outcome::check(
        violations.is_empty(),
        format!(
            "{SYSTEMS} systems, {} violations {:?}",
            violations.len(),
            violations.iter().take(5).collect::<Vec<_>>()
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        (
            "membership theorem matches BFS oracle, N1,N2 <= 5",
            c1_oracle_equivalence,
        ),
        (
            "|P(1,1)| = 13 and P(2,2) contains (0,0,±1)",
            c2_small_goldens,
        ),
        ("word identities on 10^5 random words", c3_word_properties),
        ("bound thresholds 267 / 140", c4_thresholds),
        ("F2 four-point example tables", c5_f2_example),
        (
            "VC of rank-one progressions is 2 on [-20,20]",
            c6_rank_one_vc,
        ),
        (
            "generator shattering, k in {2,3}, N_i in {1,2}",
            c7_generator_shattering,
        ),
        (
            "no shattered 6-point set in F2 (10^4 samples)",
            c8_upper_bound_search,
        ),
        (
            "shatter-function properties on 10^3 set systems",
            c9_set_system_properties,
        ),
    ];
    let mut unexpected = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let status = if outcome.pass { "PASS" } else { "FAIL" };
        let note = if !outcome.pass && outcome.expected_failure {
            " [known: published misprints, see fixture]"
        } else {
            ""
        };
        println!(
            "criterion {}: {status} {name}{note} ({secs:.1}s) {}",
            i + 1,
            outcome.detail
        );
        if !outcome.pass && !outcome.expected_failure {
            unexpected += 1;
        }
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{unexpected} criteria failed unexpectedly");
        ExitCode::FAILURE
    }
}
