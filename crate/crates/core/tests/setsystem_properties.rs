use num_bigint::BigUint;
use proptest::prelude::*;

use progvc_core::bounds::capital_c;
use progvc_core::{PointSet, SetSystem};

/// Ground size and family as bitmasks over it.
fn system(max_ground: usize, max_family: usize) -> impl Strategy<Value = (usize, Vec<u32>)> {
    (1..=max_ground)
        .prop_flat_map(move |n| (Just(n), prop::collection::vec(0u32..1 << n, 0..=max_family)))
}

fn build(n: usize, masks: &[u32]) -> SetSystem {
    let family = masks
        .iter()
        .map(|m| (0..n).filter(|i| m >> i & 1 == 1).collect())
        .collect();
    SetSystem::with_numbered_ground(n, family).unwrap()
}

fn traces(masks: &[u32], a: u32) -> usize {
    let mut t: Vec<u32> = masks.iter().map(|m| m & a).collect();
    t.sort_unstable();
    t.dedup();
    t.len()
}

/// Bitmask oracle, independent of the library's search order.
fn oracle_pi(n: usize, masks: &[u32], size: usize) -> u64 {
    (0u32..1 << n)
        .filter(|a| a.count_ones() as usize == size)
        .map(|a| traces(masks, a) as u64)
        .max()
        .unwrap_or(0)
}

fn oracle_vc(n: usize, masks: &[u32]) -> Option<usize> {
    if masks.is_empty() {
        return None;
    }
    (0u32..1 << n)
        .filter(|&a| traces(masks, a) == 1 << a.count_ones())
        .map(|a| a.count_ones() as usize)
        .max()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn vc_and_shatter_function_match_oracle((n, masks) in system(8, 24)) {
        let s = build(n, &masks);
        prop_assert_eq!(s.vc_dimension_exact().unwrap(), oracle_vc(n, &masks));
        for k in 0..=n {
            prop_assert_eq!(s.shatter_function(k).unwrap(), oracle_pi(n, &masks, k));
        }
    }

    #[test]
    fn sauer_shelah((n, masks) in system(9, 40)) {
        let s = build(n, &masks);
        if let Some(d) = s.vc_dimension_exact().unwrap() {
            for k in 0..=n {
                prop_assert!(BigUint::from(s.shatter_function(k).unwrap()) <= capital_c(d as u64, k as u64));
            }
        }
    }

    #[test]
    fn full_trace_count_iff_shattered((n, masks) in system(8, 30)) {
        let s = build(n, &masks);
        for k in 0..=n {
            let some_shattered = (0u32..1 << n)
                .filter(|a| a.count_ones() as usize == k)
                .any(|a| {
                    let target = PointSet::from_indices(n, (0..n).filter(|i| a >> i & 1 == 1)).unwrap();
                    s.shatters(&target).unwrap().is_shattered()
                });
            prop_assert_eq!(s.shatter_function(k).unwrap() == 1 << k, some_shattered);
        }
    }

    #[test]
    fn complement_preserves_shatter_function((n, masks) in system(8, 24)) {
        let s = build(n, &masks);
        let c = s.complement_system();
        for k in 0..=n {
            prop_assert_eq!(c.shatter_function(k).unwrap(), s.shatter_function(k).unwrap());
        }
    }

    #[test]
    fn intersection_product_bound((n, m1) in system(7, 12), seed in prop::collection::vec(any::<u32>(), 0..12)) {
        let m2: Vec<u32> = seed.iter().map(|m| m & ((1 << n) - 1)).collect();
        let (s1, s2) = (build(n, &m1), build(n, &m2));
        let both = s1.intersection_system(&s2).unwrap();
        for k in 0..=n {
            prop_assert!(both.shatter_function(k).unwrap() <= s1.shatter_function(k).unwrap() * s2.shatter_function(k).unwrap());
        }
    }

    #[test]
    fn preimage_bound((n, masks) in system(6, 20), map in prop::collection::vec(any::<prop::sample::Index>(), 1..=9)) {
        let s = build(n, &masks);
        let map: Vec<usize> = map.iter().map(|ix| ix.index(n)).collect();
        let ground: Vec<String> = (0..map.len()).map(|i| format!("p{i}")).collect();
        let pre = s.preimage_system(ground, &map).unwrap();
        for k in 0..=map.len() {
            let best = (0..=k.min(n)).map(|j| s.shatter_function(j).unwrap()).max().unwrap();
            prop_assert!(pre.shatter_function(k).unwrap() <= best);
        }
        let mut image = map.clone();
        image.sort_unstable();
        image.dedup();
        if image.len() == n {
            prop_assert_eq!(pre.vc_dimension_exact().unwrap(), s.vc_dimension_exact().unwrap());
        }
    }

    #[test]
    fn shattering_is_monotone((n, masks) in system(7, 40), a in any::<u32>(), b in any::<u32>()) {
        let s = build(n, &masks);
        let a = a & ((1 << n) - 1);
        let sub = a & b;
        let set = |m: u32| PointSet::from_indices(n, (0..n).filter(|i| m >> i & 1 == 1)).unwrap();
        if s.shatters(&set(a)).unwrap().is_shattered() {
            prop_assert!(s.shatters(&set(sub)).unwrap().is_shattered());
        }
    }

    #[test]
    fn json_round_trip((n, masks) in system(10, 16)) {
        let s = build(n, &masks);
        prop_assert_eq!(SetSystem::from_json(&s.to_json()).unwrap(), s);
    }
}
