use fiid_forest::interval::{
    bound_certificate, minimal_bridge_path, oracle_bridge_path, s123_count, s123_decomposition, snap_map, Interval,
    IntervalPath, IntervalSet,
};
use proptest::prelude::*;

fn all_intervals(lo: i64, hi: i64, min_len: i64) -> Vec<Interval> {
    let mut out = Vec::new();
    for a in lo..=hi {
        for b in (a + min_len)..=hi {
            out.push(Interval::new(a, b));
        }
    }
    out
}

/// Visits every subset of `pool` with at most `k` elements.
fn subsets(pool: &[Interval], k: usize, f: &mut impl FnMut(&[Interval])) {
    fn go(pool: &[Interval], start: usize, k: usize, cur: &mut Vec<Interval>, f: &mut impl FnMut(&[Interval])) {
        if !cur.is_empty() {
            f(cur);
        }
        if cur.len() == k {
            return;
        }
        for i in start..pool.len() {
            cur.push(pool[i]);
            go(pool, i + 1, k, cur, f);
            cur.pop();
        }
    }
    go(pool, 0, k, &mut Vec::new(), f);
}

fn check_snap(p: &IntervalPath, delta: i64) {
    let s = snap_map(p, delta).unwrap_or_else(|e| panic!("{p:?} δ={delta}: {e}"));
    assert!(s.max_displacement() <= 2 * delta, "{p:?} δ={delta}");
    assert!(s.is_monotone(), "{p:?} δ={delta}");
    assert!(s.preserves_adjacency(p), "{p:?} δ={delta}");
    assert!(s.image_multiplicity_ok(p), "{p:?} δ={delta}");
    assert!(s.images().iter().all(|y| y % delta == 0));
}

#[test]
fn snap_map_holds_for_every_delta_on_small_families() {
    // every family of up to three intervals of length >= 2 inside [0, 20]
    let pool = all_intervals(0, 20, 2);
    let mut checked = 0usize;
    subsets(&pool, 3, &mut |family| {
        let Ok(set) = IntervalSet::from_intervals(family.to_vec()) else { return };
        let p = minimal_bridge_path(&set).unwrap();
        for delta in 1..=p.min_length() / 2 {
            check_snap(&p, delta);
            checked += 1;
        }
    });
    assert!(checked > 100_000, "{checked}");
}

#[test]
fn long_chains_with_tight_overlaps() {
    // chains where consecutive overlaps are one or two points and gaps between
    // overlaps are zero or one point, the tightest configurations for ι
    for seed in 0u64..4000 {
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = |m: u64| {
            state ^= state >> 33;
            state = state.wrapping_mul(0xff51afd7ed558ccd);
            state ^= state >> 29;
            state % m
        };
        let delta = 1 + next(5) as i64;
        let min_len = 2 * delta + next(3) as i64;
        let mut ivs = Vec::new();
        let mut lo = 0i64;
        let mut prev_hi = -1i64;
        for _ in 0..(2 + next(6)) {
            let hi = lo + min_len + next(3) as i64;
            ivs.push(Interval::new(lo, hi));
            // next interval starts inside this one but after the previous one ends
            let earliest = (prev_hi + 1).max(lo + 1);
            lo = (hi - next(2) as i64).max(earliest).min(hi);
            prev_hi = hi;
        }
        let Ok(set) = IntervalSet::from_intervals(ivs) else { continue };
        let p = minimal_bridge_path(&set).unwrap();
        for d in 1..=p.min_length() / 2 {
            check_snap(&p, d);
        }
    }
}

#[test]
fn oracle_agrees_on_families_of_three_in_0_12() {
    let pool = all_intervals(0, 12, 0);
    let mut n = 0;
    subsets(&pool, 3, &mut |family| {
        let Ok(set) = IntervalSet::from_intervals(family.to_vec()) else { return };
        let p = minimal_bridge_path(&set).unwrap();
        let q = oracle_bridge_path(&set).unwrap();
        assert_eq!(p.hops(), q.hops(), "{family:?}");
        assert!(p.bridges() && p.has_cover_one_or_two() && p.endpoints_interleave(), "{family:?}");
        n += 1;
    });
    assert!(n > 10_000);
}

fn arb_family() -> impl Strategy<Value = Vec<(i64, i64)>> {
    prop::collection::vec((0i64..60, 0i64..25), 1..10)
        .prop_map(|v| v.into_iter().map(|(lo, len)| (lo, lo + len)).collect())
}

proptest! {
    #[test]
    fn bridge_path_invariants(family in arb_family()) {
        let ivs: Vec<Interval> = family.iter().map(|&p| p.into()).collect();
        if let Ok(set) = IntervalSet::from_intervals(ivs) {
            let p = minimal_bridge_path(&set).unwrap();
            prop_assert!(p.bridges());
            prop_assert!(p.has_cover_one_or_two());
            prop_assert!(p.endpoints_interleave());
            prop_assert_eq!(p.hops(), oracle_bridge_path(&set).map(|q| q.hops()).unwrap_or(p.hops()));
            let s = s123_decomposition(&p);
            let mut pieces: Vec<Interval> = s.s1.iter().chain(&s.s2).chain(&s.s3).copied().collect();
            pieces.sort();
            prop_assert_eq!(pieces.first().unwrap().lo, set.span().lo);
            prop_assert_eq!(pieces.last().unwrap().hi, set.span().hi);
            prop_assert!(pieces.windows(2).all(|w| w[0].hi + 1 == w[1].lo));
            prop_assert!(s.total() <= 2 * p.intervals().len());
            prop_assert_eq!(s.total(), s123_count(&p));
            let d = p.min_length();
            if d >= 2 {
                prop_assert!(bound_certificate(&p, d, d / 2).is_ok());
            }
        }
    }

    #[test]
    fn translation_equivariance(family in arb_family(), shift in -100i64..100) {
        let ivs: Vec<Interval> = family.iter().map(|&p| p.into()).collect();
        if let Ok(set) = IntervalSet::from_intervals(ivs.clone()) {
            let moved = IntervalSet::from_intervals(
                ivs.iter().map(|i| Interval::new(i.lo + shift, i.hi + shift)).collect(),
            ).unwrap();
            let a = minimal_bridge_path(&set).unwrap();
            let b = minimal_bridge_path(&moved).unwrap();
            let a_shifted: Vec<Interval> = a.intervals().iter().map(|i| Interval::new(i.lo + shift, i.hi + shift)).collect();
            prop_assert_eq!(a_shifted, b.intervals().to_vec());
        }
    }
}
