use coarse_menger::instances::{random_powerful_family, rng};
use coarse_menger::intervals::{check_int2, check_mainint, check_mainint_with, minimality_gap_violations};
use coarse_menger::{Interval, IntervalFamily};
use proptest::prelude::*;

fn fam(n: usize, pairs: &[(usize, usize)]) -> IntervalFamily {
    IntervalFamily::from_pairs(n, pairs).unwrap()
}

fn naive_powerful(f: &IntervalFamily, ell: usize) -> bool {
    (0..=f.n() - ell).all(|h| f.items().iter().any(|iv| iv.a <= h && iv.b >= h + ell))
}

fn sub(f: &IntervalFamily, mask: u32) -> IntervalFamily {
    let keep = |i: usize| mask.checked_shr(i as u32).unwrap_or(0) & 1 == 1;
    let items = f.items().iter().enumerate().filter(|&(i, _)| keep(i)).map(|(_, &iv)| iv).collect();
    IntervalFamily::new(f.n(), items).unwrap()
}

fn without(f: &IntervalFamily, i: usize) -> IntervalFamily {
    let mut items = f.items().to_vec();
    items.remove(i);
    IntervalFamily::new(f.n(), items).unwrap()
}

fn is_subfamily(small: &IntervalFamily, big: &IntervalFamily) -> bool {
    small.items().iter().all(|iv| big.items().contains(iv))
}

/// Every minimal ℓ-powerful subfamily, by brute force.
fn minimal_subfamilies(f: &IntervalFamily, ell: usize) -> Vec<IntervalFamily> {
    let t = f.len();
    let powerful: Vec<bool> = (0..1u32 << t).map(|m| naive_powerful(&sub(f, m), ell)).collect();
    (0..1u32 << t)
        .filter(|&m| powerful[m as usize] && (0..t).all(|i| m >> i & 1 == 0 || !powerful[(m & !(1 << i)) as usize]))
        .map(|m| sub(f, m))
        .collect()
}

/// (seed, n, ell) with 4ℓ <= n.
fn params() -> impl Strategy<Value = (u64, usize, usize, usize)> {
    (any::<u64>(), 4usize..=60).prop_flat_map(|(seed, n)| (Just(seed), Just(n), 1..=n / 4, 0usize..20))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn powerful_matches_definition((seed, n, ell, extra) in params()) {
        let mut r = rng(seed);
        let f = random_powerful_family(&mut r, n, 4 * ell, extra);
        for e in 1..=n {
            let keep = sub(&f, (seed as u32) | 1);
            prop_assert_eq!(keep.is_powerful(e).unwrap(), naive_powerful(&keep, e));
        }
    }

    #[test]
    fn prune_is_minimal_and_spaced((seed, n, ell, extra) in params()) {
        let mut r = rng(seed);
        let f = random_powerful_family(&mut r, n, ell, extra);
        let p = f.prune_minimal(ell).unwrap();
        prop_assert!(is_subfamily(&p, &f));
        prop_assert!(p.is_standard_form());
        prop_assert!(naive_powerful(&p, ell));
        for i in 0..p.len() {
            prop_assert!(!naive_powerful(&without(&p, i), ell));
        }
        prop_assert!(minimality_gap_violations(&p, ell).is_empty());
        // The spacing inequality survives passing to subfamilies.
        for mask in [0x5555_5555u32, 0xAAAA_AAAA, seed as u32] {
            prop_assert!(minimality_gap_violations(&sub(&p, mask), ell).is_empty());
        }
    }

    #[test]
    fn int2_meets_the_attainable_bounds((seed, n, ell, extra) in params()) {
        let mut r = rng(seed);
        let e = (ell * 2).min(n / 2);
        let f = random_powerful_family(&mut r, n, 2 * e, extra);
        let out = f.int2_select(e).unwrap();
        prop_assert!(is_subfamily(&out, &f));
        prop_assert!(naive_powerful(&out, e));
        for i in 0..out.len() {
            prop_assert!(!naive_powerful(&without(&out, i), e));
        }
        let chk = check_int2(&out, e);
        prop_assert!(chk.spacing.is_empty());
        prop_assert!(chk.right_gaps.is_empty());
        prop_assert!(chk.min_overlap.is_none_or(|m| m >= e as i64 - 1));
    }

    #[test]
    fn mainint_meets_bound_with_unit_slack((seed, n, ell, extra) in params()) {
        let mut r = rng(seed);
        let f = random_powerful_family(&mut r, n, 4 * ell, extra);
        let out = f.mainint_select_with(ell, 1).unwrap();
        prop_assert!(is_subfamily(&out, &f));
        prop_assert!(naive_powerful(&out, ell));
        prop_assert!(check_mainint_with(&out, ell, 1).is_empty());
        // Reversal is an involution.
        prop_assert_eq!(out.reverse_family().reverse_family(), out);
    }
}

#[test]
fn prune_agrees_with_exhaustive_minimality() {
    let mut r = rng(11);
    let mut checked = 0;
    for round in 0..3000 {
        let n = 4 + round % 21;
        let ell = 1 + round % (n / 4).max(1);
        let f = random_powerful_family(&mut r, n, ell, round % 6).to_standard_form();
        if f.len() > 10 {
            continue;
        }
        let p = f.prune_minimal(ell).unwrap();
        let all = minimal_subfamilies(&f, ell);
        assert!(all.contains(&p), "{f:?} pruned to non-minimal {p:?}");
        for m in &all {
            assert!(minimality_gap_violations(m, ell).is_empty(), "{m:?}");
        }
        checked += 1;
    }
    assert!(checked > 1000);
}

#[test]
fn overlap_bound_fails_for_every_minimal_subfamily() {
    // 4-powerful, yet each minimal 2-powerful subfamily has consecutive
    // members overlapping by only 1 somewhere.
    let f = fam(12, &[(0, 4), (1, 6), (3, 8), (5, 10), (7, 12)]);
    assert!(f.is_powerful(4).unwrap());
    let all = minimal_subfamilies(&f, 2);
    assert!(!all.is_empty());
    for m in &all {
        let chk = check_int2(&m.to_standard_form(), 2);
        assert!(!chk.overlaps.is_empty(), "{m:?} meets the overlap bound");
        assert_eq!(chk.min_overlap, Some(1));
    }
    let out = f.int2_select(2).unwrap();
    assert_eq!(out, fam(12, &[(0, 4), (3, 8), (7, 12)]));
    assert_eq!(check_int2(&out, 2).overlaps, vec![2, 3]);
}

#[test]
fn mainint_pipeline_can_touch_adjacent_ends() {
    let f = fam(
        36,
        &[(22, 29), (10, 23), (23, 30), (1, 13), (21, 28), (9, 12), (8, 31), (0, 8), (27, 35), (29, 36)],
    );
    assert!(f.is_powerful(4).unwrap());
    assert!(f.mainint_select(1).is_err());
    let out = f.mainint_select_with(1, 1).unwrap();
    assert!(!check_mainint(&out, 1).is_empty());
    // A subfamily meeting the exact guarantee does exist.
    let exact = (1u32..1 << f.len()).map(|m| sub(&f, m).to_standard_form()).find(|s| {
        s.is_standard_form() && naive_powerful(s, 1) && check_mainint(s, 1).is_empty()
    });
    assert!(exact.is_some());
}

#[test]
fn interval_serializes_as_pair() {
    let iv = Interval { a: 3, b: 9 };
    assert_eq!(serde_json::to_string(&iv).unwrap(), "[3,9]");
}
