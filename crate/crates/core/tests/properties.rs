use ekrlab_core::construction::Construction;
use ekrlab_core::corpus::random_uniform;
use ekrlab_core::measure::{influence, mu};
use ekrlab_core::measure_checks::check_integral_identity;
use ekrlab_core::rational::pow_u;
use ekrlab_core::shadows::{check_local_lym, kk_min_upper_shadow, level_masks};
use ekrlab_core::rational::ratio;
use ekrlab_core::search::coloring::is_union_of_intersecting;
use ekrlab_core::search::kneser::relabel_family;
use ekrlab_core::search::{
    canonicalize, max_bounded_matching, max_intersecting, max_union_intersecting, SearchLimits, SearchOutcome,
};
use ekrlab_core::{GroundSet, SetFamily};
use proptest::prelude::*;

/// A random family on `[n]`, `n ≤ 10`, read off the bits of `words`.
fn arb_family() -> impl Strategy<Value = SetFamily> {
    (1u32..=10, proptest::collection::vec(any::<u64>(), 16)).prop_map(|(n, words)| {
        SetFamily::from_predicate(GroundSet::new(n).unwrap(), |s| words[s as usize / 64] >> (s % 64) & 1 == 1)
    })
}

/// A family with few members, so brute force over colorings is cheap.
fn arb_sparse_family() -> impl Strategy<Value = SetFamily> {
    (2u32..=6, proptest::collection::vec(1u32..64, 0..9))
        .prop_map(|(n, masks)| SetFamily::from_masks(GroundSet::new(n).unwrap(), masks.into_iter().map(|m| m & ((1 << n) - 1))).unwrap())
}

fn binom(n: i64, k: i64) -> u64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Tries every assignment of members to `r` classes.
fn brute_colorable(f: &SetFamily, r: u32) -> bool {
    let members: Vec<u32> = f.members().collect();
    let total = (r as u64).pow(members.len() as u32);
    (0..total).any(|mut code| {
        let mut classes = vec![Vec::new(); r as usize];
        for &m in &members {
            classes[(code % r as u64) as usize].push(m);
            code /= r as u64;
        }
        classes.iter().all(|c| c.iter().all(|&a| c.iter().all(|&b| a & b != 0)))
    })
}

fn limits() -> SearchLimits {
    SearchLimits { all_witnesses: true, workers: 2, ..SearchLimits::default() }
}

fn check_witnesses(out: &SearchOutcome, k: u32, valid: impl Fn(&SetFamily) -> bool) {
    assert!(out.complete);
    assert!(!out.witnesses.is_empty());
    for w in &out.witnesses {
        let f = w.family();
        assert_eq!(f.len(), out.optimum);
        assert!(f.is_empty() || f.uniform_level().unwrap() == Some(k));
        assert!(valid(f));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dual_is_an_involution(f in arb_family()) {
        prop_assert_eq!(f.dual().dual(), f);
    }

    #[test]
    fn up_closure_is_idempotent(f in arb_family()) {
        let up = f.up_closure();
        prop_assert!(up.is_increasing());
        prop_assert!(f.is_subfamily_of(&up).unwrap());
        prop_assert_eq!(up.up_closure(), up);
    }

    #[test]
    fn intersecting_iff_matching_number_at_most_one(f in arb_sparse_family()) {
        prop_assume!(!f.is_empty() && !f.contains(0));
        prop_assert_eq!(f.is_intersecting(), f.matching_number() <= 1);
    }

    #[test]
    fn measure_duality(f in arb_family(), num in 0i64..=12) {
        let p = ratio(num, 12);
        let q = ratio(12 - num, 12);
        prop_assert_eq!(mu(&f, &p).unwrap() + mu(&f.dual(), &q).unwrap(), ratio(1, 1));
    }

    #[test]
    fn slices_partition_the_family(f in arb_family()) {
        let total: u64 = (0..=f.n()).map(|l| f.slice(l).unwrap().len()).sum();
        prop_assert_eq!(total, f.len());
    }

    #[test]
    fn frankl_furedi_level_counts(n in 2u32..=12, r in 1u32..=4, t in 0u32..=4, l in 0u32..=12) {
        prop_assume!(r + t <= n && l <= n);
        let ff = Construction::FranklFuredi { r, t }.build(GroundSet::new(n).unwrap()).unwrap();
        let (ni, li, ri, ti) = (n as i64, l as i64, r as i64, t as i64);
        let expected = binom(ni, li) - binom(ni - ri + 1, li) + binom(ni - ri, li - 1) - binom(ni - ri - ti, li - 1);
        prop_assert_eq!(ff.level_count(l), expected);
    }

    #[test]
    fn colorability_matches_brute_force(f in arb_sparse_family(), r in 1u32..=3) {
        prop_assert_eq!(is_union_of_intersecting(&f, r), brute_colorable(&f, r));
    }
}

/// Minimum lower shadow of `m` sets at level `j` for every `m`, by enumeration.
fn brute_min_lower_shadow(n: u32, j: u32) -> Vec<u64> {
    let sets: Vec<u32> = level_masks(n, j).collect();
    let below: Vec<u32> = level_masks(n, j - 1).collect();
    let covers: Vec<u64> = sets
        .iter()
        .map(|&a| below.iter().enumerate().filter(|(_, &b)| a & b == b).fold(0u64, |acc, (i, _)| acc | 1 << i))
        .collect();
    let mut best = vec![u64::MAX; sets.len() + 1];
    for subset in 0u64..1 << sets.len() {
        let shadow = (0..sets.len()).filter(|i| subset >> i & 1 == 1).fold(0u64, |acc, i| acc | covers[i]);
        let m = subset.count_ones() as usize;
        best[m] = best[m].min(shadow.count_ones() as u64);
    }
    best
}

#[test]
fn or_and_superset_families_are_dual() {
    for n in 1..=8u32 {
        let g = GroundSet::new(n).unwrap();
        for r in 0u32..1 << n {
            let elems: Vec<u32> = (1..=n).filter(|&i| r >> (i - 1) & 1 == 1).collect();
            let or = Construction::OrFamily(elems.clone()).build(g).unwrap();
            let sup = Construction::SupersetFamily(elems).build(g).unwrap();
            assert_eq!(or.dual(), sup);
            assert_eq!(sup.dual(), or);
        }
    }
}

#[test]
fn colex_complement_duality() {
    for n in 2..=6u32 {
        for k in 1..n {
            let lower = brute_min_lower_shadow(n, n - k);
            for (m, &b) in lower.iter().enumerate() {
                assert_eq!(kk_min_upper_shadow(n, k, m as u64).unwrap(), b, "n={n} k={k} m={m}");
            }
        }
    }
}

#[test]
fn single_family_union_is_intersecting_search() {
    for (n, k) in [(5, 2), (6, 2), (7, 2), (7, 3), (8, 3)] {
        let a = max_union_intersecting(n, k, 1, &limits()).unwrap();
        let b = max_intersecting(n, k, &limits()).unwrap();
        assert_eq!(a.optimum, b.optimum, "n={n} k={k}");
        assert_eq!(a.witnesses, b.witnesses, "n={n} k={k}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn up_closure_is_monotone(f in arb_family(), extra in proptest::collection::vec(any::<u32>(), 0..6)) {
        let g = f.union(&SetFamily::from_masks(f.ground(), extra.into_iter().map(|m| m & f.ground().full_mask())).unwrap()).unwrap();
        prop_assert!(f.up_closure().is_subfamily_of(&g.up_closure()).unwrap());
    }

    #[test]
    fn dual_of_increasing_is_increasing(f in arb_family()) {
        prop_assert!(f.up_closure().dual().is_increasing());
    }

    #[test]
    fn measure_matches_direct_sum(f in arb_family(), num in 0i64..=9) {
        let p = ratio(num, 9);
        let q = ratio(9 - num, 9);
        let direct = f.members().fold(ratio(0, 1), |acc, m| {
            let size = m.count_ones();
            acc + pow_u(&p, size) * pow_u(&q, f.n() - size)
        });
        prop_assert_eq!(mu(&f, &p).unwrap(), direct);
    }

    #[test]
    fn integral_identity_up_to_one_half(f in arb_family(), num in 0i64..=10) {
        let p = ratio(num, 20);
        prop_assert!(check_integral_identity(&f.up_closure(), &p, &ratio(1, 2)).unwrap().holds());
    }

    #[test]
    fn influence_is_complement_invariant(f in arb_family(), num in 0i64..=7) {
        let p = ratio(num, 7);
        let comp = f.complement();
        for i in 1..=f.n() {
            prop_assert_eq!(influence(&f, i, &p).unwrap(), influence(&comp, i, &p).unwrap());
        }
    }

    #[test]
    fn measure_is_monotone_for_increasing(f in arb_family(), a in 0i64..=12, b in 0i64..=12) {
        let up = f.up_closure();
        let (lo, hi) = (a.min(b), a.max(b));
        prop_assert!(mu(&up, &ratio(lo, 12)).unwrap() <= mu(&up, &ratio(hi, 12)).unwrap());
    }

    #[test]
    fn local_lym_never_fails(n in 2u32..=9, k in 1u32..=8, seed in any::<u64>()) {
        prop_assume!(k < n);
        let f = random_uniform(n, k, seed).unwrap();
        prop_assert!(check_local_lym(&f).unwrap().holds());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn union_search_is_relabeling_invariant(n in 4u32..=7, k in 2u32..=3, r in 1u32..=2, perm_seed in any::<u64>()) {
        prop_assume!(2 * k <= n + 1);
        let base = max_union_intersecting(n, k, r, &limits()).unwrap();
        let perm = ekrlab_core::corpus::random_permutation(n, perm_seed);
        let moved = max_union_intersecting(n, k, r, &SearchLimits { relabel: Some(perm.clone()), ..limits() }).unwrap();
        prop_assert_eq!(base.optimum, moved.optimum);
        prop_assert_eq!(&base.witnesses, &moved.witnesses);
        // Canonical forms do not see the relabeling either.
        for w in &base.witnesses {
            prop_assert_eq!(&canonicalize(&relabel_family(w.family(), &perm)).unwrap(), w);
        }
        check_witnesses(&base, k, |f| is_union_of_intersecting(f, r));
    }

    #[test]
    fn union_optimum_is_monotone(n in 4u32..=7, k in 2u32..=3) {
        prop_assume!(2 * k <= n);
        let one = max_union_intersecting(n, k, 1, &limits()).unwrap().optimum;
        let two = max_union_intersecting(n, k, 2, &limits()).unwrap().optimum;
        let wider = max_union_intersecting(n + 1, k, 2, &limits()).unwrap().optimum;
        prop_assert!(one <= two && two <= wider);
    }

    #[test]
    fn matching_witnesses_are_valid(n in 4u32..=7, k in 2u32..=3, s in 1u32..=2) {
        prop_assume!(2 * k <= n + 1);
        let out = max_bounded_matching(n, k, s, &limits()).unwrap();
        check_witnesses(&out, k, |f| f.matching_number() <= s);
        let union = max_union_intersecting(n, k, s, &limits()).unwrap();
        // A union of s intersecting families has matching number at most s.
        prop_assert!(union.optimum <= out.optimum);
    }
}
