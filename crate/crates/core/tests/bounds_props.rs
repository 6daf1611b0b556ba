use hypercensus_core::bounds::{
    barnes_g_log, corollary_d_bound, linkgraph_bound, qn_lower_log, steiner_lower_log,
    theorem_main_upper,
};
use hypercensus_core::enumerator::{count_labeled, max_d, DMode, SearchOptions};
use hypercensus_core::freeness::ForbiddenList;
use num_bigint::BigUint;
use proptest::prelude::*;

/// `log2` of a big integer, good to about 1e-12 relative.
fn log2_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 52 {
        return (x.to_u64_digits().first().copied().unwrap_or(0) as f64).log2();
    }
    let shift = bits - 52;
    let top: BigUint = x >> shift;
    (top.to_u64_digits()[0] as f64).log2() + shift as f64
}

#[test]
fn bounds_are_monotone_in_n() {
    let mut prev = [f64::NEG_INFINITY; 6];
    for n in 4..=100u64 {
        let now = [
            theorem_main_upper(n, 3, 4).unwrap().log2_value,
            corollary_d_bound(2, n, 3, 4).unwrap().log2_value,
            corollary_d_bound(1, n, 3, 4).unwrap().log2_value,
            linkgraph_bound(n, 4).unwrap().log2_value,
            steiner_lower_log(n, 3).unwrap().log2_value,
            barnes_g_log(n).unwrap().log2_value,
        ];
        for (i, (a, b)) in prev.iter().zip(&now).enumerate() {
            assert!(a <= b, "formula {i} decreases at n={n}");
        }
        prev = now;
    }
}

#[test]
fn barnes_matches_exact_product() {
    let mut product = BigUint::from(1u8);
    let mut factorial = BigUint::from(1u8);
    for n in 2..=60u64 {
        // product of m! for m < n
        factorial *= n - 1;
        product *= &factorial;
        let exact = log2_big(&product);
        let got = barnes_g_log(n).unwrap().log2_value;
        assert!((exact - got).abs() <= 1e-9 * exact.max(1.0), "n={n}");
    }
}

#[test]
fn barnes_growth() {
    for n in [50u64, 100] {
        let nf = n as f64;
        let v = barnes_g_log(n).unwrap().log2_value;
        assert!(v <= nf * nf / 2.0 * nf.log2() * 1.2, "n={n}");
        assert!(v >= nf * nf / 4.0 * nf.log2(), "n={n}");
    }
}

#[test]
fn qn_lower_bound_is_vacuous_at_small_n() {
    for n in [2u64, 10, 1000, 1 << 20] {
        assert!(qn_lower_log(n).unwrap().vacuous, "n={n}");
    }
}

#[test]
fn census_respects_upper_bound() {
    let opts = SearchOptions::default();
    let bound = theorem_main_upper(6, 3, 4).unwrap();
    let mut checked = 0;
    for list in ForbiddenList::all(4, 3).unwrap() {
        if !list.is_3_good() {
            continue;
        }
        let count = count_labeled(6, 3, 4, &list, &opts).unwrap().labeled_count;
        if count > BigUint::from(0u8) {
            assert!(bound.admits(log2_big(&count)), "{list}");
        }
        checked += 1;
    }
    assert!(checked > 0);
}

#[test]
fn d_respects_corollary_bounds() {
    let list = ForbiddenList::new(4, 3, [1, 4]).unwrap();
    let opts = SearchOptions::default();
    for n in [5usize, 6] {
        for i in [1u64, 2] {
            let d = max_d(3 - i as usize, n, &list, DMode::Exhaustive, &opts).unwrap();
            let b = corollary_d_bound(i, n as u64, 3, 4).unwrap();
            assert!(b.admits((d.value as f64).log2()), "n={n} i={i}");
        }
        let d2 = max_d(2, n, &list, DMode::Exhaustive, &opts).unwrap();
        assert!(linkgraph_bound(n as u64, 4)
            .unwrap()
            .admits((d2.value as f64).log2()));
    }
}

proptest! {
    #[test]
    fn corollary_grows_with_i(n in 2u64..500, k in 4u64..10) {
        let one = corollary_d_bound(1, n, 4, k).unwrap().log2_value;
        let two = corollary_d_bound(2, n, 4, k).unwrap().log2_value;
        let three = corollary_d_bound(3, n, 4, k).unwrap().log2_value;
        prop_assert!(one <= two && two <= three);
    }
}
