mod common;

use common::{iid_law, max_abs, square};
use maxplus_lln::exponents::{
    estimate_bottom_exponent, estimate_top_exponent, karp_max_cycle_mean,
};
use maxplus_lln::law::MatrixLaw;
use maxplus_lln::tropical::{TropicalMatrix, TropicalValue};
use proptest::prelude::*;

/// Best mean weight over elementary circuits, each listed once from its
/// smallest node.
fn brute_force_cycle_mean(a: &TropicalMatrix) -> TropicalValue {
    fn extend(a: &TropicalMatrix, path: &mut Vec<usize>, weight: f64, best: &mut TropicalValue) {
        let (start, last) = (path[0], *path.last().unwrap());
        if let Some(w) = a.get(last, start).value() {
            let mean = TropicalValue::finite((weight + w) / path.len() as f64).unwrap();
            *best = best.oplus(mean);
        }
        for next in start + 1..a.rows() {
            if path.contains(&next) {
                continue;
            }
            if let Some(w) = a.get(last, next).value() {
                path.push(next);
                extend(a, path, weight + w, best);
                path.pop();
            }
        }
    }
    let mut best = TropicalValue::BOTTOM;
    for s in 0..a.rows() {
        extend(a, &mut vec![s], 0.0, &mut best);
    }
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn karp_matches_circuit_enumeration(a in (1usize..=5).prop_flat_map(square)) {
        prop_assert_eq!(karp_max_cycle_mean(&a), brute_force_cycle_mean(&a));
    }

    #[test]
    fn karp_shifts_with_the_matrix(a in (1usize..=5).prop_flat_map(square), k in -5i32..=5) {
        let lambda = TropicalValue::finite(f64::from(k)).unwrap();
        // (w + Lλ)/L and w/L + λ round differently, so compare up to rounding
        match (karp_max_cycle_mean(&a.scaled(lambda)).value(), karp_max_cycle_mean(&a).otimes(lambda).value()) {
            (Some(x), Some(y)) => prop_assert!((x - y).abs() <= 1e-12, "{x} vs {y}"),
            (x, y) => prop_assert_eq!(x, y),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    /// The transient of (1/n)·maxᵢ xᵢ(n,0) is at most 2(d−1)·max|entry|/n.
    #[test]
    fn deterministic_estimate_is_within_the_transient_bound(a in (1usize..=6).prop_flat_map(square)) {
        let n = 2_000;
        let d = a.rows();
        let bound = 2.0 * (d as f64 - 1.0) * a.max_abs_finite() / n as f64 + 1e-9;
        let karp = karp_max_cycle_mean(&a);
        let est = estimate_top_exponent(&MatrixLaw::Deterministic(a), n, 3, 0).unwrap();
        prop_assert_eq!(est.trials, 1);
        match (karp.value(), est.value.value()) {
            (Some(k), Some(e)) => prop_assert!((k - e).abs() <= bound, "karp {k}, estimate {e}, bound {bound}"),
            (None, None) => {}
            (k, e) => prop_assert!(false, "karp {k:?} vs estimate {e:?}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn bottom_exponent_never_exceeds_top(law in (1usize..=4).prop_flat_map(iid_law), seed in any::<u64>()) {
        let top = estimate_top_exponent(&law, 300, 4, seed).unwrap();
        let bottom = estimate_bottom_exponent(&law, 300, 4, seed).unwrap();
        prop_assert!(bottom.value <= top.value);
        // both rates are bounded by the largest entry
        prop_assert!(top.value.to_f64().abs() <= max_abs(&law) + 1e-9);
    }

    #[test]
    fn estimates_are_reproducible(law in (1usize..=4).prop_flat_map(iid_law), seed in any::<u64>()) {
        let a = estimate_top_exponent(&law, 200, 3, seed).unwrap();
        let b = estimate_top_exponent(&law, 200, 3, seed).unwrap();
        prop_assert_eq!(a, b);
    }
}
