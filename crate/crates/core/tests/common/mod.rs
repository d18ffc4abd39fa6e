//! Strategies shared by the property suites. Entries are small integers or
//! −∞, so every max-plus sum and maximum is exact in f64.

#![allow(dead_code)]

use maxplus_lln::law::{IidLaw, MatrixLaw};
use maxplus_lln::tropical::{TropicalMatrix, TropicalValue, TropicalVector};
use proptest::prelude::*;

pub fn value() -> impl Strategy<Value = TropicalValue> {
    prop_oneof![
        1 => Just(TropicalValue::BOTTOM),
        4 => (-10i32..=10).prop_map(|k| TropicalValue::finite(f64::from(k)).unwrap()),
    ]
}

pub fn finite_value() -> impl Strategy<Value = TropicalValue> {
    (-10i32..=10).prop_map(|k| TropicalValue::finite(f64::from(k)).unwrap())
}

pub fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = TropicalMatrix> {
    prop::collection::vec(value(), rows * cols)
        .prop_map(move |v| TropicalMatrix::new(rows, cols, v).unwrap())
}

pub fn square(d: usize) -> impl Strategy<Value = TropicalMatrix> {
    matrix(d, d)
}

/// Square matrix with a finite entry on every row.
pub fn row_finite(d: usize) -> impl Strategy<Value = TropicalMatrix> {
    (square(d), prop::collection::vec((0..d, finite_value()), d)).prop_map(move |(m, fix)| {
        let mut rows = m.to_rows();
        for (i, (j, v)) in fix.into_iter().enumerate() {
            rows[i][j] = v;
        }
        TropicalMatrix::from_rows(rows).unwrap()
    })
}

pub fn vector(d: usize) -> impl Strategy<Value = TropicalVector> {
    prop::collection::vec(value(), d).prop_map(|v| TropicalVector::new(v).unwrap())
}

pub fn finite_vector(d: usize) -> impl Strategy<Value = TropicalVector> {
    prop::collection::vec(finite_value(), d).prop_map(|v| TropicalVector::new(v).unwrap())
}

/// An i.i.d. law with 1..=3 atoms whose matrices satisfy the row condition.
pub fn iid_law(d: usize) -> impl Strategy<Value = MatrixLaw> {
    prop::collection::vec((row_finite(d), 1u32..=4), 1..=3).prop_map(|atoms| {
        let total: u32 = atoms.iter().map(|(_, w)| w).sum();
        let pairs = atoms
            .into_iter()
            .map(|(m, w)| (m, f64::from(w) / f64::from(total)))
            .collect();
        MatrixLaw::FiniteIid(IidLaw::from_pairs(pairs).unwrap())
    })
}

/// Largest |finite entry| over the support of a law.
pub fn max_abs(law: &MatrixLaw) -> f64 {
    law.support()
        .iter()
        .map(|m| m.max_abs_finite())
        .fold(0.0, f64::max)
}
