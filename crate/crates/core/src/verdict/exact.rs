use serde::Serialize;

use crate::error::{Error, Result};
use crate::law::MatrixLaw;
use crate::tropical::{TropicalMatrix, TropicalValue};

/// Largest number of atom sequences the exact enumeration will visit.
pub const SMALL_N_CAP: usize = 1_000_000;

/// Exact law of `x_coordinate(n,0)` as `(value, probability)` pairs sorted by value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactDistribution {
    pub coordinate: usize,
    pub steps: usize,
    pub atoms: Vec<(TropicalValue, f64)>,
}

impl ExactDistribution {
    pub fn probability_of(&self, value: TropicalValue) -> f64 {
        self.atoms
            .iter()
            .filter(|(v, _)| *v == value)
            .map(|(_, p)| p)
            .sum()
    }

    /// Total-variation distance to the empirical law of `samples`.
    pub fn total_variation(&self, samples: &[TropicalValue]) -> f64 {
        let mut empirical: Vec<(TropicalValue, f64)> = Vec::new();
        let w = 1.0 / samples.len() as f64;
        for &s in samples {
            match empirical.iter_mut().find(|(v, _)| *v == s) {
                Some(e) => e.1 += w,
                None => empirical.push((s, w)),
            }
        }
        let exact_part: f64 = self
            .atoms
            .iter()
            .map(|&(v, p)| (p - empirical.iter().find(|(e, _)| *e == v).map_or(0.0, |e| e.1)).abs())
            .sum();
        let unmatched: f64 = empirical
            .iter()
            .filter(|(v, _)| !self.atoms.iter().any(|(a, _)| a == v))
            .map(|(_, q)| q)
            .sum();
        (exact_part + unmatched) / 2.0
    }
}

/// Enumerates every atom sequence `A(0), …, A(n−1)` with its probability and
/// tabulates `x_coordinate(n,0)`. Requires `atoms^n ≤ SMALL_N_CAP`.
pub fn exact_small_n_distribution(
    law: &MatrixLaw,
    n: usize,
    coordinate: usize,
) -> Result<ExactDistribution> {
    let atoms: Vec<(&TropicalMatrix, f64)> = match law {
        MatrixLaw::Deterministic(m) => vec![(m, 1.0)],
        MatrixLaw::FiniteIid(l) => l.atoms().iter().map(|a| (&a.matrix, a.prob)).collect(),
        MatrixLaw::Markov(_) => {
            return Err(Error::UnsupportedLaw(
                "exact enumeration needs an i.i.d. law".into(),
            ));
        }
    };
    let d = law.dim();
    if coordinate >= d {
        return Err(Error::NodeOutOfRange {
            node: coordinate,
            dim: d,
        });
    }
    let sequences = u32::try_from(n)
        .ok()
        .and_then(|e| atoms.len().checked_pow(e));
    if sequences.is_none_or(|s| s > SMALL_N_CAP) {
        return Err(Error::CapExceeded(format!(
            "{} atoms over {n} steps exceed {SMALL_N_CAP} sequences",
            atoms.len()
        )));
    }

    let mut leaves: Vec<(TropicalValue, f64)> = Vec::new();
    let mut stack = vec![(vec![TropicalValue::ZERO; d], 1.0, 0usize)];
    while let Some((x, prob, depth)) = stack.pop() {
        if depth == n {
            leaves.push((x[coordinate], prob));
            continue;
        }
        for &(m, p) in &atoms {
            let next = (0..d)
                .map(|i| {
                    m.row(i)
                        .iter()
                        .zip(&x)
                        .fold(TropicalValue::BOTTOM, |acc, (&a, &xj)| {
                            acc.oplus(a.otimes(xj))
                        })
                })
                .collect();
            stack.push((next, prob * p, depth + 1));
        }
    }
    leaves.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("no NaN"));
    let mut merged: Vec<(TropicalValue, f64)> = Vec::new();
    for (v, p) in leaves {
        match merged.last_mut() {
            Some(last) if last.0 == v => last.1 += p,
            _ => merged.push((v, p)),
        }
    }
    Ok(ExactDistribution {
        coordinate,
        steps: n,
        atoms: merged,
    })
}
