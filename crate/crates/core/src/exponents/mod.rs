//! Lyapunov exponents: exact maximum circuit means for deterministic laws,
//! exact stationary rewards for the mixing-chain family, and Monte Carlo
//! estimates of γ and γ_b for everything else.

mod karp;
mod markov;

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

pub use karp::karp_max_cycle_mean;
pub use markov::{exact_markov_coordinate_limits, MarkovCoordinateLimits};

use crate::error::{Error, Result};
use crate::law::{derive_seed, MatrixLaw, SampleStream};
use crate::stats::SampleSummary;
use crate::structure::Condensation;
use crate::trajectory::forward_trajectory;
use crate::tropical::TropicalValue;

/// Default horizon for estimates.
pub const DEFAULT_STEPS: usize = 10_000;
/// Default number of independent trials for estimates.
pub const DEFAULT_TRIALS: usize = 1_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EstimateMode {
    #[serde(rename = "exact")]
    Exact,
    #[serde(rename = "mc")]
    MonteCarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ExponentEstimate {
    pub value: TropicalValue,
    pub mode: EstimateMode,
    /// Standard error of the trial mean; absent for exact values.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
    #[serde(rename = "n")]
    pub steps: usize,
    pub trials: usize,
}

impl ExponentEstimate {
    pub fn exact(value: TropicalValue) -> Self {
        Self {
            value,
            mode: EstimateMode::Exact,
            stderr: None,
            steps: 0,
            trials: 0,
        }
    }

    pub fn is_exact(&self) -> bool {
        self.mode == EstimateMode::Exact
    }

    /// Standard error, 0 for exact values.
    pub fn stderr_or_zero(&self) -> f64 {
        self.stderr.unwrap_or(0.0)
    }

    pub fn half_width_95(&self) -> f64 {
        1.96 * self.stderr_or_zero()
    }
}

/// Per-trial `(maxᵢ xᵢ(n,0)/n, minᵢ xᵢ(n,0)/n)` on the forward trajectory.
/// Trial `t` uses stream `(seed, t)`, so top and bottom estimates with the
/// same seed see the same trajectories.
pub fn forward_extremes(
    law: &MatrixLaw,
    n: usize,
    trials: usize,
    seed: u64,
) -> Vec<(TropicalValue, TropicalValue)> {
    (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let traj = forward_trajectory(law, n, SampleStream::new(seed, t));
            let scale = |v: TropicalValue| crate::trajectory::scale(v, n);
            (scale(traj.max()), scale(traj.min()))
        })
        .collect()
}

fn check_horizon(n: usize, trials: usize) -> Result<()> {
    if n == 0 || trials == 0 {
        return Err(Error::InvalidParameter(format!(
            "need steps >= 1 and trials >= 1, got {n} and {trials}"
        )));
    }
    Ok(())
}

/// A deterministic law has nothing to average over: one trial suffices.
fn effective_trials(law: &MatrixLaw, trials: usize) -> usize {
    if law.as_deterministic().is_some() {
        1
    } else {
        trials
    }
}

/// Once the state is all-Bottom it stays so, and a death that happens with
/// positive probability at a finite horizon happens almost surely
/// eventually; a single dead trial therefore makes the exponent Bottom.
fn summarize(
    samples: impl Iterator<Item = TropicalValue>,
    n: usize,
    trials: usize,
) -> ExponentEstimate {
    let values: Option<Vec<f64>> = samples.map(TropicalValue::value).collect();
    match values.as_deref().and_then(SampleSummary::of) {
        Some(s) => ExponentEstimate {
            value: TropicalValue::finite(s.mean).expect("finite mean"),
            mode: EstimateMode::MonteCarlo,
            stderr: Some(s.stderr),
            steps: n,
            trials,
        },
        None => ExponentEstimate {
            value: TropicalValue::BOTTOM,
            mode: EstimateMode::MonteCarlo,
            stderr: Some(0.0),
            steps: n,
            trials,
        },
    }
}

/// Monte Carlo estimate of γ(A) = lim maxᵢ xᵢ(n,0)/n.
pub fn estimate_top_exponent(
    law: &MatrixLaw,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<ExponentEstimate> {
    check_horizon(n, trials)?;
    let trials = effective_trials(law, trials);
    let ext = forward_extremes(law, n, trials, seed);
    Ok(summarize(ext.into_iter().map(|(max, _)| max), n, trials))
}

/// Monte Carlo estimate of γ_b(A) = lim minᵢ xᵢ(n,0)/n. Every support
/// matrix must have a finite entry on each row.
pub fn estimate_bottom_exponent(
    law: &MatrixLaw,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<ExponentEstimate> {
    if let Some((atom, row)) = law.first_empty_row() {
        return Err(Error::RowCondition { atom, row });
    }
    check_horizon(n, trials)?;
    let trials = effective_trials(law, trials);
    let ext = forward_extremes(law, n, trials, seed);
    Ok(summarize(ext.into_iter().map(|(_, min)| min), n, trials))
}

/// γ of a law, exactly when the law emits a single matrix and by Monte
/// Carlo otherwise.
pub fn exponent_of(
    law: &MatrixLaw,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<ExponentEstimate> {
    match law.as_deterministic() {
        Some(m) => Ok(ExponentEstimate::exact(karp_max_cycle_mean(m))),
        None => estimate_top_exponent(law, n, trials, seed),
    }
}

/// γ^{(c)} for every component: Bottom (exact) for trivial components,
/// otherwise [`exponent_of`] on the restriction of the law to the
/// component. Component `c` draws from seed `derive_seed(seed, c + 1)`.
pub fn component_exponents(
    law: &MatrixLaw,
    condensation: &Condensation,
    n: usize,
    trials: usize,
    seed: u64,
) -> Result<BTreeMap<usize, ExponentEstimate>> {
    condensation
        .components()
        .iter()
        .map(|c| {
            let est = if c.trivial {
                ExponentEstimate::exact(TropicalValue::BOTTOM)
            } else {
                exponent_of(
                    &law.restrict(&c.nodes)?,
                    n,
                    trials,
                    derive_seed(seed, c.id as u64 + 1),
                )?
            };
            Ok((c.id, est))
        })
        .collect()
}
