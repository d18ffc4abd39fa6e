use nalgebra::{DMatrix, DVector};
use rand::distr::weighted::WeightedIndex;
use serde::Serialize;

use super::{check_square, PROB_TOLERANCE};
use crate::error::{Error, Result};
use crate::tropical::TropicalMatrix;

#[derive(Clone, Debug, PartialEq)]
pub struct MarkovState {
    pub label: String,
    pub matrix: TropicalMatrix,
}

/// Matrix sequence emitted by a stationary, irreducible finite Markov chain.
///
/// The stationary distribution and the time-reversed kernel are computed once
/// at construction; sampling always starts from stationarity.
#[derive(Clone, Debug)]
pub struct MarkovLaw {
    states: Vec<MarkovState>,
    transition: Vec<Vec<f64>>,
    stationary: Vec<f64>,
    reversed: Vec<Vec<f64>>,
    pub(super) initial_dist: WeightedIndex<f64>,
    pub(super) forward_dist: Vec<WeightedIndex<f64>>,
    pub(super) backward_dist: Vec<WeightedIndex<f64>>,
}

impl PartialEq for MarkovLaw {
    fn eq(&self, other: &Self) -> bool {
        self.states == other.states && self.transition == other.transition
    }
}

impl MarkovLaw {
    pub fn new(states: Vec<MarkovState>, transition: Vec<Vec<f64>>) -> Result<Self> {
        let first = states.first().ok_or(Error::Empty("state list"))?;
        let d = first.matrix.rows();
        for s in &states {
            check_square(&s.matrix, d, &s.label)?;
        }
        let n = states.len();
        if transition.len() != n || transition.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "transition matrix must be {n}x{n}"
            )));
        }
        for (i, row) in transition.iter().enumerate() {
            if let Some(&p) = row.iter().find(|p| !(p.is_finite() && **p >= 0.0)) {
                return Err(Error::InvalidProbability {
                    what: format!("transition from {}", states[i].label),
                    value: p,
                });
            }
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > PROB_TOLERANCE {
                return Err(Error::ProbabilitySum(total));
            }
        }
        if !strongly_connected(&transition) {
            return Err(Error::ReducibleChain);
        }

        let stationary = solve_stationary(&transition)?;
        let reversed = reversed_kernel(&transition, &stationary);
        let weighted =
            |w: &[f64]| WeightedIndex::new(w.iter().copied()).map_err(|_| Error::SingularSystem);
        Ok(Self {
            initial_dist: weighted(&stationary)?,
            forward_dist: transition
                .iter()
                .map(|r| weighted(r))
                .collect::<Result<_>>()?,
            backward_dist: reversed
                .iter()
                .map(|r| weighted(r))
                .collect::<Result<_>>()?,
            states,
            transition,
            stationary,
            reversed,
        })
    }

    pub fn states(&self) -> &[MarkovState] {
        &self.states
    }

    pub fn transition(&self) -> &[Vec<f64>] {
        &self.transition
    }

    /// π with πP = π and Σπ = 1.
    pub fn stationary(&self) -> &[f64] {
        &self.stationary
    }

    /// P̂ⱼᵢ = πᵢ Pᵢⱼ / πⱼ, the kernel of the chain run backwards in time.
    pub fn reversed_kernel(&self) -> &[Vec<f64>] {
        &self.reversed
    }

    pub fn dim(&self) -> usize {
        self.states[0].matrix.rows()
    }

    pub(super) fn restrict(&self, nodes: &[usize]) -> Result<Self> {
        let states = self
            .states
            .iter()
            .map(|s| {
                Ok(MarkovState {
                    label: s.label.clone(),
                    matrix: s.matrix.submatrix(nodes)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            states,
            ..self.clone()
        })
    }
}

fn strongly_connected(transition: &[Vec<f64>]) -> bool {
    let n = transition.len();
    let reach = |forward: bool| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in 0..n {
                let p = if forward {
                    transition[u][v]
                } else {
                    transition[v][u]
                };
                if p > 0.0 && !seen[v] {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    };
    reach(true) && reach(false)
}

/// Solves (Pᵀ − I)π = 0 with the last balance equation replaced by Σπ = 1.
fn solve_stationary(transition: &[Vec<f64>]) -> Result<Vec<f64>> {
    let n = transition.len();
    let mut a = DMatrix::from_fn(n, n, |i, j| {
        transition[j][i] - if i == j { 1.0 } else { 0.0 }
    });
    for j in 0..n {
        a[(n - 1, j)] = 1.0;
    }
    let mut b = DVector::zeros(n);
    b[n - 1] = 1.0;
    let pi = a.lu().solve(&b).ok_or(Error::SingularSystem)?;
    let pi: Vec<f64> = pi
        .iter()
        .map(|&p| if p.abs() < 1e-15 { 0.0 } else { p })
        .collect();

    let residual = (0..n)
        .map(|j| ((0..n).map(|i| pi[i] * transition[i][j]).sum::<f64>() - pi[j]).abs())
        .fold(0.0, f64::max);
    let total: f64 = pi.iter().sum();
    if residual > 1e-10
        || (total - 1.0).abs() > 1e-12
        || pi.iter().any(|&p| p < 0.0 || !p.is_finite())
    {
        return Err(Error::SingularSystem);
    }
    Ok(pi)
}

fn reversed_kernel(transition: &[Vec<f64>], pi: &[f64]) -> Vec<Vec<f64>> {
    let n = transition.len();
    (0..n)
        .map(|j| (0..n).map(|i| pi[i] * transition[i][j] / pi[j]).collect())
        .collect()
}

/// Stationary distribution plus the stationary mean of each reward functional.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StationaryReport {
    pub pi: Vec<f64>,
    pub expected_rewards: Vec<f64>,
}

/// π and `Σₛ π(s)·reward(s)` for each supplied per-state reward vector.
pub fn stationary_analysis(law: &MarkovLaw, rewards: &[Vec<f64>]) -> Result<StationaryReport> {
    let pi = law.stationary().to_vec();
    let expected_rewards = rewards
        .iter()
        .map(|r| {
            if r.len() != pi.len() {
                return Err(Error::DimensionMismatch(format!(
                    "reward has {} entries for {} states",
                    r.len(),
                    pi.len()
                )));
            }
            Ok(pi.iter().zip(r).map(|(p, x)| p * x).sum())
        })
        .collect::<Result<_>>()?;
    Ok(StationaryReport {
        pi,
        expected_rewards,
    })
}

/// State order of [`example1_law`].
pub const EXAMPLE1_STATE_LABELS: [&str; 4] = ["(A,1)", "(B,2)", "(A,2)", "(B,1)"];

/// The four-state mixing chain on {A, B} × {1, 2} with
/// `A = [[1, −∞], [−∞, 0]]`, `B = [[−∞, 0], [0, −∞]]` and
/// `δ = (1 − γ₁ − γ₂)/2`. Its stationary law is `(γ₁, δ, γ₂, δ)`.
pub fn example1_law(gamma1: f64, gamma2: f64) -> Result<MarkovLaw> {
    if !(gamma1 > 0.0 && gamma2 > 0.0 && gamma1 + gamma2 < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "need gamma1 > 0, gamma2 > 0 and gamma1 + gamma2 < 1, got {gamma1} and {gamma2}"
        )));
    }
    let delta = (1.0 - (gamma1 + gamma2)) / 2.0;
    let neg = f64::NEG_INFINITY;
    let a = TropicalMatrix::from_f64_rows(&[[1.0, neg], [neg, 0.0]])?;
    let b = TropicalMatrix::from_f64_rows(&[[neg, 0.0], [0.0, neg]])?;
    let states = EXAMPLE1_STATE_LABELS
        .iter()
        .zip([&a, &b, &a, &b])
        .map(|(l, m)| MarkovState {
            label: l.to_string(),
            matrix: m.clone(),
        })
        .collect();
    let transition = vec![
        vec![1.0 - delta, delta, 0.0, 0.0],
        vec![0.0, 0.0, gamma2, 1.0 - gamma2],
        vec![0.0, 0.0, 1.0 - delta, delta],
        vec![gamma1, 1.0 - gamma1, 0.0, 0.0],
    ];
    MarkovLaw::new(states, transition)
}
