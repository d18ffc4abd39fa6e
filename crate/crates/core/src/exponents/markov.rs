use serde::Serialize;

use crate::error::{Error, Result};
use crate::law::{example1_law, stationary_analysis, MarkovLaw};

/// Coordinate index carried by each state of the mixing chain, in the state
/// order of [`example1_law`]: (A,1), (B,2), (A,2), (B,1).
const STATE_INDEX: [usize; 4] = [0, 1, 1, 0];

/// Exact almost-sure limits of `y(n,0)/n` for the mixing chain: the limit
/// is `(γ_{i₋₁}, γ_{τ(i₋₁)})` where `i₋₁` is the index of the state at
/// time −1, so each coordinate has a two-point limit law.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MarkovCoordinateLimits {
    pub gamma1: f64,
    pub gamma2: f64,
    pub delta: f64,
    pub stationary: Vec<f64>,
    /// ℙ(lim y₁/n = γ₁) = ℙ(i₋₁ = 1).
    pub prob_gamma1: f64,
    /// ℙ(lim y₁/n = γ₂) = ℙ(i₋₁ = 2).
    pub prob_gamma2: f64,
}

impl MarkovCoordinateLimits {
    /// Limit law of `y_coordinate(n,0)/n` as `(value, probability)` pairs
    /// sorted by value, with values within 1e-12 merged.
    pub fn distribution(&self, coordinate: usize) -> Result<Vec<(f64, f64)>> {
        let mut atoms = match coordinate {
            0 => vec![
                (self.gamma1, self.prob_gamma1),
                (self.gamma2, self.prob_gamma2),
            ],
            // y₂ follows τ(i₋₁)
            1 => vec![
                (self.gamma2, self.prob_gamma1),
                (self.gamma1, self.prob_gamma2),
            ],
            _ => {
                return Err(Error::NodeOutOfRange {
                    node: coordinate,
                    dim: 2,
                })
            }
        };
        atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
        atoms.dedup_by(|later, earlier| {
            let same = (later.0 - earlier.0).abs() <= 1e-12;
            if same {
                earlier.1 += later.1;
            }
            same
        });
        Ok(atoms)
    }
}

/// Recovers (γ₁, γ₂) from a law of the mixing-chain family and derives the
/// coordinate limits from its stationary distribution. The reward of a
/// state is the unique finite entry on the row selected by its index
/// (for γ₁) or by the swapped index (for γ₂).
pub fn exact_markov_coordinate_limits(law: &MarkovLaw) -> Result<MarkovCoordinateLimits> {
    let not_family =
        || Error::UnsupportedLaw("not a law of the two-index mixing-chain family".into());
    if law.states().len() != 4 || law.dim() != 2 {
        return Err(not_family());
    }
    let p = law.transition();
    let (gamma1, gamma2) = (p[3][0], p[1][2]);
    let reference = example1_law(gamma1, gamma2).map_err(|_| not_family())?;
    let same_chain = reference
        .transition()
        .iter()
        .flatten()
        .zip(p.iter().flatten())
        .all(|(a, b)| (a - b).abs() <= 1e-12);
    let same_emissions = reference
        .states()
        .iter()
        .zip(law.states())
        .all(|(a, b)| a.matrix == b.matrix);
    if !same_chain || !same_emissions {
        return Err(not_family());
    }

    let reward = |swap: bool| -> Vec<f64> {
        law.states()
            .iter()
            .zip(STATE_INDEX)
            .map(|(s, i)| {
                let row = if swap { 1 - i } else { i };
                s.matrix
                    .row(row)
                    .iter()
                    .fold(f64::NEG_INFINITY, |m, v| m.max(v.to_f64()))
            })
            .collect()
    };
    let report = stationary_analysis(law, &[reward(false), reward(true)])?;
    let pi = report.pi;
    let prob_gamma1 = pi[0] + pi[3];
    let prob_gamma2 = pi[1] + pi[2];
    Ok(MarkovCoordinateLimits {
        gamma1: report.expected_rewards[0],
        gamma2: report.expected_rewards[1],
        delta: (1.0 - (gamma1 + gamma2)) / 2.0,
        stationary: pi,
        prob_gamma1,
        prob_gamma2,
    })
}
