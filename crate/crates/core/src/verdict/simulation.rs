use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::law::{Direction, MatrixLaw, SampleStream};
use crate::stats::SampleSummary;
use crate::trajectory::{backward_endpoint, forward_trajectory, scale, ForwardTrajectory};
use crate::tropical::TropicalValue;

/// Default clustering radius for limit-distribution reports.
pub const DEFAULT_CLUSTER_RADIUS: f64 = 0.05;

/// Samples within `radius` of a leader value.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HistogramBin {
    /// Median member.
    pub center: f64,
    pub mean: f64,
    pub count: usize,
    pub mass: f64,
}

/// Empirical law of `y_coordinate(n,0)/n` over independent trials.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LimitDistribution {
    pub coordinate: usize,
    pub steps: usize,
    pub trials: usize,
    pub radius: f64,
    pub samples: Vec<TropicalValue>,
    /// Clusters sorted by center; see [`cluster`].
    pub histogram: Vec<HistogramBin>,
    /// Fraction of trials whose coordinate was Bottom.
    pub bottom_mass: f64,
    /// Mean and standard error over the finite samples.
    pub summary: Option<SampleSummary>,
}

impl LimitDistribution {
    /// Fraction of all trials whose sample lies within `radius` of `center`.
    pub fn mass_within(&self, center: f64, radius: f64) -> f64 {
        let hits = self
            .samples
            .iter()
            .filter_map(|s| s.value())
            .filter(|x| (x - center).abs() <= radius)
            .count();
        hits as f64 / self.samples.len() as f64
    }
}

/// Greedy density clustering: repeatedly take the unassigned sample with
/// the most unassigned neighbours within `radius` and claim that whole
/// neighbourhood as one cluster, centred at its median member. Each cluster
/// spans at most `2·radius`.
pub fn cluster(values: &[f64], radius: f64, total: usize) -> Vec<HistogramBin> {
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut assigned = vec![false; n];
    let mut bins = Vec::new();
    let mut remaining = n;
    while remaining > 0 {
        // prefix[i] = unassigned samples among sorted[..i]
        let mut prefix = vec![0usize; n + 1];
        for i in 0..n {
            prefix[i + 1] = prefix[i] + usize::from(!assigned[i]);
        }
        let window = |i: usize| {
            let lo = sorted.partition_point(|&x| x < sorted[i] - radius);
            let hi = sorted.partition_point(|&x| x <= sorted[i] + radius);
            (lo, hi)
        };
        let (_, (lo, hi)) = (0..n)
            .filter(|&i| !assigned[i])
            .map(|i| (i, window(i)))
            .max_by_key(|&(i, (lo, hi))| (prefix[hi] - prefix[lo], std::cmp::Reverse(i)))
            .expect("an unassigned sample remains");
        let members: Vec<f64> = (lo..hi)
            .filter(|&j| !assigned[j])
            .map(|j| sorted[j])
            .collect();
        for flag in &mut assigned[lo..hi] {
            *flag = true;
        }
        remaining -= members.len();
        bins.push(HistogramBin {
            center: members[members.len() / 2],
            mean: members.iter().sum::<f64>() / members.len() as f64,
            count: members.len(),
            mass: members.len() as f64 / total as f64,
        });
    }
    bins.sort_by(|a, b| a.center.total_cmp(&b.center));
    bins
}

fn check_coordinate(law: &MatrixLaw, coordinate: usize) -> Result<()> {
    if coordinate >= law.dim() {
        return Err(Error::NodeOutOfRange {
            node: coordinate,
            dim: law.dim(),
        });
    }
    Ok(())
}

/// Samples `y_coordinate(n,0)/n` from `trials` independent backward
/// products; trial `t` uses stream `(seed, t)`.
pub fn simulate_limit_distribution(
    law: &MatrixLaw,
    n: usize,
    trials: usize,
    seed: u64,
    coordinate: usize,
    radius: f64,
) -> Result<LimitDistribution> {
    simulate_scaled_coordinate(
        law,
        n,
        trials,
        seed,
        coordinate,
        Direction::Backward,
        radius,
    )
}

/// Like [`simulate_limit_distribution`], reading either `y(n,0)` (backward)
/// or `x(n,0)` (forward) from each trial.
pub fn simulate_scaled_coordinate(
    law: &MatrixLaw,
    n: usize,
    trials: usize,
    seed: u64,
    coordinate: usize,
    direction: Direction,
    radius: f64,
) -> Result<LimitDistribution> {
    check_coordinate(law, coordinate)?;
    if n == 0 || trials == 0 {
        return Err(Error::InvalidParameter(format!(
            "need steps >= 1 and trials >= 1, got {n} and {trials}"
        )));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "clustering radius must be positive, got {radius}"
        )));
    }
    let samples: Vec<TropicalValue> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let stream = SampleStream::new(seed, t);
            let traj = match direction {
                Direction::Backward => backward_endpoint(law, n, stream),
                Direction::Forward => forward_trajectory(law, n, stream),
            };
            scale(traj.value(coordinate), n)
        })
        .collect();
    let finite: Vec<f64> = samples.iter().filter_map(|s| s.value()).collect();
    Ok(LimitDistribution {
        coordinate,
        steps: n,
        trials,
        radius,
        histogram: cluster(&finite, radius, trials),
        bottom_mass: (trials - finite.len()) as f64 / trials as f64,
        summary: SampleSummary::of(&finite),
        samples,
    })
}

/// Running averages `x_coordinate(k,0)/k` along one forward trajectory.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Oscillation {
    pub coordinate: usize,
    pub steps: usize,
    /// `(k, x_coordinate(k,0)/k)` at k = 1, 2, 4, … and at k = n.
    pub checkpoints: Vec<(usize, TropicalValue)>,
    /// The window is k ∈ [window_start, n] with window_start = ⌊n/10⌋ (at least 1).
    pub window_start: usize,
    pub window_min: TropicalValue,
    pub window_max: TropicalValue,
}

/// Follows one forward trajectory (stream `(seed, 0)`) for `n` steps,
/// recording power-of-two checkpoints and the extremes of the scaled
/// coordinate over the final nine tenths of the horizon.
pub fn track_oscillation(
    law: &MatrixLaw,
    n: usize,
    seed: u64,
    coordinate: usize,
) -> Result<Oscillation> {
    check_coordinate(law, coordinate)?;
    if n == 0 {
        return Err(Error::InvalidParameter("need steps >= 1".into()));
    }
    let window_start = (n / 10).max(1);
    let mut traj = ForwardTrajectory::new(law.dim());
    let mut checkpoints = Vec::new();
    let mut window_min: Option<TropicalValue> = None;
    let mut window_max = TropicalValue::BOTTOM;
    for (k, a) in (1..=n).zip(
        law.sampler(SampleStream::new(seed, 0), Direction::Forward)
            .map(|i| law.matrix(i)),
    ) {
        traj.step(a)?;
        let v = scale(traj.value(coordinate), k);
        if k.is_power_of_two() || k == n {
            checkpoints.push((k, v));
        }
        if k >= window_start {
            window_min = Some(window_min.map_or(v, |m| if v < m { v } else { m }));
            window_max = window_max.oplus(v);
        }
    }
    Ok(Oscillation {
        coordinate,
        steps: n,
        checkpoints,
        window_start,
        window_min: window_min.expect("window is non-empty"),
        window_max,
    })
}
