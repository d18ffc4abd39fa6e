use std::fmt::Write;

use anyhow::Context;
use maxplus_lln::law::{Direction, MatrixLaw, SampleStream};
use maxplus_lln::report::ModelReport;
use maxplus_lln::stats::SampleSummary;
use maxplus_lln::trajectory::{BackwardTrajectory, ForwardTrajectory};
use maxplus_lln::tropical::TropicalValue;
use maxplus_lln::verdict::{simulate_scaled_coordinate, HistogramBin};
use serde::Serialize;

use super::{describe_model, fmt_value};
use crate::args::{Mode, SimulateArgs};
use crate::model::{is_random, load_model, node_index, require_seed};
use crate::output::{Outcome, Status};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Checkpoint {
    pub k: usize,
    /// The coordinate after k steps, divided by k.
    pub value: TropicalValue,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SimulationReport {
    pub model: ModelReport,
    pub mode: Direction,
    /// 1-based.
    pub coordinate: usize,
    pub steps: usize,
    pub trials: usize,
    pub seed: Option<u64>,
    /// Trial 0 at k = 1, 2, 4, … and at k = n.
    pub checkpoints: Vec<Checkpoint>,
    /// Final scaled coordinate of every trial, in trial order.
    pub samples: Vec<TropicalValue>,
    pub summary: Option<SampleSummary>,
    pub radius: f64,
    pub histogram: Vec<HistogramBin>,
    pub bottom_mass: f64,
}

pub fn run(args: &SimulateArgs) -> anyhow::Result<Outcome> {
    let law = load_model(&args.model)?;
    let random = is_random(&law);
    let seed = require_seed(args.mc.seed, random, "simulate")?;
    let coordinate = node_index(args.coordinate, law.dim(), "--coordinate")?;
    let direction = match args.mode {
        Mode::Forward => Direction::Forward,
        Mode::Backward => Direction::Backward,
    };
    let dist = simulate_scaled_coordinate(
        &law,
        args.mc.steps,
        args.mc.trials,
        seed,
        coordinate,
        direction,
        args.radius,
    )?;
    let report = SimulationReport {
        model: ModelReport::of(&law),
        mode: direction,
        coordinate: args.coordinate,
        steps: args.mc.steps,
        trials: args.mc.trials,
        seed: random.then_some(seed),
        checkpoints: checkpoints(&law, args.mc.steps, seed, coordinate, direction)?,
        samples: dist.samples,
        summary: dist.summary,
        radius: dist.radius,
        histogram: dist.histogram,
        bottom_mass: dist.bottom_mass,
    };
    let csv = to_csv(&report)?;
    Ok(Outcome::new(&report, render(&report), Status::Ok)?.with_csv(csv))
}

/// Follows trial 0 step by step. Its last checkpoint equals `samples[0]`.
pub fn checkpoints(
    law: &MatrixLaw,
    n: usize,
    seed: u64,
    coordinate: usize,
    direction: Direction,
) -> anyhow::Result<Vec<Checkpoint>> {
    let record = |k: usize| k.is_power_of_two() || k == n;
    let sampler = law
        .sampler(SampleStream::new(seed, 0), direction)
        .take(n)
        .map(|i| law.matrix(i));
    let mut out = Vec::new();
    match direction {
        Direction::Forward => {
            let mut traj = ForwardTrajectory::new(law.dim());
            for (k, a) in (1..).zip(sampler) {
                traj.step(a)?;
                if record(k) {
                    out.push(Checkpoint {
                        k,
                        value: traj.scaled(coordinate).expect("k >= 1"),
                    });
                }
            }
        }
        Direction::Backward => {
            let mut traj = BackwardTrajectory::new(law.dim());
            for (k, a) in (1..).zip(sampler) {
                traj.step(a)?;
                if record(k) {
                    out.push(Checkpoint {
                        k,
                        value: traj.scaled(coordinate).expect("k >= 1"),
                    });
                }
            }
        }
    }
    Ok(out)
}

/// Long-format rows `series,key,value` for external plotting: checkpoints
/// keyed by k, samples keyed by trial, histogram bins keyed by center with
/// their mass as value.
fn to_csv(r: &SimulationReport) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["series", "key", "value"])?;
    for c in &r.checkpoints {
        w.write_record(["checkpoint", &c.k.to_string(), &c.value.to_string()])?;
    }
    for (t, s) in r.samples.iter().enumerate() {
        w.write_record(["sample", &t.to_string(), &s.to_string()])?;
    }
    for b in &r.histogram {
        w.write_record(["histogram", &b.center.to_string(), &b.mass.to_string()])?;
    }
    String::from_utf8(w.into_inner().context("flushing csv")?).context("csv is utf-8")
}

fn render(r: &SimulationReport) -> String {
    let mut s = describe_model(&r.model);
    let (name, letter) = match r.mode {
        Direction::Forward => ("forward", 'x'),
        Direction::Backward => ("backward", 'y'),
    };
    let _ = writeln!(
        s,
        "{name} simulation of {letter}_{}(n,0)/n, n = {}, T = {}",
        r.coordinate, r.steps, r.trials
    );
    let _ = writeln!(s, "trial 0:");
    for c in &r.checkpoints {
        let _ = writeln!(s, "  k = {:>8}  {}", c.k, fmt_value(c.value));
    }
    if let Some(sum) = &r.summary {
        let _ = writeln!(
            s,
            "mean {:.6} ± {:.2e} over {} finite samples",
            sum.mean,
            sum.half_width_95(),
            sum.count
        );
    }
    if r.bottom_mass > 0.0 {
        let _ = writeln!(s, "mass at -inf: {:.4}", r.bottom_mass);
    }
    let _ = writeln!(s, "clusters (radius {}):", r.radius);
    for b in &r.histogram {
        let _ = writeln!(
            s,
            "  {:>12.6}  mass {:.4}  ({} samples, mean {:.6})",
            b.center, b.mass, b.count, b.mean
        );
    }
    s
}
