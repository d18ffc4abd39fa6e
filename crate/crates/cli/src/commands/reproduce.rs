//! Worked scenarios re-run as pass/fail checks.

use std::fmt::Write;

use anyhow::bail;
use maxplus_lln::exponents::exact_markov_coordinate_limits;
use maxplus_lln::fixtures;
use maxplus_lln::law::{
    example1_law, stationary_analysis, Atom, Direction, IidLaw, MatrixLaw, SampleStream,
};
use maxplus_lln::structure::{build_support_graph, Condensation};
use maxplus_lln::trajectory::ForwardTrajectory;
use maxplus_lln::tropical::TropicalValue;
use maxplus_lln::verdict::{
    decide_cycle_time, simulate_limit_distribution, track_oscillation, Convergence,
    LimitDistribution, VerdictConfig,
};
use serde::Serialize;

use super::{fmt_value, num};
use crate::args::{ReproduceArgs, Scenario};
use crate::model::require_seed;
use crate::output::{Outcome, Status};

/// Empirical masses must be within this of their exact values.
pub const MASS_TOLERANCE: f64 = 0.03;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &'static str, passed: bool, detail: String) -> Self {
        Self {
            name,
            passed,
            detail,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScenarioReport {
    pub scenario: &'static str,
    pub parameters: serde_json::Value,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl ScenarioReport {
    fn new(scenario: &'static str, parameters: serde_json::Value, checks: Vec<Check>) -> Self {
        Self {
            scenario,
            parameters,
            passed: checks.iter().all(|c| c.passed),
            checks,
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub fn run(args: &ReproduceArgs) -> anyhow::Result<Outcome> {
    let report = match args.scenario {
        Scenario::Example1 {
            gamma1,
            gamma2,
            steps,
            trials,
            seed,
        } => example1(
            gamma1,
            gamma2,
            steps,
            trials,
            require_seed(seed, true, "reproduce example1")?,
        )?,
        Scenario::Example2 {
            p,
            steps,
            trials,
            seed,
        } => example2(
            p,
            steps,
            trials,
            require_seed(seed, true, "reproduce example2")?,
        )?,
    };
    let status = if report.passed {
        Status::Ok
    } else {
        Status::ChecksFailed
    };
    Outcome::new(&report, render(&report), status)
}

/// The mixing chain: stationary table, exact two-point limit law of
/// `y(n,0)/n`, and its Monte Carlo counterpart.
pub fn example1(
    gamma1: f64,
    gamma2: f64,
    n: usize,
    trials: usize,
    seed: u64,
) -> anyhow::Result<ScenarioReport> {
    let chain = example1_law(gamma1, gamma2)?;
    let delta = (1.0 - (gamma1 + gamma2)) / 2.0;
    let law = MatrixLaw::Markov(chain.clone());
    let mut checks = Vec::new();

    let expected_pi = [gamma1, delta, gamma2, delta];
    let pi = chain.stationary();
    let err = pi
        .iter()
        .zip(expected_pi)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    checks.push(Check::new(
        "stationary-distribution",
        err <= 1e-12,
        format!(
            "pi = ({}), expected (g1, delta, g2, delta) = ({})",
            list(pi),
            list(&expected_pi)
        ),
    ));

    // g = 1 on (A,1), 0 elsewhere
    let g = vec![1.0, 0.0, 0.0, 0.0];
    let reward = stationary_analysis(&chain, &[g])?.expected_rewards[0];
    checks.push(Check::new(
        "expected-reward",
        (reward - gamma1).abs() <= 1e-12,
        format!(
            "E g(A(0), i_0) = {}, expected gamma1 = {}",
            num(reward),
            num(gamma1)
        ),
    ));

    let limits = exact_markov_coordinate_limits(&chain)?;
    let (p1, p2) = (gamma1 + delta, gamma2 + delta);
    checks.push(Check::new(
        "exact-limit-law",
        (limits.prob_gamma1 - p1).abs() <= 1e-12 && (limits.prob_gamma2 - p2).abs() <= 1e-12,
        format!(
            "P(lim y_1/n = g1) = {}, P(lim y_1/n = g2) = {}; expected {}, {}",
            num(limits.prob_gamma1),
            num(limits.prob_gamma2),
            num(p1),
            num(p2)
        ),
    ));

    let components = Condensation::of(&build_support_graph(&law))
        .components()
        .len();
    checks.push(Check::new(
        "strongly-connected",
        components == 1,
        format!("{components} component(s)"),
    ));

    let radius = if (gamma1 - gamma2).abs() < 1e-9 {
        0.05
    } else {
        (0.05f64).min((gamma1 - gamma2).abs() / 2.0)
    };
    let first = simulate_limit_distribution(&law, n, trials, seed, 0, radius)?;
    let second = simulate_limit_distribution(&law, n, trials, seed, 1, radius)?;
    let mut mass_check = |name, dist: &LimitDistribution, center: f64, expected: f64| {
        let mass = dist.mass_within(center, radius);
        checks.push(Check::new(
            name,
            (mass - expected).abs() <= MASS_TOLERANCE,
            format!(
                "mass of y_{}(n,0)/n within {} of {} is {}, expected {} ± {MASS_TOLERANCE}",
                dist.coordinate + 1,
                num(radius),
                num(center),
                num(mass),
                num(expected)
            ),
        ));
    };
    if (gamma1 - gamma2).abs() < 1e-9 {
        mass_check("limit-mass", &first, gamma1, 1.0);
    } else {
        mass_check("limit-mass-gamma1", &first, gamma1, p1);
        mass_check("limit-mass-gamma2", &first, gamma2, p2);
        // the second coordinate carries the swapped index
        mass_check("second-coordinate-swapped", &second, gamma2, p1);
    }

    let parameters = serde_json::json!({
        "gamma1": gamma1, "gamma2": gamma2, "delta": delta, "steps": n, "trials": trials, "seed": seed,
    });
    Ok(ScenarioReport::new("example1", parameters, checks))
}

/// The bundled switching pair with `ℙ(B) = p`.
pub fn switching_law(p: f64) -> anyhow::Result<MatrixLaw> {
    if !(p > 0.0 && p < 1.0) {
        bail!("p must lie strictly between 0 and 1, got {p}");
    }
    let MatrixLaw::FiniteIid(base) = fixtures::law("example2")? else {
        unreachable!("the bundled switching pair is i.i.d.")
    };
    let atoms = base
        .atoms()
        .iter()
        .map(|a| Atom {
            prob: if a.label == "B" { p } else { 1.0 - p },
            ..a.clone()
        })
        .collect();
    Ok(MatrixLaw::FiniteIid(IidLaw::new(atoms)?))
}

/// The switching pair: graph structure, the negative verdict and its
/// witness, exact trajectory identities and the oscillation of x₃(k,0)/k.
pub fn example2(p: f64, n: usize, trials: usize, seed: u64) -> anyhow::Result<ScenarioReport> {
    let law = switching_law(p)?;
    let mut checks = Vec::new();

    let graph = build_support_graph(&law);
    let arcs: Vec<(usize, usize)> = graph.arcs().iter().map(|&(i, j)| (i + 1, j + 1)).collect();
    let expected_arcs = [(1, 1), (2, 1), (2, 3), (3, 1), (3, 2), (3, 3)];
    checks.push(Check::new(
        "support-graph",
        arcs == expected_arcs,
        format!("arcs {arcs:?}"),
    ));

    let config = VerdictConfig {
        steps: 10_000,
        trials,
        seed,
        ..VerdictConfig::default()
    };
    let verdict = decide_cycle_time(&law, &config)?;
    let one_based = |v: &[usize]| v.iter().map(|i| i + 1).collect::<Vec<_>>();
    let nodes: Vec<Vec<usize>> = verdict
        .analysis
        .components()
        .iter()
        .map(|c| one_based(&c.nodes))
        .collect();
    let h2 = verdict
        .analysis
        .classes
        .get(1)
        .map(|c| one_based(&c.dominant_nodes))
        .unwrap_or_default();
    checks.push(Check::new(
        "components",
        nodes == [vec![1], vec![2, 3]] && h2 == [2, 3],
        format!("components {nodes:?}, H of the second {h2:?}"),
    ));

    let witnesses: Vec<(String, usize)> = verdict
        .witnesses()
        .map(|w| (w.atom.clone(), w.row + 1))
        .collect();
    checks.push(Check::new(
        "no-cycle-time",
        verdict.converges == Convergence::Diverges && witnesses == [("B".to_string(), 2)],
        format!(
            "verdict {:?}, witnesses (atom, row) {witnesses:?}",
            verdict.converges
        ),
    ));

    let gammas: Vec<_> = verdict.components.iter().map(|c| c.gamma).collect();
    let exact_zero = gammas[0].is_exact() && gammas[0].value == TropicalValue::ZERO;
    let err = (gammas[1].value.to_f64() - p).abs();
    let tol = 3.0 * gammas[1].stderr_or_zero() + 0.01;
    checks.push(Check::new(
        "component-exponents",
        exact_zero && err <= tol,
        format!(
            "gamma(c1) = {}, gamma(c2) = {} within {}, expected 0 and {}",
            fmt_value(gammas[0].value),
            fmt_value(gammas[1].value),
            num(tol),
            num(p)
        ),
    ));

    let (first_zero, max_counts) = trajectory_identities(&law, n, seed);
    checks.push(Check::new(
        "first-coordinate-zero",
        first_zero.is_none(),
        match first_zero {
            None => format!("x_1(k,0) = 0 for every k <= {n}"),
            Some(k) => format!("x_1({k},0) != 0"),
        },
    ));
    checks.push(Check::new(
        "max-counts-b",
        max_counts.is_none(),
        match max_counts {
            None => format!("max_i x_i(k+1,0) = #{{j <= k : A(j) = B}} for every k < {n}"),
            Some(k) => format!("identity fails at k = {k}"),
        },
    ));

    let osc = track_oscillation(&law, n, seed, 2)?;
    let (lo, hi) = (osc.window_min.to_f64(), osc.window_max.to_f64());
    checks.push(Check::new(
        "oscillation",
        lo <= 0.05 && hi >= p - 0.05,
        format!(
            "x_3(k,0)/k over k in [{}, {n}] ranges over [{}, {}]",
            osc.window_start,
            num(lo),
            num(hi)
        ),
    ));

    let parameters = serde_json::json!({ "p": p, "steps": n, "trials": trials, "seed": seed });
    Ok(ScenarioReport::new("example2", parameters, checks))
}

/// Follows trial 0 for `n` steps and returns the first step violating
/// `x₁ = 0` and the first violating `max x = #B`, if any.
pub fn trajectory_identities(
    law: &MatrixLaw,
    n: usize,
    seed: u64,
) -> (Option<usize>, Option<usize>) {
    let labels = law.labels();
    let mut traj = ForwardTrajectory::new(law.dim());
    let (mut first_zero, mut max_counts) = (None, None);
    let mut count_b = 0u64;
    for (k, idx) in (1..=n).zip(law.sampler(SampleStream::new(seed, 0), Direction::Forward)) {
        count_b += u64::from(labels[idx] == "B");
        traj.step(law.matrix(idx)).expect("law dimension");
        if first_zero.is_none() && traj.value(0) != TropicalValue::ZERO {
            first_zero = Some(k);
        }
        if max_counts.is_none()
            && traj.max() != TropicalValue::finite(count_b as f64).expect("finite")
        {
            max_counts = Some(k - 1);
        }
    }
    (first_zero, max_counts)
}

fn list(xs: &[f64]) -> String {
    xs.iter().map(|&x| num(x)).collect::<Vec<_>>().join(", ")
}

fn render(r: &ScenarioReport) -> String {
    let mut s = format!("scenario {} {}\n", r.scenario, r.parameters);
    for c in &r.checks {
        let _ = writeln!(
            s,
            "{} {}: {}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.detail
        );
    }
    let _ = writeln!(
        s,
        "{}",
        if r.passed {
            "all checks passed"
        } else {
            "some checks FAILED"
        }
    );
    s
}
