use std::fmt::Write;

use maxplus_lln::exponents::{
    component_exponents, estimate_bottom_exponent, estimate_top_exponent,
    exact_markov_coordinate_limits, karp_max_cycle_mean, ExponentEstimate, MarkovCoordinateLimits,
};
use maxplus_lln::law::MatrixLaw;
use maxplus_lln::report::ModelReport;
use maxplus_lln::structure::{build_support_graph, Condensation};
use maxplus_lln::tropical::TropicalValue;
use maxplus_lln::Error;
use serde::Serialize;

use super::{describe_model, fmt_estimate, fmt_nodes, fmt_value, num};
use crate::args::EstimateArgs;
use crate::model::{is_random, load_model, require_seed};
use crate::output::{Outcome, Status};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentExponent {
    pub id: usize,
    pub nodes: Vec<usize>,
    pub gamma: ExponentEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExponentReport {
    pub model: ModelReport,
    pub seed: Option<u64>,
    /// γ, the rate of maxᵢ xᵢ(n,0).
    pub top: ExponentEstimate,
    /// γ_b, the rate of minᵢ xᵢ(n,0); absent when a matrix has an empty row.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bottom: Option<ExponentEstimate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bottom_error: Option<String>,
    /// Maximum cycle mean, for a law emitting a single matrix.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub karp: Option<TropicalValue>,
    /// γ^(c) of each component of the support graph.
    pub components: Vec<ComponentExponent>,
    /// Exact coordinate limits, for laws of the two-index mixing-chain family.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub markov_limits: Option<MarkovCoordinateLimits>,
}

pub fn run(args: &EstimateArgs) -> anyhow::Result<Outcome> {
    let law = load_model(&args.model)?;
    let random = is_random(&law);
    let seed = require_seed(args.mc.seed, random, "estimate-gamma")?;
    let (n, trials) = (args.mc.steps, args.mc.trials);

    let top = estimate_top_exponent(&law, n, trials, seed)?;
    let (bottom, bottom_error) = match estimate_bottom_exponent(&law, n, trials, seed) {
        Ok(b) => (Some(b), None),
        Err(e @ Error::RowCondition { .. }) => (None, Some(e.to_string())),
        Err(e) => return Err(e.into()),
    };
    let condensation = Condensation::of(&build_support_graph(&law));
    let components = component_exponents(&law, &condensation, n, trials, seed)?
        .into_iter()
        .map(|(id, gamma)| ComponentExponent {
            id: id + 1,
            nodes: condensation.components()[id]
                .nodes
                .iter()
                .map(|i| i + 1)
                .collect(),
            gamma,
        })
        .collect();
    let markov_limits = match &law {
        MatrixLaw::Markov(m) => exact_markov_coordinate_limits(m).ok(),
        _ => None,
    };
    let report = ExponentReport {
        model: ModelReport::of(&law),
        seed: random.then_some(seed),
        top,
        bottom,
        bottom_error,
        karp: law.as_deterministic().map(karp_max_cycle_mean),
        components,
        markov_limits,
    };
    Outcome::new(&report, render(&report), Status::Ok)
}

fn render(r: &ExponentReport) -> String {
    let mut s = describe_model(&r.model);
    let _ = writeln!(s, "top exponent:    {}", fmt_estimate(&r.top));
    match (&r.bottom, &r.bottom_error) {
        (Some(b), _) => {
            let _ = writeln!(s, "bottom exponent: {}", fmt_estimate(b));
        }
        (None, Some(e)) => {
            let _ = writeln!(s, "bottom exponent: undefined ({e})");
        }
        (None, None) => {}
    }
    if let Some(k) = r.karp {
        let _ = writeln!(s, "max cycle mean:  {}", fmt_value(k));
    }
    let _ = writeln!(s, "components:");
    for c in &r.components {
        let _ = writeln!(
            s,
            "  c{} {}  {}",
            c.id,
            fmt_nodes(&c.nodes),
            fmt_estimate(&c.gamma)
        );
    }
    if let Some(m) = &r.markov_limits {
        let _ = writeln!(
            s,
            "exact limit of y_1(n,0)/n: {} w.p. {}, {} w.p. {}",
            num(m.gamma1),
            num(m.prob_gamma1),
            num(m.gamma2),
            num(m.prob_gamma2)
        );
    }
    s
}
