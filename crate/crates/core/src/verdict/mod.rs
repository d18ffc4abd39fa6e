//! Existence of the cycle time for finitely-supported i.i.d. laws.
//!
//! The limit of `x(n,0)/n` exists iff, for every component `c`, the law
//! restricted to `H_c` almost surely has a finite entry on each row. For a
//! finite support that is a per-atom check. When it holds, the limit of
//! coordinate `i` is the largest exponent among components reachable from
//! `i`.

mod exact;
mod simulation;

use std::collections::BTreeMap;

use serde::Serialize;

pub use exact::{exact_small_n_distribution, ExactDistribution, SMALL_N_CAP};
pub use simulation::{
    cluster, simulate_limit_distribution, simulate_scaled_coordinate, track_oscillation,
    HistogramBin, LimitDistribution, Oscillation, DEFAULT_CLUSTER_RADIUS,
};

use crate::error::{Error, Result};
use crate::exponents::{component_exponents, ExponentEstimate, DEFAULT_STEPS, DEFAULT_TRIALS};
use crate::law::MatrixLaw;
use crate::structure::{
    build_support_graph, Condensation, GammaComparison, SccAnalysis, SupportGraph,
    DEFAULT_EPSILON_GAMMA,
};
use crate::tropical::{TropicalValue, TropicalVector};

/// A support matrix whose restriction has a row without finite entry.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowWitness {
    pub atom: String,
    pub atom_index: usize,
    /// The node whose restricted row is all-Bottom.
    pub row: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RowConditionResult {
    pub holds: bool,
    pub witnesses: Vec<RowWitness>,
}

/// Checks every support matrix restricted to `nodes` for a finite entry on
/// each row; all violations are collected.
pub fn check_row_condition(law: &MatrixLaw, nodes: &[usize]) -> Result<RowConditionResult> {
    let d = law.dim();
    if let Some(&node) = nodes.iter().find(|&&i| i >= d) {
        return Err(Error::NodeOutOfRange { node, dim: d });
    }
    let witnesses: Vec<RowWitness> = law
        .labels()
        .into_iter()
        .zip(law.support())
        .enumerate()
        .flat_map(|(k, (label, m))| {
            nodes
                .iter()
                .filter(|&&i| nodes.iter().all(|&j| m.get(i, j).is_bottom()))
                .map(move |&row| RowWitness {
                    atom: label.to_string(),
                    atom_index: k,
                    row,
                })
        })
        .collect();
    Ok(RowConditionResult {
        holds: witnesses.is_empty(),
        witnesses,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Convergence {
    Converges,
    Diverges,
    /// The answer flips depending on whether near-equal estimated exponents
    /// are treated as tied.
    IndeterminateTie,
}

impl Serialize for Convergence {
    fn serialize<S: serde::Serializer>(
        &self,
        serializer: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Converges => serializer.serialize_bool(true),
            Self::Diverges => serializer.serialize_bool(false),
            Self::IndeterminateTie => serializer.serialize_str("indeterminate-tie"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LimitEntry {
    pub value: TropicalValue,
    /// Exact when every exponent downstream of the coordinate is exact.
    pub exact: bool,
    /// Standard error of the exponent attaining the maximum.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ComponentVerdict {
    pub id: usize,
    pub gamma: ExponentEstimate,
    /// Row condition on `H_c`.
    pub row_condition: RowConditionResult,
}

#[derive(Clone, Debug)]
pub struct CycleTimeVerdict {
    pub converges: Convergence,
    pub graph: SupportGraph,
    /// Class sets under the comparison policy actually used.
    pub analysis: SccAnalysis,
    pub components: Vec<ComponentVerdict>,
    /// Present iff the verdict is `Converges`.
    pub limit: Option<Vec<LimitEntry>>,
    pub tie_sensitive: bool,
}

impl CycleTimeVerdict {
    pub fn limit_vector(&self) -> Option<TropicalVector> {
        self.limit
            .as_ref()
            .map(|l| TropicalVector::new(l.iter().map(|e| e.value).collect()).expect("non-empty"))
    }

    pub fn witnesses(&self) -> impl Iterator<Item = &RowWitness> {
        self.components
            .iter()
            .flat_map(|c| &c.row_condition.witnesses)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerdictConfig {
    pub steps: usize,
    pub trials: usize,
    pub seed: u64,
    pub epsilon_gamma: f64,
}

impl Default for VerdictConfig {
    fn default() -> Self {
        Self {
            steps: DEFAULT_STEPS,
            trials: DEFAULT_TRIALS,
            seed: 0,
            epsilon_gamma: DEFAULT_EPSILON_GAMMA,
        }
    }
}

/// Row conditions on every `H_c` of an analysis.
fn row_conditions(law: &MatrixLaw, analysis: &SccAnalysis) -> Result<Vec<RowConditionResult>> {
    analysis
        .classes
        .iter()
        .map(|c| check_row_condition(law, &c.dominant_nodes))
        .collect()
}

/// Decides whether `x(n,0)/n` converges almost surely for a deterministic
/// or finitely-supported i.i.d. law.
///
/// When every component exponent is exact the class sets use exact
/// comparison. Otherwise they use the ε_γ tolerance, and the verdict is
/// recomputed with exact comparison of the estimates; if the two disagree
/// the result is [`Convergence::IndeterminateTie`].
pub fn decide_cycle_time(law: &MatrixLaw, config: &VerdictConfig) -> Result<CycleTimeVerdict> {
    if matches!(law, MatrixLaw::Markov(_)) {
        return Err(Error::UnsupportedLaw(
            "the cycle-time criterion covers i.i.d. laws only; use simulation for Markov laws"
                .into(),
        ));
    }
    if let Some((atom, row)) = law.first_empty_row() {
        return Err(Error::RowCondition { atom, row });
    }
    if !(config.epsilon_gamma >= 0.0 && config.epsilon_gamma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must be a finite non-negative number, got {}",
            config.epsilon_gamma
        )));
    }

    let graph = build_support_graph(law);
    let condensation = Condensation::of(&graph);
    let estimates =
        component_exponents(law, &condensation, config.steps, config.trials, config.seed)?;
    verdict_from_estimates(law, graph, &estimates, config.epsilon_gamma)
}

/// The decision step of [`decide_cycle_time`] for exponents obtained
/// elsewhere; `estimates` must cover every component of `graph`.
pub fn verdict_from_estimates(
    law: &MatrixLaw,
    graph: SupportGraph,
    estimates: &BTreeMap<usize, ExponentEstimate>,
    epsilon_gamma: f64,
) -> Result<CycleTimeVerdict> {
    let condensation = Condensation::of(&graph);
    let values: BTreeMap<usize, TropicalValue> =
        estimates.iter().map(|(&c, e)| (c, e.value)).collect();
    let all_exact = estimates.values().all(ExponentEstimate::is_exact);

    let comparison = if all_exact {
        GammaComparison::Exact
    } else {
        GammaComparison::Tolerance {
            epsilon: epsilon_gamma,
        }
    };
    let analysis = SccAnalysis::new(condensation.clone(), &values, comparison)?;
    let conditions = row_conditions(law, &analysis)?;
    let holds = conditions.iter().all(|r| r.holds);

    let converges = if analysis.tie_sensitive {
        let strict = SccAnalysis::new(condensation, &values, GammaComparison::Exact)?;
        let strict_holds = row_conditions(law, &strict)?.iter().all(|r| r.holds);
        match (holds, strict_holds) {
            (true, true) => Convergence::Converges,
            (false, false) => Convergence::Diverges,
            _ => Convergence::IndeterminateTie,
        }
    } else if holds {
        Convergence::Converges
    } else {
        Convergence::Diverges
    };

    let limit = (converges == Convergence::Converges).then(|| limit_entries(&analysis, estimates));
    let components = conditions
        .into_iter()
        .enumerate()
        .map(|(id, row_condition)| {
            let gamma = *estimates.get(&id).ok_or(Error::MissingExponent(id))?;
            Ok(ComponentVerdict {
                id,
                gamma,
                row_condition,
            })
        })
        .collect::<Result<_>>()?;
    let tie_sensitive = analysis.tie_sensitive;
    Ok(CycleTimeVerdict {
        converges,
        graph,
        analysis,
        components,
        limit,
        tie_sensitive,
    })
}

/// limitᵢ = max over components reachable from i of γ^{(c)}.
fn limit_entries(
    analysis: &SccAnalysis,
    estimates: &BTreeMap<usize, ExponentEstimate>,
) -> Vec<LimitEntry> {
    let cond = &analysis.condensation;
    (0..cond.components().iter().map(|c| c.nodes.len()).sum())
        .map(|i| {
            let class = &analysis.classes[cond.component_of(i)];
            let argmax = class
                .downstream
                .iter()
                .map(|c| &estimates[c])
                .max_by(|a, b| a.value.partial_cmp(&b.value).expect("no NaN"))
                .expect("E_c contains c");
            LimitEntry {
                value: class.gamma_downstream,
                exact: class.downstream.iter().all(|c| estimates[c].is_exact()),
                stderr: argmax.stderr,
            }
        })
        .collect()
}
