//! Serializable analysis reports. Nodes, components and rows are 1-based
//! here, matching the model documents.

use serde::Serialize;

use crate::exponents::{EstimateMode, ExponentEstimate};
use crate::law::{LawKind, MatrixLaw};
use crate::structure::GammaComparison;
use crate::tropical::TropicalValue;
use crate::verdict::{Convergence, CycleTimeVerdict, LimitEntry};

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|i| i + 1).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ModelReport {
    pub kind: LawKind,
    pub dimension: usize,
    pub atoms: Vec<AtomReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AtomReport {
    pub label: String,
    /// Every row has a finite entry.
    pub row_condition: bool,
}

impl ModelReport {
    pub fn of(law: &MatrixLaw) -> Self {
        let summary = law.summary();
        Self {
            kind: summary.kind,
            dimension: summary.dimension,
            atoms: summary
                .row_condition
                .into_iter()
                .map(|(label, row_condition)| AtomReport {
                    label,
                    row_condition,
                })
                .collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WitnessReport {
    pub atom: String,
    pub row: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RowConditionReport {
    pub holds: bool,
    pub witnesses: Vec<WitnessReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ComponentReport {
    pub id: usize,
    pub nodes: Vec<usize>,
    pub trivial: bool,
    #[serde(rename = "E")]
    pub downstream: Vec<usize>,
    #[serde(rename = "F")]
    pub downstream_nodes: Vec<usize>,
    #[serde(rename = "G")]
    pub dominant: Vec<usize>,
    #[serde(rename = "H")]
    pub dominant_nodes: Vec<usize>,
    pub dominating: bool,
    pub gamma: ExponentEstimate,
    pub gamma_downstream: TropicalValue,
    pub row_condition: RowConditionReport,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LimitReport {
    pub value: TropicalValue,
    pub provenance: EstimateMode,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stderr: Option<f64>,
}

impl From<&LimitEntry> for LimitReport {
    fn from(e: &LimitEntry) -> Self {
        if e.exact {
            Self {
                value: e.value,
                provenance: EstimateMode::Exact,
                stderr: None,
            }
        } else {
            Self {
                value: e.value,
                provenance: EstimateMode::MonteCarlo,
                stderr: e.stderr,
            }
        }
    }
}

/// Support graph, decomposition, class sets, exponents and verdict.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalysisReport {
    pub model: ModelReport,
    pub arcs: Vec<(usize, usize)>,
    pub condensation_arcs: Vec<(usize, usize)>,
    pub comparison: GammaComparison,
    pub converges: Convergence,
    pub components: Vec<ComponentReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub limit: Option<Vec<LimitReport>>,
    pub tie_sensitive: bool,
}

impl AnalysisReport {
    pub fn new(law: &MatrixLaw, verdict: &CycleTimeVerdict) -> Self {
        let analysis = &verdict.analysis;
        let components = analysis
            .classes
            .iter()
            .zip(analysis.components())
            .zip(&verdict.components)
            .map(|((class, comp), cv)| ComponentReport {
                id: comp.id + 1,
                nodes: one_based(&comp.nodes),
                trivial: comp.trivial,
                downstream: one_based(&class.downstream),
                downstream_nodes: one_based(&class.downstream_nodes),
                dominant: one_based(&class.dominant),
                dominant_nodes: one_based(&class.dominant_nodes),
                dominating: class.dominating,
                gamma: cv.gamma,
                gamma_downstream: class.gamma_downstream,
                row_condition: RowConditionReport {
                    holds: cv.row_condition.holds,
                    witnesses: cv
                        .row_condition
                        .witnesses
                        .iter()
                        .map(|w| WitnessReport {
                            atom: w.atom.clone(),
                            row: w.row + 1,
                        })
                        .collect(),
                },
            })
            .collect();
        Self {
            model: ModelReport::of(law),
            arcs: verdict
                .graph
                .arcs()
                .iter()
                .map(|&(i, j)| (i + 1, j + 1))
                .collect(),
            condensation_arcs: analysis
                .condensation
                .dag_arcs()
                .iter()
                .map(|&(a, b)| (a + 1, b + 1))
                .collect(),
            comparison: analysis.comparison,
            converges: verdict.converges,
            components,
            limit: verdict
                .limit
                .as_ref()
                .map(|l| l.iter().map(LimitReport::from).collect()),
            tie_sensitive: verdict.tie_sensitive,
        }
    }
}
