use std::collections::BTreeMap;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use serde::Serialize;

use super::graph::SupportGraph;
use crate::error::{Error, Result};
use crate::tropical::TropicalValue;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Component {
    pub id: usize,
    /// Sorted node indices.
    pub nodes: Vec<usize>,
    /// A singleton lying on no circuit; its exponent is Bottom.
    pub trivial: bool,
}

/// Strongly connected components of 𝒢(A), numbered by smallest node, with
/// the condensation DAG and its reflexive-transitive closure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Condensation {
    components: Vec<Component>,
    component_of: Vec<usize>,
    dag_arcs: Vec<(usize, usize)>,
    reach: Vec<Vec<bool>>,
}

impl Condensation {
    pub fn of(g: &SupportGraph) -> Self {
        let d = g.node_count();
        let mut pg = DiGraph::<(), ()>::with_capacity(d, g.arcs().len());
        let idx: Vec<_> = (0..d).map(|_| pg.add_node(())).collect();
        for &(i, j) in g.arcs() {
            pg.add_edge(idx[i], idx[j], ());
        }
        let mut sets: Vec<Vec<usize>> = tarjan_scc(&pg)
            .into_iter()
            .map(|c| {
                let mut nodes: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
                nodes.sort_unstable();
                nodes
            })
            .collect();
        sets.sort_unstable_by_key(|nodes| nodes[0]);

        let mut component_of = vec![0; d];
        let components: Vec<Component> = sets
            .into_iter()
            .enumerate()
            .map(|(id, nodes)| {
                for &i in &nodes {
                    component_of[i] = id;
                }
                let trivial = nodes.len() == 1 && !g.has_arc(nodes[0], nodes[0]);
                Component { id, nodes, trivial }
            })
            .collect();

        let k = components.len();
        let mut direct = vec![vec![false; k]; k];
        for &(i, j) in g.arcs() {
            let (a, b) = (component_of[i], component_of[j]);
            if a != b {
                direct[a][b] = true;
            }
        }
        let dag_arcs = (0..k)
            .flat_map(|a| (0..k).map(move |b| (a, b)))
            .filter(|&(a, b)| direct[a][b])
            .collect();

        let reach = (0..k)
            .map(|start| {
                let mut seen = vec![false; k];
                seen[start] = true;
                let mut stack = vec![start];
                while let Some(a) = stack.pop() {
                    for b in 0..k {
                        if direct[a][b] && !seen[b] {
                            seen[b] = true;
                            stack.push(b);
                        }
                    }
                }
                seen
            })
            .collect();

        Self {
            components,
            component_of,
            dag_arcs,
            reach,
        }
    }

    pub fn components(&self) -> &[Component] {
        &self.components
    }

    pub fn component_of(&self, node: usize) -> usize {
        self.component_of[node]
    }

    /// Arcs between distinct components.
    pub fn dag_arcs(&self) -> &[(usize, usize)] {
        &self.dag_arcs
    }

    /// c → c̃ (reflexive).
    pub fn reaches(&self, c: usize, target: usize) -> bool {
        self.reach[c][target]
    }

    pub fn node_reaches(&self, node: usize, target: usize) -> bool {
        self.reach[self.component_of[node]][target]
    }

    /// E_c in increasing id order.
    pub fn downstream(&self, c: usize) -> Vec<usize> {
        (0..self.components.len())
            .filter(|&t| self.reach[c][t])
            .collect()
    }

    /// Sorted union of the nodes of the given components.
    pub fn nodes_of(&self, ids: &[usize]) -> Vec<usize> {
        let mut nodes: Vec<usize> = ids
            .iter()
            .flat_map(|&c| self.components[c].nodes.iter().copied())
            .collect();
        nodes.sort_unstable();
        nodes
    }
}

/// How exponent values are compared when building G_c.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum GammaComparison {
    /// Exact equality, for exponents known in closed form.
    Exact,
    /// |a − b| ≤ epsilon, for Monte Carlo estimates.
    Tolerance { epsilon: f64 },
}

/// Default ε_γ for estimated exponents.
pub const DEFAULT_EPSILON_GAMMA: f64 = 1e-3;

impl GammaComparison {
    pub fn equal(self, a: TropicalValue, b: TropicalValue) -> bool {
        match (a.value(), b.value()) {
            (None, None) => true,
            (Some(x), Some(y)) => match self {
                Self::Exact => x == y,
                Self::Tolerance { epsilon } => (x - y).abs() <= epsilon,
            },
            _ => false,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComponentClasses {
    pub id: usize,
    /// γ^{(c)}
    pub gamma: TropicalValue,
    /// γ^{[c]} = max over E_c of γ^{(c̃)}
    pub gamma_downstream: TropicalValue,
    /// E_c
    pub downstream: Vec<usize>,
    /// F_c
    pub downstream_nodes: Vec<usize>,
    /// G_c
    pub dominant: Vec<usize>,
    /// H_c, the node set written {c}
    pub dominant_nodes: Vec<usize>,
    /// G_c = {c}
    pub dominating: bool,
}

/// Decomposition of 𝒢(A) with exponents attached and the class sets
/// E_c, F_c, G_c, H_c computed for every component.
#[derive(Clone, Debug, PartialEq)]
pub struct SccAnalysis {
    pub condensation: Condensation,
    pub classes: Vec<ComponentClasses>,
    pub comparison: GammaComparison,
    /// Some G_c membership was decided by the tolerance rather than by exact equality.
    pub tie_sensitive: bool,
}

impl SccAnalysis {
    /// `exponents` maps component id to γ^{(c)}; trivial components may be
    /// omitted and are forced to Bottom.
    pub fn new(
        condensation: Condensation,
        exponents: &BTreeMap<usize, TropicalValue>,
        comparison: GammaComparison,
    ) -> Result<Self> {
        let gamma: Vec<TropicalValue> = condensation
            .components()
            .iter()
            .map(|c| {
                if c.trivial {
                    Ok(TropicalValue::BOTTOM)
                } else {
                    exponents
                        .get(&c.id)
                        .copied()
                        .ok_or(Error::MissingExponent(c.id))
                }
            })
            .collect::<Result<_>>()?;

        let k = gamma.len();
        let downstream: Vec<Vec<usize>> = (0..k).map(|c| condensation.downstream(c)).collect();
        let gamma_down: Vec<TropicalValue> = downstream
            .iter()
            .map(|e| {
                e.iter()
                    .fold(TropicalValue::BOTTOM, |m, &t| m.oplus(gamma[t]))
            })
            .collect();

        let mut tie_sensitive = false;
        let classes = (0..k)
            .map(|c| {
                let dominant: Vec<usize> = downstream[c]
                    .iter()
                    .copied()
                    .filter(|&t| {
                        let eq = comparison.equal(gamma_down[t], gamma_down[c]);
                        if eq && gamma_down[t] != gamma_down[c] {
                            tie_sensitive = true;
                        }
                        eq
                    })
                    .collect();
                ComponentClasses {
                    id: c,
                    gamma: gamma[c],
                    gamma_downstream: gamma_down[c],
                    downstream_nodes: condensation.nodes_of(&downstream[c]),
                    dominant_nodes: condensation.nodes_of(&dominant),
                    dominating: dominant == [c],
                    downstream: downstream[c].clone(),
                    dominant,
                }
            })
            .collect();

        Ok(Self {
            condensation,
            classes,
            comparison,
            tie_sensitive,
        })
    }

    pub fn components(&self) -> &[Component] {
        self.condensation.components()
    }

    /// maxᵢ→c γ^{(c)} for every node, i.e. γ^{[c(i)]}.
    pub fn node_limits(&self) -> Vec<TropicalValue> {
        (0..self.condensation.component_of.len())
            .map(|i| self.classes[self.condensation.component_of(i)].gamma_downstream)
            .collect()
    }
}

/// Decomposes `g` and attaches the given exponents.
pub fn scc_decompose(
    g: &SupportGraph,
    exponents: &BTreeMap<usize, TropicalValue>,
    comparison: GammaComparison,
) -> Result<SccAnalysis> {
    SccAnalysis::new(Condensation::of(g), exponents, comparison)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: f64) -> TropicalValue {
        TropicalValue::from_f64(x).unwrap()
    }

    /// Six components; node k-1 is component c_k, c₃ has no self-loop.
    fn six_component_graph() -> SupportGraph {
        let loops = [0, 1, 3, 4, 5].map(|i| (i, i));
        let dag = [(0, 1), (1, 2), (2, 4), (1, 3), (3, 5), (4, 5)];
        SupportGraph::from_arcs(6, loops.into_iter().chain(dag))
    }

    #[test]
    fn six_component_class_sets() {
        let g = six_component_graph();
        let exps: BTreeMap<usize, TropicalValue> = [
            (0, v(4.0)),
            (1, v(1.0)),
            (3, v(2.0)),
            (4, v(3.0)),
            (5, v(0.0)),
        ]
        .into_iter()
        .collect();
        let a = scc_decompose(&g, &exps, GammaComparison::Exact).unwrap();
        assert_eq!(a.components().len(), 6);
        assert!(a.components()[2].trivial);
        let c2 = &a.classes[1];
        assert_eq!(c2.downstream, vec![1, 2, 3, 4, 5]);
        assert_eq!(c2.gamma_downstream, v(3.0));
        assert_eq!(c2.dominant, vec![1, 2, 4]);
        assert_eq!(c2.dominant_nodes, vec![1, 2, 4]);
        assert!(!c2.dominating);
        assert!(a.classes[0].dominating);
        assert_eq!(a.classes[2].gamma, TropicalValue::BOTTOM);
        assert_eq!(a.classes[2].dominant, vec![2, 4]);
        assert_eq!(
            a.node_limits(),
            vec![v(4.0), v(3.0), v(3.0), v(2.0), v(3.0), v(0.0)]
        );
    }

    #[test]
    fn missing_exponent_is_an_error() {
        let g = six_component_graph();
        let exps: BTreeMap<usize, TropicalValue> = [(0, v(4.0))].into_iter().collect();
        assert_eq!(
            scc_decompose(&g, &exps, GammaComparison::Exact).unwrap_err(),
            Error::MissingExponent(1)
        );
    }

    #[test]
    fn lone_node_without_loop_is_trivial() {
        let g = SupportGraph::from_arcs(1, []);
        let a = scc_decompose(&g, &BTreeMap::new(), GammaComparison::Exact).unwrap();
        assert!(a.components()[0].trivial);
        assert_eq!(a.classes[0].gamma, TropicalValue::BOTTOM);
        assert_eq!(a.classes[0].downstream, vec![0]);
        assert!(a.classes[0].dominating);
    }

    #[test]
    fn tolerance_merges_near_ties() {
        let g = SupportGraph::from_arcs(2, [(0, 0), (1, 1), (0, 1)]);
        let exps: BTreeMap<usize, TropicalValue> =
            [(0, v(0.5004)), (1, v(0.5))].into_iter().collect();
        let exact = scc_decompose(&g, &exps, GammaComparison::Exact).unwrap();
        assert_eq!(exact.classes[0].dominant, vec![0]);
        assert!(exact.classes[0].dominating);
        assert!(!exact.tie_sensitive);
        let tol = scc_decompose(&g, &exps, GammaComparison::Tolerance { epsilon: 1e-3 }).unwrap();
        assert_eq!(tol.classes[0].dominant, vec![0, 1]);
        assert!(tol.tie_sensitive);
    }
}
