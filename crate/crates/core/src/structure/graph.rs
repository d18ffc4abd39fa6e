use serde::Serialize;

use crate::law::MatrixLaw;

/// 𝒢(A): arc (i, j) iff `A_ij` is finite with positive probability, i.e.
/// finite in at least one support matrix of the law.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportGraph {
    d: usize,
    #[serde(skip)]
    adjacency: Vec<Vec<bool>>,
    arcs: Vec<(usize, usize)>,
}

impl SupportGraph {
    pub fn from_arcs(d: usize, arcs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adjacency = vec![vec![false; d]; d];
        for (i, j) in arcs {
            adjacency[i][j] = true;
        }
        let arcs = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .filter(|&(i, j)| adjacency[i][j])
            .collect();
        Self { d, adjacency, arcs }
    }

    pub fn node_count(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.adjacency[i][j]
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    pub fn successors(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.d).filter(move |&j| self.adjacency[i][j])
    }
}

pub fn build_support_graph(law: &MatrixLaw) -> SupportGraph {
    let d = law.dim();
    let support = law.support();
    let arcs = (0..d)
        .flat_map(|i| (0..d).map(move |j| (i, j)))
        .filter(|&(i, j)| support.iter().any(|m| m.get(i, j).is_finite()));
    SupportGraph::from_arcs(d, arcs.collect::<Vec<_>>())
}
