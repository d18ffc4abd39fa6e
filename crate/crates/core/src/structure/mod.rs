//! Graph structure of a random matrix law: the support graph 𝒢(A), its
//! strongly connected components, the class sets E_c, F_c, G_c, H_c, and the
//! pattern semigroup ℰ with block-reachability certificates.

mod graph;
mod scc;
mod semigroup;

pub use crate::law::submatrix_law;
pub use graph::{build_support_graph, SupportGraph};
pub use scc::{
    scc_decompose, Component, ComponentClasses, Condensation, GammaComparison, SccAnalysis,
    DEFAULT_EPSILON_GAMMA,
};
pub use semigroup::{
    block_reachability_certificate, semigroup_closure, BlockReachability, PatternMatrix,
    PatternSemigroup, DEFAULT_SEMIGROUP_CAP,
};
