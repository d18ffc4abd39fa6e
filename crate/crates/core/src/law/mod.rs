//! Stationary laws for the matrix sequence `A(n)`.
//!
//! Three families are supported: a fixed matrix, finitely-supported i.i.d.
//! draws, and Markov-modulated emissions driven by an irreducible finite
//! chain started from its stationary distribution.

mod document;
mod markov;
mod sampling;

use serde::Serialize;

pub use document::{load_law, AtomDocument, LawDocument, ModelDocument};
pub use markov::{
    example1_law, stationary_analysis, MarkovLaw, MarkovState, StationaryReport,
    EXAMPLE1_STATE_LABELS,
};
pub use sampling::{derive_seed, Direction, IndexSampler, SampleStream};

use crate::error::{Error, Result};
use crate::tropical::TropicalMatrix;

/// Tolerance on probability sums and transition row sums.
pub const PROB_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct Atom {
    pub label: String,
    pub matrix: TropicalMatrix,
    pub prob: f64,
}

/// Finitely-supported i.i.d. law: `A(n) = atoms[k].matrix` with probability `atoms[k].prob`.
#[derive(Clone, Debug, PartialEq)]
pub struct IidLaw {
    atoms: Vec<Atom>,
}

impl IidLaw {
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        let first = atoms.first().ok_or(Error::Empty("atom list"))?;
        let d = first.matrix.rows();
        for atom in &atoms {
            check_square(&atom.matrix, d, &atom.label)?;
            if !(atom.prob > 0.0 && atom.prob <= 1.0 + PROB_TOLERANCE) {
                return Err(Error::InvalidProbability {
                    what: format!("atom {}", atom.label),
                    value: atom.prob,
                });
            }
        }
        let total: f64 = atoms.iter().map(|a| a.prob).sum();
        if (total - 1.0).abs() > PROB_TOLERANCE {
            return Err(Error::ProbabilitySum(total));
        }
        Ok(Self { atoms })
    }

    /// Atoms labelled `"0"`, `"1"`, … in order.
    pub fn from_pairs(pairs: Vec<(TropicalMatrix, f64)>) -> Result<Self> {
        Self::new(
            pairs
                .into_iter()
                .enumerate()
                .map(|(k, (matrix, prob))| Atom {
                    label: k.to_string(),
                    matrix,
                    prob,
                })
                .collect(),
        )
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn dim(&self) -> usize {
        self.atoms[0].matrix.rows()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum MatrixLaw {
    Deterministic(TropicalMatrix),
    FiniteIid(IidLaw),
    Markov(MarkovLaw),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LawKind {
    Deterministic,
    Iid,
    Markov,
}

/// What `load_law` reports about a validated law.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LawSummary {
    pub kind: LawKind,
    pub dimension: usize,
    pub atom_count: usize,
    /// Per atom (or Markov state): does every row have a finite entry?
    pub row_condition: Vec<(String, bool)>,
}

impl MatrixLaw {
    pub fn deterministic(matrix: TropicalMatrix) -> Result<Self> {
        check_square(&matrix, matrix.rows(), "deterministic")?;
        Ok(Self::Deterministic(matrix))
    }

    pub fn kind(&self) -> LawKind {
        match self {
            Self::Deterministic(_) => LawKind::Deterministic,
            Self::FiniteIid(_) => LawKind::Iid,
            Self::Markov(_) => LawKind::Markov,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Deterministic(m) => m.rows(),
            Self::FiniteIid(l) => l.dim(),
            Self::Markov(l) => l.dim(),
        }
    }

    /// The matrices the law can emit, indexed like the sampler output.
    pub fn support(&self) -> Vec<&TropicalMatrix> {
        match self {
            Self::Deterministic(m) => vec![m],
            Self::FiniteIid(l) => l.atoms.iter().map(|a| &a.matrix).collect(),
            Self::Markov(l) => l.states().iter().map(|s| &s.matrix).collect(),
        }
    }

    pub fn labels(&self) -> Vec<&str> {
        match self {
            Self::Deterministic(_) => vec!["A"],
            Self::FiniteIid(l) => l.atoms.iter().map(|a| a.label.as_str()).collect(),
            Self::Markov(l) => l.states().iter().map(|s| s.label.as_str()).collect(),
        }
    }

    #[inline]
    pub fn matrix(&self, index: usize) -> &TropicalMatrix {
        match self {
            Self::Deterministic(m) => m,
            Self::FiniteIid(l) => &l.atoms[index].matrix,
            Self::Markov(l) => &l.states()[index].matrix,
        }
    }

    /// The single matrix emitted, when every support matrix is identical.
    pub fn as_deterministic(&self) -> Option<&TropicalMatrix> {
        let support = self.support();
        let first = support[0];
        support.iter().all(|m| *m == first).then_some(first)
    }

    pub fn summary(&self) -> LawSummary {
        LawSummary {
            kind: self.kind(),
            dimension: self.dim(),
            atom_count: self.support().len(),
            row_condition: self
                .labels()
                .into_iter()
                .zip(self.support())
                .map(|(l, m)| (l.to_string(), m.has_finite_entry_each_row()))
                .collect(),
        }
    }

    /// First (support matrix, row) without a finite entry, if any.
    pub fn first_empty_row(&self) -> Option<(String, usize)> {
        self.labels()
            .into_iter()
            .zip(self.support())
            .find_map(|(l, m)| m.empty_rows().first().map(|&r| (l.to_string(), r)))
    }

    /// Same family with every matrix restricted to `nodes`; probabilities
    /// and transitions are unchanged.
    pub fn restrict(&self, nodes: &[usize]) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Empty("node set"));
        }
        Ok(match self {
            Self::Deterministic(m) => Self::Deterministic(m.submatrix(nodes)?),
            Self::FiniteIid(l) => Self::FiniteIid(IidLaw {
                atoms: l
                    .atoms
                    .iter()
                    .map(|a| {
                        Ok(Atom {
                            label: a.label.clone(),
                            matrix: a.matrix.submatrix(nodes)?,
                            prob: a.prob,
                        })
                    })
                    .collect::<Result<_>>()?,
            }),
            Self::Markov(l) => Self::Markov(l.restrict(nodes)?),
        })
    }
}

/// `A^{(c)}`, `A^{[c]}` and `A^{{c}}` are all instances of this restriction.
pub fn submatrix_law(law: &MatrixLaw, nodes: &[usize]) -> Result<MatrixLaw> {
    law.restrict(nodes)
}

pub(crate) fn check_square(m: &TropicalMatrix, d: usize, what: &str) -> Result<()> {
    if m.rows() != d || m.cols() != d {
        return Err(Error::DimensionMismatch(format!(
            "{what}: expected a {d}x{d} matrix, found {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const NEG: f64 = f64::NEG_INFINITY;

    fn m(rows: &[[f64; 2]]) -> TropicalMatrix {
        TropicalMatrix::from_f64_rows(rows).unwrap()
    }

    #[test]
    fn probability_sum_is_validated() {
        let err = IidLaw::from_pairs(vec![
            (m(&[[0.0, 0.0], [0.0, 0.0]]), 0.5),
            (m(&[[1.0, 0.0], [0.0, 0.0]]), 0.4),
        ])
        .unwrap_err();
        assert_eq!(err, Error::ProbabilitySum(0.9));
        assert_eq!(err.to_string(), "probabilities sum to 0.9");
    }

    #[test]
    fn zero_probability_atoms_rejected() {
        let err = IidLaw::from_pairs(vec![
            (m(&[[0.0, 0.0], [0.0, 0.0]]), 1.0),
            (m(&[[1.0, 0.0], [0.0, 0.0]]), 0.0),
        ]);
        assert!(matches!(err, Err(Error::InvalidProbability { .. })));
    }

    #[test]
    fn mixed_dimensions_rejected() {
        let err = IidLaw::from_pairs(vec![
            (m(&[[0.0, 0.0], [0.0, 0.0]]), 0.5),
            (TropicalMatrix::identity(3), 0.5),
        ]);
        assert!(matches!(err, Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn single_atom_behaves_as_deterministic() {
        let a = m(&[[1.0, NEG], [0.0, 2.0]]);
        let law = MatrixLaw::FiniteIid(IidLaw::from_pairs(vec![(a.clone(), 1.0)]).unwrap());
        assert_eq!(law.as_deterministic(), Some(&a));
    }

    #[test]
    fn restriction_to_all_nodes_is_identity() {
        let law = MatrixLaw::FiniteIid(
            IidLaw::from_pairs(vec![
                (m(&[[1.0, NEG], [0.0, 2.0]]), 0.3),
                (m(&[[NEG, 0.0], [0.0, NEG]]), 0.7),
            ])
            .unwrap(),
        );
        assert_eq!(law.restrict(&[0, 1]).unwrap(), law);
        assert!(law.restrict(&[]).is_err());
        assert!(law.restrict(&[2]).is_err());
    }

    #[test]
    fn summary_flags_empty_rows() {
        let law = MatrixLaw::FiniteIid(
            IidLaw::from_pairs(vec![
                (m(&[[1.0, NEG], [NEG, NEG]]), 0.5),
                (m(&[[NEG, 0.0], [0.0, NEG]]), 0.5),
            ])
            .unwrap(),
        );
        let s = law.summary();
        assert_eq!(
            s.row_condition,
            vec![("0".to_string(), false), ("1".to_string(), true)]
        );
        assert_eq!(law.first_empty_row(), Some(("0".to_string(), 1)));
    }
}
