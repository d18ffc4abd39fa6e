use std::collections::{HashSet, VecDeque};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::law::MatrixLaw;
use crate::tropical::{TropicalMatrix, TropicalValue};

/// Default bound on the number of closure elements.
pub const DEFAULT_SEMIGROUP_CAP: usize = 1_000_000;

/// A {0, −∞} pattern matrix stored as one bitset per row (bit j of row i set
/// iff entry (i, j) is 0). Limited to d ≤ 64.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PatternMatrix {
    d: usize,
    rows: Vec<u64>,
}

impl PatternMatrix {
    pub const MAX_DIM: usize = 64;

    pub fn from_tropical(m: &TropicalMatrix) -> Result<Self> {
        let d = m.rows();
        if !m.is_square() || d > Self::MAX_DIM {
            return Err(Error::DimensionMismatch(format!(
                "pattern matrices must be square with d <= {}",
                Self::MAX_DIM
            )));
        }
        let rows = (0..d)
            .map(|i| {
                (0..d)
                    .filter(|&j| m.get(i, j).is_finite())
                    .fold(0u64, |r, j| r | (1 << j))
            })
            .collect();
        Ok(Self { d, rows })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn is_zero_at(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    /// Boolean product, equal to the pattern of the tropical product.
    pub fn mul(&self, other: &Self) -> Self {
        let rows = self
            .rows
            .iter()
            .map(|&r| {
                let mut out = 0u64;
                let mut bits = r;
                while bits != 0 {
                    let k = bits.trailing_zeros() as usize;
                    out |= other.rows[k];
                    bits &= bits - 1;
                }
                out
            })
            .collect();
        Self { d: self.d, rows }
    }

    pub fn to_tropical(&self) -> TropicalMatrix {
        let data = (0..self.d)
            .flat_map(|i| (0..self.d).map(move |j| (i, j)))
            .map(|(i, j)| {
                if self.is_zero_at(i, j) {
                    TropicalValue::ZERO
                } else {
                    TropicalValue::BOTTOM
                }
            })
            .collect();
        TropicalMatrix::new(self.d, self.d, data).expect("pattern dimension is positive")
    }
}

impl fmt::Debug for PatternMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.d {
            let row: String = (0..self.d)
                .map(|j| if self.is_zero_at(i, j) { '0' } else { '.' })
                .collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

impl Serialize for PatternMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_tropical().serialize(serializer)
    }
}

/// The semigroup ℰ generated by the atom patterns of an i.i.d. law.
#[derive(Clone, Debug, Serialize)]
pub struct PatternSemigroup {
    generators: Vec<PatternMatrix>,
    /// Generators first, then in discovery order.
    elements: Vec<PatternMatrix>,
    cap: usize,
}

impl PatternSemigroup {
    /// Worklist closure: every finite product of generators is a generator
    /// product extended on the right, so right-multiplying each new element
    /// by each generator reaches the whole semigroup.
    pub fn generate(generators: Vec<PatternMatrix>, cap: usize) -> Result<Self> {
        let d = generators
            .first()
            .ok_or(Error::Empty("generator list"))?
            .dim();
        if generators.iter().any(|g| g.dim() != d) {
            return Err(Error::DimensionMismatch(
                "generators of different sizes".into(),
            ));
        }
        let mut seen = HashSet::new();
        let mut elements = Vec::new();
        let mut queue = VecDeque::new();
        let mut gens = Vec::new();
        for g in generators {
            if seen.insert(g.clone()) {
                elements.push(g.clone());
                queue.push_back(elements.len() - 1);
                gens.push(g);
            }
        }
        let cap_error =
            |cap| Error::CapExceeded(format!("pattern semigroup has more than {cap} elements"));
        if elements.len() > cap {
            return Err(cap_error(cap));
        }
        while let Some(k) = queue.pop_front() {
            for g in &gens {
                let p = elements[k].mul(g);
                if seen.insert(p.clone()) {
                    elements.push(p);
                    if elements.len() > cap {
                        return Err(cap_error(cap));
                    }
                    queue.push_back(elements.len() - 1);
                }
            }
        }
        Ok(Self {
            generators: gens,
            elements,
            cap,
        })
    }

    pub fn elements(&self) -> &[PatternMatrix] {
        &self.elements
    }

    pub fn generators(&self) -> &[PatternMatrix] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn contains(&self, p: &PatternMatrix) -> bool {
        self.elements.contains(p)
    }

    /// Checks product-closure over all pairs.
    pub fn is_closed(&self) -> bool {
        let set: HashSet<&PatternMatrix> = self.elements.iter().collect();
        self.elements
            .iter()
            .all(|a| self.elements.iter().all(|b| set.contains(&a.mul(b))))
    }
}

/// ℰ for a deterministic or finitely-supported i.i.d. law.
pub fn semigroup_closure(law: &MatrixLaw, cap: usize) -> Result<PatternSemigroup> {
    if matches!(law, MatrixLaw::Markov(_)) {
        return Err(Error::UnsupportedLaw(
            "pattern semigroup closure needs an i.i.d. law; use simulation for Markov laws".into(),
        ));
    }
    let gens = law
        .support()
        .into_iter()
        .map(PatternMatrix::from_tropical)
        .collect::<Result<Vec<_>>>()?;
    PatternSemigroup::generate(gens, cap)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "result", content = "witness", rename_all = "lowercase")]
pub enum BlockReachability {
    /// An element M with, for every i ∈ I, some j ∈ J such that M_ij = 0.
    Certificate(PatternMatrix),
    /// No element of the semigroup has that property.
    Refutation,
}

/// Scans the semigroup for an element connecting every row in `from` to
/// some column in `to`.
pub fn block_reachability_certificate(
    sg: &PatternSemigroup,
    from: &[usize],
    to: &[usize],
) -> Result<BlockReachability> {
    let d = sg.elements.first().map_or(0, PatternMatrix::dim);
    if let Some(&node) = from.iter().chain(to).find(|&&i| i >= d) {
        return Err(Error::NodeOutOfRange { node, dim: d });
    }
    if from.iter().any(|i| to.contains(i)) {
        return Err(Error::InvalidParameter(
            "row and column sets must be disjoint".into(),
        ));
    }
    let mask = to.iter().fold(0u64, |m, &j| m | (1 << j));
    Ok(sg
        .elements
        .iter()
        .find(|m| from.iter().all(|&i| m.rows[i] & mask != 0))
        .cloned()
        .map_or(
            BlockReachability::Refutation,
            BlockReachability::Certificate,
        ))
}
