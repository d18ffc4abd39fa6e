use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::value::TropicalValue;
use crate::error::{Error, Result};

/// Dense row-major matrix over the max-plus semiring.
#[derive(Clone, PartialEq)]
pub struct TropicalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<TropicalValue>,
}

impl TropicalMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<TropicalValue>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Empty("matrix"));
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<TropicalValue>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some((i, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != m) {
            return Err(Error::DimensionMismatch(format!(
                "row {i} has {} entries, expected {m}",
                r.len()
            )));
        }
        Self::new(n, m, rows.into_iter().flatten().collect())
    }

    /// Builds from raw floats, `f64::NEG_INFINITY` standing for Bottom.
    pub fn from_f64_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                r.as_ref()
                    .iter()
                    .map(|&x| TropicalValue::from_f64(x))
                    .collect()
            })
            .collect::<Result<Vec<Vec<_>>>>()?;
        Self::from_rows(rows)
    }

    pub fn filled(rows: usize, cols: usize, value: TropicalValue) -> Result<Self> {
        Self::new(rows, cols, vec![value; rows * cols])
    }

    /// Tropical identity: 0 on the diagonal, Bottom elsewhere.
    pub fn identity(d: usize) -> Self {
        let mut data = vec![TropicalValue::BOTTOM; d * d];
        for i in 0..d {
            data[i * d + i] = TropicalValue::ZERO;
        }
        Self::new(d, d, data).expect("identity dimension must be positive")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> TropicalValue {
        self.data[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[TropicalValue] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[TropicalValue] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<TropicalValue>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    /// (A ⊗ B)ᵢⱼ = maxₖ (Aᵢₖ + Bₖⱼ).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let (n, m) = (self.rows, other.cols);
        let mut out = vec![f64::NEG_INFINITY; n * m];
        for i in 0..n {
            let out_row = &mut out[i * m..(i + 1) * m];
            for (k, a) in self.row(i).iter().enumerate() {
                let a = a.to_f64();
                if a == f64::NEG_INFINITY {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(other.row(k)) {
                    let s = a + b.to_f64();
                    if s > *o {
                        *o = s;
                    }
                }
            }
        }
        Ok(Self {
            rows: n,
            cols: m,
            data: out.into_iter().map(TropicalValue::from_raw).collect(),
        })
    }

    /// (A ⊗ x)ᵢ = maxⱼ (Aᵢⱼ + xⱼ).
    pub fn mul_vec(&self, x: &TropicalVector) -> Result<TropicalVector> {
        if self.cols != x.dim() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix times vector of dimension {}",
                self.rows,
                self.cols,
                x.dim()
            )));
        }
        let entries = (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(x.entries())
                    .fold(TropicalValue::BOTTOM, |acc, (&a, &b)| {
                        acc.oplus(a.otimes(b))
                    })
            })
            .collect();
        Ok(TropicalVector { entries })
    }

    /// λ ⊗ A.
    pub fn scaled(&self, lambda: TropicalValue) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| a.otimes(lambda)).collect(),
        }
    }

    /// The {0, Bottom} support skeleton: 0 exactly where the entry is finite.
    pub fn pattern(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|a| {
                    if a.is_finite() {
                        TropicalValue::ZERO
                    } else {
                        TropicalValue::BOTTOM
                    }
                })
                .collect(),
        }
    }

    pub fn row_has_finite_entry(&self, i: usize) -> bool {
        self.row(i).iter().any(|a| a.is_finite())
    }

    pub fn has_finite_entry_each_row(&self) -> bool {
        (0..self.rows).all(|i| self.row_has_finite_entry(i))
    }

    /// Indices of rows with no finite entry.
    pub fn empty_rows(&self) -> Vec<usize> {
        (0..self.rows)
            .filter(|&i| !self.row_has_finite_entry(i))
            .collect()
    }

    pub fn is_all_bottom(&self) -> bool {
        self.data.iter().all(|a| a.is_bottom())
    }

    pub fn max_entry(&self) -> TropicalValue {
        self.data
            .iter()
            .fold(TropicalValue::BOTTOM, |acc, &a| acc.oplus(a))
    }

    /// Largest absolute value among finite entries, 0 if there are none.
    pub fn max_abs_finite(&self) -> f64 {
        self.data
            .iter()
            .filter_map(|a| a.value())
            .fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Principal submatrix on the given index set, in the given order.
    pub fn submatrix(&self, nodes: &[usize]) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::Empty("node set"));
        }
        if !self.is_square() {
            return Err(Error::DimensionMismatch(
                "submatrix of a non-square matrix".into(),
            ));
        }
        if let Some(&node) = nodes.iter().find(|&&i| i >= self.rows) {
            return Err(Error::NodeOutOfRange {
                node,
                dim: self.rows,
            });
        }
        let data = nodes
            .iter()
            .flat_map(|&i| nodes.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.get(i, j))
            .collect();
        Self::new(nodes.len(), nodes.len(), data)
    }

    /// Entrywise A ≤ B.
    pub fn le(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && self.data.iter().zip(&other.data).all(|(a, b)| a <= b)
    }

    pub(crate) fn raw_mut(&mut self) -> &mut [TropicalValue] {
        &mut self.data
    }
}

impl fmt::Debug for TropicalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries((0..self.rows).map(|i| self.row(i)))
            .finish()
    }
}

impl Serialize for TropicalMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq((0..self.rows).map(|i| self.row(i)))
    }
}

impl<'de> Deserialize<'de> for TropicalMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<TropicalValue>>::deserialize(deserializer)?;
        Self::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

/// Column vector over the max-plus semiring.
#[derive(Clone, PartialEq)]
pub struct TropicalVector {
    entries: Vec<TropicalValue>,
}

impl TropicalVector {
    pub fn new(entries: Vec<TropicalValue>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::Empty("vector"));
        }
        Ok(Self { entries })
    }

    pub fn from_f64(values: &[f64]) -> Result<Self> {
        Self::new(
            values
                .iter()
                .map(|&x| TropicalValue::from_f64(x))
                .collect::<Result<_>>()?,
        )
    }

    /// The 0 vector (every coordinate equal to the ⊗-identity).
    pub fn zeros(d: usize) -> Self {
        Self::filled(d, TropicalValue::ZERO)
    }

    pub fn filled(d: usize, value: TropicalValue) -> Self {
        assert!(d > 0, "vector dimension must be positive");
        Self {
            entries: vec![value; d],
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn get(&self, i: usize) -> TropicalValue {
        self.entries[i]
    }

    pub fn entries(&self) -> &[TropicalValue] {
        &self.entries
    }

    pub fn max(&self) -> TropicalValue {
        self.entries
            .iter()
            .fold(TropicalValue::BOTTOM, |acc, &a| acc.oplus(a))
    }

    pub fn min(&self) -> TropicalValue {
        self.entries
            .iter()
            .copied()
            .fold(self.entries[0], |acc, a| if a < acc { a } else { acc })
    }

    /// λ ⊗ x.
    pub fn scaled(&self, lambda: TropicalValue) -> Self {
        Self {
            entries: self.entries.iter().map(|&a| a.otimes(lambda)).collect(),
        }
    }

    pub fn subvector(&self, nodes: &[usize]) -> Result<Self> {
        if let Some(&node) = nodes.iter().find(|&&i| i >= self.dim()) {
            return Err(Error::NodeOutOfRange {
                node,
                dim: self.dim(),
            });
        }
        Self::new(nodes.iter().map(|&i| self.entries[i]).collect())
    }

    /// Sup-norm distance, defined when both vectors are entirely finite.
    pub fn sup_distance(&self, other: &Self) -> Option<f64> {
        if self.dim() != other.dim() {
            return None;
        }
        self.entries
            .iter()
            .zip(&other.entries)
            .try_fold(0.0_f64, |m, (a, b)| {
                Some(m.max((a.value()? - b.value()?).abs()))
            })
    }
}

impl fmt::Debug for TropicalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.entries).finish()
    }
}

impl Serialize for TropicalVector {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.entries.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TropicalVector {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let entries = Vec::<TropicalValue>::deserialize(deserializer)?;
        Self::new(entries).map_err(serde::de::Error::custom)
    }
}

pub fn mat_mul(a: &TropicalMatrix, b: &TropicalMatrix) -> Result<TropicalMatrix> {
    a.mul(b)
}

pub fn mat_vec(a: &TropicalMatrix, x: &TropicalVector) -> Result<TropicalVector> {
    a.mul_vec(x)
}

pub fn pattern(a: &TropicalMatrix) -> TropicalMatrix {
    a.pattern()
}
