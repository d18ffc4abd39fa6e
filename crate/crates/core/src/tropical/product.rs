use super::matrix::TropicalMatrix;
use super::value::TropicalValue;
use crate::error::{Error, Result};
use crate::stats::CompensatedSum;

/// A matrix product stored as `shift ⊗ matrix`, where `matrix` has maximum
/// finite entry 0 (or is entirely Bottom).
#[derive(Clone, Debug, PartialEq)]
pub struct NormalizedProduct {
    pub matrix: TropicalMatrix,
    pub shift: f64,
}

impl NormalizedProduct {
    /// `shift ⊗ matrix`, the unnormalized product.
    pub fn reconstruct(&self) -> TropicalMatrix {
        self.matrix.scaled(TropicalValue::from_raw(self.shift))
    }

    pub fn entry(&self, i: usize, j: usize) -> TropicalValue {
        self.matrix
            .get(i, j)
            .otimes(TropicalValue::from_raw(self.shift))
    }
}

/// Running product with renormalization after every step.
#[derive(Clone, Debug)]
pub struct ProductAccumulator {
    matrix: TropicalMatrix,
    shift: CompensatedSum,
}

impl ProductAccumulator {
    pub fn new(first: &TropicalMatrix) -> Result<Self> {
        if !first.is_square() {
            return Err(Error::DimensionMismatch(
                "product of non-square matrices".into(),
            ));
        }
        let mut acc = Self {
            matrix: first.clone(),
            shift: CompensatedSum::new(),
        };
        acc.normalize();
        Ok(acc)
    }

    /// P ← P ⊗ A.
    pub fn push_right(&mut self, a: &TropicalMatrix) -> Result<()> {
        self.matrix = self.matrix.mul(a)?;
        self.normalize();
        Ok(())
    }

    /// P ← A ⊗ P.
    pub fn push_left(&mut self, a: &TropicalMatrix) -> Result<()> {
        self.matrix = a.mul(&self.matrix)?;
        self.normalize();
        Ok(())
    }

    pub fn normalized(&self) -> &TropicalMatrix {
        &self.matrix
    }

    pub fn shift(&self) -> f64 {
        self.shift.value()
    }

    /// Row maxima of the product, i.e. the product applied to the 0 vector,
    /// with the shift folded back in.
    pub fn apply_to_zero(&self, i: usize) -> TropicalValue {
        self.matrix
            .row(i)
            .iter()
            .fold(TropicalValue::BOTTOM, |m, &a| m.oplus(a))
            .otimes(TropicalValue::from_raw(self.shift()))
    }

    pub fn finish(self) -> NormalizedProduct {
        NormalizedProduct {
            shift: self.shift.value(),
            matrix: self.matrix,
        }
    }

    fn normalize(&mut self) {
        if let Some(top) = self.matrix.max_entry().value() {
            if top != 0.0 {
                for a in self.matrix.raw_mut() {
                    *a = TropicalValue::from_raw(a.to_f64() - top);
                }
                self.shift.add(top);
            }
        }
    }
}

/// Left-to-right product `M₀ ⊗ M₁ ⊗ ⋯ ⊗ Mₖ` in normalized form.
pub fn product_range(matrices: &[TropicalMatrix]) -> Result<NormalizedProduct> {
    let (first, rest) = matrices
        .split_first()
        .ok_or(Error::Empty("matrix sequence"))?;
    let mut acc = ProductAccumulator::new(first)?;
    for a in rest {
        if a.rows() != first.rows() || !a.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "expected {0}x{0} matrices, found {1}x{2}",
                first.rows(),
                a.rows(),
                a.cols()
            )));
        }
        acc.push_right(a)?;
    }
    Ok(acc.finish())
}
