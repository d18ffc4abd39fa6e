//! Forward and backward trajectories of `x(n+1) = A(n) ⊗ x(n)` started at 0.
//!
//! Both keep their state normalized (maximum finite entry 0) and carry the
//! removed offset in a compensated accumulator, so horizons of 10⁵ steps and
//! beyond lose no precision to growth.

use crate::error::{Error, Result};
use crate::law::{Direction, MatrixLaw, SampleStream};
use crate::stats::CompensatedSum;
use crate::tropical::{ProductAccumulator, TropicalMatrix, TropicalValue, TropicalVector};

/// `x(n, 0) = A(n−1) ⊗ ⋯ ⊗ A(0) ⊗ 0`, advanced one matrix at a time.
#[derive(Clone, Debug)]
pub struct ForwardTrajectory {
    x: Vec<f64>,
    scratch: Vec<f64>,
    shift: CompensatedSum,
    steps: usize,
}

impl ForwardTrajectory {
    pub fn new(d: usize) -> Self {
        Self {
            x: vec![0.0; d],
            scratch: vec![0.0; d],
            shift: CompensatedSum::new(),
            steps: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// x ← A ⊗ x.
    pub fn step(&mut self, a: &TropicalMatrix) -> Result<()> {
        let d = self.x.len();
        if a.rows() != d || a.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix applied to a vector of length {d}",
                a.rows(),
                a.cols()
            )));
        }
        let mut top = f64::NEG_INFINITY;
        for (i, out) in self.scratch.iter_mut().enumerate() {
            let mut m = f64::NEG_INFINITY;
            for (aij, &xj) in a.row(i).iter().zip(&self.x) {
                let s = aij.to_f64() + xj;
                if s > m {
                    m = s;
                }
            }
            *out = m;
            if m > top {
                top = m;
            }
        }
        std::mem::swap(&mut self.x, &mut self.scratch);
        if top.is_finite() && top != 0.0 {
            for v in &mut self.x {
                *v -= top;
            }
            self.shift.add(top);
        }
        self.steps += 1;
        Ok(())
    }

    /// xᵢ(n, 0).
    pub fn value(&self, i: usize) -> TropicalValue {
        let v = self.x[i];
        if v == f64::NEG_INFINITY {
            TropicalValue::BOTTOM
        } else {
            TropicalValue::finite(v + self.shift.value()).expect("finite coordinate")
        }
    }

    pub fn vector(&self) -> TropicalVector {
        TropicalVector::new((0..self.dim()).map(|i| self.value(i)).collect()).expect("non-empty")
    }

    pub fn max(&self) -> TropicalValue {
        (0..self.dim()).fold(TropicalValue::BOTTOM, |m, i| m.oplus(self.value(i)))
    }

    pub fn min(&self) -> TropicalValue {
        (0..self.dim())
            .map(|i| self.value(i))
            .fold(self.value(0), |m, v| if v < m { v } else { m })
    }

    pub fn is_dead(&self) -> bool {
        self.x.iter().all(|&v| v == f64::NEG_INFINITY)
    }

    /// xᵢ(n, 0)/n, or `None` before the first step.
    pub fn scaled(&self, i: usize) -> Option<TropicalValue> {
        (self.steps > 0).then(|| scale(self.value(i), self.steps))
    }
}

/// The backward product `A(−1) ⊗ ⋯ ⊗ A(−n)`, from which
/// `y(n, 0) = A(−1) ⊗ ⋯ ⊗ A(−n) ⊗ 0` is read as row maxima.
#[derive(Clone, Debug)]
pub struct BackwardTrajectory {
    d: usize,
    product: Option<ProductAccumulator>,
    steps: usize,
}

impl BackwardTrajectory {
    pub fn new(d: usize) -> Self {
        Self {
            d,
            product: None,
            steps: 0,
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    /// Appends the next older matrix `A(−n−1)` on the right.
    pub fn step(&mut self, a: &TropicalMatrix) -> Result<()> {
        if a.rows() != self.d || a.cols() != self.d {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix in a backward product of size {}",
                a.rows(),
                a.cols(),
                self.d
            )));
        }
        match &mut self.product {
            Some(p) => p.push_right(a)?,
            None => self.product = Some(ProductAccumulator::new(a)?),
        }
        self.steps += 1;
        Ok(())
    }

    /// yᵢ(n, 0).
    pub fn value(&self, i: usize) -> TropicalValue {
        self.product
            .as_ref()
            .map_or(TropicalValue::ZERO, |p| p.apply_to_zero(i))
    }

    pub fn vector(&self) -> TropicalVector {
        TropicalVector::new((0..self.d).map(|i| self.value(i)).collect()).expect("non-empty")
    }

    pub fn scaled(&self, i: usize) -> Option<TropicalValue> {
        (self.steps > 0).then(|| scale(self.value(i), self.steps))
    }
}

/// Runs one forward trajectory of `n` steps for the given stream.
pub fn forward_trajectory(law: &MatrixLaw, n: usize, stream: SampleStream) -> ForwardTrajectory {
    let mut traj = ForwardTrajectory::new(law.dim());
    for a in law
        .sampler(stream, Direction::Forward)
        .take(n)
        .map(|k| law.matrix(k))
    {
        traj.step(a).expect("law matrices share the law dimension");
    }
    traj
}

/// Runs one backward product of `n` steps for the given stream.
pub fn backward_trajectory(law: &MatrixLaw, n: usize, stream: SampleStream) -> BackwardTrajectory {
    let mut traj = BackwardTrajectory::new(law.dim());
    for a in law
        .sampler(stream, Direction::Backward)
        .take(n)
        .map(|k| law.matrix(k))
    {
        traj.step(a).expect("law matrices share the law dimension");
    }
    traj
}

/// `y(n, 0)` alone, without the intermediate products: the indices of
/// `A(−1), …, A(−n)` are drawn first and the vector recursion then runs
/// from `A(−n)` up to `A(−1)`. Agrees with [`backward_trajectory`] for the
/// same stream at O(n d²) instead of O(n d³).
pub fn backward_endpoint(law: &MatrixLaw, n: usize, stream: SampleStream) -> ForwardTrajectory {
    let indices = law.backward_indices(n, stream);
    let mut traj = ForwardTrajectory::new(law.dim());
    for &k in indices.iter().rev() {
        traj.step(law.matrix(k))
            .expect("law matrices share the law dimension");
    }
    traj
}

pub(crate) fn scale(v: TropicalValue, n: usize) -> TropicalValue {
    v.value().map_or(TropicalValue::BOTTOM, |x| {
        TropicalValue::finite(x / n as f64).expect("finite")
    })
}
