use super::matrix::TropicalMatrix;
use super::value::TropicalValue;
use crate::error::{Error, Result};

pub const PATH_ORACLE_MAX_DIM: usize = 6;
pub const PATH_ORACLE_MAX_LEN: usize = 8;

/// Maximum over all node sequences `i = i₀, …, iₙ = j` of
/// `Σₗ Mₗ[iₗ, iₗ₊₁]`, by explicit enumeration. This is the (i, j) entry of
/// `M₀ ⊗ ⋯ ⊗ Mₙ₋₁` read as a path weight, computed without any matrix product.
pub fn path_weight_oracle(
    matrices: &[TropicalMatrix],
    i: usize,
    j: usize,
) -> Result<TropicalValue> {
    let first = matrices.first().ok_or(Error::Empty("matrix sequence"))?;
    let d = first.rows();
    if d > PATH_ORACLE_MAX_DIM || matrices.len() > PATH_ORACLE_MAX_LEN {
        return Err(Error::CapExceeded(format!(
            "path enumeration limited to d <= {PATH_ORACLE_MAX_DIM} and length <= {PATH_ORACLE_MAX_LEN}, got d = {d}, length = {}",
            matrices.len()
        )));
    }
    if matrices.iter().any(|m| m.rows() != d || m.cols() != d) {
        return Err(Error::DimensionMismatch(
            "path oracle needs square matrices of equal size".into(),
        ));
    }
    if i >= d || j >= d {
        return Err(Error::NodeOutOfRange {
            node: i.max(j),
            dim: d,
        });
    }

    let inner = matrices.len() - 1;
    let mut nodes = vec![0usize; inner];
    let mut best = TropicalValue::BOTTOM;
    loop {
        let mut weight = TropicalValue::ZERO;
        let mut from = i;
        for (l, m) in matrices.iter().enumerate() {
            let to = if l < inner { nodes[l] } else { j };
            weight = weight.otimes(m.get(from, to));
            from = to;
        }
        best = best.oplus(weight);

        // odometer increment over the intermediate nodes
        let mut pos = 0;
        loop {
            if pos == inner {
                return Ok(best);
            }
            nodes[pos] += 1;
            if nodes[pos] < d {
                break;
            }
            nodes[pos] = 0;
            pos += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const NEG: f64 = f64::NEG_INFINITY;

    #[test]
    fn length_one_is_the_entry() {
        let a = TropicalMatrix::from_f64_rows(&[[1.0, NEG], [2.0, 3.0]]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(
                    path_weight_oracle(std::slice::from_ref(&a), i, j).unwrap(),
                    a.get(i, j)
                );
            }
        }
    }

    #[test]
    fn two_step_switching_pair() {
        let b = TropicalMatrix::from_f64_rows(&[[0.0, NEG, NEG], [0.0, NEG, NEG], [0.0, 1.0, 1.0]])
            .unwrap();
        let c = TropicalMatrix::from_f64_rows(&[[0.0, NEG, NEG], [0.0, NEG, 0.0], [0.0, 0.0, NEG]])
            .unwrap();
        // paths 3→k→1: k=1 gives 0+0, k=2 gives 1+0, k=3 gives 1+0
        assert_eq!(
            path_weight_oracle(&[b, c], 2, 0).unwrap().value(),
            Some(1.0)
        );
    }

    #[test]
    fn caps_are_enforced() {
        let big = TropicalMatrix::identity(7);
        assert!(matches!(
            path_weight_oracle(&[big], 0, 0),
            Err(Error::CapExceeded(_))
        ));
        let long = vec![TropicalMatrix::identity(2); 9];
        assert!(matches!(
            path_weight_oracle(&long, 0, 0),
            Err(Error::CapExceeded(_))
        ));
    }
}
