//! Max-plus scalars, vectors and matrices.
//!
//! `ℝmax = ℝ ∪ {−∞}` with `a ⊕ b = max(a, b)` and `a ⊗ b = a + b`. Bottom
//! (−∞) is the ⊕-identity and absorbs under ⊗; 0 is the ⊗-identity. Rows with
//! no finite entry are legal everywhere in this module.

mod matrix;
mod oracle;
mod product;
mod value;

pub use matrix::{mat_mul, mat_vec, pattern, TropicalMatrix, TropicalVector};
pub use oracle::{path_weight_oracle, PATH_ORACLE_MAX_DIM, PATH_ORACLE_MAX_LEN};
pub use product::{product_range, NormalizedProduct, ProductAccumulator};
pub use value::{trop_add, trop_mul, TropicalValue};
