//! Bundled model documents, usable without any files on disk.

use crate::error::{Error, Result};
use crate::law::{load_law, MatrixLaw};

/// The mixing chain with γ₁ = 0.3, γ₂ = 0.2.
pub const EXAMPLE1: &str = include_str!("../fixtures/example1.json");
/// The i.i.d. switching pair B, C with p = 0.5.
pub const EXAMPLE2: &str = include_str!("../fixtures/example2.json");
/// The switching pair with B replaced by B′.
pub const EXAMPLE2_MODIFIED: &str = include_str!("../fixtures/example2-modified.json");
/// A deterministic 9-node law with six components.
pub const FIGURE1: &str = include_str!("../fixtures/figure1.json");

pub const NAMES: [&str; 4] = ["example1", "example2", "example2-modified", "figure1"];

/// Document text by name, with or without a `.json` suffix.
pub fn document(name: &str) -> Option<&'static str> {
    match name.strip_suffix(".json").unwrap_or(name) {
        "example1" => Some(EXAMPLE1),
        "example2" => Some(EXAMPLE2),
        "example2-modified" => Some(EXAMPLE2_MODIFIED),
        "figure1" => Some(FIGURE1),
        _ => None,
    }
}

pub fn law(name: &str) -> Result<MatrixLaw> {
    let text = document(name).ok_or_else(|| {
        Error::InvalidParameter(format!(
            "unknown bundled model {name:?}; known: {}",
            NAMES.join(", ")
        ))
    })?;
    load_law(text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::law::LawKind;

    #[test]
    fn all_fixtures_load() {
        let kinds: Vec<LawKind> = NAMES.iter().map(|n| law(n).unwrap().kind()).collect();
        assert_eq!(
            kinds,
            [
                LawKind::Markov,
                LawKind::Iid,
                LawKind::Iid,
                LawKind::Deterministic
            ]
        );
        assert!(law("figure1.json").is_ok());
        assert!(law("nope").is_err());
    }

    #[test]
    fn bundled_mixing_chain_matches_constructor() {
        let bundled = law("example1").unwrap();
        let built = MatrixLaw::Markov(crate::law::example1_law(0.3, 0.2).unwrap());
        assert_eq!(bundled, built);
    }
}
