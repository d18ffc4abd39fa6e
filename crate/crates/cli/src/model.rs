use std::path::Path;

use anyhow::{anyhow, bail, Context};
use maxplus_lln::fixtures;
use maxplus_lln::law::{load_law, MatrixLaw};
use maxplus_lln::structure::{build_support_graph, Condensation};

/// Loads `spec` as a file when one exists at that path, otherwise as a
/// bundled model name.
pub fn load_model(spec: &str) -> anyhow::Result<MatrixLaw> {
    let path = Path::new(spec);
    if path.is_file() {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
        return load_law(&text).with_context(|| format!("invalid model document {spec}"));
    }
    let text = fixtures::document(spec).ok_or_else(|| {
        anyhow!(
            "no model file {spec:?} and no bundled model of that name (known: {})",
            fixtures::NAMES.join(", ")
        )
    })?;
    Ok(load_law(text)?)
}

/// The seed, or an error naming `what` when randomness is needed but no
/// seed was given. Seeds are never invented.
pub fn require_seed(seed: Option<u64>, random: bool, what: &str) -> anyhow::Result<u64> {
    match (seed, random) {
        (Some(s), _) => Ok(s),
        (None, false) => Ok(0),
        (None, true) => bail!("{what} draws random matrices; pass --seed"),
    }
}

/// Whether sampling this law can produce different matrix sequences.
pub fn is_random(law: &MatrixLaw) -> bool {
    law.as_deterministic().is_none()
}

/// Whether some non-trivial component's restricted law is random, i.e.
/// whether the verdict needs Monte Carlo exponents.
pub fn components_are_random(law: &MatrixLaw) -> anyhow::Result<bool> {
    let condensation = Condensation::of(&build_support_graph(law));
    for c in condensation.components().iter().filter(|c| !c.trivial) {
        if is_random(&law.restrict(&c.nodes)?) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Converts a 1-based node from the command line.
pub fn node_index(node: usize, dim: usize, flag: &str) -> anyhow::Result<usize> {
    if node == 0 || node > dim {
        bail!("{flag} {node} is out of range; nodes are numbered 1..={dim}");
    }
    Ok(node - 1)
}
