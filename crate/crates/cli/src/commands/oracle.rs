use std::fmt::Write;

use anyhow::{anyhow, bail, Context};
use maxplus_lln::exponents::karp_max_cycle_mean;
use maxplus_lln::law::SampleStream;
use maxplus_lln::tropical::{mat_mul, path_weight_oracle, TropicalMatrix, TropicalValue};
use maxplus_lln::verdict::exact_small_n_distribution;
use serde::{Serialize, Serializer};

use super::{fmt_matrix, fmt_value};
use crate::args::{OracleArgs, OracleKind};
use crate::model::{is_random, load_model, node_index, require_seed};
use crate::output::{Outcome, Status};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KarpReport {
    pub dimension: usize,
    pub value: TropicalValue,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PathsReport {
    /// Atom labels of A(0), …, A(n−1).
    pub sequence: Vec<String>,
    /// A(0) ⊗ ⋯ ⊗ A(n−1), folded from the left.
    pub product: TropicalMatrix,
    /// Entry (i, j) is the best weight over all node paths from i to j.
    pub paths: TropicalMatrix,
    pub matches: bool,
}

/// `(value, probability)` pairs emitted as a JSON object keyed by value, in
/// increasing value order.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution(pub Vec<(TropicalValue, f64)>);

impl Serialize for Distribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_map(self.0.iter().map(|(v, p)| (v.to_string(), p)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactDistReport {
    /// 1-based.
    pub coordinate: usize,
    pub steps: usize,
    pub distribution: Distribution,
}

pub fn run(args: &OracleArgs) -> anyhow::Result<Outcome> {
    match &args.kind {
        OracleKind::Karp { model, matrix } => karp(model.as_deref(), matrix.as_deref()),
        OracleKind::Paths {
            model,
            steps,
            sequence,
            seed,
        } => paths(model, *steps, sequence, *seed),
        OracleKind::ExactDist {
            model,
            steps,
            coordinate,
        } => exact_dist(model, *steps, *coordinate),
    }
}

fn karp(model: Option<&str>, matrix: Option<&str>) -> anyhow::Result<Outcome> {
    let m: TropicalMatrix = match (model, matrix) {
        (_, Some(text)) => {
            serde_json::from_str(text).context("--matrix must be a JSON array of rows")?
        }
        (Some(spec), None) => {
            let law = load_model(spec)?;
            law.as_deterministic()
                .cloned()
                .ok_or_else(|| anyhow!("karp needs a law emitting a single matrix"))?
        }
        (None, None) => bail!("give a MODEL or --matrix"),
    };
    if !m.is_square() {
        bail!("karp needs a square matrix, got {}x{}", m.rows(), m.cols());
    }
    let report = KarpReport {
        dimension: m.rows(),
        value: karp_max_cycle_mean(&m),
    };
    let text = format!("maximum cycle mean: {}\n", fmt_value(report.value));
    Outcome::new(&report, text, Status::Ok)
}

fn paths(
    spec: &str,
    steps: usize,
    sequence: &[String],
    seed: Option<u64>,
) -> anyhow::Result<Outcome> {
    let law = load_model(spec)?;
    let labels = law.labels();
    let indices: Vec<usize> = if sequence.is_empty() {
        let seed = require_seed(seed, is_random(&law), "oracle paths without --sequence")?;
        law.forward_indices(steps, SampleStream::new(seed, 0))
    } else {
        if sequence.len() != steps {
            bail!(
                "--sequence has {} labels but --steps is {steps}",
                sequence.len()
            );
        }
        sequence
            .iter()
            .map(|s| {
                labels
                    .iter()
                    .position(|l| l == s)
                    .ok_or_else(|| anyhow!("unknown atom {s:?}; atoms: {}", labels.join(", ")))
            })
            .collect::<anyhow::Result<_>>()?
    };
    let mats: Vec<TropicalMatrix> = indices.iter().map(|&k| law.matrix(k).clone()).collect();
    let mut product = mats[0].clone();
    for m in &mats[1..] {
        product = mat_mul(&product, m)?;
    }
    let d = law.dim();
    let mut rows = Vec::with_capacity(d);
    for i in 0..d {
        rows.push(
            (0..d)
                .map(|j| path_weight_oracle(&mats, i, j))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    let paths = TropicalMatrix::from_rows(rows)?;
    let report = PathsReport {
        sequence: indices.iter().map(|&k| labels[k].to_string()).collect(),
        matches: paths == product,
        product,
        paths,
    };
    let mut text = format!("sequence: {}\n", report.sequence.join(" "));
    let _ = write!(text, "product:\n{}", fmt_matrix(&report.product));
    let _ = write!(text, "path maxima:\n{}", fmt_matrix(&report.paths));
    let _ = writeln!(
        text,
        "{}",
        if report.matches {
            "entries match"
        } else {
            "MISMATCH"
        }
    );
    Outcome::new(&report, text, Status::Ok)
}

fn exact_dist(spec: &str, steps: usize, coordinate: usize) -> anyhow::Result<Outcome> {
    let law = load_model(spec)?;
    let index = node_index(coordinate, law.dim(), "--coordinate")?;
    let dist = exact_small_n_distribution(&law, steps, index)?;
    let report = ExactDistReport {
        coordinate,
        steps,
        distribution: Distribution(dist.atoms),
    };
    let mut text = format!("law of x_{coordinate}({steps},0):\n");
    for (v, p) in &report.distribution.0 {
        let _ = writeln!(text, "  {:>10}  {p}", fmt_value(*v));
    }
    Outcome::new(&report, text, Status::Ok)
}
