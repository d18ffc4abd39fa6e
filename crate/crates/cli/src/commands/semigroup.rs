use std::fmt::Write;

use anyhow::bail;
use maxplus_lln::report::ModelReport;
use maxplus_lln::structure::{
    block_reachability_certificate, semigroup_closure, BlockReachability, PatternMatrix,
};
use serde::Serialize;

use super::{describe_model, fmt_nodes};
use crate::args::SemigroupArgs;
use crate::model::{load_model, node_index};
use crate::output::{Outcome, Status};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Reachability {
    pub from: Vec<usize>,
    pub to: Vec<usize>,
    #[serde(flatten)]
    pub outcome: BlockReachability,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SemigroupReport {
    pub model: ModelReport,
    pub generators: usize,
    pub size: usize,
    pub cap: usize,
    pub closed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub elements: Option<Vec<PatternMatrix>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reachability: Option<Reachability>,
}

pub fn run(args: &SemigroupArgs) -> anyhow::Result<Outcome> {
    let law = load_model(&args.model)?;
    let sg = semigroup_closure(&law, args.cap)?;
    let reachability = if args.from.is_empty() {
        None
    } else {
        let index = |v: &[usize], flag| {
            v.iter()
                .map(|&i| node_index(i, law.dim(), flag))
                .collect::<Result<Vec<_>, _>>()
        };
        let (from, to) = (index(&args.from, "--from")?, index(&args.to, "--to")?);
        if from.iter().any(|i| to.contains(i)) {
            bail!("--from and --to must be disjoint");
        }
        Some(Reachability {
            from: args.from.clone(),
            to: args.to.clone(),
            outcome: block_reachability_certificate(&sg, &from, &to)?,
        })
    };
    let report = SemigroupReport {
        model: ModelReport::of(&law),
        generators: sg.generators().len(),
        size: sg.len(),
        cap: sg.cap(),
        closed: sg.is_closed(),
        elements: args.elements.then(|| sg.elements().to_vec()),
        reachability,
    };
    Outcome::new(&report, render(&report), Status::Ok)
}

fn render(r: &SemigroupReport) -> String {
    let mut s = describe_model(&r.model);
    let _ = writeln!(
        s,
        "pattern semigroup: {} elements from {} generators ({})",
        r.size,
        r.generators,
        if r.closed { "closed" } else { "NOT closed" }
    );
    if let Some(elements) = &r.elements {
        for (k, e) in elements.iter().enumerate() {
            let _ = write!(s, "element {}:\n{e:?}", k + 1);
        }
    }
    if let Some(reach) = &r.reachability {
        let sets = format!(
            "I = {}, J = {}",
            fmt_nodes(&reach.from),
            fmt_nodes(&reach.to)
        );
        match &reach.outcome {
            BlockReachability::Certificate(m) => {
                let _ = write!(s, "certificate for {sets}:\n{m:?}");
            }
            BlockReachability::Refutation => {
                let _ = writeln!(s, "no element reaches J from every row of I ({sets})");
            }
        }
    }
    s
}
