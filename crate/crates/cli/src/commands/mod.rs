use std::fmt::Write;

use maxplus_lln::exponents::ExponentEstimate;
use maxplus_lln::law::LawKind;
use maxplus_lln::report::ModelReport;
use maxplus_lln::tropical::{TropicalMatrix, TropicalValue};

use crate::args::{Cli, Command};
use crate::output::Outcome;

pub mod analyze;
pub mod estimate;
pub mod oracle;
pub mod reproduce;
pub mod semigroup;
pub mod simulate;

pub fn dispatch(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Analyze(a) => analyze::run(a),
        Command::Simulate(a) => simulate::run(a),
        Command::EstimateGamma(a) => estimate::run(a),
        Command::Semigroup(a) => semigroup::run(a),
        Command::Reproduce(a) => reproduce::run(a),
        Command::Oracle(a) => oracle::run(a),
    }
}

fn kind_name(kind: LawKind) -> &'static str {
    match kind {
        LawKind::Deterministic => "deterministic",
        LawKind::Iid => "i.i.d.",
        LawKind::Markov => "Markov-modulated",
    }
}

fn describe_model(m: &ModelReport) -> String {
    let labels: Vec<&str> = m.atoms.iter().map(|a| a.label.as_str()).collect();
    let mut s = format!(
        "model: {}, {} nodes, matrices {}\n",
        kind_name(m.kind),
        m.dimension,
        labels.join(" ")
    );
    let holed: Vec<&str> = m
        .atoms
        .iter()
        .filter(|a| !a.row_condition)
        .map(|a| a.label.as_str())
        .collect();
    if !holed.is_empty() {
        let _ = writeln!(s, "  matrices with an empty row: {}", holed.join(" "));
    }
    s
}

fn fmt_estimate(e: &ExponentEstimate) -> String {
    if e.is_exact() {
        format!("{} (exact)", fmt_value(e.value))
    } else {
        format!(
            "{} ± {:.2e} (mc, n={}, T={})",
            fmt_value(e.value),
            e.half_width_95(),
            e.steps,
            e.trials
        )
    }
}

/// Six decimals at most, trailing zeros dropped.
fn num(x: f64) -> String {
    let s = format!("{x:.6}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" {
        "0".into()
    } else {
        s.into()
    }
}

fn fmt_value(v: TropicalValue) -> String {
    v.value().map_or_else(|| "-inf".into(), num)
}

fn fmt_nodes(nodes: &[usize]) -> String {
    let names: Vec<String> = nodes.iter().map(usize::to_string).collect();
    format!("{{{}}}", names.join(","))
}

/// One line per row, columns right-aligned.
fn fmt_matrix(m: &TropicalMatrix) -> String {
    let cells: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(|&v| fmt_value(v)).collect())
        .collect();
    let width = cells.iter().flatten().map(String::len).max().unwrap_or(1);
    let mut s = String::new();
    for row in cells {
        let line: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
        let _ = writeln!(s, "  {}", line.join(" "));
    }
    s
}
