use std::fmt::Write;

use maxplus_lln::report::AnalysisReport;
use maxplus_lln::verdict::{decide_cycle_time, Convergence, VerdictConfig};

use super::{describe_model, fmt_estimate, fmt_nodes, fmt_value};
use crate::args::AnalyzeArgs;
use crate::model::{components_are_random, load_model, require_seed};
use crate::output::{Outcome, Status};

pub fn run(args: &AnalyzeArgs) -> anyhow::Result<Outcome> {
    let law = load_model(&args.model)?;
    let seed = require_seed(args.mc.seed, components_are_random(&law)?, "analyze")?;
    let config = VerdictConfig {
        steps: args.mc.steps,
        trials: args.mc.trials,
        seed,
        epsilon_gamma: args.epsilon_gamma,
    };
    let verdict = decide_cycle_time(&law, &config)?;
    let report = AnalysisReport::new(&law, &verdict);
    let status = match verdict.converges {
        Convergence::Converges => Status::Ok,
        Convergence::Diverges => Status::NoCycleTime,
        Convergence::IndeterminateTie => Status::Indeterminate,
    };
    Outcome::new(&report, render(&report), status)
}

fn render(r: &AnalysisReport) -> String {
    let mut s = describe_model(&r.model);
    let arcs: Vec<String> = r.arcs.iter().map(|(i, j)| format!("{i}->{j}")).collect();
    let _ = writeln!(s, "arcs: {}", arcs.join(" "));
    let _ = writeln!(s, "components:");
    for c in &r.components {
        let _ = writeln!(
            s,
            "  c{} {}{}  gamma = {}  downstream max = {}",
            c.id,
            fmt_nodes(&c.nodes),
            if c.trivial { " (trivial)" } else { "" },
            fmt_estimate(&c.gamma),
            fmt_value(c.gamma_downstream)
        );
        let _ = writeln!(
            s,
            "     E = {}  G = {}  H = {}{}",
            fmt_components(&c.downstream),
            fmt_components(&c.dominant),
            fmt_nodes(&c.dominant_nodes),
            if c.dominating { "  dominating" } else { "" }
        );
        if c.row_condition.holds {
            let _ = writeln!(s, "     row condition on H: holds");
        } else {
            let witnesses: Vec<String> = c
                .row_condition
                .witnesses
                .iter()
                .map(|w| format!("atom {} row {}", w.atom, w.row))
                .collect();
            let _ = writeln!(
                s,
                "     row condition on H: fails ({})",
                witnesses.join(", ")
            );
        }
    }
    let verdict = match r.converges {
        Convergence::Converges => "cycle time exists",
        Convergence::Diverges => "no cycle time",
        Convergence::IndeterminateTie => "indeterminate (near-tie between estimated exponents)",
    };
    let _ = writeln!(
        s,
        "verdict: {verdict}{}",
        if r.tie_sensitive {
            " [tie-sensitive]"
        } else {
            ""
        }
    );
    if let Some(limit) = &r.limit {
        let entries: Vec<String> = limit
            .iter()
            .map(|l| match l.stderr {
                Some(se) => format!("{} ± {:.2e}", fmt_value(l.value), 1.96 * se),
                None => fmt_value(l.value),
            })
            .collect();
        let _ = writeln!(s, "limit: ({})", entries.join(", "));
    }
    s
}

fn fmt_components(ids: &[usize]) -> String {
    let names: Vec<String> = ids.iter().map(|c| format!("c{c}")).collect();
    format!("{{{}}}", names.join(","))
}
