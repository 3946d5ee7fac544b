use std::fs;

use anyhow::{Context, Result};
use robustfair::graph::{parse_graph, parse_pairs};
use robustfair::oracle::{oracle_verify_ftrs, FaultMode, DEFAULT_SAMPLES};
use robustfair::{build_pairwise_2ftrs, build_pairwise_2ftrs_slack, Preserver};
use serde_json::json;

use crate::args::FtrsCmd;
use crate::report::{sha256, sig12, Outcome};

pub fn run(cmd: &FtrsCmd) -> Result<Outcome> {
    match cmd {
        FtrsCmd::Build { graph, pairs, out, slack, .. } => {
            let mut o = Outcome::new("ftrs build", json!({ "slack": slack }));
            let g = parse_graph(&o.read(graph)?).with_context(|| graph.display().to_string())?;
            let p = parse_pairs(&o.read(pairs)?, g.n()).with_context(|| pairs.display().to_string())?;
            let (h, covered) = if *slack {
                let r = build_pairwise_2ftrs_slack(&g, &p)?;
                let covered = r.covered.len();
                (r.preserver, Some(covered))
            } else {
                (build_pairwise_2ftrs(&g, &p)?, None)
            };
            let reference = (g.n() as f64).powf(4.0 / 3.0) * (p.len() as f64).powf(1.0 / 3.0);
            let max_in = (0..g.n()).map(|v| h.in_degree(v)).max().unwrap_or(0);
            let text = serde_json::to_string(&h)?;
            let preserver = match out {
                Some(path) => {
                    fs::write(path, &text).with_context(|| format!("writing {}", path.display()))?;
                    json!({ "path": path.display().to_string(), "sha256": sha256(&text) })
                }
                None => json!({ "preserver": h, "sha256": sha256(&text) }),
            };
            o.result = json!({
                "n": g.n(),
                "graph_edges": g.m(),
                "pairs": p.len(),
                "covered_pairs": covered,
                "preserver_edges": h.len(),
                "max_in_degree": max_in,
                "size_reference": sig12(reference),
                "output": preserver,
            });
            Ok(o)
        }
        FtrsCmd::Verify { graph, preserver, exhaustive, samples, seed, .. } => {
            let mode = match (exhaustive, samples) {
                (true, _) => FaultMode::Exhaustive,
                (false, Some(s)) => FaultMode::Sampled { samples: *s, seed: *seed },
                (false, None) => FaultMode::Auto { samples: DEFAULT_SAMPLES, seed: *seed },
            };
            let mut o = Outcome::new(
                "ftrs verify",
                json!({ "exhaustive": exhaustive, "samples": samples, "faults": 2 }),
            )
            .seed(*seed);
            let g = parse_graph(&o.read(graph)?).with_context(|| graph.display().to_string())?;
            let h: Preserver =
                serde_json::from_str(&o.read(preserver)?).with_context(|| preserver.display().to_string())?;
            if h.n != g.n() {
                anyhow::bail!("preserver has {} vertices but the graph has {}", h.n, g.n());
            }
            for &(s, t) in &h.pairs {
                g.check_vertex(s)?;
                g.check_vertex(t)?;
            }
            let verdict = oracle_verify_ftrs(&g, &h.edges, &h.pairs, 2, mode)?;
            o.passed = verdict.passed;
            o.result = json!({
                "pairs": h.pairs.len(),
                "preserver_edges": h.len(),
                "verdict": verdict,
            });
            Ok(o)
        }
    }
}
