use anyhow::{anyhow, Result};
use robustfair::cluster::parse_weighted;
use robustfair::oracle::{bell, oracle_cc_opt, oracle_fair_consensus, PartitionOracle, DEFAULT_CAP};
use serde_json::json;

use crate::args::OracleCmd;
use crate::report::{big, colored_file, colors_file, labels, profile, rational, sig12, Outcome};

pub fn run(cmd: &OracleCmd) -> Result<Outcome> {
    match cmd {
        OracleCmd::ClosestFair { input, ratio, .. } => {
            let mut o = Outcome::new("oracle closest-fair", json!({ "ratio": ratio }));
            let (c, prof) = colored_file(&mut o, input, ratio.as_deref())?;
            let mut oracle = PartitionOracle::fair(&prof, DEFAULT_CAP)?;
            let (best, d) = oracle.closest(&c)?;
            o.result = json!({
                "distance": d,
                "clustering": labels(&best),
                "enumerated": oracle.len(),
            });
            Ok(o)
        }
        OracleCmd::FairConsensus { inputs, ratio, ell, .. } => {
            let mut o = Outcome::new("oracle fair-consensus", json!({ "ratio": ratio, "ell": ell }));
            let mut cs = Vec::new();
            let mut colors = None;
            for path in inputs {
                let (c, col) = crate::report::clustering_file(&mut o, path)?;
                colors = colors.or(col);
                cs.push(c);
            }
            let colors = colors.ok_or_else(|| anyhow!("no input file carries a color column"))?;
            let prof = profile(colors, ratio.as_deref())?;
            let best = oracle_fair_consensus(&cs, &prof, *ell)?;
            o.result = json!({
                "power_sum": big(best.power_sum),
                "objective": sig12(best.objective),
                "clustering": labels(&best.clustering),
                "enumerated": best.enumerated,
            });
            Ok(o)
        }
        OracleCmd::CcOpt { weights, colors, ratio, .. } => {
            let mut o = Outcome::new("oracle cc-opt", json!({ "ratio": ratio, "fair": colors.is_some() }));
            let prof = match colors {
                Some(path) => Some(profile(colors_file(&mut o, path)?, ratio.as_deref())?),
                None => None,
            };
            let text = o.read(weights)?;
            let inst = parse_weighted(&text, prof.as_ref().map_or(0, |p| p.n()))
                .map_err(|e| anyhow!("{}: {e}", weights.display()))?;
            let (best, cost) = oracle_cc_opt(&inst, prof.as_ref())?;
            let enumerated = match &prof {
                Some(p) => PartitionOracle::fair(p, DEFAULT_CAP)?.len() as u64,
                None => bell(inst.n()),
            };
            o.result = json!({
                "cost": rational(cost),
                "clustering": labels(&best),
                "enumerated": enumerated,
            });
            Ok(o)
        }
    }
}
