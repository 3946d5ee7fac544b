use anyhow::{bail, Result};
use robustfair::cluster::{format_clustering, format_weighted};
use robustfair::fair::{gen_np_hard_instance, solve_three_partition, three_partition_witness};
use robustfair::gen::{
    complete_stream, random_cc_instance, random_clustering, random_clustering_with,
    random_colored_clustering, random_digraph, rng,
};
use robustfair::graph::format_graph;
use robustfair::streaming::format_stream;
use robustfair::{dist, Clustering};
use serde_json::json;

use crate::args::{GenCmd, Kind};
use crate::report::{emit_text, labels, parse_ratio, Outcome};

pub fn run(cmd: &GenCmd) -> Result<Outcome> {
    match cmd {
        GenCmd::Threepartition { items, p, out, .. } => {
            let mut o = Outcome::new("gen threepartition", json!({ "items": items, "p": p }));
            let inst = gen_np_hard_instance(items, *p)?;
            let text = format_clustering(&inst.clustering, Some(&inst.profile));
            let mut result = json!({
                "tau": inst.tau,
                "target": inst.target,
                "n": inst.profile.n(),
                "blue_clusters": inst.blue_clusters.len(),
                "red_clusters": inst.red_clusters.len(),
                "instance": emit_text(out.as_ref(), "text", &text)?,
            });
            match solve_three_partition(items, inst.target) {
                Some(triples) => {
                    let w = three_partition_witness(&inst, &triples)?;
                    let d = dist(&inst.clustering, &w)?;
                    o.passed = d == inst.tau;
                    result["witness"] = json!({
                        "triples": triples,
                        "distance": d,
                        "matches_tau": d == inst.tau,
                        "clustering": labels(&w),
                    });
                }
                None => result["witness"] = serde_json::Value::Null,
            }
            o.result = result;
            Ok(o)
        }
        GenCmd::Random { kind, n, p, m, ratio, denom, seed, out, .. } => {
            let mut params = json!({ "n": n });
            let text = match kind {
                Kind::Digraph => {
                    params["kind"] = "digraph".into();
                    params["p"] = json!(p);
                    format_graph(&random_digraph(*n, *p, *seed)?)
                }
                Kind::Clustering => {
                    params["kind"] = "clustering".into();
                    params["ratio"] = json!(ratio);
                    match ratio {
                        Some(r) => {
                            let r = parse_ratio(r)?;
                            let unit: u64 = r.iter().sum();
                            if !(*n as u64).is_multiple_of(unit) {
                                bail!("n = {n} is not a multiple of the ratio total {unit}");
                            }
                            let (c, prof) = random_colored_clustering(&r, *n / unit as usize, *seed)?;
                            format_clustering(&c, Some(&prof))
                        }
                        None => format_clustering(&random_clustering(*n, *seed), None),
                    }
                }
                Kind::Stream => {
                    params["kind"] = "stream".into();
                    params["m"] = json!(m);
                    let mut r = rng(*seed);
                    let cs: Vec<Clustering> = (0..*m).map(|_| random_clustering_with(*n, &mut r)).collect();
                    format_stream(&complete_stream(&cs, *seed)?)
                }
                Kind::CcInstance => {
                    params["kind"] = "cc-instance".into();
                    params["denom"] = json!(denom);
                    format_weighted(&random_cc_instance(*n, *denom, *seed)?)
                }
            };
            let mut o = Outcome::new("gen random", params).seed(*seed);
            o.result = emit_text(out.as_ref(), "instance", &text)?;
            Ok(o)
        }
    }
}
