use std::path::{Path, PathBuf};

use anyhow::{bail, Result};
use robustfair::cluster::{cc_cost, consensus_power_sum, format_clustering, parse_weighted};
use robustfair::fair::multicolor::{
    binary_groups, create_pdc_bound, fair_equi_bound, fair_equi_staged, fair_general_bound,
    fair_general_staged, make_pdc_fair_bound, power_of_two_bound,
};
use robustfair::fair::two_color::{self, closest_fair_two_color_staged};
use robustfair::oracle::{oracle_cc_opt, oracle_fair_consensus, PartitionOracle, DEFAULT_CAP};
use robustfair::reductions::AutoFair;
use robustfair::streaming::{parse_stream, Provenance};
use robustfair::{
    algo_fair_con_stream, dist, fair_consensus_offline, fairfy_cc, is_fair, Clustering, ColorProfile,
    FairMethod, Rational, SolverHandle, StreamParams,
};
use serde_json::{json, Value};

use crate::args::{FairCmd, Method};
use crate::report::{
    big, clustering_file, colored_file, colors_file, emit_text, labels, parse_ratio, profile, ratio,
    rational, sig12, within, Outcome,
};

pub fn run(cmd: &FairCmd) -> Result<Outcome> {
    match cmd {
        FairCmd::Closest { input, ratio, method, oracle, out, .. } => {
            closest(input, ratio.as_deref(), *method, *oracle, out.as_ref())
        }
        FairCmd::Consensus { inputs, ratio, ell, oracle, out, .. } => {
            consensus(inputs, ratio.as_deref(), *ell, *oracle, out.as_ref())
        }
        FairCmd::Stream { stream, n, m, ratio, colors, g, eps, ell, seed, out, .. } => {
            let params = StreamParams { n: *n, m: *m, g: *g, eps: *eps, ell: *ell, seed: *seed };
            stream_cmd(stream, &params, ratio.as_deref(), colors.as_ref(), out.as_ref())
        }
        FairCmd::FairfyCc { weights, colors, ratio, seed, oracle, out, .. } => {
            fairfy(weights, colors, ratio.as_deref(), *seed, *oracle, out.as_ref())
        }
    }
}

enum Reference {
    DivisibleOfPrevious,
    FairOfPrevious,
    FairOfInput,
}

struct Stage {
    name: &'static str,
    clustering: Clustering,
    bound: Option<f64>,
    reference: Reference,
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::Auto => "auto",
        Method::TwoColor => "two-color",
        Method::Equal => "equal",
        Method::General => "general",
    }
}

fn resolve(method: Method, prof: &ColorProfile) -> Method {
    match (method, FairMethod::for_profile(prof)) {
        (Method::Auto, FairMethod::TwoColor) => Method::TwoColor,
        (Method::Auto, FairMethod::Equal) => Method::Equal,
        (Method::Auto, FairMethod::General) => Method::General,
        (m, _) => m,
    }
}

/// Intermediate clusterings, their proved bounds, and the end-to-end bound.
fn stages(c: &Clustering, prof: &ColorProfile, method: Method) -> Result<(Vec<Stage>, f64)> {
    let d = prof.d();
    Ok(match method {
        Method::TwoColor => {
            let s = closest_fair_two_color_staged(c, prof)?;
            let unit = prof.ratio().iter().all(|&p| p == 1);
            let (fair_bound, total) = if unit {
                (fair_equi_bound(2), fair_equi_bound(2))
            } else {
                (two_color::MAKE_FAIR_BOUND, two_color::PIPELINE_BOUND)
            };
            let pdc = Stage {
                name: "pdc",
                clustering: s.pdc,
                bound: Some(two_color::PDC_BOUND),
                reference: Reference::DivisibleOfPrevious,
            };
            let fair = Stage {
                name: "fair",
                clustering: s.fair,
                bound: Some(fair_bound),
                reference: Reference::FairOfPrevious,
            };
            (vec![pdc, fair], total)
        }
        Method::Equal => {
            let (balanced, fair) = fair_equi_staged(c, prof)?;
            let groups = binary_groups(d);
            let first = (groups.len() == 1).then(|| power_of_two_bound(d));
            let balanced = Stage {
                name: "balanced",
                clustering: balanced,
                bound: first,
                reference: Reference::FairOfInput,
            };
            let fair = Stage {
                name: "fair",
                clustering: fair,
                bound: Some(make_pdc_fair_bound(groups.len())),
                reference: Reference::FairOfPrevious,
            };
            (vec![balanced, fair], fair_equi_bound(d))
        }
        Method::General | Method::Auto => {
            let (pdc, fair) = fair_general_staged(c, prof)?;
            let pdc = Stage {
                name: "pdc",
                clustering: pdc,
                bound: Some(create_pdc_bound(d)),
                reference: Reference::DivisibleOfPrevious,
            };
            let fair = Stage {
                name: "fair",
                clustering: fair,
                bound: Some(make_pdc_fair_bound(d)),
                reference: Reference::FairOfPrevious,
            };
            (vec![pdc, fair], fair_general_bound(d))
        }
    })
}

fn closest(
    input: &Path,
    ratio_arg: Option<&str>,
    method: Method,
    oracle: bool,
    out: Option<&PathBuf>,
) -> Result<Outcome> {
    let mut o = Outcome::new(
        "fair closest",
        json!({ "ratio": ratio_arg, "method": method_name(method), "oracle": oracle }),
    );
    let (c, prof) = colored_file(&mut o, input, ratio_arg)?;
    let method = resolve(method, &prof);
    let (stages, total_bound) = stages(&c, &prof, method)?;
    let fair = &stages.last().expect("two stages").clustering;
    if !is_fair(fair, &prof) {
        bail!("internal error: output is not fair");
    }
    let total = dist(&c, fair)?;

    let mut oracles = oracle
        .then(|| -> Result<_> {
            Ok((PartitionOracle::fair(&prof, DEFAULT_CAP)?, PartitionOracle::divisible(&prof, DEFAULT_CAP)?))
        })
        .transpose()?;
    let opt = match oracles.as_mut() {
        Some((f, _)) => Some(f.closest_distance(&c)?),
        None => None,
    };

    let mut passed = true;
    let mut report = Vec::new();
    let mut prev = &c;
    for s in &stages {
        let d = dist(prev, &s.clustering)?;
        let mut entry = json!({ "stage": s.name, "distance": d, "bound": s.bound.map(sig12) });
        if let Some((fair_or, div_or)) = oracles.as_mut() {
            let best = match s.reference {
                Reference::DivisibleOfPrevious => div_or.closest_distance(prev)?,
                Reference::FairOfPrevious => fair_or.closest_distance(prev)?,
                Reference::FairOfInput => opt.expect("oracle ran"),
            };
            let ok = s.bound.is_none_or(|b| within(d, best, b));
            passed &= ok;
            entry["oracle_distance"] = best.into();
            entry["ratio"] = ratio(d, best);
            entry["within_bound"] = ok.into();
        }
        report.push(entry);
        prev = &s.clustering;
    }
    let mut total_entry = json!({ "distance": total, "bound": sig12(total_bound) });
    if let (Some(best), Some((fair_or, div_or))) = (opt, oracles.as_ref()) {
        let ok = within(total, best, total_bound);
        passed &= ok;
        total_entry["oracle_distance"] = best.into();
        total_entry["ratio"] = ratio(total, best);
        total_entry["within_bound"] = ok.into();
        total_entry["enumerated"] = json!({ "fair": fair_or.len(), "divisible": div_or.len() });
    }
    o.passed = passed;
    let mut result = json!({
        "method": method_name(method),
        "n": c.n(),
        "ratio": prof.ratio(),
        "stages": report,
        "total": total_entry,
        "clustering": labels(fair),
    });
    if !passed {
        result["counterexample"] = json!({ "input": labels(&c), "colors": prof.colors() });
    }
    if let Some(path) = out {
        result["output"] = emit_text(Some(path), "text", &format_clustering(fair, Some(&prof)))?;
    }
    o.result = result;
    Ok(o)
}

/// Reads several clustering files; colors come from the first one that has them.
fn load_inputs(
    o: &mut Outcome,
    paths: &[PathBuf],
    ratio_arg: Option<&str>,
) -> Result<(Vec<Clustering>, ColorProfile)> {
    let mut inputs = Vec::new();
    let mut colors = None;
    for path in paths {
        let (c, col) = clustering_file(o, path)?;
        if let Some(first) = inputs.first().map(Clustering::n) {
            if c.n() != first {
                bail!("{}: {} vertices, expected {first}", path.display(), c.n());
            }
        }
        if colors.is_none() {
            colors = col;
        }
        inputs.push(c);
    }
    let Some(colors) = colors else {
        bail!("no input file carries a color column");
    };
    Ok((inputs, profile(colors, ratio_arg)?))
}

fn consensus(
    paths: &[PathBuf],
    ratio_arg: Option<&str>,
    ell: u32,
    oracle: bool,
    out: Option<&PathBuf>,
) -> Result<Outcome> {
    if ell == 0 {
        bail!("--ell must be at least 1");
    }
    let mut o = Outcome::new("fair consensus", json!({ "ratio": ratio_arg, "ell": ell, "oracle": oracle }));
    let (inputs, prof) = load_inputs(&mut o, paths, ratio_arg)?;
    let choice = fair_consensus_offline(&inputs, &prof, ell, &AutoFair)?;
    let sums: Vec<Value> = choice
        .candidates
        .iter()
        .map(|f| consensus_power_sum(&inputs, f, ell).map(big))
        .collect::<Result<_, _>>()?;
    let mut result = json!({
        "n": prof.n(),
        "m": inputs.len(),
        "ratio": prof.ratio(),
        "chosen": choice.index,
        "power_sum": big(choice.power_sum),
        "objective": sig12(choice.objective),
        "candidate_power_sums": sums,
        "clustering": labels(&choice.clustering),
    });
    if oracle {
        let best = oracle_fair_consensus(&inputs, &prof, ell)?;
        let mut fair_or = PartitionOracle::fair(&prof, DEFAULT_CAP)?;
        // worst observed closeness of the fair solver over the inputs
        let mut alpha: Option<Rational> = Some(Rational::from_integer(0));
        for (c, f) in inputs.iter().zip(&choice.candidates) {
            let (d, best) = (dist(c, f)?, fair_or.closest_distance(c)?);
            alpha = match (alpha, d, best) {
                (None, ..) | (_, 1.., 0) => None,
                (Some(a), _, 0) => Some(a),
                (Some(a), d, b) => Some(a.max(Rational::new(d as i128, b as i128))),
            };
        }
        let ok = match alpha {
            None => true,
            Some(a) if ell == 1 => {
                let lhs = Rational::from_integer(choice.power_sum as i128);
                lhs <= (a + 2) * Rational::from_integer(best.power_sum as i128)
            }
            Some(a) => {
                let factor = *(a + 2).numer() as f64 / *(a + 2).denom() as f64;
                choice.objective <= factor * best.objective * (1.0 + 1e-12)
            }
        };
        o.passed = ok;
        result["oracle"] = json!({
            "power_sum": big(best.power_sum),
            "objective": sig12(best.objective),
            "clustering": labels(&best.clustering),
            "enumerated": best.enumerated,
            "alpha_empirical": alpha.map_or(Value::from("inf"), rational),
            "within_bound": ok,
        });
    }
    if let Some(path) = out {
        result["output"] =
            emit_text(Some(path), "text", &format_clustering(&choice.clustering, Some(&prof)))?;
    }
    o.result = result;
    Ok(o)
}

/// `multiplier` copies of each color in consecutive blocks.
fn block_colors(n: usize, ratio: &[u64]) -> Result<Vec<usize>> {
    let unit: u64 = ratio.iter().sum();
    if !(n as u64).is_multiple_of(unit) {
        bail!("n = {n} is not a multiple of the ratio total {unit}");
    }
    let k = n / unit as usize;
    Ok(ratio.iter().enumerate().flat_map(|(c, &p)| std::iter::repeat_n(c, p as usize * k)).collect())
}

fn stream_cmd(
    stream: &Path,
    params: &StreamParams,
    ratio_arg: Option<&str>,
    colors: Option<&PathBuf>,
    out: Option<&PathBuf>,
) -> Result<Outcome> {
    let mut o = Outcome::new(
        "fair stream",
        json!({
            "n": params.n, "m": params.m, "g": params.g, "eps": params.eps, "ell": params.ell,
            "ratio": ratio_arg, "colors": colors.is_some(),
        }),
    )
    .seed(params.seed);
    let prof = match (colors, ratio_arg) {
        (Some(path), r) => profile(colors_file(&mut o, path)?, r)?,
        (None, Some(r)) => {
            ColorProfile::with_ratio(block_colors(params.n, &parse_ratio(r)?)?, &parse_ratio(r)?)?
        }
        (None, None) => bail!("fair stream needs --colors or --ratio"),
    };
    if prof.n() != params.n {
        bail!("coloring has {} vertices but --n is {}", prof.n(), params.n);
    }
    let text = o.read(stream)?;
    let triples = parse_stream(&text).map_err(|e| anyhow::anyhow!("{}: {e}", stream.display()))?;
    let handles = SolverHandle::reference(params.seed);
    let outcome = algo_fair_con_stream(triples, params, &prof, &handles)?;
    let budget = outcome.record_budget(params.n);
    let provenance: Vec<Provenance> = outcome.candidates.members.iter().map(|c| c.provenance).collect();
    let mut result = json!({
        "sampled_j": outcome.sampled_j,
        "sampled_k": outcome.sampled_k,
        "candidates": provenance,
        "chosen": {
            "index": outcome.chosen,
            "provenance": outcome.candidates.members[outcome.chosen].provenance,
        },
        "power_sum": big(outcome.power_sum),
        "objective": sig12(outcome.objective),
        "clustering": labels(&outcome.clustering),
        "space": {
            "peak_records": outcome.peak_records,
            "record_budget": budget,
            "triples": outcome.triples,
            "dropped": outcome.dropped,
        },
    });
    if let Some(path) = out {
        result["output"] =
            emit_text(Some(path), "text", &format_clustering(&outcome.clustering, Some(&prof)))?;
    }
    o.passed = outcome.peak_records <= budget;
    o.result = result;
    Ok(o)
}

fn fairfy(
    weights: &Path,
    colors: &Path,
    ratio_arg: Option<&str>,
    seed: u64,
    oracle: bool,
    out: Option<&PathBuf>,
) -> Result<Outcome> {
    let mut o = Outcome::new("fair fairfy-cc", json!({ "ratio": ratio_arg, "oracle": oracle })).seed(seed);
    let prof = profile(colors_file(&mut o, colors)?, ratio_arg)?;
    let text = o.read(weights)?;
    let inst = parse_weighted(&text, prof.n()).map_err(|e| anyhow::anyhow!("{}: {e}", weights.display()))?;
    let handles = SolverHandle::reference(seed);
    let unfair = handles.unfair.solve(&inst)?;
    let fair = fairfy_cc(&inst, &prof, &handles)?;
    let (cost_fair, cost_unfair) = (cc_cost(&inst, &fair)?, cc_cost(&inst, &unfair)?);
    let moved = Rational::from_integer(dist(&fair, &unfair)? as i128);
    let upper = cost_fair <= moved + cost_unfair;
    let lower = moved <= cost_fair + cost_unfair;
    o.passed = upper && lower;
    let mut result = json!({
        "n": inst.n(),
        "ratio": prof.ratio(),
        "unfair_cost": rational(cost_unfair),
        "fair_cost": rational(cost_fair),
        "moved_pairs": *moved.numer() as u64,
        "declared_factor": sig12(handles.fairfy_factor(&prof)),
        "checks": { "cost_upper": upper, "distance_upper": lower },
        "clustering": labels(&fair),
    });
    if !o.passed {
        result["counterexample"] = json!({ "unfair": labels(&unfair), "fair": labels(&fair) });
    }
    if oracle {
        let (best, cost) = oracle_cc_opt(&inst, Some(&prof))?;
        let r = if cost == Rational::from_integer(0) {
            if cost_fair == cost {
                "0".into()
            } else {
                "inf".into()
            }
        } else {
            rational(cost_fair / cost)
        };
        result["oracle"] =
            json!({ "fair_opt_cost": rational(cost), "clustering": labels(&best), "ratio": r });
    }
    if let Some(path) = out {
        result["output"] = emit_text(Some(path), "text", &format_clustering(&fair, Some(&prof)))?;
    }
    o.result = result;
    Ok(o)
}
