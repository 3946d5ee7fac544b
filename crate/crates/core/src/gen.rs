//! Seeded instance generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cluster::{Clustering, ColorProfile, WeightedCcInstance};
use crate::error::{Error, Result};
use crate::graph::DirectedGraph;
use crate::streaming::StreamTriple;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Every ordered pair `u ≠ v` becomes an edge with probability `p`.
pub fn random_digraph(n: usize, p: f64, seed: u64) -> Result<DirectedGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!("edge probability {p} outside [0, 1]")));
    }
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if u != v && r.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    DirectedGraph::new(n, edges)
}

/// Uniform labels drawn from `0..k` with `k` itself uniform in `1..=n`.
pub fn random_clustering(n: usize, seed: u64) -> Clustering {
    let mut r = rng(seed);
    random_clustering_with(n, &mut r)
}

pub fn random_clustering_with(n: usize, r: &mut impl Rng) -> Clustering {
    let k = r.gen_range(1..=n.max(1));
    let labels: Vec<usize> = (0..n).map(|_| r.gen_range(0..k)).collect();
    Clustering::from_labels(&labels)
}

/// A coloring holding `multiplier` copies of `ratio`, shuffled.
pub fn random_profile(ratio: &[u64], multiplier: usize, seed: u64) -> Result<ColorProfile> {
    let mut r = rng(seed);
    random_profile_with(ratio, multiplier, &mut r)
}

pub fn random_profile_with(ratio: &[u64], multiplier: usize, r: &mut impl Rng) -> Result<ColorProfile> {
    if multiplier == 0 {
        return Err(Error::InvalidInput("multiplier must be positive".into()));
    }
    let mut colors: Vec<usize> = ratio
        .iter()
        .enumerate()
        .flat_map(|(c, &p)| std::iter::repeat_n(c, p as usize * multiplier))
        .collect();
    colors.shuffle(r);
    ColorProfile::with_ratio(colors, ratio)
}

/// A random clustering over a random coloring with the given ratio.
pub fn random_colored_clustering(
    ratio: &[u64],
    multiplier: usize,
    seed: u64,
) -> Result<(Clustering, ColorProfile)> {
    let mut r = rng(seed);
    let prof = random_profile_with(ratio, multiplier, &mut r)?;
    Ok((random_clustering_with(prof.n(), &mut r), prof))
}

/// Weights `w⁺ = a/denom` with `a` uniform in `0..=denom`.
pub fn random_cc_instance(n: usize, denom: u64, seed: u64) -> Result<WeightedCcInstance> {
    let mut r = rng(seed);
    let mut inst = WeightedCcInstance::new(n, denom)?;
    for u in 0..n {
        for v in u + 1..n {
            inst.set_numerator(u, v, r.gen_range(0..=denom))?;
        }
    }
    Ok(inst)
}

/// Every unordered pair of every clustering once, in shuffled order.
pub fn complete_stream(clusterings: &[Clustering], seed: u64) -> Result<Vec<StreamTriple>> {
    let n = clusterings.first().map_or(0, Clustering::n);
    let mut out = Vec::with_capacity(clusterings.len() * n * n.saturating_sub(1) / 2);
    for (j, c) in clusterings.iter().enumerate() {
        if c.n() != n {
            return Err(Error::UniverseMismatch(c.n(), n));
        }
        for u in 0..n {
            for v in u + 1..n {
                out.push(StreamTriple { u, v, j, separated: !c.together(u, v) });
            }
        }
    }
    out.shuffle(&mut rng(seed));
    Ok(out)
}
