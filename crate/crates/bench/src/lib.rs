//! Seeded workloads shared by the benchmarks.

use rand::Rng;
use robustfair::gen::{random_colored_clustering, random_digraph, rng};
use robustfair::{Clustering, ColorProfile, DirectedGraph, Vertex};

/// A random digraph and `pairs` distinct ordered pairs on it.
pub fn reachability_workload(
    n: usize,
    p: f64,
    pairs: usize,
    seed: u64,
) -> (DirectedGraph, Vec<(Vertex, Vertex)>) {
    let g = random_digraph(n, p, seed).expect("valid density");
    let mut r = rng(seed ^ 0x5eed);
    let mut chosen = Vec::with_capacity(pairs);
    while chosen.len() < pairs.min(n * (n - 1)) {
        let (s, t) = (r.gen_range(0..n), r.gen_range(0..n));
        if s != t && !chosen.contains(&(s, t)) {
            chosen.push((s, t));
        }
    }
    (g, chosen)
}

/// The reference size `n^{4/3} |P|^{1/3}`.
pub fn size_reference(n: usize, pairs: usize) -> f64 {
    (n as f64).powf(4.0 / 3.0) * (pairs as f64).powf(1.0 / 3.0)
}

/// `count` random clusterings sharing one coloring.
pub fn clustering_workload(
    ratio: &[u64],
    multiplier: usize,
    count: usize,
    seed: u64,
) -> (Vec<Clustering>, ColorProfile) {
    let (first, prof) = random_colored_clustering(ratio, multiplier, seed).expect("valid ratio");
    let mut out = vec![first];
    let mut r = rng(seed + 1);
    while out.len() < count {
        out.push(robustfair::gen::random_clustering_with(prof.n(), &mut r));
    }
    (out, prof)
}
