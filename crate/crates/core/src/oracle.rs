//! Brute-force reference answers.
//!
//! Nothing here calls the algorithm modules: reachability, distances and
//! fairness are recomputed from the raw data.

use std::collections::{BTreeSet, HashMap, HashSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cluster::{Clustering, ColorProfile, Rational, WeightedCcInstance};
use crate::error::{Error, Result};
use crate::graph::{DirectedGraph, Edge, Vertex};

/// Default largest universe the partition oracles enumerate.
pub const DEFAULT_CAP: usize = 10;
/// Beyond this the partition count exceeds Bell(12) and enumeration aborts.
pub const HARD_CAP: usize = 12;
/// Fault-set count above which automatic mode samples instead.
pub const SAMPLE_THRESHOLD: usize = 5000;
pub const DEFAULT_SAMPLES: usize = 10_000;

/// Set partitions of `0..n` as restricted-growth strings, in
/// lexicographic order.
pub struct Partitions {
    labels: Vec<usize>,
    max: Vec<usize>,
    done: bool,
}

impl Partitions {
    pub fn new(n: usize, cap: usize) -> Result<Self> {
        let cap = cap.min(HARD_CAP);
        if n > cap {
            return Err(Error::TooLarge { n, cap });
        }
        Ok(Partitions { labels: vec![0; n], max: vec![0; n], done: false })
    }
}

impl Iterator for Partitions {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.labels.clone();
        let n = self.labels.len();
        let mut i = n;
        loop {
            if i <= 1 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.labels[i] <= self.max[i - 1] {
                self.labels[i] += 1;
                self.max[i] = self.max[i - 1].max(self.labels[i]);
                for j in i + 1..n {
                    self.labels[j] = 0;
                    self.max[j] = self.max[i];
                }
                break;
            }
        }
        Some(out)
    }
}

pub fn bell(n: usize) -> u64 {
    let mut row = vec![1u64];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for &x in &row {
            next.push(next.last().unwrap() + x);
        }
        row = next;
    }
    row[0]
}

/// Bit `(u, v)` set iff `u` and `v` share a label. Needs `n ≤ 16`.
pub fn pair_mask(labels: &[usize]) -> u128 {
    let n = labels.len();
    assert!(n <= 16, "pair masks cover at most 16 vertices");
    let mut mask = 0u128;
    let mut bit = 0;
    for u in 0..n {
        for v in u + 1..n {
            if labels[u] == labels[v] {
                mask |= 1 << bit;
            }
            bit += 1;
        }
    }
    mask
}

/// Partition distance by scanning every pair.
pub fn pair_scan_dist(a: &[usize], b: &[usize]) -> u64 {
    let mut d = 0;
    for u in 0..a.len() {
        for v in u + 1..a.len() {
            if (a[u] == a[v]) != (b[u] == b[v]) {
                d += 1;
            }
        }
    }
    d
}

fn class_counts(labels: &[usize], colors: &[usize], d: usize) -> Vec<Vec<usize>> {
    let k = labels.iter().max().map_or(0, |&m| m + 1);
    let mut counts = vec![vec![0usize; d]; k];
    for (v, &l) in labels.iter().enumerate() {
        counts[l][colors[v]] += 1;
    }
    counts
}

/// Independent fairness test from raw labels and colors.
pub fn labels_fair(labels: &[usize], colors: &[usize], ratio: &[u64]) -> bool {
    class_counts(labels, colors, ratio.len())
        .iter()
        .all(|c| c.iter().zip(ratio).all(|(&ci, &pi)| ci as u64 * ratio[0] == c[0] as u64 * pi))
}

/// Independent divisibility test from raw labels and colors.
pub fn labels_divisible(labels: &[usize], colors: &[usize], ratio: &[u64]) -> bool {
    class_counts(labels, colors, ratio.len())
        .iter()
        .all(|c| c.iter().zip(ratio).all(|(&ci, &pi)| (ci as u64).is_multiple_of(pi)))
}

/// The partitions satisfying a predicate, stored as pair masks so nearest
/// queries are a popcount scan. Query answers are memoized.
pub struct PartitionOracle {
    n: usize,
    members: Vec<(Vec<usize>, u128)>,
    memo: HashMap<u128, (usize, u64)>,
}

impl PartitionOracle {
    pub fn new(n: usize, cap: usize, mut keep: impl FnMut(&[usize]) -> bool) -> Result<Self> {
        let members = Partitions::new(n, cap)?
            .filter(|p| keep(p))
            .map(|p| {
                let m = pair_mask(&p);
                (p, m)
            })
            .collect();
        Ok(PartitionOracle { n, members, memo: HashMap::new() })
    }

    pub fn fair(prof: &ColorProfile, cap: usize) -> Result<Self> {
        let colors = prof.colors().to_vec();
        let ratio = prof.ratio().to_vec();
        PartitionOracle::new(prof.n(), cap, |p| labels_fair(p, &colors, &ratio))
    }

    pub fn divisible(prof: &ColorProfile, cap: usize) -> Result<Self> {
        let colors = prof.colors().to_vec();
        let ratio = prof.ratio().to_vec();
        PartitionOracle::new(prof.n(), cap, |p| labels_divisible(p, &colors, &ratio))
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> impl Iterator<Item = &[usize]> {
        self.members.iter().map(|(p, _)| p.as_slice())
    }

    /// Closest member and its distance; ties go to the lexicographically
    /// smallest canonical labelling.
    pub fn closest(&mut self, c: &Clustering) -> Result<(Clustering, u64)> {
        if c.n() != self.n {
            return Err(Error::UniverseMismatch(c.n(), self.n));
        }
        let (idx, d) = self.closest_index(pair_mask(c.labels()))?;
        Ok((Clustering::from_labels(&self.members[idx].0), d))
    }

    pub fn closest_distance(&mut self, c: &Clustering) -> Result<u64> {
        if c.n() != self.n {
            return Err(Error::UniverseMismatch(c.n(), self.n));
        }
        Ok(self.closest_index(pair_mask(c.labels()))?.1)
    }

    fn closest_index(&mut self, mask: u128) -> Result<(usize, u64)> {
        if let Some(&hit) = self.memo.get(&mask) {
            return Ok(hit);
        }
        let mut best: Option<(usize, u64)> = None;
        for (i, (_, m)) in self.members.iter().enumerate() {
            let d = (m ^ mask).count_ones() as u64;
            if best.is_none_or(|(_, b)| d < b) {
                best = Some((i, d));
            }
        }
        let best = best.ok_or_else(|| Error::InvalidInput("no partition satisfies the constraint".into()))?;
        self.memo.insert(mask, best);
        Ok(best)
    }
}

pub fn oracle_closest_fair(c: &Clustering, prof: &ColorProfile) -> Result<(Clustering, u64)> {
    oracle_closest_fair_capped(c, prof, DEFAULT_CAP)
}

pub fn oracle_closest_fair_capped(
    c: &Clustering,
    prof: &ColorProfile,
    cap: usize,
) -> Result<(Clustering, u64)> {
    if c.n() != prof.n() {
        return Err(Error::UniverseMismatch(c.n(), prof.n()));
    }
    PartitionOracle::fair(prof, cap)?.closest(c)
}

pub fn oracle_closest_divisible(c: &Clustering, prof: &ColorProfile) -> Result<(Clustering, u64)> {
    if c.n() != prof.n() {
        return Err(Error::UniverseMismatch(c.n(), prof.n()));
    }
    PartitionOracle::divisible(prof, DEFAULT_CAP)?.closest(c)
}

/// Best fair consensus: the clustering, `Σ dist^ℓ`, and the ℓ-mean.
#[derive(Clone, Debug, PartialEq)]
pub struct ConsensusAnswer {
    pub clustering: Clustering,
    pub power_sum: u128,
    pub objective: f64,
    pub enumerated: usize,
}

pub fn oracle_fair_consensus(
    inputs: &[Clustering],
    prof: &ColorProfile,
    ell: u32,
) -> Result<ConsensusAnswer> {
    if inputs.is_empty() || ell == 0 {
        return Err(Error::InvalidInput("need at least one input and ℓ ≥ 1".into()));
    }
    let masks: Vec<u128> = inputs
        .iter()
        .map(|c| {
            if c.n() != prof.n() {
                Err(Error::UniverseMismatch(c.n(), prof.n()))
            } else {
                Ok(pair_mask(c.labels()))
            }
        })
        .collect::<Result<_>>()?;
    let oracle = PartitionOracle::fair(prof, DEFAULT_CAP)?;
    let mut best: Option<(usize, u128)> = None;
    for (i, (_, m)) in oracle.members.iter().enumerate() {
        let sum: u128 = masks.iter().map(|x| ((x ^ m).count_ones() as u128).pow(ell)).sum();
        if best.is_none_or(|(_, b)| sum < b) {
            best = Some((i, sum));
        }
    }
    let (i, power_sum) = best.ok_or_else(|| Error::InvalidInput("no fair partition".into()))?;
    Ok(ConsensusAnswer {
        clustering: Clustering::from_labels(&oracle.members[i].0),
        power_sum,
        objective: (power_sum as f64).powf(1.0 / ell as f64),
        enumerated: oracle.len(),
    })
}

/// Minimum correlation clustering cost over all partitions, or over fair
/// partitions when a profile is given.
pub fn oracle_cc_opt(
    inst: &WeightedCcInstance,
    fairness: Option<&ColorProfile>,
) -> Result<(Clustering, Rational)> {
    let n = inst.n();
    if let Some(p) = fairness {
        if p.n() != n {
            return Err(Error::UniverseMismatch(n, p.n()));
        }
    }
    let denom = inst.denominator();
    let weights: Vec<u64> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .map(|(u, v)| inst.plus_numerator(u, v))
        .collect();
    let mut best: Option<(Vec<usize>, u128)> = None;
    for p in Partitions::new(n, DEFAULT_CAP)? {
        if let Some(prof) = fairness {
            if !labels_fair(&p, prof.colors(), prof.ratio()) {
                continue;
            }
        }
        let mut cost: u128 = 0;
        let mut k = 0;
        for u in 0..n {
            for v in u + 1..n {
                cost += if p[u] == p[v] { denom - weights[k] } else { weights[k] } as u128;
                k += 1;
            }
        }
        if best.as_ref().is_none_or(|(_, b)| cost < *b) {
            best = Some((p, cost));
        }
    }
    let (p, cost) = best.ok_or_else(|| Error::InvalidInput("no admissible partition".into()))?;
    Ok((Clustering::from_labels(&p), Rational::new(cost as i128, denom as i128)))
}

/// How fault sets are chosen when checking a preserver.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FaultMode {
    /// Exhaustive when at most [`SAMPLE_THRESHOLD`] sets exist, else sampled.
    Auto {
        samples: usize,
        seed: u64,
    },
    Exhaustive,
    Sampled {
        samples: usize,
        seed: u64,
    },
}

impl Default for FaultMode {
    fn default() -> Self {
        FaultMode::Auto { samples: DEFAULT_SAMPLES, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub pair: (Vertex, Vertex),
    pub faults: Vec<Edge>,
    pub reachable_in_graph: bool,
    pub reachable_in_preserver: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FtrsVerdict {
    pub passed: bool,
    pub exhaustive: bool,
    pub fault_sets_checked: usize,
    pub foreign_edge: Option<Edge>,
    pub counterexample: Option<Counterexample>,
}

fn adjacency(n: usize, edges: impl Iterator<Item = Edge>) -> Vec<Vec<Vertex>> {
    let mut adj = vec![Vec::new(); n];
    for (u, v) in edges {
        adj[u].push(v);
    }
    adj
}

fn search(adj: &[Vec<Vertex>], s: Vertex, t: Vertex, faults: &HashSet<Edge>) -> bool {
    let mut seen = vec![false; adj.len()];
    let mut stack = vec![s];
    seen[s] = true;
    while let Some(u) = stack.pop() {
        if u == t {
            return true;
        }
        for &w in &adj[u] {
            if !seen[w] && !faults.contains(&(u, w)) {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    false
}

fn fault_set_count(m: usize, k: usize) -> usize {
    let mut total = 0usize;
    let mut binom = 1usize;
    for i in 0..=k.min(m) {
        total = total.saturating_add(binom);
        binom = binom.saturating_mul(m - i) / (i + 1);
    }
    total
}

/// Compares reachability in `g` and in the kept edges for every pair and
/// every fault set of at most `k` edges of `g`.
pub fn oracle_verify_ftrs(
    g: &DirectedGraph,
    kept: &BTreeSet<Edge>,
    pairs: &[(Vertex, Vertex)],
    k: usize,
    mode: FaultMode,
) -> Result<FtrsVerdict> {
    if k > 2 {
        return Err(Error::InvalidInput(format!("fault budget {k} above 2")));
    }
    let n = g.n();
    for &(s, t) in pairs {
        for v in [s, t] {
            if v >= n {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
        }
    }
    let host: HashSet<Edge> = g.edges().iter().copied().collect();
    if let Some(&e) = kept.iter().find(|e| !host.contains(e)) {
        return Ok(FtrsVerdict {
            passed: false,
            exhaustive: false,
            fault_sets_checked: 0,
            foreign_edge: Some(e),
            counterexample: None,
        });
    }
    let adj_g = adjacency(n, g.edges().iter().copied());
    let adj_h = adjacency(n, kept.iter().copied());
    let edges = g.edges().to_vec();
    let m = edges.len();

    let (exhaustive, samples, seed) = match mode {
        FaultMode::Exhaustive => (true, 0, 0),
        FaultMode::Sampled { samples, seed } => (false, samples, seed),
        FaultMode::Auto { samples, seed } => (fault_set_count(m, k) <= SAMPLE_THRESHOLD, samples, seed),
    };

    let mut checked = 0;
    let mut check = |faults: Vec<Edge>| -> Option<Counterexample> {
        checked += 1;
        let set: HashSet<Edge> = faults.iter().copied().collect();
        for &(s, t) in pairs {
            let a = search(&adj_g, s, t, &set);
            let b = search(&adj_h, s, t, &set);
            if a != b {
                return Some(Counterexample {
                    pair: (s, t),
                    faults: faults.clone(),
                    reachable_in_graph: a,
                    reachable_in_preserver: b,
                });
            }
        }
        None
    };

    let mut found = None;
    if exhaustive {
        'outer: {
            if let Some(c) = check(vec![]) {
                found = Some(c);
                break 'outer;
            }
            if k >= 1 {
                for i in 0..m {
                    if let Some(c) = check(vec![edges[i]]) {
                        found = Some(c);
                        break 'outer;
                    }
                }
            }
            if k >= 2 {
                for i in 0..m {
                    for j in i + 1..m {
                        if let Some(c) = check(vec![edges[i], edges[j]]) {
                            found = Some(c);
                            break 'outer;
                        }
                    }
                }
            }
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        found = check(vec![]);
        for _ in 0..samples {
            if found.is_some() || m == 0 {
                break;
            }
            let size = rng.gen_range(1..=k.min(m).max(1)).min(k);
            let faults: Vec<Edge> = edges.choose_multiple(&mut rng, size).copied().collect();
            found = check(faults);
        }
    }
    Ok(FtrsVerdict {
        passed: found.is_none(),
        exhaustive,
        fault_sets_checked: checked,
        foreign_edge: None,
        counterexample: found,
    })
}

/// Edges whose single deletion separates `t` from `s`.
pub fn bridge_edges(g: &DirectedGraph, s: Vertex, t: Vertex) -> Vec<Edge> {
    let adj = adjacency(g.n(), g.edges().iter().copied());
    if !search(&adj, s, t, &HashSet::new()) {
        return Vec::new();
    }
    g.edges().iter().copied().filter(|&e| !search(&adj, s, t, &HashSet::from([e]))).collect()
}

/// Vertices other than `s`, `t` whose deletion separates `t` from `s`.
pub fn cut_vertices(g: &DirectedGraph, s: Vertex, t: Vertex) -> Vec<Vertex> {
    let adj = adjacency(g.n(), g.edges().iter().copied());
    if !search(&adj, s, t, &HashSet::new()) {
        return Vec::new();
    }
    (0..g.n())
        .filter(|&x| x != s && x != t)
        .filter(|&x| {
            let faults: HashSet<Edge> = g.edges().iter().copied().filter(|e| e.0 == x || e.1 == x).collect();
            !search(&adj, s, t, &faults)
        })
        .collect()
}

/// Earliest vertex of `strand` with a path to `v` using no edge of
/// `avoid`, found by trying every strand vertex in order.
pub fn earliest_disjoint_source(
    g: &DirectedGraph,
    strand: &[Vertex],
    avoid: &BTreeSet<Edge>,
    v: Vertex,
) -> Option<usize> {
    let adj = adjacency(g.n(), g.edges().iter().copied().filter(|e| !avoid.contains(e)));
    strand.iter().position(|&u| search(&adj, u, v, &HashSet::new()))
}
