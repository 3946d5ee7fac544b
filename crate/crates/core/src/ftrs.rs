//! Dual fault-tolerant reachability preservers.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{
    coupling_points_masked, two_maximally_disjoint_paths, Coupling, DirectedGraph, Edge, Path,
    StrandDecomposition, Vertex,
};

/// Number of edge faults every preserver here tolerates.
pub const FAULT_BUDGET: usize = 2;

/// Below this many uncovered pairs the combiner switches to per-pair unions.
pub const PAIR_THRESHOLD: usize = 4;

/// An edge subset of a host graph together with the pairs it preserves.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Preserver {
    pub n: usize,
    pub pairs: Vec<(Vertex, Vertex)>,
    pub edges: BTreeSet<Edge>,
}

impl Preserver {
    pub fn empty(n: usize, pairs: Vec<(Vertex, Vertex)>) -> Self {
        Preserver { n, pairs, edges: BTreeSet::new() }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Union of edges and pair sets.
    pub fn absorb(&mut self, other: &Preserver) {
        self.edges.extend(other.edges.iter().copied());
        self.pairs.extend(other.pairs.iter().copied());
        self.pairs.sort_unstable();
        self.pairs.dedup();
    }

    /// Materializes the kept edges as a graph on the host's vertex set.
    pub fn to_graph(&self, host: &DirectedGraph) -> Result<DirectedGraph> {
        if self.n != host.n() {
            return Err(Error::UniverseMismatch(self.n, host.n()));
        }
        host.subgraph(self.edges.iter().copied())
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.edges.iter().filter(|e| e.1 == v).count()
    }
}

/// The two strands of a pair plus, for every strand vertex, its coupling
/// points and whether the corresponding coupling path is kept.
#[derive(Clone, Debug)]
pub struct SinglePairSkeleton {
    pub strands: StrandDecomposition,
    /// `couplings[j][k][i]`: coupling point on strand `i` of the `k`-th
    /// vertex of strand `j`.
    pub couplings: [Vec<[Option<Coupling>; 2]>; 2],
    /// `kept[j][k][i]` marks the coupling paths that enter the preserver.
    pub kept: [Vec<[bool; 2]>; 2],
}

impl SinglePairSkeleton {
    pub fn compute(g: &DirectedGraph, s: Vertex, t: Vertex) -> Result<Option<Self>> {
        let Some(strands) = two_maximally_disjoint_paths(g, s, t)? else {
            return Ok(None);
        };
        let mask = strands.edge_mask(g);
        let couplings = [0, 1].map(|j| {
            strands.strands[j]
                .vertices
                .iter()
                .map(|&v| coupling_points_masked(g, &strands, v, &mask))
                .collect::<Vec<_>>()
        });
        let kept = [0, 1].map(|j| essential_flags(&couplings[j]));
        Ok(Some(SinglePairSkeleton { strands, couplings, kept }))
    }

    /// Kept coupling paths as `(strand j, position, target strand i, path)`.
    pub fn kept_paths(&self) -> impl Iterator<Item = (usize, usize, usize, &Path)> + '_ {
        (0..2).flat_map(move |j| {
            self.couplings[j].iter().enumerate().flat_map(move |(k, cps)| {
                (0..2).filter_map(move |i| match &cps[i] {
                    Some(c) if self.kept[j][k][i] => Some((j, k, i, &c.path)),
                    _ => None,
                })
            })
        })
    }

    pub fn edges(&self) -> BTreeSet<Edge> {
        let mut out: BTreeSet<Edge> = BTreeSet::new();
        for strand in &self.strands.strands {
            out.extend(strand.edges());
        }
        for (_, _, _, path) in self.kept_paths() {
            out.extend(path.edges());
        }
        out
    }

    pub fn strand_vertices(&self) -> BTreeSet<Vertex> {
        self.strands.strands.iter().flat_map(|p| p.vertices.iter().copied()).collect()
    }
}

/// A coupling path toward strand `i` is kept when every later vertex of the
/// same strand couples strictly later on strand `i`, or not at all.
fn essential_flags(couplings: &[[Option<Coupling>; 2]]) -> Vec<[bool; 2]> {
    let mut flags = vec![[false; 2]; couplings.len()];
    for i in 0..2 {
        let mut later_min: Option<usize> = None;
        for k in (0..couplings.len()).rev() {
            if let Some(c) = &couplings[k][i] {
                flags[k][i] = later_min.is_none_or(|m| m > c.position);
                later_min = Some(later_min.map_or(c.position, |m| m.min(c.position)));
            }
        }
    }
    flags
}

pub fn build_single_pair_2ftrs(g: &DirectedGraph, s: Vertex, t: Vertex) -> Result<Preserver> {
    let mut out = Preserver::empty(g.n(), vec![(s, t)]);
    if let Some(sk) = SinglePairSkeleton::compute(g, s, t)? {
        out.edges = sk.edges();
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Source,
    Destination,
}

/// Per-construction memo of single-pair skeletons.
#[derive(Default)]
pub struct SkeletonCache {
    map: HashMap<(Vertex, Vertex), Option<Arc<SinglePairSkeleton>>>,
}

impl SkeletonCache {
    pub fn get(
        &mut self,
        g: &DirectedGraph,
        s: Vertex,
        t: Vertex,
    ) -> Result<Option<Arc<SinglePairSkeleton>>> {
        if let Some(hit) = self.map.get(&(s, t)) {
            return Ok(hit.clone());
        }
        let sk = SinglePairSkeleton::compute(g, s, t)?.map(Arc::new);
        self.map.insert((s, t), sk.clone());
        Ok(sk)
    }

    /// Fills the cache for many pairs at once, possibly in parallel.
    pub fn prefetch(&mut self, g: &DirectedGraph, pairs: &[(Vertex, Vertex)]) -> Result<()> {
        let missing: Vec<(Vertex, Vertex)> =
            pairs.iter().copied().filter(|p| !self.map.contains_key(p)).collect();
        let built: Vec<Result<Option<SinglePairSkeleton>>> =
            missing.par_iter().map(|&(s, t)| SinglePairSkeleton::compute(g, s, t)).collect();
        for (pair, sk) in missing.into_iter().zip(built) {
            self.map.insert(pair, sk?.map(Arc::new));
        }
        Ok(())
    }
}

/// Preserves reachability from `s` to every vertex (or from every vertex
/// to `s`) under two edge faults: the union of all single-pair preservers.
pub fn single_source_2ftrs(g: &DirectedGraph, s: Vertex, dir: Direction) -> Result<Preserver> {
    single_source_with(g, s, dir, &mut SkeletonCache::default())
}

fn single_source_with(
    g: &DirectedGraph,
    s: Vertex,
    dir: Direction,
    cache: &mut SkeletonCache,
) -> Result<Preserver> {
    g.check_vertex(s)?;
    let pairs: Vec<(Vertex, Vertex)> = (0..g.n())
        .filter(|&v| v != s)
        .map(|v| match dir {
            Direction::Source => (s, v),
            Direction::Destination => (v, s),
        })
        .collect();
    cache.prefetch(g, &pairs)?;
    let mut out = Preserver::empty(g.n(), pairs.clone());
    for (a, b) in pairs {
        if let Some(sk) = cache.get(g, a, b)? {
            out.edges.extend(sk.edges());
        }
    }
    Ok(out)
}

/// A family of vertex subsets; `k` is the smallest subset size.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetFamily {
    n: usize,
    k: usize,
    subsets: Vec<Vec<Vertex>>,
}

impl SubsetFamily {
    pub fn new(n: usize, subsets: Vec<Vec<Vertex>>) -> Result<Self> {
        let mut clean = Vec::with_capacity(subsets.len());
        for mut s in subsets {
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                return Err(Error::InvalidInput("empty subset in family".into()));
            }
            if let Some(&v) = s.iter().find(|&&v| v >= n) {
                return Err(Error::VertexOutOfRange { vertex: v, n });
            }
            clean.push(s);
        }
        let k = clean.iter().map(Vec::len).min().unwrap_or(1);
        Ok(SubsetFamily { n, k, subsets: clean })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn subsets(&self) -> &[Vec<Vertex>] {
        &self.subsets
    }

    pub fn len(&self) -> usize {
        self.subsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subsets.is_empty()
    }

    /// Step budget of the greedy hitting set.
    pub fn budget(&self) -> usize {
        (4 * self.n).div_ceil(self.k)
    }
}

/// Greedy maximum-coverage hitting set run for at most `⌈4n/k⌉` rounds.
/// Returns the chosen vertices in increasing order.
pub fn fractional_hitting_set(family: &SubsetFamily) -> Vec<Vertex> {
    let n = family.n;
    let mut count = vec![0usize; n];
    let mut containing: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, s) in family.subsets.iter().enumerate() {
        for &v in s {
            count[v] += 1;
            containing[v].push(i);
        }
    }
    let mut covered = vec![false; family.len()];
    let mut left = family.len();
    let mut chosen = Vec::new();
    for _ in 0..family.budget() {
        if left == 0 {
            break;
        }
        let best = (0..n).max_by(|&a, &b| count[a].cmp(&count[b]).then(b.cmp(&a)));
        let Some(v) = best.filter(|&v| count[v] > 0) else { break };
        chosen.push(v);
        for &i in &containing[v] {
            if !covered[i] {
                covered[i] = true;
                left -= 1;
                for &w in &family.subsets[i] {
                    count[w] -= 1;
                }
            }
        }
    }
    chosen.sort_unstable();
    chosen
}

/// A preserver valid for the covered subset of the requested pairs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SlackResult {
    pub preserver: Preserver,
    pub covered: Vec<(Vertex, Vertex)>,
}

/// Diagnostic counters of one slack round.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SlackStats {
    pub segment_length: usize,
    pub hitting_set: usize,
    pub pool: usize,
    pub heavy: usize,
    pub h1: usize,
    pub h2: usize,
    pub h3: usize,
    pub h4: usize,
}

pub fn segment_length(n: usize, pairs: usize) -> usize {
    let l = (n as f64).powf(2.0 / 3.0) * (pairs as f64).powf(-1.0 / 3.0);
    // guard against 4.0000000001 style rounding before the ceiling
    let l = (l - 1e-9).ceil();
    (l as usize).max(1)
}

fn normalize_pairs(g: &DirectedGraph, pairs: &[(Vertex, Vertex)]) -> Result<Vec<(Vertex, Vertex)>> {
    for &(s, t) in pairs {
        g.check_vertex(s)?;
        g.check_vertex(t)?;
    }
    let mut out = pairs.to_vec();
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

pub fn build_pairwise_2ftrs_slack(g: &DirectedGraph, pairs: &[(Vertex, Vertex)]) -> Result<SlackResult> {
    slack_round(g, pairs, &mut SkeletonCache::default()).map(|(r, _)| r)
}

pub fn build_pairwise_2ftrs_slack_stats(
    g: &DirectedGraph,
    pairs: &[(Vertex, Vertex)],
) -> Result<(SlackResult, SlackStats)> {
    slack_round(g, pairs, &mut SkeletonCache::default())
}

fn slack_round(
    g: &DirectedGraph,
    pairs: &[(Vertex, Vertex)],
    cache: &mut SkeletonCache,
) -> Result<(SlackResult, SlackStats)> {
    let pairs = normalize_pairs(g, pairs)?;
    if pairs.is_empty() {
        return Err(Error::Precondition("pair set must be nonempty".into()));
    }
    let n = g.n();
    let l = segment_length(n, pairs.len());
    let mut stats = SlackStats { segment_length: l, ..Default::default() };

    cache.prefetch(g, &pairs.iter().copied().filter(|(s, t)| s != t).collect::<Vec<_>>())?;
    let mut trivial = Vec::new();
    let mut live: Vec<((Vertex, Vertex), Arc<SinglePairSkeleton>)> = Vec::new();
    for &(s, t) in &pairs {
        match (s == t, cache.get(g, s, t)?) {
            (false, Some(sk)) => live.push(((s, t), sk)),
            _ => trivial.push((s, t)),
        }
    }

    let segments = |sk: &SinglePairSkeleton| -> [Path; 4] {
        let [a, b] = &sk.strands.strands;
        [a.prefix(l), b.prefix(l), a.suffix(l), b.suffix(l)]
    };

    let mut family = Vec::with_capacity(4 * live.len());
    for (_, sk) in &live {
        family.extend(segments(sk).into_iter().map(|p| p.vertices));
    }
    let family = SubsetFamily::new(n, family)?;
    let hit = fractional_hitting_set(&family);
    stats.hitting_set = hit.len();
    let mut in_hit = vec![false; n];
    for &v in &hit {
        in_hit[v] = true;
    }

    let mut covered = trivial;
    let mut hit_pairs = Vec::new();
    for (pair, sk) in &live {
        if segments(sk).iter().all(|p| p.vertices.iter().any(|&v| in_hit[v])) {
            covered.push(*pair);
            hit_pairs.push(sk.clone());
        }
    }
    covered.sort_unstable();

    let mut edges: BTreeSet<Edge> = BTreeSet::new();
    for &x in &hit {
        for dir in [Direction::Source, Direction::Destination] {
            edges.extend(single_source_with(g, x, dir, cache)?.edges);
        }
    }
    stats.h1 = edges.len();

    let mut h2: BTreeSet<Edge> = BTreeSet::new();
    for (_, sk) in &live {
        for p in segments(sk) {
            h2.extend(p.edges());
        }
    }
    stats.h2 = h2.len();
    edges.extend(h2);

    let mut pool: Vec<&Path> = Vec::new();
    for sk in &hit_pairs {
        for (j, k, _, path) in sk.kept_paths() {
            let strand = &sk.strands.strands[j];
            let on_suffix = k + l >= strand.vertices.len() - 1;
            if on_suffix && !path.is_empty() {
                pool.push(path);
            }
        }
    }
    stats.pool = pool.len();

    let threshold = ((l * covered.len()) as f64).sqrt().max(1.0);
    let mut heavy = Vec::new();
    while !pool.is_empty() {
        let mut freq = vec![0usize; n];
        for p in &pool {
            let mut vs = p.vertices.clone();
            vs.sort_unstable();
            vs.dedup();
            for v in vs {
                freq[v] += 1;
            }
        }
        let v =
            (0..n).max_by(|&a, &b| freq[a].cmp(&freq[b]).then(b.cmp(&a))).expect("pool paths have vertices");
        if (freq[v] as f64) < threshold {
            break;
        }
        heavy.push(v);
        pool.retain(|p| !p.contains(v));
    }
    stats.heavy = heavy.len();

    let mut h3: BTreeSet<Edge> = BTreeSet::new();
    for &w in &heavy {
        for dir in [Direction::Source, Direction::Destination] {
            h3.extend(single_source_with(g, w, dir, cache)?.edges);
        }
    }
    stats.h3 = h3.len();
    edges.extend(h3);

    let h4: BTreeSet<Edge> = pool.iter().flat_map(|p| p.edges()).collect();
    stats.h4 = h4.len();
    edges.extend(h4);

    let preserver = Preserver { n, pairs: covered.clone(), edges };
    Ok((SlackResult { preserver, covered }, stats))
}

/// Full preserver for all pairs: slack rounds on the uncovered residue,
/// then per-pair preservers once fewer than [`PAIR_THRESHOLD`] remain.
pub fn build_pairwise_2ftrs(g: &DirectedGraph, pairs: &[(Vertex, Vertex)]) -> Result<Preserver> {
    let mut residue = normalize_pairs(g, pairs)?;
    let mut out = Preserver::empty(g.n(), residue.clone());
    let mut cache = SkeletonCache::default();
    while residue.len() >= PAIR_THRESHOLD {
        let (round, _) = slack_round(g, &residue, &mut cache)?;
        debug_assert!(!round.covered.is_empty());
        out.edges.extend(round.preserver.edges);
        residue.retain(|p| round.covered.binary_search(p).is_err());
    }
    for (s, t) in residue {
        if s != t {
            if let Some(sk) = cache.get(g, s, t)? {
                out.edges.extend(sk.edges());
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[Edge]) -> DirectedGraph {
        DirectedGraph::new(n, edges.iter().copied()).unwrap()
    }

    fn all_fault_sets(g: &DirectedGraph) -> Vec<Vec<Edge>> {
        let e = g.edges();
        let mut out = vec![vec![]];
        for i in 0..e.len() {
            out.push(vec![e[i]]);
            for j in i + 1..e.len() {
                out.push(vec![e[i], e[j]]);
            }
        }
        out
    }

    fn preserves(g: &DirectedGraph, h: &Preserver, pairs: &[(Vertex, Vertex)]) -> bool {
        let hg = h.to_graph(g).unwrap();
        all_fault_sets(g).iter().all(|f| {
            let hf: Vec<Edge> = f.iter().copied().filter(|&(u, v)| hg.has_edge(u, v)).collect();
            pairs.iter().all(|&(s, t)| {
                crate::graph::reachable(g, s, t, f).unwrap()
                    == crate::graph::reachable(&hg, s, t, &hf).unwrap()
            })
        })
    }

    #[test]
    fn diamond_keeps_everything() {
        let g = graph(4, &[(0, 1), (1, 3), (0, 2), (2, 3)]);
        let h = build_single_pair_2ftrs(&g, 0, 3).unwrap();
        assert_eq!(h.len(), 4);
        assert!(preserves(&g, &h, &[(0, 3)]));
    }

    #[test]
    fn unreachable_pair_is_empty() {
        let g = graph(3, &[(0, 1)]);
        assert!(build_single_pair_2ftrs(&g, 0, 2).unwrap().is_empty());
    }

    #[test]
    fn chord_is_kept_when_needed() {
        // 0→1→3, 0→2→3, plus 1→2; faulting 0→2 and 1→3 needs the chord
        let g = graph(4, &[(0, 1), (1, 3), (0, 2), (2, 3), (1, 2)]);
        let h = build_single_pair_2ftrs(&g, 0, 3).unwrap();
        assert!(h.edges.contains(&(1, 2)));
        assert!(preserves(&g, &h, &[(0, 3)]));
    }

    #[test]
    fn cycle_pair() {
        let g = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let h = build_pairwise_2ftrs(&g, &[(0, 3)]).unwrap();
        assert!(preserves(&g, &h, &[(0, 3)]));
    }

    #[test]
    fn star_source() {
        let g = graph(4, &[(0, 1), (0, 2), (0, 3)]);
        let h = single_source_2ftrs(&g, 0, Direction::Source).unwrap();
        assert_eq!(h.len(), 3);
        assert!(single_source_2ftrs(&DirectedGraph::empty(3), 1, Direction::Destination).unwrap().is_empty());
    }

    #[test]
    fn hitting_set_examples() {
        let f = SubsetFamily::new(4, vec![vec![1, 2], vec![2, 3]]).unwrap();
        assert_eq!(fractional_hitting_set(&f), vec![2]);
        let f = SubsetFamily::new(1, vec![vec![0]]).unwrap();
        assert_eq!(fractional_hitting_set(&f), vec![0]);
        let f = SubsetFamily::new(5, vec![]).unwrap();
        assert!(fractional_hitting_set(&f).is_empty());
    }

    #[test]
    fn segment_length_floor() {
        assert_eq!(segment_length(1, 1), 1);
        assert_eq!(segment_length(8, 1), 4);
        assert_eq!(segment_length(8, 8), 2);
        assert_eq!(segment_length(27, 1000), 1);
    }

    #[test]
    fn slack_on_edgeless_graph() {
        let g = DirectedGraph::empty(4);
        let r = build_pairwise_2ftrs_slack(&g, &[(0, 1), (2, 3)]).unwrap();
        assert!(r.preserver.is_empty());
        assert_eq!(r.covered, vec![(0, 1), (2, 3)]);
        assert!(build_pairwise_2ftrs_slack(&g, &[]).is_err());
    }

    #[test]
    fn slack_single_pair_is_covered() {
        let g = graph(4, &[(0, 1), (1, 3), (0, 2), (2, 3), (1, 2)]);
        let r = build_pairwise_2ftrs_slack(&g, &[(0, 3)]).unwrap();
        assert_eq!(r.covered, vec![(0, 3)]);
        assert!(preserves(&g, &r.preserver, &r.covered));
    }

    #[test]
    fn empty_pair_set_gives_empty_preserver() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        assert!(build_pairwise_2ftrs(&g, &[]).unwrap().is_empty());
    }

    #[test]
    fn preserver_json_shape() {
        let h = Preserver { n: 3, pairs: vec![(0, 2)], edges: [(0, 1), (1, 2)].into() };
        let text = serde_json::to_string(&h).unwrap();
        assert_eq!(text, r#"{"n":3,"pairs":[[0,2]],"edges":[[0,1],[1,2]]}"#);
        let back: Preserver = serde_json::from_str(&text).unwrap();
        assert_eq!(back, h);
    }
}
