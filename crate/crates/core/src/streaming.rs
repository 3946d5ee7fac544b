//! Fair consensus clustering in the pairwise streaming model.

use std::collections::BTreeMap;

use petgraph::unionfind::UnionFind;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cluster::{consensus_power_sum, ell_root, Clustering, ColorProfile, WeightedCcInstance};
use crate::error::{Error, Result};
use crate::graph::Vertex;
use crate::reductions::{fairfy_cc, SolverHandle};

/// `((u, v), j, b)`: whether `u` and `v` are separated in clustering `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StreamTriple {
    pub u: Vertex,
    pub v: Vertex,
    pub j: usize,
    pub separated: bool,
}

impl StreamTriple {
    pub fn pair(&self) -> (Vertex, Vertex) {
        (self.u.min(self.v), self.u.max(self.v))
    }

    fn check(&self, n: usize, m: usize) -> Result<()> {
        for x in [self.u, self.v] {
            if x >= n {
                return Err(Error::VertexOutOfRange { vertex: x, n });
            }
        }
        if self.u == self.v {
            return Err(Error::InvalidInput(format!("triple pairs vertex {} with itself", self.u)));
        }
        if self.j >= m {
            return Err(Error::InvalidInput(format!("clustering index {} outside 0..{m}", self.j)));
        }
        Ok(())
    }
}

/// Lines `u v j b` with `b` in {0, 1}.
pub fn parse_stream(text: &str) -> Result<Vec<StreamTriple>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let [u, v, j, b] = crate::graph::parse_fields::<4>(line, i + 1)?;
        if b > 1 {
            return Err(Error::parse(i + 1, format!("bit must be 0 or 1, found {b}")));
        }
        if u == v {
            return Err(Error::parse(i + 1, format!("pair ({u}, {v}) is not a pair")));
        }
        out.push(StreamTriple { u, v, j, separated: b == 1 });
    }
    Ok(out)
}

pub fn format_stream(stream: &[StreamTriple]) -> String {
    stream.iter().map(|t| format!("{} {} {} {}\n", t.u, t.v, t.j, u8::from(t.separated))).collect()
}

fn sample_size(m: usize, factor: f64) -> usize {
    let raw = (factor * (m as f64).ln()).ceil();
    (raw.max(1.0) as usize).min(m)
}

/// Draws `⌈4g ln m⌉` and `⌈64 ε⁻² ln m⌉` indices uniformly with
/// replacement and deduplicates; a count reaching `m` takes every index.
pub fn sample_indices(m: usize, g: f64, eps: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if m == 0 {
        return Err(Error::InvalidInput("need at least one clustering".into()));
    }
    if !(g > 1.0 && g.is_finite()) {
        return Err(Error::InvalidInput(format!("g must exceed 1, got {g}")));
    }
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::InvalidInput(format!("epsilon must lie in (0, 1], got {eps}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut draw = |count: usize| -> Vec<usize> {
        if count >= m {
            return (0..m).collect();
        }
        let mut picked: Vec<usize> = (0..count).map(|_| rng.gen_range(0..m)).collect();
        picked.sort_unstable();
        picked.dedup();
        picked
    };
    let j = draw(sample_size(m, 4.0 * g));
    let k = draw(sample_size(m, 64.0 / (eps * eps)));
    Ok((j, k))
}

fn pair_hash(u: Vertex, v: Vertex) -> u64 {
    let mut z = ((u as u64) << 32 ^ v as u64).wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

struct IndexStore {
    uf: UnionFind<usize>,
    joins: Vec<(Vertex, Vertex)>,
    separated_count: u64,
    separated_hash: u64,
    violation: Option<(Vertex, Vertex)>,
}

impl IndexStore {
    fn new(n: usize) -> Self {
        IndexStore {
            uf: UnionFind::new(n),
            joins: Vec::new(),
            separated_count: 0,
            separated_hash: 0,
            violation: None,
        }
    }

    /// Join records plus one digest.
    fn records(&self) -> usize {
        self.joins.len() + 1
    }
}

/// Per sampled index: the union-effective together records and a digest
/// of the separated ones.
pub struct SampledStore {
    n: usize,
    m: usize,
    slots: BTreeMap<usize, IndexStore>,
    records: usize,
    peak_records: usize,
    ingested: u64,
    dropped: u64,
}

impl SampledStore {
    pub fn new(n: usize, m: usize, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut slots = BTreeMap::new();
        for j in indices {
            if j >= m {
                return Err(Error::InvalidInput(format!("sampled index {j} outside 0..{m}")));
            }
            slots.entry(j).or_insert_with(|| IndexStore::new(n));
        }
        let records = slots.len();
        Ok(SampledStore { n, m, slots, records, peak_records: records, ingested: 0, dropped: 0 })
    }

    pub fn is_sampled(&self, j: usize) -> bool {
        self.slots.contains_key(&j)
    }

    pub fn indices(&self) -> Vec<usize> {
        self.slots.keys().copied().collect()
    }

    pub fn ingest(&mut self, t: StreamTriple) -> Result<()> {
        t.check(self.n, self.m)?;
        self.ingested += 1;
        let Some(slot) = self.slots.get_mut(&t.j) else {
            self.dropped += 1;
            return Ok(());
        };
        let (u, v) = t.pair();
        if t.separated {
            slot.separated_count += 1;
            slot.separated_hash = slot.separated_hash.wrapping_add(pair_hash(u, v));
            if slot.violation.is_none() && slot.uf.equiv(u, v) {
                slot.violation = Some((u, v));
            }
        } else if slot.uf.union(u, v) {
            slot.joins.push((u, v));
            self.records += 1;
            self.peak_records = self.peak_records.max(self.records);
        }
        Ok(())
    }

    /// Records currently held.
    pub fn records(&self) -> usize {
        self.records
    }

    pub fn peak_records(&self) -> usize {
        self.peak_records
    }

    pub fn ingested(&self) -> u64 {
        self.ingested
    }

    pub fn dropped(&self) -> u64 {
        self.dropped
    }

    /// Rebuilds every sampled clustering, checking the separated records
    /// against the digest. A repeated separated record is indistinguishable
    /// from a contradictory one and is rejected.
    pub fn finish(self) -> Result<BTreeMap<usize, Clustering>> {
        let n = self.n;
        let mut out = BTreeMap::new();
        for (j, slot) in self.slots {
            if let Some((u, v)) = slot.violation {
                return Err(Error::MalformedStream { index: j, u, v });
            }
            debug_assert!(slot.records() <= n.max(1));
            let c = Clustering::from_labels(&slot.uf.into_labeling());
            let mut count = 0u64;
            let mut hash = 0u64;
            for u in 0..n {
                for v in u + 1..n {
                    if !c.together(u, v) {
                        count += 1;
                        hash = hash.wrapping_add(pair_hash(u, v));
                    }
                }
            }
            // Fewer separated records than pairs only means some were left out.
            if slot.separated_count > count {
                return Err(Error::InconsistentStream {
                    index: j,
                    msg: format!("{} separated records for {count} separated pairs", slot.separated_count),
                });
            }
            if slot.separated_count == count && slot.separated_hash != hash {
                return Err(Error::InconsistentStream {
                    index: j,
                    msg: "separated records disagree with the together records".into(),
                });
            }
            out.insert(j, c);
        }
        Ok(out)
    }
}

/// Union-find over the together records; every separated record is then
/// checked against the result.
pub fn reconstruct_clustering(records: &[StreamTriple], n: usize) -> Result<Clustering> {
    let mut uf = UnionFind::new(n);
    for t in records {
        t.check(n, usize::MAX)?;
        if !t.separated {
            uf.union(t.u, t.v);
        }
    }
    for t in records {
        if t.separated && uf.equiv(t.u, t.v) {
            let (u, v) = t.pair();
            return Err(Error::MalformedStream { index: t.j, u, v });
        }
    }
    Ok(Clustering::from_labels(&uf.into_labeling()))
}

/// Unit weights: together iff together in at least two of the three.
pub fn majority_instance(cx: &Clustering, cy: &Clustering, cz: &Clustering) -> Result<WeightedCcInstance> {
    let n = cx.n();
    for c in [cy, cz] {
        if c.n() != n {
            return Err(Error::UniverseMismatch(c.n(), n));
        }
    }
    let together = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| [cx, cy, cz].iter().filter(|c| c.together(u, v)).count() >= 2);
    WeightedCcInstance::from_edges(n, together)
}

pub fn cluster_fitting(
    cx: &Clustering,
    cy: &Clustering,
    cz: &Clustering,
    prof: &ColorProfile,
    handles: &SolverHandle,
) -> Result<Clustering> {
    fairfy_cc(&majority_instance(cx, cy, cz)?, prof, handles)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Provenance {
    /// Close fair clustering of the input with this stream index.
    AlphaClose { index: usize },
    /// Fitting of the inputs with these stream indices.
    Fitting { triple: [usize; 3] },
}

#[derive(Clone, Debug, PartialEq)]
pub struct Candidate {
    pub clustering: Clustering,
    pub provenance: Provenance,
}

/// Close fair clusterings of each input, then fittings of each triple in
/// lexicographic order.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct CandidateSet {
    pub members: Vec<Candidate>,
}

impl CandidateSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// `sampled` pairs each clustering with its stream index.
pub fn find_candidates(
    sampled: &[(usize, Clustering)],
    prof: &ColorProfile,
    handles: &SolverHandle,
) -> Result<CandidateSet> {
    if sampled.is_empty() {
        return Err(Error::InvalidInput("no sampled clusterings".into()));
    }
    let s = sampled.len();
    let mut jobs: Vec<(usize, usize, usize, bool)> = (0..s).map(|i| (i, 0, 0, false)).collect();
    for x in 0..s {
        for y in x + 1..s {
            for z in y + 1..s {
                jobs.push((x, y, z, true));
            }
        }
    }
    let members = jobs
        .par_iter()
        .map(|&(x, y, z, fitting)| {
            if fitting {
                Ok(Candidate {
                    clustering: cluster_fitting(&sampled[x].1, &sampled[y].1, &sampled[z].1, prof, handles)?,
                    provenance: Provenance::Fitting { triple: [sampled[x].0, sampled[y].0, sampled[z].0] },
                })
            } else {
                let (index, c) = &sampled[x];
                if c.n() != prof.n() {
                    return Err(Error::UniverseMismatch(c.n(), prof.n()));
                }
                Ok(Candidate {
                    clustering: handles.fair.closest_fair(c, prof)?,
                    provenance: Provenance::AlphaClose { index: *index },
                })
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(CandidateSet { members })
}

/// Position of the winner and its power sum against `w`.
pub fn select_best(candidates: &CandidateSet, w: &[Clustering], ell: u32) -> Result<(usize, u128)> {
    if candidates.is_empty() {
        return Err(Error::InvalidInput("no candidates".into()));
    }
    let sums = candidates
        .members
        .par_iter()
        .map(|c| consensus_power_sum(w, &c.clustering, ell))
        .collect::<Result<Vec<_>>>()?;
    let mut best = 0;
    for (i, &s) in sums.iter().enumerate() {
        if s < sums[best] {
            best = i;
        }
    }
    Ok((best, sums[best]))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StreamParams {
    pub n: usize,
    pub m: usize,
    pub g: f64,
    pub eps: f64,
    pub ell: u32,
    pub seed: u64,
}

impl StreamParams {
    pub fn new(n: usize, m: usize) -> Self {
        StreamParams { n, m, g: 8.0, eps: 0.2, ell: 1, seed: 0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StreamOutcome {
    pub clustering: Clustering,
    pub chosen: usize,
    pub candidates: CandidateSet,
    pub sampled_j: Vec<usize>,
    pub sampled_k: Vec<usize>,
    /// Power sum against the K-sample.
    pub power_sum: u128,
    pub objective: f64,
    pub peak_records: usize,
    pub triples: u64,
    pub dropped: u64,
}

impl StreamOutcome {
    /// `(|J| + |K|) · n`.
    pub fn record_budget(&self, n: usize) -> usize {
        (self.sampled_j.len() + self.sampled_k.len()) * n
    }
}

/// One pass over `stream`.
pub fn algo_fair_con_stream(
    stream: impl IntoIterator<Item = StreamTriple>,
    params: &StreamParams,
    prof: &ColorProfile,
    handles: &SolverHandle,
) -> Result<StreamOutcome> {
    if prof.n() != params.n {
        return Err(Error::UniverseMismatch(params.n, prof.n()));
    }
    let (sampled_j, sampled_k) = sample_indices(params.m, params.g, params.eps, params.seed)?;
    let mut store = SampledStore::new(params.n, params.m, sampled_j.iter().chain(&sampled_k).copied())?;
    for t in stream {
        store.ingest(t)?;
    }
    let (peak_records, triples, dropped) = (store.peak_records(), store.ingested(), store.dropped());
    let rebuilt = store.finish()?;
    let m1: Vec<(usize, Clustering)> = sampled_j.iter().map(|j| (*j, rebuilt[j].clone())).collect();
    let m2: Vec<Clustering> = sampled_k.iter().map(|j| rebuilt[j].clone()).collect();
    let candidates = find_candidates(&m1, prof, handles)?;
    let (chosen, power_sum) = select_best(&candidates, &m2, params.ell)?;
    Ok(StreamOutcome {
        clustering: candidates.members[chosen].clustering.clone(),
        chosen,
        candidates,
        sampled_j,
        sampled_k,
        power_sum,
        objective: ell_root(power_sum, params.ell),
        peak_records,
        triples,
        dropped,
    })
}

/// The candidate pipeline run on every input with every input as the
/// selection sample.
pub fn offline_candidates_select(
    inputs: &[Clustering],
    prof: &ColorProfile,
    ell: u32,
    handles: &SolverHandle,
) -> Result<(Clustering, CandidateSet, usize)> {
    let indexed: Vec<(usize, Clustering)> = inputs.iter().cloned().enumerate().collect();
    let candidates = find_candidates(&indexed, prof, handles)?;
    let (chosen, _) = select_best(&candidates, inputs, ell)?;
    Ok((candidates.members[chosen].clustering.clone(), candidates, chosen))
}
