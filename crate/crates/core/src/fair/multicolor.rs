//! Any number of colors.

use std::collections::VecDeque;

use crate::cluster::{is_fair, is_p_divisible, Clustering, ColorProfile};
use crate::error::{Error, Result};
use crate::fair::two_color::repair_color;
use crate::fair::{assemble, check_universe, remove_all, smallest_of_color};
use crate::graph::Vertex;

/// `3^{log₂ d} − 1`, the closeness proved for the power-of-two balancing.
pub fn power_of_two_bound(d: usize) -> f64 {
    3f64.powi(log2_floor(d) as i32) - 1.0
}

/// `7^{⌈log₂ r⌉} − 1`, the closeness proved for meta-color balancing.
pub fn make_pdc_fair_bound(r: usize) -> f64 {
    7f64.powi(log2_ceil(r) as i32) - 1.0
}

/// `δ + α + δα` for composing a `δ`-close step with an `α`-close step.
pub fn compose(delta: f64, alpha: f64) -> f64 {
    delta + alpha + delta * alpha
}

pub fn fair_equi_bound(d: usize) -> f64 {
    let groups = binary_groups(d);
    let largest = groups.first().map_or(1, Vec::len);
    compose(power_of_two_bound(largest), make_pdc_fair_bound(groups.len()))
}

/// Per-color repair costs at most `7.5` times the optimum for each color.
pub fn create_pdc_bound(d: usize) -> f64 {
    7.5 * d as f64
}

pub fn fair_general_bound(d: usize) -> f64 {
    compose(create_pdc_bound(d), make_pdc_fair_bound(d))
}

fn log2_floor(x: usize) -> u32 {
    usize::BITS - 1 - x.max(1).leading_zeros()
}

fn log2_ceil(x: usize) -> u32 {
    x.max(1).next_power_of_two().trailing_zeros()
}

/// Consecutive color groups following the binary expansion of `d`,
/// largest first.
pub fn binary_groups(d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut next = 0;
    for bit in (0..usize::BITS).rev() {
        let size = 1usize << bit;
        if d & size != 0 {
            out.push((next..next + size).collect());
            next += size;
        }
    }
    out
}

fn require_equal(prof: &ColorProfile) -> Result<()> {
    if prof.ratio().iter().any(|&p| p != 1) {
        return Err(Error::InvalidInput(format!(
            "color classes must have equal size, ratio is {:?}",
            prof.ratio()
        )));
    }
    Ok(())
}

fn count_of(cluster: &[Vertex], colors: &[usize], color: usize) -> usize {
    cluster.iter().filter(|&&v| colors[v] == color).count()
}

/// Sets merged by [`multi_gm`] plus what could not be paired.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MultiGm {
    pub merged: Vec<Vec<Vertex>>,
    pub residual_first: Vec<Vec<Vertex>>,
    pub residual_second: Vec<Vec<Vertex>>,
}

fn check_balanced(set: &[Vertex], colors: &[usize], block: &[usize]) -> Result<usize> {
    let per = block.first().map_or(0, |&c| count_of(set, colors, c));
    let ok = set.iter().all(|&v| block.contains(&colors[v]))
        && block.iter().all(|&c| count_of(set, colors, c) == per);
    if ok {
        Ok(per)
    } else {
        Err(Error::Precondition(format!("set {set:?} is not balanced over colors {block:?}")))
    }
}

/// Pairs balanced sets over block `B` with balanced sets over block `B′`.
/// The larger of two fronts is trimmed, equally per color and smallest
/// ids first, to the size of the smaller; the union is balanced over
/// `B ∪ B′`.
pub fn multi_gm(
    set1: &[Vec<Vertex>],
    set2: &[Vec<Vertex>],
    colors: &[usize],
    block1: &[usize],
    block2: &[usize],
) -> Result<MultiGm> {
    if block1.len() != block2.len() || block1.is_empty() {
        return Err(Error::Precondition("blocks must be nonempty and of equal size".into()));
    }
    for s in set1 {
        check_balanced(s, colors, block1)?;
    }
    for s in set2 {
        check_balanced(s, colors, block2)?;
    }
    let mut q1: VecDeque<Vec<Vertex>> = set1.iter().filter(|s| !s.is_empty()).cloned().collect();
    let mut q2: VecDeque<Vec<Vertex>> = set2.iter().filter(|s| !s.is_empty()).cloned().collect();
    let mut merged = Vec::new();
    while let (Some(a), Some(b)) = (q1.front(), q2.front()) {
        let (big, small, big_block) =
            if a.len() >= b.len() { (&mut q1, &mut q2, block1) } else { (&mut q2, &mut q1, block2) };
        let whole = small.pop_front().expect("front exists");
        let per = whole.len() / big_block.len();
        let front = big.front_mut().expect("front exists");
        let mut trimmed = Vec::with_capacity(whole.len());
        for &c in big_block {
            trimmed.extend(smallest_of_color(front, colors, c, per));
        }
        remove_all(front, &trimmed);
        if front.is_empty() {
            big.pop_front();
        }
        trimmed.extend(whole);
        trimmed.sort_unstable();
        merged.push(trimmed);
    }
    Ok(MultiGm {
        merged,
        residual_first: q1.into_iter().collect(),
        residual_second: q2.into_iter().collect(),
    })
}

/// Balances every color group (each of power-of-two size) inside every
/// cluster by pairing half-blocks in rounds of doubling size.
fn balance_groups(
    mut clusters: Vec<Vec<Vertex>>,
    colors: &[usize],
    groups: &[Vec<usize>],
) -> Result<Vec<Vec<Vertex>>> {
    let widest = groups.iter().map(Vec::len).max().unwrap_or(1);
    for round in 1..=log2_floor(widest) {
        let half = 1usize << (round - 1);
        for group in groups.iter().filter(|g| g.len() >= 2 * half) {
            for pair in group.chunks(2 * half) {
                let (a, b) = pair.split_at(half);
                let mut sa = Vec::new();
                let mut sb = Vec::new();
                for cluster in clusters.iter_mut() {
                    let ca = count_of(cluster, colors, a[0]);
                    let cb = count_of(cluster, colors, b[0]);
                    let (block, excess, sink) = if ca > cb {
                        (a, ca - cb, &mut sa)
                    } else if cb > ca {
                        (b, cb - ca, &mut sb)
                    } else {
                        continue;
                    };
                    let piece: Vec<Vertex> =
                        block.iter().flat_map(|&c| smallest_of_color(cluster, colors, c, excess)).collect();
                    remove_all(cluster, &piece);
                    sink.push(piece);
                }
                let gm = multi_gm(&sa, &sb, colors, a, b)?;
                assert!(
                    gm.residual_first.is_empty() && gm.residual_second.is_empty(),
                    "surpluses of paired half-blocks balance globally"
                );
                clusters.extend(gm.merged);
            }
        }
        clusters.retain(|c| !c.is_empty());
        for cluster in &clusters {
            for group in groups {
                for block in group.chunks(2 * half).filter(|b| b.len() == 2 * half) {
                    let first = count_of(cluster, colors, block[0]);
                    assert!(
                        block.iter().all(|&c| count_of(cluster, colors, c) == first),
                        "round {round}: block {block:?} unbalanced in {cluster:?}"
                    );
                }
            }
        }
    }
    Ok(clusters)
}

/// Fair clustering for `2^k` equally large color classes.
pub fn fair_power_of_two(c: &Clustering, prof: &ColorProfile) -> Result<Clustering> {
    check_universe(c, prof)?;
    require_equal(prof)?;
    let d = prof.d();
    if !d.is_power_of_two() {
        return Err(Error::InvalidInput(format!("{d} colors is not a power of two")));
    }
    let out = balance_groups(c.clusters(), prof.colors(), &[(0..d).collect()])?;
    let out = assemble(c.n(), &out);
    debug_assert!(is_fair(&out, prof));
    Ok(out)
}

/// Base colors treated as one color: a unit holds `q` vertices of each
/// listed `(color, q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetaColor {
    pub bases: Vec<(usize, usize)>,
}

impl MetaColor {
    pub fn weight(&self) -> usize {
        self.bases.iter().map(|&(_, q)| q).sum()
    }

    /// Units in a cluster, or `None` when its base counts are not a whole
    /// number of matching units.
    fn units(&self, cluster: &[Vertex], colors: &[usize]) -> Option<usize> {
        let mut units = None;
        for &(c, q) in &self.bases {
            let k = count_of(cluster, colors, c);
            if !k.is_multiple_of(q) || units.is_some_and(|u| u != k / q) {
                return None;
            }
            units = Some(k / q);
        }
        units
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MetaProfile {
    pub metas: Vec<MetaColor>,
}

impl MetaProfile {
    /// Each base color on its own with `q = pⱼ`.
    pub fn per_color(prof: &ColorProfile) -> Self {
        MetaProfile {
            metas: prof
                .ratio()
                .iter()
                .enumerate()
                .map(|(c, &p)| MetaColor { bases: vec![(c, p as usize)] })
                .collect(),
        }
    }

    /// One meta color per group, one vertex of each member per unit.
    pub fn from_groups(groups: &[Vec<usize>]) -> Self {
        MetaProfile {
            metas: groups.iter().map(|g| MetaColor { bases: g.iter().map(|&c| (c, 1)).collect() }).collect(),
        }
    }

    pub fn weights(&self) -> Vec<usize> {
        self.metas.iter().map(MetaColor::weight).collect()
    }

    /// Meta indices by descending weight, ties by index.
    pub fn order(&self) -> Vec<usize> {
        let w = self.weights();
        let mut idx: Vec<usize> = (0..self.metas.len()).collect();
        idx.sort_by(|&a, &b| w[b].cmp(&w[a]).then(a.cmp(&b)));
        idx
    }

    fn validate(&self, prof: &ColorProfile) -> Result<()> {
        let mut seen = vec![false; prof.d()];
        for m in &self.metas {
            if m.bases.is_empty() {
                return Err(Error::InvalidInput("empty meta color".into()));
            }
            for &(c, q) in &m.bases {
                if c >= prof.d() || q == 0 || std::mem::replace(&mut seen[c], true) {
                    return Err(Error::InvalidInput(format!("meta colors misuse base color {c}")));
                }
            }
        }
        if seen.contains(&false) {
            return Err(Error::InvalidInput("meta colors must cover every base color".into()));
        }
        let everyone: Vec<Vertex> = (0..prof.n()).collect();
        let totals: Vec<Option<usize>> =
            self.metas.iter().map(|m| m.units(&everyone, prof.colors())).collect();
        if totals.iter().any(|t| t.is_none() || *t != totals[0]) {
            return Err(Error::InvalidInput(
                "global counts are not one common number of units per meta color".into(),
            ));
        }
        Ok(())
    }
}

/// Balances meta colors in `⌈log₂ r⌉` rounds. Each round pairs adjacent
/// blocks (heaviest colors first); a cluster holding more units of the
/// second block than of the first donates the excess units, and clusters
/// short of second-block units receive them, in cluster order.
pub fn make_pdc_fair(c: &Clustering, prof: &ColorProfile, meta: &MetaProfile) -> Result<Clustering> {
    check_universe(c, prof)?;
    meta.validate(prof)?;
    let colors = prof.colors();
    let clusters = c.clusters();
    for cl in &clusters {
        if meta.metas.iter().any(|m| m.units(cl, colors).is_none()) {
            return Err(Error::Precondition(format!("cluster {cl:?} is not divisible by the meta profile")));
        }
    }
    let out = balance_meta(clusters, colors, meta);
    let out = assemble(c.n(), &out);
    debug_assert!(is_fair(&out, prof) || meta.metas.len() < prof.d());
    Ok(out)
}

fn balance_meta(mut clusters: Vec<Vec<Vertex>>, colors: &[usize], meta: &MetaProfile) -> Vec<Vec<Vertex>> {
    let units = |cl: &[Vertex], l: usize| meta.metas[l].units(cl, colors).expect("divisible");
    let mut blocks: Vec<Vec<usize>> = meta.order().into_iter().map(|l| vec![l]).collect();
    while blocks.len() > 1 {
        let mut next = Vec::with_capacity(blocks.len().div_ceil(2));
        for pair in blocks.chunks(2) {
            let [a, b] = pair else {
                next.push(pair[0].clone());
                continue;
            };
            let mut offered: VecDeque<Vec<Vertex>> = VecDeque::new();
            let mut wanting: Vec<(usize, usize)> = Vec::new();
            for (i, cluster) in clusters.iter_mut().enumerate() {
                let x = units(cluster, a[0]);
                let y = units(cluster, b[0]);
                if y > x {
                    let mut cut = Vec::new();
                    for _ in 0..y - x {
                        let mut unit = Vec::new();
                        for &l in b {
                            for &(c, q) in &meta.metas[l].bases {
                                let take = smallest_of_color(cluster, colors, c, q);
                                remove_all(cluster, &take);
                                unit.extend(take);
                            }
                        }
                        cut.push(unit);
                    }
                    offered.extend(cut);
                } else if x > y {
                    wanting.push((i, x - y));
                }
            }
            for (i, need) in wanting {
                for _ in 0..need {
                    let unit = offered.pop_front().expect("donated units balance received units");
                    clusters[i].extend(unit);
                }
            }
            assert!(offered.is_empty(), "donated units balance received units");
            let mut merged = a.clone();
            merged.extend(b);
            next.push(merged);
        }
        blocks = next;
        for cluster in &clusters {
            for block in &blocks {
                let first = units(cluster, block[0]);
                assert!(
                    block.iter().all(|&l| units(cluster, l) == first),
                    "meta block {block:?} not equalized in {cluster:?}"
                );
            }
        }
    }
    clusters.retain(|c| !c.is_empty());
    clusters
}

/// Fair clustering for any number of equally large color classes.
pub fn fair_equi(c: &Clustering, prof: &ColorProfile) -> Result<Clustering> {
    fair_equi_staged(c, prof).map(|(_, f)| f)
}

/// Returns the group-balanced intermediate and the final clustering.
pub fn fair_equi_staged(c: &Clustering, prof: &ColorProfile) -> Result<(Clustering, Clustering)> {
    check_universe(c, prof)?;
    require_equal(prof)?;
    let groups = binary_groups(prof.d());
    let balanced = balance_groups(c.clusters(), prof.colors(), &groups)?;
    let balanced = assemble(c.n(), &balanced);
    let meta = MetaProfile::from_groups(&groups);
    let fair = balance_meta(balanced.clusters(), prof.colors(), &meta);
    let fair = assemble(c.n(), &fair);
    debug_assert!(is_fair(&fair, prof));
    Ok((balanced, fair))
}

/// Repairs each color in turn so every cluster holds a multiple of `pⱼ`
/// vertices of color `j`.
pub fn create_pdc_multi(c: &Clustering, prof: &ColorProfile) -> Result<Clustering> {
    check_universe(c, prof)?;
    let mut clusters = c.clusters();
    for (j, &p) in prof.ratio().iter().enumerate() {
        clusters = repair_color(clusters, prof.colors(), j, p as usize).0;
    }
    let out = assemble(c.n(), &clusters);
    debug_assert!(is_p_divisible(&out, prof));
    Ok(out)
}

pub fn fair_general(c: &Clustering, prof: &ColorProfile) -> Result<Clustering> {
    fair_general_staged(c, prof).map(|(_, f)| f)
}

/// Returns the divisible intermediate and the final clustering.
pub fn fair_general_staged(c: &Clustering, prof: &ColorProfile) -> Result<(Clustering, Clustering)> {
    let pdc = create_pdc_multi(c, prof)?;
    let fair = make_pdc_fair(&pdc, prof, &MetaProfile::per_color(prof))?;
    Ok((pdc, fair))
}
