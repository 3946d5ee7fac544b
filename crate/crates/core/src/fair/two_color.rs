//! Two colors in ratio `p : 1`.

use crate::cluster::{is_fair, is_p_divisible, Clustering, ColorProfile};
use crate::error::{Error, Result};
use crate::fair::{assemble, check_universe, remove_all, smallest_of_color};
use crate::graph::Vertex;

pub const PDC_BOUND: f64 = 3.5;
pub const MAKE_FAIR_BOUND: f64 = 3.0;
/// `δ + α + δα` with `δ = 3.5`, `α = 3`.
pub const PIPELINE_BOUND: f64 = 17.0;

/// The two colors of a `p : 1` profile.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TwoColor {
    pub blue: usize,
    pub red: usize,
    pub p: usize,
}

impl TwoColor {
    pub fn of(prof: &ColorProfile) -> Result<Self> {
        match prof.ratio() {
            &[a, 1] => Ok(TwoColor { blue: 0, red: 1, p: a as usize }),
            &[1, b] => Ok(TwoColor { blue: 1, red: 0, p: b as usize }),
            r => Err(Error::InvalidInput(format!("ratio {r:?} is not a two-color p:1 ratio"))),
        }
    }
}

/// Counters from one divisibility repair.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RepairTrace {
    /// Deficit left in the merge clusters when the merge phase starts.
    pub merge_deficit: usize,
    /// Subsets cut during the merge phase.
    pub subsets_cut: usize,
    /// Extra clusters opened during the cut phase.
    pub extra_clusters: usize,
}

struct Candidate {
    idx: usize,
    /// Next subset index; 0 is the surplus itself.
    z: usize,
    size: usize,
    surplus: usize,
    deficit: usize,
}

impl Candidate {
    fn cost(&self, p: usize) -> i64 {
        let (size, s) = (self.size as i64, self.surplus as i64);
        if self.z == 0 {
            s * (size - s) - self.deficit as i64 * size
        } else {
            p as i64 * (size - (self.z as i64 * p as i64 + s))
        }
    }
}

/// Makes every cluster's count of `color` divisible by `p`: surplus moves
/// from low-surplus clusters into high-surplus ones, then either whole
/// `p`-subsets are cut to close the remaining deficits or the remaining
/// surplus forms clusters of size `p`.
pub(crate) fn repair_color(
    mut clusters: Vec<Vec<Vertex>>,
    colors: &[usize],
    color: usize,
    p: usize,
) -> (Vec<Vec<Vertex>>, RepairTrace) {
    let mut trace = RepairTrace::default();
    if p <= 1 {
        return (clusters, trace);
    }
    let count = |c: &[Vertex]| c.iter().filter(|&&v| colors[v] == color).count();
    let k = clusters.len();
    let surplus: Vec<usize> = clusters.iter().map(|c| count(c) % p).collect();
    let deficit: Vec<usize> = surplus.iter().map(|&s| (p - s) % p).collect();

    let cut: Vec<usize> = (0..k).filter(|&i| surplus[i] > 0 && 2 * surplus[i] <= p).collect();
    let mut merge: Vec<usize> = (0..k).filter(|&i| 2 * surplus[i] > p).collect();
    let key = |i: usize| {
        let (size, s, d) = (clusters[i].len() as i64, surplus[i] as i64, deficit[i] as i64);
        s * (size - s) - d * size
    };
    merge.sort_by(|&a, &b| key(b).cmp(&key(a)).then(a.cmp(&b)));

    let mut give: Vec<Vec<Vertex>> = (0..k)
        .map(|i| {
            if cut.contains(&i) {
                smallest_of_color(&clusters[i], colors, color, surplus[i])
            } else {
                Vec::new()
            }
        })
        .collect();
    let mut need: Vec<usize> = (0..k).map(|i| if 2 * surplus[i] > p { deficit[i] } else { 0 }).collect();

    let (mut ci, mut mj) = (0, 0);
    while ci < cut.len() && mj < merge.len() {
        let (a, b) = (cut[ci], merge[mj]);
        let moved = give[a].len().min(need[b]);
        let batch: Vec<Vertex> = give[a].drain(..moved).collect();
        remove_all(&mut clusters[a], &batch);
        clusters[b].extend(batch);
        need[b] -= moved;
        if give[a].is_empty() {
            ci += 1;
        }
        if need[b] == 0 {
            mj += 1;
        }
    }

    if ci == cut.len() {
        let open: Vec<usize> = merge[mj..].to_vec();
        let w: usize = open.iter().map(|&i| need[i]).sum();
        trace.merge_deficit = w;
        let mut cands: Vec<Candidate> = (0..k)
            .filter(|&i| !open.contains(&i) && need[i] == 0 && !merge[..mj].contains(&i))
            .map(|i| Candidate { idx: i, z: 1, size: clusters[i].len(), surplus: 0, deficit: 0 })
            .chain(open.iter().filter(|&&i| need[i] == deficit[i]).map(|&i| Candidate {
                idx: i,
                z: 0,
                size: clusters[i].len(),
                surplus: surplus[i],
                deficit: deficit[i],
            }))
            .collect();
        cands.sort_by_key(|c| c.idx);
        let mut removed = vec![false; k];
        let mut left = w;
        while left > 0 {
            let pick = cands
                .iter()
                .enumerate()
                .filter(|(_, c)| {
                    let eligible_zero = c.z > 0 || (!removed[c.idx] && need[c.idx] == c.deficit);
                    let remaining = count(&clusters[c.idx]);
                    let has_subset = if c.z == 0 { c.surplus > 0 } else { remaining >= p };
                    eligible_zero && has_subset
                })
                .min_by(|(_, x), (_, y)| x.cost(p).cmp(&y.cost(p)).then(x.idx.cmp(&y.idx)))
                .map(|(i, _)| i)
                .expect("a cuttable subset exists while deficit remains");
            let (idx, z) = (cands[pick].idx, cands[pick].z);
            let take = if z == 0 {
                removed[idx] = true;
                left -= need[idx];
                need[idx] = 0;
                smallest_of_color(&clusters[idx], colors, color, cands[pick].surplus)
            } else {
                smallest_of_color(&clusters[idx], colors, color, p)
            };
            remove_all(&mut clusters[idx], &take);
            let mut rest = &take[..];
            for &b in &open {
                if rest.is_empty() {
                    break;
                }
                if removed[b] || need[b] == 0 {
                    continue;
                }
                let moved = rest.len().min(need[b]);
                clusters[b].extend_from_slice(&rest[..moved]);
                rest = &rest[moved..];
                need[b] -= moved;
                left -= moved;
            }
            debug_assert!(rest.is_empty());
            cands[pick].z += 1;
            trace.subsets_cut += 1;
        }
        assert_eq!(trace.subsets_cut * p, w, "merge phase cuts exactly W/p subsets");
    } else {
        let mut buffer: Vec<Vertex> = Vec::with_capacity(p);
        for &a in &cut[ci..] {
            let batch = std::mem::take(&mut give[a]);
            remove_all(&mut clusters[a], &batch);
            for v in batch {
                buffer.push(v);
                if buffer.len() == p {
                    clusters.push(std::mem::take(&mut buffer));
                    trace.extra_clusters += 1;
                }
            }
        }
        assert!(buffer.is_empty(), "leftover surplus is a multiple of p");
    }
    clusters.retain(|c| !c.is_empty());
    (clusters, trace)
}

/// A clustering whose blue count is divisible by `p` in every cluster.
pub fn create_pdc_two_color(c: &Clustering, prof: &ColorProfile) -> Result<Clustering> {
    check_universe(c, prof)?;
    let tc = TwoColor::of(prof)?;
    let (out, _) = repair_color(c.clusters(), prof.colors(), tc.blue, tc.p);
    let out = assemble(c.n(), &out);
    debug_assert!(is_p_divisible(&out, prof));
    Ok(out)
}

/// Moves surplus red vertices of red-heavy clusters into the blue-heavy
/// ones, in input order and smallest ids first.
pub fn make_clusters_fair(t: &Clustering, prof: &ColorProfile) -> Result<Clustering> {
    check_universe(t, prof)?;
    let tc = TwoColor::of(prof)?;
    if !is_p_divisible(t, prof) {
        return Err(Error::Precondition("input is not p-divisible".into()));
    }
    let mut clusters = t.clusters();
    let colors = prof.colors();
    let mut spare: Vec<Vec<Vertex>> = Vec::new();
    let mut heavy: Vec<(usize, usize)> = Vec::new();
    let mut donors: Vec<usize> = Vec::new();
    for (i, c) in clusters.iter().enumerate() {
        let counts = prof.counts(c);
        let (blue, red) = (counts[tc.blue], counts[tc.red]);
        let want = blue / tc.p;
        if red > want {
            donors.push(i);
            spare.push(smallest_of_color(c, colors, tc.red, red - want));
        } else if red < want {
            heavy.push((i, want - red));
        }
    }
    let (mut di, mut hi) = (0, 0);
    while di < donors.len() && hi < heavy.len() {
        let (a, (b, need)) = (donors[di], heavy[hi]);
        let moved = spare[di].len().min(need);
        let batch: Vec<Vertex> = spare[di].drain(..moved).collect();
        remove_all(&mut clusters[a], &batch);
        clusters[b].extend(batch);
        heavy[hi].1 -= moved;
        if spare[di].is_empty() {
            di += 1;
        }
        if heavy[hi].1 == 0 {
            hi += 1;
        }
    }
    let out = assemble(t.n(), &clusters);
    debug_assert!(is_fair(&out, prof));
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwoColorStages {
    pub pdc: Clustering,
    pub fair: Clustering,
}

pub fn closest_fair_two_color_staged(c: &Clustering, prof: &ColorProfile) -> Result<TwoColorStages> {
    check_universe(c, prof)?;
    let tc = TwoColor::of(prof)?;
    if tc.p == 1 {
        let fair = crate::fair::fair_equi(c, prof)?;
        return Ok(TwoColorStages { pdc: c.clone(), fair });
    }
    let pdc = create_pdc_two_color(c, prof)?;
    let fair = make_clusters_fair(&pdc, prof)?;
    Ok(TwoColorStages { pdc, fair })
}

pub fn closest_fair_two_color(c: &Clustering, prof: &ColorProfile) -> Result<Clustering> {
    closest_fair_two_color_staged(c, prof).map(|s| s.fair)
}

/// A closest-fair instance built from a 3-partition instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThreePartitionInstance {
    pub clustering: Clustering,
    pub profile: ColorProfile,
    pub tau: u64,
    pub target: u64,
    pub p: u64,
    /// Blue clusters first, then one red cluster per item.
    pub blue_clusters: Vec<Vec<Vertex>>,
    pub red_clusters: Vec<Vec<Vertex>>,
}

/// One monochromatic blue cluster of size `pT` per triple and one red
/// cluster of size `xⱼ` per item; a 3-partition exists iff a fair
/// clustering lies within `τ`.
pub fn gen_np_hard_instance(items: &[u64], p: u64) -> Result<ThreePartitionInstance> {
    if p < 2 {
        return Err(Error::InvalidInput(format!("p = {p} must be at least 2")));
    }
    if items.is_empty() || !items.len().is_multiple_of(3) {
        return Err(Error::InvalidInput("item count must be a positive multiple of 3".into()));
    }
    let q = (items.len() / 3) as u64;
    let total: u64 = items.iter().sum();
    if !total.is_multiple_of(q) {
        return Err(Error::InvalidInput(format!("T = {total}/{q} is not an integer")));
    }
    let t = total / q;
    if let Some(&x) = items.iter().find(|&&x| !(4 * x > t && 2 * x < t)) {
        return Err(Error::InvalidInput(format!("item {x} outside (T/4, T/2) for T = {t}")));
    }
    let pairs: u64 = items.iter().map(|&x| x * (t - x)).sum();
    if !pairs.is_multiple_of(2) {
        return Err(Error::InvalidInput("Σ x(T − x) is odd".into()));
    }
    let tau = pairs / 2 + q * p * t * t;

    let mut colors = Vec::new();
    let mut blue_clusters = Vec::new();
    let mut red_clusters = Vec::new();
    for _ in 0..q {
        let start = colors.len();
        colors.extend(std::iter::repeat_n(0usize, (p * t) as usize));
        blue_clusters.push((start..colors.len()).collect::<Vec<_>>());
    }
    for &x in items {
        let start = colors.len();
        colors.extend(std::iter::repeat_n(1usize, x as usize));
        red_clusters.push((start..colors.len()).collect::<Vec<_>>());
    }
    let profile = ColorProfile::with_ratio(colors, &[p, 1])?;
    let all: Vec<Vec<Vertex>> = blue_clusters.iter().chain(&red_clusters).cloned().collect();
    let clustering = Clustering::from_clusters(profile.n(), &all)?;
    Ok(ThreePartitionInstance { clustering, profile, tau, target: t, p, blue_clusters, red_clusters })
}

/// Merges blue cluster `i` with the red clusters of the `i`-th triple.
pub fn three_partition_witness(inst: &ThreePartitionInstance, triples: &[[usize; 3]]) -> Result<Clustering> {
    if triples.len() != inst.blue_clusters.len() {
        return Err(Error::InvalidInput("one triple per blue cluster".into()));
    }
    let mut used = vec![false; inst.red_clusters.len()];
    let mut clusters = Vec::with_capacity(triples.len());
    for (i, triple) in triples.iter().enumerate() {
        let mut cluster = inst.blue_clusters[i].clone();
        let mut sum = 0;
        for &j in triple {
            if j >= used.len() || std::mem::replace(&mut used[j], true) {
                return Err(Error::InvalidInput(format!("item {j} missing or reused")));
            }
            sum += inst.red_clusters[j].len() as u64;
            cluster.extend_from_slice(&inst.red_clusters[j]);
        }
        if sum != inst.target {
            return Err(Error::InvalidInput(format!("triple {triple:?} sums to {sum}")));
        }
        clusters.push(cluster);
    }
    Clustering::from_clusters(inst.profile.n(), &clusters)
}

/// Backtracking search for a partition of `items` into triples summing to
/// `target`. Exponential; meant for small instances.
pub fn solve_three_partition(items: &[u64], target: u64) -> Option<Vec<[usize; 3]>> {
    if !items.len().is_multiple_of(3) {
        return None;
    }
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by_key(|&i| std::cmp::Reverse(items[i]));
    let mut used = vec![false; items.len()];
    let mut out = Vec::new();
    fn go(items: &[u64], order: &[usize], target: u64, used: &mut [bool], out: &mut Vec<[usize; 3]>) -> bool {
        let Some(a) = order.iter().position(|&i| !used[i]) else {
            return true;
        };
        let first = order[a];
        used[first] = true;
        for b in a + 1..order.len() {
            let second = order[b];
            if used[second] || items[first] + items[second] >= target {
                continue;
            }
            used[second] = true;
            let need = target - items[first] - items[second];
            for &third in &order[b + 1..] {
                if used[third] || items[third] != need {
                    continue;
                }
                used[third] = true;
                out.push([first, second, third]);
                if go(items, order, target, used, out) {
                    return true;
                }
                out.pop();
                used[third] = false;
                // equal items are interchangeable
                break;
            }
            used[second] = false;
        }
        used[first] = false;
        false
    }
    go(items, &order, target, &mut used, &mut out).then_some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::dist;

    fn profile(colors: &[usize]) -> ColorProfile {
        ColorProfile::from_colors(colors.to_vec()).unwrap()
    }

    #[test]
    fn divisible_input_unchanged() {
        let prof = profile(&[0, 0, 1, 0, 0, 1]);
        let c = Clustering::from_labels(&[0, 0, 0, 1, 1, 1]);
        assert_eq!(create_pdc_two_color(&c, &prof).unwrap(), c);
        assert_eq!(make_clusters_fair(&c, &prof).unwrap(), c);
        assert_eq!(closest_fair_two_color(&c, &prof).unwrap(), c);
    }

    #[test]
    fn odd_blue_counts_become_even() {
        // {b,b,b,r} {b,r}: surpluses 1 and 1 with p = 2
        let prof = profile(&[0, 0, 0, 1, 0, 1]);
        let c = Clustering::from_labels(&[0, 0, 0, 0, 1, 1]);
        let t = create_pdc_two_color(&c, &prof).unwrap();
        assert!(is_p_divisible(&t, &prof));
        // Both surplus blues are cut into a new pair.
        assert_eq!(t, Clustering::from_clusters(6, &[vec![0, 4], vec![1, 2, 3], vec![5]]).unwrap());
        assert_eq!(dist(&c, &t).unwrap(), 5);
        let best = crate::oracle::oracle_closest_divisible(&c, &prof).unwrap().1;
        assert_eq!(best, 5);
    }

    #[test]
    fn three_partition_search() {
        let items = [5, 6, 7];
        assert_eq!(solve_three_partition(&items, 18), Some(vec![[2, 1, 0]]));
        let items = [26, 27, 47, 26, 27, 47];
        let found = solve_three_partition(&items, 100).unwrap();
        for t in &found {
            assert_eq!(t.iter().map(|&i| items[i]).sum::<u64>(), 100);
        }
        assert_eq!(solve_three_partition(&[5, 6, 8], 18), None);
        let inst = gen_np_hard_instance(&[5, 6, 7], 2).unwrap();
        let w = three_partition_witness(&inst, &solve_three_partition(&[5, 6, 7], 18).unwrap()).unwrap();
        assert_eq!(dist(&inst.clustering, &w).unwrap(), inst.tau);
    }

    #[test]
    fn red_moves_to_blue_pair() {
        let prof = profile(&[0, 0, 1]);
        let t = Clustering::from_labels(&[0, 0, 1]);
        let f = make_clusters_fair(&t, &prof).unwrap();
        assert_eq!(f, Clustering::whole(3));
        assert_eq!(dist(&t, &f).unwrap(), 2);
        let odd = Clustering::from_labels(&[0, 1, 1]);
        assert!(matches!(make_clusters_fair(&odd, &prof), Err(Error::Precondition(_))));
    }

    #[test]
    fn rejects_other_profiles() {
        let prof = profile(&[0, 0, 1, 1, 1, 2]);
        let c = Clustering::whole(6);
        assert!(create_pdc_two_color(&c, &prof).is_err());
    }

    #[test]
    fn merge_phase_counts_subsets() {
        // blue = 0; p = 3; surpluses 2, 2, 2 all merge-type, no cut clusters
        let colors = [0, 0, 0, 0, 0, 0, 1, 1];
        let prof = ColorProfile::with_ratio(colors.to_vec(), &[3, 1]).unwrap();
        let c = Clustering::from_labels(&[0, 0, 1, 1, 2, 2, 0, 1]);
        let (_, trace) = repair_color(c.clusters(), prof.colors(), 0, 3);
        assert_eq!(trace.merge_deficit, 3);
        assert_eq!(trace.subsets_cut, 1);
        let t = create_pdc_two_color(&c, &prof).unwrap();
        assert!(is_p_divisible(&t, &prof));
    }

    #[test]
    fn three_partition_example() {
        let inst = gen_np_hard_instance(&[5, 6, 7], 2).unwrap();
        assert_eq!(inst.target, 18);
        assert_eq!(inst.tau, 755);
        let w = three_partition_witness(&inst, &[[0, 1, 2]]).unwrap();
        assert!(is_fair(&w, &inst.profile));
        assert_eq!(dist(&inst.clustering, &w).unwrap(), 755);
        assert!(gen_np_hard_instance(&[2, 6, 10], 2).is_err());
        assert!(gen_np_hard_instance(&[5, 6], 2).is_err());
    }
}
