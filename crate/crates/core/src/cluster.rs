//! Clusterings, color profiles, partition distance and clustering costs.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Vertex;

/// A partition of `0..n`, stored as a label per vertex. Labels are
/// renumbered by first appearance, so equal partitions compare equal.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "Vec<usize>", try_from = "Vec<usize>")]
pub struct Clustering {
    labels: Vec<usize>,
    k: usize,
}

impl fmt::Debug for Clustering {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.clusters()).finish()
    }
}

impl From<Clustering> for Vec<usize> {
    fn from(c: Clustering) -> Self {
        c.labels
    }
}

impl TryFrom<Vec<usize>> for Clustering {
    type Error = Error;
    fn try_from(labels: Vec<usize>) -> Result<Self> {
        Ok(Clustering::from_labels(&labels))
    }
}

impl Clustering {
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map: HashMap<usize, usize> = HashMap::new();
        let labels: Vec<usize> = labels
            .iter()
            .map(|&l| {
                let next = map.len();
                *map.entry(l).or_insert(next)
            })
            .collect();
        Clustering { k: map.len(), labels }
    }

    /// Builds a clustering from explicit clusters; empty clusters are
    /// ignored and every vertex must appear exactly once.
    pub fn from_clusters<C: AsRef<[Vertex]>>(n: usize, clusters: &[C]) -> Result<Self> {
        let mut labels = vec![usize::MAX; n];
        for (i, c) in clusters.iter().enumerate() {
            for &v in c.as_ref() {
                if v >= n {
                    return Err(Error::VertexOutOfRange { vertex: v, n });
                }
                if labels[v] != usize::MAX {
                    return Err(Error::InvalidInput(format!("vertex {v} in two clusters")));
                }
                labels[v] = i;
            }
        }
        if let Some(v) = labels.iter().position(|&l| l == usize::MAX) {
            return Err(Error::InvalidInput(format!("vertex {v} is unassigned")));
        }
        Ok(Clustering::from_labels(&labels))
    }

    pub fn singletons(n: usize) -> Self {
        Clustering { labels: (0..n).collect(), k: n }
    }

    pub fn whole(n: usize) -> Self {
        Clustering { labels: vec![0; n], k: usize::from(n > 0) }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn num_clusters(&self) -> usize {
        self.k
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn label(&self, v: Vertex) -> usize {
        self.labels[v]
    }

    pub fn together(&self, u: Vertex, v: Vertex) -> bool {
        self.labels[u] == self.labels[v]
    }

    /// Clusters in label order, each sorted by vertex id.
    pub fn clusters(&self) -> Vec<Vec<Vertex>> {
        let mut out = vec![Vec::new(); self.k];
        for (v, &l) in self.labels.iter().enumerate() {
            out[l].push(v);
        }
        out
    }

    pub fn cluster_sizes(&self) -> Vec<usize> {
        let mut out = vec![0; self.k];
        for &l in &self.labels {
            out[l] += 1;
        }
        out
    }

    /// Number of unordered pairs sharing a cluster.
    pub fn together_pairs(&self) -> u64 {
        self.cluster_sizes().iter().map(|&s| pairs(s as u64)).sum()
    }
}

fn pairs(s: u64) -> u64 {
    s * s.saturating_sub(1) / 2
}

/// Number of unordered pairs together in exactly one of the clusterings.
pub fn dist(a: &Clustering, b: &Clustering) -> Result<u64> {
    if a.n() != b.n() {
        return Err(Error::UniverseMismatch(a.n(), b.n()));
    }
    let mut joint: HashMap<(usize, usize), u64> = HashMap::new();
    for v in 0..a.n() {
        *joint.entry((a.label(v), b.label(v))).or_default() += 1;
    }
    let both: u64 = joint.values().map(|&c| pairs(c)).sum();
    Ok(a.together_pairs() + b.together_pairs() - 2 * both)
}

/// Vertex colors together with the reduced global color ratio.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ColorProfile {
    colors: Vec<usize>,
    ratio: Vec<u64>,
}

impl ColorProfile {
    /// Infers the ratio from the global counts; colors are `0..=max`.
    pub fn from_colors(colors: Vec<usize>) -> Result<Self> {
        let d = colors.iter().max().map_or(0, |&m| m + 1);
        let mut counts = vec![0u64; d];
        for &c in &colors {
            counts[c] += 1;
        }
        if let Some(c) = counts.iter().position(|&x| x == 0) {
            return Err(Error::InvalidInput(format!("color {c} has no vertices")));
        }
        let g = counts.iter().fold(0u64, |g, &x| g.gcd(&x));
        let ratio = counts.iter().map(|&x| x / g.max(1)).collect();
        Ok(ColorProfile { colors, ratio })
    }

    /// Checks the global counts against a declared ratio.
    pub fn with_ratio(colors: Vec<usize>, ratio: &[u64]) -> Result<Self> {
        if ratio.is_empty() || ratio.contains(&0) {
            return Err(Error::InvalidInput(format!("ratio {ratio:?} must be positive")));
        }
        if let Some(&c) = colors.iter().find(|&&c| c >= ratio.len()) {
            return Err(Error::InvalidInput(format!("color {c} outside a ratio of {} colors", ratio.len())));
        }
        let g = ratio.iter().fold(0u64, |g, &x| g.gcd(&x));
        let ratio: Vec<u64> = ratio.iter().map(|&x| x / g).collect();
        let mut counts = vec![0usize; ratio.len()];
        for &c in &colors {
            counts[c] += 1;
        }
        let consistent =
            counts.iter().zip(&ratio).all(|(&c, &p)| c as u64 * ratio[0] == counts[0] as u64 * p)
                && counts[0] > 0;
        if !consistent {
            return Err(Error::RatioViolated { counts, ratio });
        }
        Ok(ColorProfile { colors, ratio })
    }

    pub fn n(&self) -> usize {
        self.colors.len()
    }

    pub fn d(&self) -> usize {
        self.ratio.len()
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color(&self, v: Vertex) -> usize {
        self.colors[v]
    }

    pub fn ratio(&self) -> &[u64] {
        &self.ratio
    }

    /// How many copies of the ratio vector the whole universe holds.
    pub fn multiplier(&self) -> usize {
        self.n() / self.ratio.iter().sum::<u64>() as usize
    }

    pub fn counts(&self, cluster: &[Vertex]) -> Vec<usize> {
        let mut out = vec![0; self.d()];
        for &v in cluster {
            out[self.colors[v]] += 1;
        }
        out
    }

    pub fn is_fair_set(&self, cluster: &[Vertex]) -> bool {
        let c = self.counts(cluster);
        c.iter().zip(&self.ratio).all(|(&ci, &pi)| ci as u64 * self.ratio[0] == c[0] as u64 * pi)
    }

    pub fn is_divisible_set(&self, cluster: &[Vertex]) -> bool {
        self.counts(cluster).iter().zip(&self.ratio).all(|(&c, &p)| (c as u64).is_multiple_of(p))
    }

    pub fn vertices_of(&self, color: usize) -> Vec<Vertex> {
        (0..self.n()).filter(|&v| self.colors[v] == color).collect()
    }
}

fn same_universe(c: &Clustering, prof: &ColorProfile) {
    assert_eq!(c.n(), prof.n(), "clustering and profile must share a universe");
}

/// Every cluster repeats the global color ratio exactly.
pub fn is_fair(c: &Clustering, prof: &ColorProfile) -> bool {
    same_universe(c, prof);
    c.clusters().iter().all(|cl| prof.is_fair_set(cl))
}

/// Every cluster's count of color `j` is a multiple of `p_j`.
pub fn is_p_divisible(c: &Clustering, prof: &ColorProfile) -> bool {
    same_universe(c, prof);
    c.clusters().iter().all(|cl| prof.is_divisible_set(cl))
}

pub type Rational = Ratio<i128>;

/// Correlation clustering weights with `w⁻ = 1 − w⁺`. Every `w⁺` is an
/// integer numerator over one shared denominator, so costs stay exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedCcInstance {
    n: usize,
    denom: u64,
    plus: Vec<u64>,
}

impl WeightedCcInstance {
    /// All pairs start at `w⁺ = 0`.
    pub fn new(n: usize, denom: u64) -> Result<Self> {
        if denom == 0 {
            return Err(Error::InvalidInput("denominator must be positive".into()));
        }
        Ok(WeightedCcInstance { n, denom, plus: vec![0; n * n.saturating_sub(1) / 2] })
    }

    /// Unweighted instance: `w⁺ = 1` exactly on the given pairs.
    pub fn from_edges(n: usize, together: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut inst = WeightedCcInstance::new(n, 1)?;
        for (u, v) in together {
            inst.set_numerator(u, v, 1)?;
        }
        Ok(inst)
    }

    /// Builds an instance from rational weights; unlisted pairs get `w⁺ = 0`.
    pub fn from_rationals(n: usize, weights: &[(Vertex, Vertex, Rational)]) -> Result<Self> {
        let mut denom: i128 = 1;
        for &(_, _, w) in weights {
            if w < Rational::from_integer(0) || w > Rational::from_integer(1) {
                return Err(Error::InvalidInput(format!("weight {w} outside [0, 1]")));
            }
            denom = denom.lcm(w.denom());
            if denom > u32::MAX as i128 {
                return Err(Error::InvalidInput("weight denominators too large".into()));
            }
        }
        let mut inst = WeightedCcInstance::new(n, denom as u64)?;
        for &(u, v, w) in weights {
            let num = (w * denom).to_integer();
            inst.set_numerator(u, v, num as u64)?;
        }
        Ok(inst)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn denominator(&self) -> u64 {
        self.denom
    }

    fn index(&self, u: Vertex, v: Vertex) -> Result<usize> {
        for x in [u, v] {
            if x >= self.n {
                return Err(Error::VertexOutOfRange { vertex: x, n: self.n });
            }
        }
        if u == v {
            return Err(Error::InvalidInput(format!("self pair ({u}, {v})")));
        }
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        Ok(a * (2 * self.n - a - 1) / 2 + (b - a - 1))
    }

    pub fn set_numerator(&mut self, u: Vertex, v: Vertex, num: u64) -> Result<()> {
        if num > self.denom {
            return Err(Error::InvalidInput(format!("weight {num}/{} exceeds 1", self.denom)));
        }
        let i = self.index(u, v)?;
        self.plus[i] = num;
        Ok(())
    }

    pub fn plus_numerator(&self, u: Vertex, v: Vertex) -> u64 {
        self.plus[self.index(u, v).expect("valid pair")]
    }

    pub fn w_plus(&self, u: Vertex, v: Vertex) -> Rational {
        Rational::new(self.plus_numerator(u, v) as i128, self.denom as i128)
    }

    pub fn w_minus(&self, u: Vertex, v: Vertex) -> Rational {
        Rational::from_integer(1) - self.w_plus(u, v)
    }

    /// `w⁺ ≥ ½`, decided without rounding.
    pub fn prefers_together(&self, u: Vertex, v: Vertex) -> bool {
        2 * self.plus_numerator(u, v) >= self.denom
    }
}

/// Cost times the instance denominator.
pub fn cc_cost_scaled(inst: &WeightedCcInstance, c: &Clustering) -> Result<u128> {
    if inst.n() != c.n() {
        return Err(Error::UniverseMismatch(inst.n(), c.n()));
    }
    let mut total: u128 = 0;
    for u in 0..inst.n() {
        for v in u + 1..inst.n() {
            let plus = inst.plus_numerator(u, v);
            total += if c.together(u, v) { inst.denom - plus } else { plus } as u128;
        }
    }
    Ok(total)
}

/// Disagreement cost: `w⁻` over together pairs plus `w⁺` over separated pairs.
pub fn cc_cost(inst: &WeightedCcInstance, c: &Clustering) -> Result<Rational> {
    let scaled = cc_cost_scaled(inst, c)?;
    Ok(Rational::new(scaled as i128, inst.denom as i128))
}

/// `Σ dist(Cᵢ, c)^ℓ`, exact. Ordering by this sum equals ordering by the
/// ℓ-mean objective.
pub fn consensus_power_sum(inputs: &[Clustering], c: &Clustering, ell: u32) -> Result<u128> {
    if ell == 0 {
        return Err(Error::InvalidInput("ℓ must be at least 1".into()));
    }
    let mut total: u128 = 0;
    for input in inputs {
        let d = dist(input, c)? as u128;
        let term =
            d.checked_pow(ell).ok_or_else(|| Error::InvalidInput("objective overflows 128 bits".into()))?;
        total = total
            .checked_add(term)
            .ok_or_else(|| Error::InvalidInput("objective overflows 128 bits".into()))?;
    }
    Ok(total)
}

/// `(Σ dist(Cᵢ, c)^ℓ)^{1/ℓ}`.
pub fn consensus_objective(inputs: &[Clustering], c: &Clustering, ell: u32) -> Result<f64> {
    let sum = consensus_power_sum(inputs, c, ell)?;
    Ok(ell_root(sum, ell))
}

pub fn ell_root(sum: u128, ell: u32) -> f64 {
    if ell == 1 {
        return sum as f64;
    }
    let root = (sum as f64).powf(1.0 / ell as f64);
    let near = root.round();
    // snap exact integer roots such as (3² + 4²)^{1/2}
    if (near as u128).checked_pow(ell) == Some(sum) {
        near
    } else {
        root
    }
}

/// Parses lines `vertex cluster [color]`. Returns the clustering and, when
/// every line carries a color, the color of each vertex.
pub fn parse_clustering(text: &str) -> Result<(Clustering, Option<Vec<usize>>)> {
    let mut rows: Vec<(usize, usize, Option<usize>, usize)> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if !(2..=3).contains(&parts.len()) {
            return Err(Error::parse(i + 1, "expected `vertex cluster [color]`"));
        }
        let num = |s: &str| {
            s.parse::<usize>().map_err(|_| Error::parse(i + 1, format!("not a non-negative integer: {s:?}")))
        };
        let color = parts.get(2).map(|s| num(s)).transpose()?;
        rows.push((num(parts[0])?, num(parts[1])?, color, i + 1));
    }
    let n = rows.len();
    let mut labels = vec![None; n];
    let mut colors = vec![None; n];
    for &(v, c, col, line) in &rows {
        if v >= n {
            return Err(Error::parse(line, format!("vertex {v} out of range for {n} vertices")));
        }
        if labels[v].is_some() {
            return Err(Error::parse(line, format!("vertex {v} listed twice")));
        }
        labels[v] = Some(c);
        colors[v] = col;
    }
    let labels: Vec<usize> = labels.into_iter().map(|l| l.expect("all vertices seen")).collect();
    let colored = colors.iter().filter(|c| c.is_some()).count();
    let colors = match colored {
        0 => None,
        k if k == n => Some(colors.into_iter().map(|c| c.unwrap()).collect()),
        _ => {
            let line = rows.iter().find(|r| r.2.is_none()).map_or(1, |r| r.3);
            return Err(Error::parse(line, "color missing on some lines"));
        }
    };
    Ok((Clustering::from_labels(&labels), colors))
}

pub fn format_clustering(c: &Clustering, prof: Option<&ColorProfile>) -> String {
    let mut out = String::new();
    for v in 0..c.n() {
        match prof {
            Some(p) => out.push_str(&format!("{v} {} {}\n", c.label(v), p.color(v))),
            None => out.push_str(&format!("{v} {}\n", c.label(v))),
        }
    }
    out
}

/// Parses `vertex color` lines.
pub fn parse_colors(text: &str) -> Result<Vec<usize>> {
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let [v, c] = crate::graph::parse_fields::<2>(line, i + 1)?;
        rows.push((v, c, i + 1));
    }
    let n = rows.len();
    let mut colors = vec![None; n];
    for (v, c, line) in rows {
        if v >= n || colors[v].is_some() {
            return Err(Error::parse(line, format!("vertex {v} out of range or repeated")));
        }
        colors[v] = Some(c);
    }
    Ok(colors.into_iter().map(Option::unwrap).collect())
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    if let Some((a, b)) = s.split_once('/') {
        let a: i128 = a.trim().parse().ok()?;
        let b: i128 = b.trim().parse().ok()?;
        return (b != 0).then(|| Rational::new(a, b));
    }
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    if frac.len() > 18 || !frac.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    let int: i128 = if int.is_empty() { 0 } else { int.parse().ok()? };
    let scale = 10i128.pow(frac.len() as u32);
    let frac: i128 = if frac.is_empty() { 0 } else { frac.parse().ok()? };
    Some(Rational::new(int * scale + frac, scale))
}

/// Parses `u v w_plus` lines; `w_plus` may be a decimal or a fraction.
/// The universe is `max(n_hint, largest id + 1)`.
pub fn parse_weighted(text: &str, n_hint: usize) -> Result<WeightedCcInstance> {
    let mut weights = Vec::new();
    let mut n = n_hint;
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 3 {
            return Err(Error::parse(i + 1, "expected `u v w_plus`"));
        }
        let id =
            |s: &str| s.parse::<usize>().map_err(|_| Error::parse(i + 1, format!("not a vertex id: {s:?}")));
        let (u, v) = (id(parts[0])?, id(parts[1])?);
        let w = parse_rational(parts[2])
            .filter(|w| *w >= Rational::from_integer(0) && *w <= Rational::from_integer(1))
            .ok_or_else(|| Error::parse(i + 1, format!("weight {:?} not in [0, 1]", parts[2])))?;
        if u == v {
            return Err(Error::parse(i + 1, "self pair"));
        }
        n = n.max(u + 1).max(v + 1);
        weights.push((u, v, w));
    }
    WeightedCcInstance::from_rationals(n, &weights)
}

/// Writes every pair as `u v a/denom`.
pub fn format_weighted(inst: &WeightedCcInstance) -> String {
    let mut out = String::new();
    for u in 0..inst.n() {
        for v in u + 1..inst.n() {
            out.push_str(&format!("{u} {v} {}\n", inst.w_plus(u, v)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cl(n: usize, clusters: &[&[usize]]) -> Clustering {
        Clustering::from_clusters(n, clusters).unwrap()
    }

    #[test]
    fn canonical_labels() {
        let a = Clustering::from_labels(&[7, 7, 3, 9]);
        assert_eq!(a.labels(), &[0, 0, 1, 2]);
        assert_eq!(a, cl(4, &[&[2], &[0, 1], &[3]]));
        assert_eq!(a.clusters(), vec![vec![0, 1], vec![2], vec![3]]);
        assert!(Clustering::from_clusters(3, &[vec![0, 1]]).is_err());
        assert!(Clustering::from_clusters(2, &[vec![0, 1], vec![1]]).is_err());
    }

    #[test]
    fn distance_examples() {
        let a = cl(3, &[&[0, 1], &[2]]);
        let b = Clustering::singletons(3);
        assert_eq!(dist(&a, &b).unwrap(), 1);
        assert_eq!(dist(&a, &a).unwrap(), 0);
        assert_eq!(dist(&Clustering::whole(4), &b.clone()).unwrap_err(), Error::UniverseMismatch(4, 3));
        assert_eq!(dist(&Clustering::whole(4), &Clustering::singletons(4)).unwrap(), 6);
    }

    #[test]
    fn fairness_examples() {
        let prof = ColorProfile::from_colors(vec![0, 0, 1]).unwrap();
        assert_eq!(prof.ratio(), &[2, 1]);
        assert!(is_fair(&Clustering::whole(3), &prof));
        assert!(!is_fair(&cl(3, &[&[0, 1], &[2]]), &prof));
        assert!(is_p_divisible(&cl(3, &[&[0, 1], &[2]]), &prof));
        let prof = ColorProfile::from_colors(vec![0, 0, 0, 1, 1, 1, 1, 1, 1]).unwrap();
        assert_eq!(prof.ratio(), &[1, 2]);
        let prof = ColorProfile::from_colors(vec![0, 0, 0, 1]).unwrap();
        assert!(is_p_divisible(&Clustering::whole(4), &prof));
        assert!(!is_p_divisible(&cl(4, &[&[0, 1], &[2, 3]]), &prof));
    }

    #[test]
    fn ratio_checks() {
        assert!(ColorProfile::with_ratio(vec![0, 0, 1], &[2, 1]).is_ok());
        assert!(ColorProfile::with_ratio(vec![0, 0, 1], &[4, 2]).is_ok());
        assert!(matches!(ColorProfile::with_ratio(vec![0, 1, 1], &[2, 1]), Err(Error::RatioViolated { .. })));
        assert!(ColorProfile::from_colors(vec![0, 2]).is_err());
    }

    #[test]
    fn cost_examples() {
        let all: Vec<(usize, usize)> = (0..4).flat_map(|u| (u + 1..4).map(move |v| (u, v))).collect();
        let inst = WeightedCcInstance::from_edges(4, all).unwrap();
        assert_eq!(cc_cost(&inst, &Clustering::whole(4)).unwrap(), Rational::from_integer(0));
        assert_eq!(cc_cost(&inst, &Clustering::singletons(4)).unwrap(), Rational::from_integer(6));
        let half = Rational::new(1, 2);
        let inst =
            WeightedCcInstance::from_rationals(3, &[(0, 1, half), (1, 2, half), (0, 2, half)]).unwrap();
        assert_eq!(inst.w_minus(0, 2), half);
        assert_eq!(cc_cost(&inst, &cl(3, &[&[0, 1], &[2]])).unwrap(), Rational::new(3, 2));
    }

    #[test]
    fn objective_examples() {
        let c = Clustering::whole(3);
        assert_eq!(consensus_objective(std::slice::from_ref(&c), &c, 1).unwrap(), 0.0);
        // one input at distance 3, one at distance 4 from `target`
        let target = Clustering::singletons(5);
        let a = cl(5, &[&[0, 1, 2], &[3], &[4]]);
        let b4 = cl(5, &[&[0, 1], &[2, 3, 4]]);
        assert_eq!(dist(&a, &target).unwrap(), 3);
        assert_eq!(dist(&b4, &target).unwrap(), 4);
        let inputs = vec![a, b4];
        assert_eq!(consensus_objective(&inputs, &target, 1).unwrap(), 7.0);
        assert_eq!(consensus_objective(&inputs, &target, 2).unwrap(), 5.0);
        assert!(consensus_objective(&inputs, &target, 0).is_err());
    }

    #[test]
    fn parse_formats() {
        let (c, colors) = parse_clustering("0 5 0\n1 5 0\n2 9 1\n").unwrap();
        assert_eq!(c, cl(3, &[&[0, 1], &[2]]));
        assert_eq!(colors, Some(vec![0, 0, 1]));
        let (_, colors) = parse_clustering("1 0\n0 0\n").unwrap();
        assert_eq!(colors, None);
        assert_eq!(parse_clustering("0 0 0\n0 1 1\n").unwrap_err(), Error::parse(2, "vertex 0 listed twice"));
        assert!(matches!(parse_clustering("0 0\n1 x\n"), Err(Error::Parse { line: 2, .. })));
        let inst = parse_weighted("0 1 0.25\n1 2 1/3\n", 0).unwrap();
        assert_eq!(inst.n(), 3);
        assert_eq!(inst.denominator(), 12);
        assert_eq!(inst.w_plus(2, 1), Rational::new(1, 3));
        assert_eq!(inst.w_plus(0, 2), Rational::from_integer(0));
        assert!(matches!(parse_weighted("0 1 1.5\n", 0), Err(Error::Parse { line: 1, .. })));
        assert_eq!(parse_weighted(&format_weighted(&inst), 0).unwrap(), inst);
    }

    #[test]
    fn serde_round_trip() {
        let c = cl(4, &[&[0, 3], &[1, 2]]);
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(text, "[0,1,1,0]");
        assert_eq!(serde_json::from_str::<Clustering>(&text).unwrap(), c);
    }
}
