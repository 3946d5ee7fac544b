//! Directed graphs, reachability under edge faults, and the two-strand
//! skeleton used by the preserver constructions.

use std::collections::{HashMap, VecDeque};

use crate::error::{Error, Result};

pub type Vertex = usize;
pub type Edge = (Vertex, Vertex);

/// A simple directed graph on vertices `0..n`.
///
/// Adjacency lists hold edge ids and are sorted by the opposite endpoint,
/// so every traversal visits neighbours in increasing id order.
#[derive(Clone, Debug)]
pub struct DirectedGraph {
    n: usize,
    edges: Vec<Edge>,
    out: Vec<Vec<usize>>,
    inc: Vec<Vec<usize>>,
    index: HashMap<Edge, usize>,
}

impl PartialEq for DirectedGraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.edges == other.edges
    }
}

impl Eq for DirectedGraph {}

impl DirectedGraph {
    pub fn new(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let edges: Vec<Edge> = edges.into_iter().collect();
        let mut index = HashMap::with_capacity(edges.len());
        let mut out = vec![Vec::new(); n];
        let mut inc = vec![Vec::new(); n];
        for (id, &(u, v)) in edges.iter().enumerate() {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if index.insert((u, v), id).is_some() {
                return Err(Error::DuplicateEdge(u, v));
            }
            out[u].push(id);
            inc[v].push(id);
        }
        for list in &mut out {
            list.sort_by_key(|&e| edges[e].1);
        }
        for list in &mut inc {
            list.sort_by_key(|&e| edges[e].0);
        }
        Ok(DirectedGraph { n, edges, out, inc, index })
    }

    pub fn empty(n: usize) -> Self {
        DirectedGraph::new(n, []).expect("edgeless graph is valid")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> Edge {
        self.edges[id]
    }

    pub fn edge_id(&self, u: Vertex, v: Vertex) -> Option<usize> {
        self.index.get(&(u, v)).copied()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.index.contains_key(&(u, v))
    }

    /// Ids of edges leaving `v`, ordered by head.
    pub fn out_edges(&self, v: Vertex) -> &[usize] {
        &self.out[v]
    }

    /// Ids of edges entering `v`, ordered by tail.
    pub fn in_edges(&self, v: Vertex) -> &[usize] {
        &self.inc[v]
    }

    pub fn in_degree(&self, v: Vertex) -> usize {
        self.inc[v].len()
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        check_vertex(v, self.n)
    }

    /// Subgraph on the same vertex set keeping the given edges, in host order.
    pub fn subgraph<I: IntoIterator<Item = Edge>>(&self, keep: I) -> Result<DirectedGraph> {
        let mut mask = vec![false; self.m()];
        for (u, v) in keep {
            let id = self.edge_id(u, v).ok_or(Error::UnknownEdge(u, v))?;
            mask[id] = true;
        }
        let kept = self.edges.iter().zip(&mask).filter(|(_, &k)| k).map(|(&e, _)| e);
        DirectedGraph::new(self.n, kept)
    }

    /// Mask over edge ids marking the given fault edges.
    pub fn fault_mask(&self, faults: &[Edge]) -> Result<Vec<bool>> {
        let mut mask = vec![false; self.m()];
        for &(u, v) in faults {
            check_vertex(u, self.n)?;
            check_vertex(v, self.n)?;
            let id = self.edge_id(u, v).ok_or(Error::UnknownEdge(u, v))?;
            mask[id] = true;
        }
        Ok(mask)
    }

    /// Vertices reachable from `s` along edges not marked in `blocked`.
    pub fn forward_closure(&self, s: Vertex, blocked: &[bool]) -> Vec<bool> {
        self.closure(s, blocked, false)
    }

    /// Vertices that reach `t` along edges not marked in `blocked`.
    pub fn backward_closure(&self, t: Vertex, blocked: &[bool]) -> Vec<bool> {
        self.closure(t, blocked, true)
    }

    fn closure(&self, root: Vertex, blocked: &[bool], reverse: bool) -> Vec<bool> {
        let mut seen = vec![false; self.n];
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            let list = if reverse { &self.inc[u] } else { &self.out[u] };
            for &e in list {
                if blocked[e] {
                    continue;
                }
                let (a, b) = self.edges[e];
                let w = if reverse { a } else { b };
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen
    }

    pub fn reaches_masked(&self, s: Vertex, t: Vertex, blocked: &[bool]) -> bool {
        if s == t {
            return true;
        }
        let mut seen = vec![false; self.n];
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(u) = stack.pop() {
            for &e in &self.out[u] {
                if blocked[e] {
                    continue;
                }
                let w = self.edges[e].1;
                if w == t {
                    return true;
                }
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        false
    }

    /// Shortest path from `s` to `t` avoiding blocked edges; neighbours are
    /// scanned in increasing id order so the result is deterministic.
    pub fn bfs_path(&self, s: Vertex, t: Vertex, blocked: &[bool]) -> Option<Path> {
        let mut parent: Vec<Option<Vertex>> = vec![None; self.n];
        let mut seen = vec![false; self.n];
        seen[s] = true;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            if u == t {
                let mut vertices = vec![t];
                let mut cur = t;
                while let Some(p) = parent[cur] {
                    vertices.push(p);
                    cur = p;
                }
                vertices.reverse();
                return Some(Path { vertices });
            }
            for &e in &self.out[u] {
                if blocked[e] {
                    continue;
                }
                let w = self.edges[e].1;
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = Some(u);
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

fn check_vertex(v: Vertex, n: usize) -> Result<()> {
    if v < n {
        Ok(())
    } else {
        Err(Error::VertexOutOfRange { vertex: v, n })
    }
}

/// Whether `t` is reachable from `s` once the fault edges are removed.
pub fn reachable(g: &DirectedGraph, s: Vertex, t: Vertex, faults: &[Edge]) -> Result<bool> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    let mask = g.fault_mask(faults)?;
    Ok(g.reaches_masked(s, t, &mask))
}

/// A walk given by its vertex sequence. A single vertex is the empty path.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub vertices: Vec<Vertex>,
}

impl Path {
    pub fn trivial(v: Vertex) -> Self {
        Path { vertices: vec![v] }
    }

    pub fn source(&self) -> Vertex {
        self.vertices[0]
    }

    pub fn target(&self) -> Vertex {
        *self.vertices.last().expect("paths are nonempty")
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.len() <= 1
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }

    pub fn position(&self, v: Vertex) -> Option<usize> {
        self.vertices.iter().position(|&x| x == v)
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.vertices.contains(&v)
    }

    /// First `len` edges of the path.
    pub fn prefix(&self, len: usize) -> Path {
        let end = len.min(self.vertices.len() - 1);
        Path { vertices: self.vertices[..=end].to_vec() }
    }

    /// Last `len` edges of the path.
    pub fn suffix(&self, len: usize) -> Path {
        let k = self.vertices.len() - 1;
        let start = k - len.min(k);
        Path { vertices: self.vertices[start..].to_vec() }
    }

    pub fn is_path_in(&self, g: &DirectedGraph) -> bool {
        !self.vertices.is_empty() && self.edges().all(|(u, v)| g.has_edge(u, v))
    }
}

/// Two s→t paths that share only s-t cut edges and s-t cut vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StrandDecomposition {
    pub pair: (Vertex, Vertex),
    pub strands: [Path; 2],
}

impl StrandDecomposition {
    pub fn strand(&self, i: usize) -> &Path {
        &self.strands[i]
    }

    /// Edge ids of both strands.
    pub fn edge_mask(&self, g: &DirectedGraph) -> Vec<bool> {
        let mut mask = vec![false; g.m()];
        for strand in &self.strands {
            for (u, v) in strand.edges() {
                mask[g.edge_id(u, v).expect("strand edges lie in the graph")] = true;
            }
        }
        mask
    }

    pub fn shared_edges(&self) -> Vec<Edge> {
        let second: Vec<Edge> = self.strands[1].edges().collect();
        self.strands[0].edges().filter(|e| second.contains(e)).collect()
    }

    pub fn shared_internal_vertices(&self) -> Vec<Vertex> {
        let (s, t) = self.pair;
        self.strands[0]
            .vertices
            .iter()
            .copied()
            .filter(|&v| v != s && v != t && self.strands[1].contains(v))
            .collect()
    }
}

/// Unit-capacity flow network over the vertex-split graph: vertex `v`
/// becomes `2v` (in) and `2v + 1` (out).
struct SplitNetwork {
    heads: Vec<usize>,
    tails: Vec<usize>,
    cap: Vec<i32>,
    adj: Vec<Vec<usize>>,
}

impl SplitNetwork {
    fn build(g: &DirectedGraph, s: Vertex, t: Vertex) -> Self {
        let mut net = SplitNetwork {
            heads: Vec::new(),
            tails: Vec::new(),
            cap: Vec::new(),
            adj: vec![Vec::new(); 2 * g.n()],
        };
        for v in 0..g.n() {
            if v != s && v != t {
                net.add_arc(2 * v, 2 * v + 1);
            }
        }
        let mut edges = g.edges().to_vec();
        edges.sort_unstable();
        for (u, v) in edges {
            net.add_arc(2 * u + 1, 2 * v);
        }
        for list in &mut net.adj {
            let heads = &net.heads;
            list.sort_by_key(|&a| heads[a]);
        }
        net
    }

    /// Adds a forward arc and its residual twin; arc ids come in pairs.
    fn add_arc(&mut self, a: usize, b: usize) {
        for (x, y, c) in [(a, b, 1), (b, a, 0)] {
            self.adj[x].push(self.heads.len());
            self.tails.push(x);
            self.heads.push(y);
            self.cap.push(c);
        }
    }

    fn arc_count(&self) -> usize {
        self.heads.len()
    }

    fn is_forward(arc: usize) -> bool {
        arc.is_multiple_of(2)
    }

    /// Plain connectivity over forward arcs, ignoring capacities.
    fn connected_without(&self, src: usize, dst: usize, removed: Option<usize>) -> bool {
        let mut seen = vec![false; self.adj.len()];
        seen[src] = true;
        let mut stack = vec![src];
        while let Some(x) = stack.pop() {
            if x == dst {
                return true;
            }
            for &a in &self.adj[x] {
                if !Self::is_forward(a) || Some(a) == removed {
                    continue;
                }
                let y = self.heads[a];
                if !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        false
    }

    /// Augments up to `limit` units from `src` to `dst`; returns the flow
    /// value. Capacities are reset first.
    fn max_flow(&mut self, src: usize, dst: usize, limit: usize) -> usize {
        for a in 0..self.arc_count() {
            self.cap[a] = if Self::is_forward(a) { 1 } else { 0 };
        }
        let mut flow = 0;
        while flow < limit {
            let mut via: Vec<Option<usize>> = vec![None; self.adj.len()];
            let mut seen = vec![false; self.adj.len()];
            seen[src] = true;
            let mut queue = VecDeque::from([src]);
            while let Some(x) = queue.pop_front() {
                if x == dst {
                    break;
                }
                for &a in &self.adj[x] {
                    let y = self.heads[a];
                    if self.cap[a] > 0 && !seen[y] {
                        seen[y] = true;
                        via[y] = Some(a);
                        queue.push_back(y);
                    }
                }
            }
            if !seen[dst] {
                break;
            }
            let mut x = dst;
            while let Some(a) = via[x] {
                self.cap[a] -= 1;
                self.cap[a ^ 1] += 1;
                x = self.tails[a];
            }
            flow += 1;
        }
        flow
    }

    /// Peels one `src`→`dst` path off the current flow, taking the
    /// smallest-head saturated arc at every step.
    fn take_path(&mut self, src: usize, dst: usize) -> Vec<usize> {
        let mut nodes = vec![src];
        let mut x = src;
        while x != dst {
            let a = self.adj[x]
                .iter()
                .copied()
                .find(|&a| Self::is_forward(a) && self.cap[a] == 0)
                .expect("flow conservation");
            self.cap[a] = 1;
            self.cap[a ^ 1] = 0;
            x = self.heads[a];
            nodes.push(x);
        }
        nodes
    }

    /// Arc ids along a node path.
    fn arcs_of(&self, nodes: &[usize]) -> Vec<usize> {
        nodes
            .windows(2)
            .map(|w| {
                self.adj[w[0]]
                    .iter()
                    .copied()
                    .find(|&a| Self::is_forward(a) && self.heads[a] == w[1])
                    .expect("consecutive nodes are joined")
            })
            .collect()
    }
}

fn split_to_vertices(nodes: &[usize]) -> Vec<Vertex> {
    let mut out: Vec<Vertex> = Vec::with_capacity(nodes.len() / 2 + 1);
    for &x in nodes {
        let v = x / 2;
        if out.last() != Some(&v) {
            out.push(v);
        }
    }
    out
}

/// Two maximally disjoint s→t strands, or `None` when `t` is unreachable.
///
/// Works on the vertex-split graph: its single-arc cuts are exactly the
/// s-t cut edges and cut vertices of `g`. Between consecutive cuts two
/// arc-disjoint sub-paths always exist and are found by unit max-flow.
pub fn two_maximally_disjoint_paths(
    g: &DirectedGraph,
    s: Vertex,
    t: Vertex,
) -> Result<Option<StrandDecomposition>> {
    g.check_vertex(s)?;
    g.check_vertex(t)?;
    if s == t {
        return Ok(Some(StrandDecomposition { pair: (s, t), strands: [Path::trivial(s), Path::trivial(s)] }));
    }
    let mut net = SplitNetwork::build(g, s, t);
    let (src, dst) = (2 * s + 1, 2 * t);
    if net.max_flow(src, dst, 1) == 0 {
        return Ok(None);
    }
    let probe = net.take_path(src, dst);
    let bridges: Vec<usize> =
        net.arcs_of(&probe).into_iter().filter(|&a| !net.connected_without(src, dst, Some(a))).collect();

    let mut segments = Vec::with_capacity(bridges.len() + 1);
    let mut start = src;
    for &a in &bridges {
        segments.push((start, net.tails[a]));
        start = net.heads[a];
    }
    segments.push((start, dst));

    let mut nodes: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for &(a, b) in &segments {
        if a == b {
            nodes[0].push(a);
            nodes[1].push(a);
        } else {
            let flow = net.max_flow(a, b, 2);
            debug_assert_eq!(flow, 2, "bridge-free segment carries two units");
            let first = net.take_path(a, b);
            let second = net.take_path(a, b);
            nodes[0].extend(first);
            nodes[1].extend(second);
        }
    }

    let strands =
        [Path { vertices: split_to_vertices(&nodes[0]) }, Path { vertices: split_to_vertices(&nodes[1]) }];
    Ok(Some(StrandDecomposition { pair: (s, t), strands }))
}

/// One coupling point: the strand position of the point and the witness
/// path from it to the queried vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coupling {
    pub point: Vertex,
    pub position: usize,
    pub path: Path,
}

/// Earliest coupling points of `v` on strand 1 and strand 2.
///
/// A vertex on a strand couples to itself through the empty path.
pub fn earliest_coupling_points(
    g: &DirectedGraph,
    strands: &StrandDecomposition,
    v: Vertex,
) -> Result<[Option<Coupling>; 2]> {
    g.check_vertex(v)?;
    if !strands.strands.iter().any(|p| p.contains(v)) {
        return Err(Error::InvalidInput(format!("vertex {v} is not on a strand")));
    }
    let mask = strands.edge_mask(g);
    Ok(coupling_points_masked(g, strands, v, &mask))
}

pub(crate) fn coupling_points_masked(
    g: &DirectedGraph,
    strands: &StrandDecomposition,
    v: Vertex,
    strand_mask: &[bool],
) -> [Option<Coupling>; 2] {
    let reaches_v = g.backward_closure(v, strand_mask);
    let find = |strand: &Path| {
        let position = strand.vertices.iter().position(|&u| reaches_v[u])?;
        let point = strand.vertices[position];
        let path = g.bfs_path(point, v, strand_mask).expect("backward closure guarantees a path");
        Some(Coupling { point, position, path })
    };
    [find(&strands.strands[0]), find(&strands.strands[1])]
}

pub fn parse_graph(text: &str) -> Result<DirectedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (hline, header) = lines.next().ok_or_else(|| Error::parse(1, "missing header"))?;
    let [n, m] = parse_fields::<2>(header, hline)?;
    let mut edges = Vec::with_capacity(m);
    for (line, text) in lines {
        let [u, v] = parse_fields::<2>(text, line)?;
        if u >= n || v >= n {
            return Err(Error::parse(line, format!("vertex out of range for n={n}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::parse(hline, format!("header declares {m} edges but {} were given", edges.len())));
    }
    DirectedGraph::new(n, edges)
}

pub fn parse_pairs(text: &str, n: usize) -> Result<Vec<(Vertex, Vertex)>> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let [s, t] = parse_fields::<2>(line, i + 1)?;
        if s >= n || t >= n {
            return Err(Error::parse(i + 1, format!("vertex out of range for n={n}")));
        }
        pairs.push((s, t));
    }
    Ok(pairs)
}

pub fn format_graph(g: &DirectedGraph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for &(u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

pub(crate) fn parse_fields<const K: usize>(text: &str, line: usize) -> Result<[usize; K]> {
    let parts: Vec<&str> = text.split_whitespace().collect();
    if parts.len() != K {
        return Err(Error::parse(line, format!("expected {K} fields, found {}", parts.len())));
    }
    let mut out = [0usize; K];
    for (slot, part) in out.iter_mut().zip(parts) {
        *slot =
            part.parse().map_err(|_| Error::parse(line, format!("not a non-negative integer: {part:?}")))?;
    }
    Ok(out)
}
