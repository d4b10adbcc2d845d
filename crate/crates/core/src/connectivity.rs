//! Menger-type path packing and separations.
//!
//! Every routine reduces to a unit-capacity max-flow on the vertex-split
//! network (`x_in -> x_out` with capacity 1) solved with Dinic's algorithm.
//! Adjacency lists are scanned in increasing id order, so results are
//! deterministic.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;

use crate::error::{domain, Result};
use crate::graph::{Digraph, Graph, VertexId};

/// Uniform successor/predecessor access for graphs and digraphs.
pub trait Adjacency {
    fn capacity(&self) -> usize;
    fn contains(&self, v: VertexId) -> bool;
    fn successors(&self, v: VertexId) -> Vec<VertexId>;
    fn predecessors(&self, v: VertexId) -> Vec<VertexId>;
    fn live_vertices(&self) -> Vec<VertexId>;
}

impl Adjacency for Graph {
    fn capacity(&self) -> usize {
        Graph::capacity(self)
    }
    fn contains(&self, v: VertexId) -> bool {
        Graph::contains(self, v)
    }
    fn successors(&self, v: VertexId) -> Vec<VertexId> {
        self.neighbors(v).collect()
    }
    fn predecessors(&self, v: VertexId) -> Vec<VertexId> {
        self.neighbors(v).collect()
    }
    fn live_vertices(&self) -> Vec<VertexId> {
        self.vertices().collect()
    }
}

impl Adjacency for Digraph {
    fn capacity(&self) -> usize {
        Digraph::capacity(self)
    }
    fn contains(&self, v: VertexId) -> bool {
        Digraph::contains(self, v)
    }
    fn successors(&self, v: VertexId) -> Vec<VertexId> {
        self.out_neighbors(v).collect()
    }
    fn predecessors(&self, v: VertexId) -> Vec<VertexId> {
        self.in_neighbors(v).collect()
    }
    fn live_vertices(&self) -> Vec<VertexId> {
        self.vertices().collect()
    }
}

/// Arc-reversed view.
pub struct Reversed<'a, A: Adjacency>(pub &'a A);

impl<A: Adjacency> Adjacency for Reversed<'_, A> {
    fn capacity(&self) -> usize {
        self.0.capacity()
    }
    fn contains(&self, v: VertexId) -> bool {
        self.0.contains(v)
    }
    fn successors(&self, v: VertexId) -> Vec<VertexId> {
        self.0.predecessors(v)
    }
    fn predecessors(&self, v: VertexId) -> Vec<VertexId> {
        self.0.successors(v)
    }
    fn live_vertices(&self) -> Vec<VertexId> {
        self.0.live_vertices()
    }
}

/// A separation `(A, B)`: `A ∪ B = V` and no edge (no arc from `B − A`)
/// reaches `A − B`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Separation {
    pub a: Vec<VertexId>,
    pub b: Vec<VertexId>,
}

impl Separation {
    pub fn new(mut a: Vec<VertexId>, mut b: Vec<VertexId>) -> Self {
        a.sort_unstable();
        a.dedup();
        b.sort_unstable();
        b.dedup();
        Separation { a, b }
    }

    pub fn separator(&self) -> Vec<VertexId> {
        self.a
            .iter()
            .copied()
            .filter(|v| self.b.binary_search(v).is_ok())
            .collect()
    }

    pub fn order(&self) -> usize {
        self.separator().len()
    }

    pub fn a_only(&self) -> Vec<VertexId> {
        self.a
            .iter()
            .copied()
            .filter(|v| self.b.binary_search(v).is_err())
            .collect()
    }

    pub fn b_only(&self) -> Vec<VertexId> {
        self.b
            .iter()
            .copied()
            .filter(|v| self.a.binary_search(v).is_err())
            .collect()
    }

    pub fn is_nontrivial(&self) -> bool {
        !self.a_only().is_empty() && !self.b_only().is_empty()
    }

    /// Checks the separation conditions against `g` (for a digraph: no arc
    /// from `B − A` into `A − B`; for a graph, either direction).
    pub fn is_valid_for(&self, g: &impl Adjacency) -> bool {
        let live = g.live_vertices();
        let mut union: Vec<_> = self.a.iter().chain(self.b.iter()).copied().collect();
        union.sort_unstable();
        union.dedup();
        if union != live {
            return false;
        }
        let a_only = self.a_only();
        self.b_only().iter().all(|&x| {
            g.successors(x)
                .iter()
                .all(|y| a_only.binary_search(y).is_err())
        })
    }
}

/// Paths from a common origin to a target set, pairwise sharing only the origin.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PathFan {
    pub origin: VertexId,
    pub paths: Vec<Vec<VertexId>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanResult {
    pub fan: PathFan,
    /// Present iff the fan is smaller than the target set: a minimum
    /// separator with the targets in `A` and the origin in `B − A`.
    pub separation: Option<Separation>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Linkage {
    Paths(Vec<Vec<VertexId>>),
    /// Separation of order below the number of sources, with the sources in
    /// `B` and the targets in `A`.
    Blocked(Separation),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WellConnectedness {
    WellConnected,
    /// `S = V(G)`, excluded by definition.
    WholeVertexSet,
    Violated(Separation),
}

impl WellConnectedness {
    pub fn holds(&self) -> bool {
        matches!(self, WellConnectedness::WellConnected)
    }
}

// ---------------------------------------------------------------------------
// flow kernel

struct FlowNet {
    adj: Vec<Vec<usize>>,
    to: Vec<usize>,
    cap: Vec<u32>,
    original: Vec<u32>,
}

impl FlowNet {
    fn new(nodes: usize) -> Self {
        FlowNet {
            adj: vec![Vec::new(); nodes],
            to: vec![],
            cap: vec![],
            original: vec![],
        }
    }

    fn add(&mut self, u: usize, v: usize, c: u32) {
        self.adj[u].push(self.to.len());
        self.to.push(v);
        self.cap.push(c);
        self.original.push(c);
        self.adj[v].push(self.to.len());
        self.to.push(u);
        self.cap.push(0);
        self.original.push(0);
    }

    fn levels(&self, s: usize) -> Vec<u32> {
        let mut level = vec![u32::MAX; self.adj.len()];
        level[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &e in &self.adj[u] {
                let v = self.to[e];
                if self.cap[e] > 0 && level[v] == u32::MAX {
                    level[v] = level[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        level
    }

    fn augment(&mut self, u: usize, t: usize, pushed: u32, level: &[u32], it: &mut [usize]) -> u32 {
        if u == t {
            return pushed;
        }
        while it[u] < self.adj[u].len() {
            let e = self.adj[u][it[u]];
            let v = self.to[e];
            if self.cap[e] > 0 && level[v] == level[u] + 1 {
                let got = self.augment(v, t, pushed.min(self.cap[e]), level, it);
                if got > 0 {
                    self.cap[e] -= got;
                    self.cap[e ^ 1] += got;
                    return got;
                }
            }
            it[u] += 1;
        }
        0
    }

    /// Max flow, stopping once `limit` is reached.
    fn max_flow(&mut self, s: usize, t: usize, limit: u32) -> u32 {
        let mut flow = 0;
        while flow < limit {
            let level = self.levels(s);
            if level[t] == u32::MAX {
                break;
            }
            let mut it = vec![0; self.adj.len()];
            loop {
                let f = self.augment(s, t, 1, &level, &mut it);
                if f == 0 {
                    break;
                }
                flow += f;
                if flow >= limit {
                    break;
                }
            }
        }
        flow
    }

    fn residual_reach(&self, s: usize) -> Vec<bool> {
        let level = self.levels(s);
        level.iter().map(|&l| l != u32::MAX).collect()
    }

    fn flow_on(&self, e: usize) -> u32 {
        self.original[e].saturating_sub(self.cap[e])
    }
}

enum Starts<'a> {
    Origin(VertexId),
    Sources(&'a [VertexId]),
}

struct FlowOutcome {
    value: usize,
    paths: Vec<Vec<VertexId>>,
    reach: Vec<bool>,
}

impl FlowOutcome {
    fn out_reached(&self, x: VertexId) -> bool {
        self.reach[2 * x + 1]
    }
    fn in_reached(&self, x: VertexId) -> bool {
        self.reach[2 * x]
    }
}

/// Vertex-disjoint paths from `starts` into `targets`; paths stop at the
/// first target vertex they meet. `pinned` vertices act as targets that can
/// never be cut.
fn solve(
    g: &impl Adjacency,
    starts: Starts<'_>,
    targets: &FixedBitSet,
    allowed: &FixedBitSet,
    pinned: &[VertexId],
    limit: usize,
) -> FlowOutcome {
    let n = g.capacity();
    let inf = (n + 2) as u32;
    let (source, sink) = (2 * n, 2 * n + 1);
    let mut net = FlowNet::new(2 * n + 2);
    let origin = match starts {
        Starts::Origin(v) => Some(v),
        Starts::Sources(_) => None,
    };
    for x in allowed.ones() {
        let unbounded = Some(x) == origin || pinned.contains(&x);
        net.add(2 * x, 2 * x + 1, if unbounded { inf } else { 1 });
    }
    match starts {
        Starts::Origin(v) => net.add(source, 2 * v + 1, inf),
        Starts::Sources(xs) => {
            let mut seen = FixedBitSet::with_capacity(n);
            for &x in xs {
                if allowed.contains(x) && !seen.put(x) {
                    net.add(source, 2 * x, 1);
                }
            }
        }
    }
    for x in allowed.ones() {
        if targets.contains(x) {
            net.add(2 * x + 1, sink, inf);
            continue;
        }
        for y in g.successors(x) {
            if allowed.contains(y) && Some(y) != origin {
                net.add(2 * x + 1, 2 * y, inf);
            }
        }
    }
    let value = net.max_flow(source, sink, limit.min(inf as usize) as u32) as usize;

    // decompose into paths, consuming one unit at a time
    let mut used = vec![0u32; net.to.len()];
    let mut paths = Vec::new();
    for _ in 0..value {
        let mut node = source;
        let mut path: Vec<VertexId> = Vec::new();
        while node != sink {
            let e = *net.adj[node]
                .iter()
                .find(|&&e| e % 2 == 0 && net.flow_on(e) > used[e])
                .expect("flow decomposition stalled");
            used[e] += 1;
            node = net.to[e];
            if node < 2 * n && node % 2 == 1 {
                let x = node / 2;
                if path.last() != Some(&x) {
                    path.push(x);
                }
            } else if node < 2 * n {
                path.push(node / 2);
            }
        }
        paths.push(path);
    }
    // Dinic may route a unit through the unbounded origin twice; paths are
    // still simple because every other vertex has capacity one.
    FlowOutcome {
        value,
        paths,
        reach: net.residual_reach(source),
    }
}

pub(crate) fn live_mask(g: &impl Adjacency) -> FixedBitSet {
    let mut m = FixedBitSet::with_capacity(g.capacity());
    for v in g.live_vertices() {
        m.insert(v);
    }
    m
}

pub(crate) fn mask_of(n: usize, set: &[VertexId]) -> FixedBitSet {
    let mut m = FixedBitSet::with_capacity(n);
    for &v in set {
        m.insert(v);
    }
    m
}

/// Separation from a fan-style cut: the origin side is `B − A`.
fn fan_separation(allowed: &FixedBitSet, out: &FlowOutcome) -> Separation {
    let mut a = Vec::new();
    let mut b = Vec::new();
    for x in allowed.ones() {
        if out.out_reached(x) {
            b.push(x);
        } else if out.in_reached(x) {
            a.push(x);
            b.push(x);
        } else {
            a.push(x);
        }
    }
    Separation::new(a, b)
}

/// Maximum fan from `v` to `targets` (following arcs for digraphs).
/// With `reverse`, paths run from the targets to `v` instead, and any
/// separation is reported for the reversed digraph.
pub fn max_fan<A: Adjacency>(
    g: &A,
    v: VertexId,
    targets: &[VertexId],
    reverse: bool,
) -> Result<FanResult> {
    if reverse {
        let mut r = fan_within(&Reversed(g), v, targets, &live_mask(g))?;
        for p in &mut r.fan.paths {
            p.reverse();
        }
        return Ok(r);
    }
    fan_within(g, v, targets, &live_mask(g))
}

/// Fan restricted to the vertices of `allowed`.
pub fn fan_within<A: Adjacency>(
    g: &A,
    v: VertexId,
    targets: &[VertexId],
    allowed: &FixedBitSet,
) -> Result<FanResult> {
    if !g.contains(v) {
        return domain(format!("origin {v} is not a vertex"));
    }
    if targets.contains(&v) {
        return domain(format!("origin {v} lies in the target set"));
    }
    let n = g.capacity();
    let tmask = mask_of(n, targets);
    let out = solve(g, Starts::Origin(v), &tmask, allowed, &[], n + 1);
    let want = tmask.count_ones(..);
    let separation = (out.value < want).then(|| fan_separation(allowed, &out));
    let mut paths = out.paths;
    for p in &mut paths {
        if p.first() != Some(&v) {
            p.insert(0, v);
        }
    }
    Ok(FanResult {
        fan: PathFan { origin: v, paths },
        separation,
    })
}

/// `|X|` vertex-disjoint paths from `xs` to `ys`, each starting at its own
/// member of `xs` (in the order given) and meeting `ys` only at its end.
pub fn disjoint_linkage<A: Adjacency>(g: &A, xs: &[VertexId], ys: &[VertexId]) -> Linkage {
    linkage_within(g, xs, ys, &live_mask(g))
}

pub fn linkage_within<A: Adjacency>(
    g: &A,
    xs: &[VertexId],
    ys: &[VertexId],
    allowed: &FixedBitSet,
) -> Linkage {
    let n = g.capacity();
    let tmask = mask_of(n, ys);
    let out = solve(g, Starts::Sources(xs), &tmask, allowed, &[], n + 1);
    if out.value < xs.len() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for x in allowed.ones() {
            if out.out_reached(x) {
                b.push(x);
            } else if out.in_reached(x) {
                a.push(x);
                b.push(x);
            } else {
                a.push(x);
            }
        }
        return Linkage::Blocked(Separation::new(a, b));
    }
    let mut by_start: Vec<Option<Vec<VertexId>>> = vec![None; xs.len()];
    for p in out.paths {
        let i = xs
            .iter()
            .position(|&x| x == p[0])
            .expect("path from unknown source");
        by_start[i] = Some(p);
    }
    Linkage::Paths(
        by_start
            .into_iter()
            .map(|p| p.expect("missing path"))
            .collect(),
    )
}

/// Whether `s` is well-(in-)connected: `S ≠ V` and every vertex outside `S`
/// has a fan of size `|S|` into `S`.
pub fn is_well_connected<A: Adjacency>(g: &A, s: &[VertexId]) -> WellConnectedness {
    let live = g.live_vertices();
    let smask = mask_of(g.capacity(), s);
    let outside: Vec<_> = live
        .iter()
        .copied()
        .filter(|&v| !smask.contains(v))
        .collect();
    if outside.is_empty() {
        return WellConnectedness::WholeVertexSet;
    }
    for v in outside {
        let r = fan_within(g, v, s, &live_mask(g)).expect("origin outside S");
        if let Some(sep) = r.separation {
            return WellConnectedness::Violated(sep);
        }
    }
    WellConnectedness::WellConnected
}

/// A nontrivial separation with `S ⊆ A` and order at most `k`, of minimum
/// order (ties: lexicographically smallest separator, then smallest vertex
/// of `B − A`). With `forced`, only separations with `forced ∈ B − A` count.
pub fn bounded_order_separation<A: Adjacency>(
    g: &A,
    s: &[VertexId],
    k: usize,
    forced: Option<VertexId>,
) -> Option<Separation> {
    let n = g.capacity();
    let allowed = live_mask(g);
    let smask = mask_of(n, s);
    let candidates: Vec<VertexId> = match forced {
        Some(y) if !smask.contains(y) && g.contains(y) => vec![y],
        Some(_) => return None,
        None => allowed.ones().filter(|&v| !smask.contains(v)).collect(),
    };
    let mut best: Option<(usize, Vec<VertexId>, Separation)> = None;
    let consider = |sep: Separation, best: &mut Option<(usize, Vec<VertexId>, Separation)>| {
        let key = (sep.order(), sep.separator());
        if best
            .as_ref()
            .is_none_or(|(o, c, _)| (key.0, &key.1) < (*o, c))
        {
            *best = Some((key.0, key.1, sep));
        }
    };
    for v in candidates {
        let out = solve(g, Starts::Origin(v), &smask, &allowed, &[], k + 1);
        if out.value > k {
            continue;
        }
        let sep = fan_separation(&allowed, &out);
        if !sep.a_only().is_empty() {
            consider(sep, &mut best);
            continue;
        }
        // The cut nearest to v is trivial, so every minimum cut for v is.
        // Larger cuts can still be nontrivial when k exceeds the flow value.
        if out.value == k {
            continue;
        }
        let succ = g.successors(v);
        for u in allowed.ones() {
            if u == v || smask.contains(u) || succ.contains(&u) {
                continue;
            }
            let mut t = smask.clone();
            t.insert(u);
            let out = solve(g, Starts::Origin(v), &t, &allowed, &[u], k + 1);
            if out.value <= k {
                consider(fan_separation(&allowed, &out), &mut best);
            }
        }
    }
    best.map(|(_, _, sep)| sep)
}

/// `∂⁻(S)`: vertices of `S` with an in-neighbour outside `S`.
pub fn in_boundary(d: &Digraph, s: &[VertexId]) -> Vec<VertexId> {
    let smask = mask_of(d.capacity(), s);
    let mut out: Vec<_> = s
        .iter()
        .copied()
        .filter(|&v| d.in_neighbors(v).any(|u| !smask.contains(u)))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_triangles() -> Graph {
        // triangles {0,1,2} and {2,3,4} sharing vertex 2
        Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap()
    }

    #[test]
    fn fan_in_k4() {
        let g = Graph::complete(4);
        let r = max_fan(&g, 3, &[0, 1, 2], false).unwrap();
        assert_eq!(r.fan.paths, vec![vec![3, 0], vec![3, 1], vec![3, 2]]);
        assert!(r.separation.is_none());
    }

    #[test]
    fn fan_on_path() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let r = max_fan(&g, 0, &[2], false).unwrap();
        assert_eq!(r.fan.paths, vec![vec![0, 1, 2]]);
        assert!(max_fan(&g, 2, &[2], false).is_err());
    }

    #[test]
    fn fan_blocked_by_cut_vertex() {
        let g = two_triangles();
        let r = max_fan(&g, 0, &[3, 4], false).unwrap();
        assert_eq!(r.fan.paths.len(), 1);
        let sep = r.separation.unwrap();
        assert_eq!(sep.separator(), vec![2]);
        assert!(sep.is_valid_for(&g) && sep.is_nontrivial());
    }

    #[test]
    fn reverse_fan_runs_into_origin() {
        let d = Digraph::from_arcs(3, &[(1, 0), (2, 1)]).unwrap();
        let r = max_fan(&d, 0, &[2], true).unwrap();
        assert_eq!(r.fan.paths, vec![vec![2, 1, 0]]);
        assert!(max_fan(&d, 0, &[2], false).unwrap().separation.is_some());
    }

    #[test]
    fn linkage_examples() {
        let g = Graph::complete(4);
        assert_eq!(
            disjoint_linkage(&g, &[0, 1], &[0, 1]),
            Linkage::Paths(vec![vec![0], vec![1]])
        );
        let mut k33 = Graph::new(6);
        for a in 0..3 {
            for b in 3..6 {
                k33.add_edge(a, b).unwrap();
            }
        }
        let Linkage::Paths(p) = disjoint_linkage(&k33, &[0, 1, 2], &[3, 4, 5]) else {
            panic!()
        };
        assert!(p.iter().all(|p| p.len() == 2));
        let Linkage::Blocked(sep) = disjoint_linkage(&two_triangles(), &[0, 1], &[3, 4]) else {
            panic!()
        };
        assert_eq!(sep.order(), 1);
    }

    #[test]
    fn grid_columns() {
        let mut g = Graph::new(9);
        for r in 0..3 {
            for c in 0..3 {
                let v = 3 * r + c;
                if c < 2 {
                    g.add_edge(v, v + 1).unwrap();
                }
                if r < 2 {
                    g.add_edge(v, v + 3).unwrap();
                }
            }
        }
        let Linkage::Paths(paths) = disjoint_linkage(&g, &[0, 1, 2], &[6, 7, 8]) else {
            panic!()
        };
        let mut seen = FixedBitSet::with_capacity(9);
        for p in &paths {
            for w in p.windows(2) {
                assert!(g.has_edge(w[0], w[1]));
            }
            for &v in p {
                assert!(!seen.put(v));
            }
        }
    }

    #[test]
    fn well_connectedness() {
        let g = two_triangles();
        assert!(is_well_connected(&g, &[]).holds());
        assert_eq!(
            is_well_connected(&g, &[0, 1, 2, 3, 4]),
            WellConnectedness::WholeVertexSet
        );
        let WellConnectedness::Violated(sep) = is_well_connected(&g, &[0, 1, 2]) else {
            panic!()
        };
        assert_eq!(sep.separator(), vec![2]);
        let d = Digraph::directed_cycle(5);
        assert!(is_well_connected(&d, &[3]).holds());
    }

    #[test]
    fn bounded_separations() {
        assert!(bounded_order_separation(&Graph::complete(5), &[0, 1], 3, None).is_none());
        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        let sep = bounded_order_separation(&star, &[0], 1, None).unwrap();
        assert_eq!(sep.separator(), vec![0]);
        assert!(sep.is_nontrivial() && sep.is_valid_for(&star));
        let c2 = Digraph::directed_cycle(2);
        assert!(bounded_order_separation(&c2, &[0], 0, None).is_none());
        // k above |S| needs the pinned search
        let p = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        let sep = bounded_order_separation(&p, &[], 1, Some(3)).unwrap();
        assert_eq!(sep.order(), 1);
        assert!(sep.b_only().contains(&3));
    }

    #[test]
    fn in_boundary_examples() {
        let d = Digraph::directed_cycle(4);
        assert_eq!(in_boundary(&d, &[0, 1, 2, 3]), Vec::<usize>::new());
        assert_eq!(in_boundary(&d, &[1, 2]), vec![1]);
        let a = Digraph::from_arcs(2, &[(0, 1)]).unwrap();
        assert_eq!(in_boundary(&a, &[1]), vec![1]);
    }
}
