//! Simple graphs and digraphs with stable vertex ids.
//!
//! Vertex ids are `0..capacity`; deleting or contracting a vertex clears its
//! liveness bit but never renumbers the survivors, so embeddings computed on
//! a reduced graph can be lifted back by id.

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};

pub type VertexId = usize;

/// Serialized form shared by graphs and digraphs: capacity, live vertices,
/// and edge (or arc) pairs.
#[derive(Serialize, Deserialize)]
struct Repr {
    capacity: usize,
    vertices: Vec<VertexId>,
    edges: Vec<(VertexId, VertexId)>,
}

impl From<Graph> for Repr {
    fn from(g: Graph) -> Self {
        Repr {
            capacity: g.capacity(),
            vertices: g.vertices().collect(),
            edges: g.edges(),
        }
    }
}

impl From<Digraph> for Repr {
    fn from(d: Digraph) -> Self {
        Repr {
            capacity: d.capacity(),
            vertices: d.vertices().collect(),
            edges: d.arcs(),
        }
    }
}

fn dead_vertices(r: &Repr) -> Result<Vec<VertexId>> {
    let mut live = FixedBitSet::with_capacity(r.capacity);
    for &v in &r.vertices {
        if v >= r.capacity {
            return domain(format!("vertex {v} exceeds capacity {}", r.capacity));
        }
        live.insert(v);
    }
    Ok((0..r.capacity).filter(|&v| !live.contains(v)).collect())
}

impl TryFrom<Repr> for Graph {
    type Error = Error;
    fn try_from(r: Repr) -> Result<Self> {
        let mut g = Graph::new(r.capacity);
        for v in dead_vertices(&r)? {
            g.remove_vertex(v);
        }
        for (u, v) in r.edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }
}

impl TryFrom<Repr> for Digraph {
    type Error = Error;
    fn try_from(r: Repr) -> Result<Self> {
        let mut d = Digraph::new(r.capacity);
        for v in dead_vertices(&r)? {
            d.remove_vertex(v);
        }
        for (u, v) in r.edges {
            d.add_arc(u, v)?;
        }
        Ok(d)
    }
}

/// Record of a single contraction: `absorbed` was merged into `survivor`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Merge {
    pub survivor: VertexId,
    pub absorbed: VertexId,
}

#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Repr", try_from = "Repr")]
pub struct Graph {
    alive: FixedBitSet,
    adj: Vec<FixedBitSet>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("vertices", &self.vertices().collect::<Vec<_>>())
            .field("edges", &self.edges())
            .finish()
    }
}

impl Graph {
    pub fn new(n: usize) -> Self {
        let mut alive = FixedBitSet::with_capacity(n);
        alive.insert_range(..);
        Graph {
            alive,
            adj: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.insert_edge(u, v);
            }
        }
        g
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Number of ids ever allocated (live or dead).
    pub fn capacity(&self) -> usize {
        self.adj.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.alive.count_ones(..)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v < self.capacity() && self.alive.contains(v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.alive.ones()
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        if u == v {
            return domain(format!("loop at vertex {u}"));
        }
        if !self.contains(u) || !self.contains(v) {
            return domain(format!("edge {u}-{v} references a missing vertex"));
        }
        self.insert_edge(u, v);
        Ok(())
    }

    pub(crate) fn insert_edge(&mut self, u: VertexId, v: VertexId) {
        debug_assert!(u != v);
        self.adj[u].insert(v);
        self.adj[v].insert(u);
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) {
        self.adj[u].set(v, false);
        self.adj[v].set(u, false);
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.capacity() && v < self.capacity() && self.adj[u].contains(v)
    }

    pub fn neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.adj[v].ones()
    }

    pub fn neighbor_set(&self, v: VertexId) -> &FixedBitSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].count_ones(..)
    }

    pub fn edges(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for u in self.vertices() {
            for v in self.adj[u].ones().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.vertices().map(|v| self.degree(v)).sum::<usize>() / 2
    }

    pub fn remove_vertex(&mut self, v: VertexId) {
        let nbrs: Vec<_> = self.adj[v].ones().collect();
        for u in nbrs {
            self.adj[u].set(v, false);
        }
        self.adj[v].clear();
        self.alive.set(v, false);
    }

    /// Contracts edge `uv` in place; the smaller id survives.
    pub fn contract_in_place(&mut self, u: VertexId, v: VertexId) -> Result<Merge> {
        if !self.has_edge(u, v) {
            return domain(format!("{u}-{v} is not an edge"));
        }
        let (survivor, absorbed) = (u.min(v), u.max(v));
        self.merge_into(survivor, absorbed);
        Ok(Merge { survivor, absorbed })
    }

    /// Identifies `absorbed` with `survivor` whether or not they are adjacent.
    pub(crate) fn merge_into(&mut self, survivor: VertexId, absorbed: VertexId) {
        let nbrs: Vec<_> = self.adj[absorbed].ones().collect();
        self.remove_vertex(absorbed);
        for w in nbrs {
            if w != survivor {
                self.insert_edge(survivor, w);
            }
        }
    }

    /// `G/e`, returned as a new value; the smaller end of `e` survives.
    pub fn contract_edge(&self, u: VertexId, v: VertexId) -> Result<Graph> {
        let mut g = self.clone();
        g.contract_in_place(u, v)?;
        Ok(g)
    }

    /// Subgraph induced by `keep`; ids outside `keep` become dead.
    pub fn induced(&self, keep: &[VertexId]) -> Graph {
        let mut mask = FixedBitSet::with_capacity(self.capacity());
        for &v in keep {
            if self.contains(v) {
                mask.insert(v);
            }
        }
        let mut g = self.clone();
        for v in self.vertices() {
            if !mask.contains(v) {
                g.remove_vertex(v);
            }
        }
        g
    }

    /// Relabels live vertices to `0..k` in increasing id order.
    /// Returns the compact graph and the old id of each new vertex.
    pub fn compact(&self) -> (Graph, Vec<VertexId>) {
        let old: Vec<_> = self.vertices().collect();
        let mut index = vec![usize::MAX; self.capacity()];
        for (i, &v) in old.iter().enumerate() {
            index[v] = i;
        }
        let mut g = Graph::new(old.len());
        for (u, v) in self.edges() {
            g.insert_edge(index[u], index[v]);
        }
        (g, old)
    }

    /// `H⁺`: adds a vertex with id `capacity()` adjacent to every live vertex.
    pub fn with_apex(&self) -> Graph {
        let n = self.capacity();
        let mut g = Graph::new(n + 1);
        for v in 0..n {
            if !self.contains(v) {
                g.remove_vertex(v);
            }
        }
        for (u, v) in self.edges() {
            g.insert_edge(u, v);
        }
        for v in self.vertices() {
            g.insert_edge(v, n);
        }
        g
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Connected components, each sorted, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = FixedBitSet::with_capacity(self.capacity());
        let mut comps = Vec::new();
        for s in self.vertices() {
            if seen.contains(s) {
                continue;
            }
            seen.insert(s);
            let mut stack = vec![s];
            let mut comp = vec![];
            while let Some(u) = stack.pop() {
                comp.push(u);
                for w in self.neighbors(u) {
                    if !seen.put(w) {
                        stack.push(w);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    /// Whether the vertices of `set` induce a connected subgraph (empty is not connected).
    pub fn is_connected_set(&self, set: &[VertexId]) -> bool {
        let Some(&first) = set.first() else {
            return false;
        };
        let mut inside = FixedBitSet::with_capacity(self.capacity());
        for &v in set {
            if !self.contains(v) {
                return false;
            }
            inside.insert(v);
        }
        let mut seen = FixedBitSet::with_capacity(self.capacity());
        seen.insert(first);
        let mut stack = vec![first];
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for w in self.adj[u].intersection(&inside) {
                if !seen.put(w) {
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == inside.count_ones(..)
    }

    pub fn is_tree(&self) -> bool {
        let n = self.vertex_count();
        n > 0 && self.edge_count() == n - 1 && self.is_connected()
    }

    pub fn degree_profile(&self) -> DegreeProfile {
        let per_vertex: Vec<_> = self.vertices().map(|v| (v, self.degree(v))).collect();
        DegreeProfile {
            min: per_vertex.iter().map(|p| p.1).min().unwrap_or(0),
            max: per_vertex.iter().map(|p| p.1).max().unwrap_or(0),
            per_vertex,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeProfile {
    pub min: usize,
    pub max: usize,
    pub per_vertex: Vec<(VertexId, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiDegreeProfile {
    pub min_out: usize,
    pub min_in: usize,
    pub out_degree: Vec<(VertexId, usize)>,
    pub in_degree: Vec<(VertexId, usize)>,
}

/// Simple digraph: no loops, at most one arc per ordered pair.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Repr", try_from = "Repr")]
pub struct Digraph {
    alive: FixedBitSet,
    out: Vec<FixedBitSet>,
    inn: Vec<FixedBitSet>,
}

impl std::fmt::Debug for Digraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Digraph")
            .field("vertices", &self.vertices().collect::<Vec<_>>())
            .field("arcs", &self.arcs())
            .finish()
    }
}

impl Digraph {
    pub fn new(n: usize) -> Self {
        let mut alive = FixedBitSet::with_capacity(n);
        alive.insert_range(..);
        Digraph {
            alive,
            out: vec![FixedBitSet::with_capacity(n); n],
            inn: vec![FixedBitSet::with_capacity(n); n],
        }
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self> {
        let mut d = Digraph::new(n);
        for &(u, v) in arcs {
            d.add_arc(u, v)?;
        }
        Ok(d)
    }

    /// Replaces every edge by two opposite arcs.
    pub fn biorientation(g: &Graph) -> Self {
        let mut d = Digraph::new(g.capacity());
        for v in 0..g.capacity() {
            if !g.contains(v) {
                d.remove_vertex(v);
            }
        }
        for (u, v) in g.edges() {
            d.insert_arc(u, v);
            d.insert_arc(v, u);
        }
        d
    }

    pub fn directed_cycle(t: usize) -> Self {
        let mut d = Digraph::new(t);
        for i in 0..t {
            d.insert_arc(i, (i + 1) % t);
        }
        d
    }

    pub fn capacity(&self) -> usize {
        self.out.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.alive.count_ones(..)
    }

    pub fn contains(&self, v: VertexId) -> bool {
        v < self.capacity() && self.alive.contains(v)
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.alive.ones()
    }

    pub fn add_arc(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        if u == v {
            return domain(format!("loop at vertex {u}"));
        }
        if !self.contains(u) || !self.contains(v) {
            return domain(format!("arc ({u}, {v}) references a missing vertex"));
        }
        self.insert_arc(u, v);
        Ok(())
    }

    pub(crate) fn insert_arc(&mut self, u: VertexId, v: VertexId) {
        debug_assert!(u != v);
        self.out[u].insert(v);
        self.inn[v].insert(u);
    }

    pub fn remove_arc(&mut self, u: VertexId, v: VertexId) {
        self.out[u].set(v, false);
        self.inn[v].set(u, false);
    }

    pub fn has_arc(&self, u: VertexId, v: VertexId) -> bool {
        u < self.capacity() && v < self.capacity() && self.out[u].contains(v)
    }

    pub fn out_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.out[v].ones()
    }

    pub fn in_neighbors(&self, v: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.inn[v].ones()
    }

    pub fn out_degree(&self, v: VertexId) -> usize {
        self.out[v].count_ones(..)
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.inn[v].count_ones(..)
    }

    pub fn arcs(&self) -> Vec<(VertexId, VertexId)> {
        let mut out = Vec::new();
        for u in self.vertices() {
            for v in self.out[u].ones() {
                out.push((u, v));
            }
        }
        out
    }

    pub fn arc_count(&self) -> usize {
        self.vertices().map(|v| self.out_degree(v)).sum()
    }

    pub fn remove_vertex(&mut self, v: VertexId) {
        let outs: Vec<_> = self.out[v].ones().collect();
        let ins: Vec<_> = self.inn[v].ones().collect();
        for w in outs {
            self.inn[w].set(v, false);
        }
        for w in ins {
            self.out[w].set(v, false);
        }
        self.out[v].clear();
        self.inn[v].clear();
        self.alive.set(v, false);
    }

    /// Identifies `absorbed` with `survivor`, dropping loops and duplicate arcs.
    pub(crate) fn merge_into(&mut self, survivor: VertexId, absorbed: VertexId) {
        let outs: Vec<_> = self.out[absorbed].ones().collect();
        let ins: Vec<_> = self.inn[absorbed].ones().collect();
        self.remove_vertex(absorbed);
        for w in outs {
            if w != survivor {
                self.insert_arc(survivor, w);
            }
        }
        for w in ins {
            if w != survivor {
                self.insert_arc(w, survivor);
            }
        }
    }

    pub fn is_butterfly_contractible(&self, u: VertexId, v: VertexId) -> bool {
        self.has_arc(u, v) && (self.out_degree(u) == 1 || self.in_degree(v) == 1)
    }

    /// Butterfly contraction of arc `(u, v)` in place; the smaller id survives.
    pub fn butterfly_contract_in_place(&mut self, u: VertexId, v: VertexId) -> Result<Merge> {
        if !self.has_arc(u, v) {
            return domain(format!("({u}, {v}) is not an arc"));
        }
        if !self.is_butterfly_contractible(u, v) {
            return Err(Error::NotButterfly(u, v));
        }
        let (survivor, absorbed) = (u.min(v), u.max(v));
        self.merge_into(survivor, absorbed);
        Ok(Merge { survivor, absorbed })
    }

    pub fn butterfly_contract(&self, u: VertexId, v: VertexId) -> Result<Digraph> {
        let mut d = self.clone();
        d.butterfly_contract_in_place(u, v)?;
        Ok(d)
    }

    pub fn induced(&self, keep: &[VertexId]) -> Digraph {
        let mut mask = FixedBitSet::with_capacity(self.capacity());
        for &v in keep {
            if self.contains(v) {
                mask.insert(v);
            }
        }
        let mut d = self.clone();
        for v in self.vertices() {
            if !mask.contains(v) {
                d.remove_vertex(v);
            }
        }
        d
    }

    pub fn compact(&self) -> (Digraph, Vec<VertexId>) {
        let old: Vec<_> = self.vertices().collect();
        let mut index = vec![usize::MAX; self.capacity()];
        for (i, &v) in old.iter().enumerate() {
            index[v] = i;
        }
        let mut d = Digraph::new(old.len());
        for (u, v) in self.arcs() {
            d.insert_arc(index[u], index[v]);
        }
        (d, old)
    }

    pub fn reversed(&self) -> Digraph {
        Digraph {
            alive: self.alive.clone(),
            out: self.inn.clone(),
            inn: self.out.clone(),
        }
    }

    /// Underlying simple graph (antiparallel pairs collapse to one edge).
    pub fn underlying(&self) -> Graph {
        let mut g = Graph::new(self.capacity());
        for v in 0..self.capacity() {
            if !self.contains(v) {
                g.remove_vertex(v);
            }
        }
        for (u, v) in self.arcs() {
            g.insert_edge(u, v);
        }
        g
    }

    /// `H⃗⁺`: adds a source with id `capacity()` and arcs to every live vertex.
    pub fn with_apex_source(&self) -> Digraph {
        let n = self.capacity();
        let mut d = Digraph::new(n + 1);
        for v in 0..n {
            if !self.contains(v) {
                d.remove_vertex(v);
            }
        }
        for (u, v) in self.arcs() {
            d.insert_arc(u, v);
        }
        for v in self.vertices() {
            d.insert_arc(n, v);
        }
        d
    }

    pub fn degree_profile(&self) -> DiDegreeProfile {
        let out_degree: Vec<_> = self.vertices().map(|v| (v, self.out_degree(v))).collect();
        let in_degree: Vec<_> = self.vertices().map(|v| (v, self.in_degree(v))).collect();
        DiDegreeProfile {
            min_out: out_degree.iter().map(|p| p.1).min().unwrap_or(0),
            min_in: in_degree.iter().map(|p| p.1).min().unwrap_or(0),
            out_degree,
            in_degree,
        }
    }

    pub fn min_out_degree(&self) -> usize {
        self.vertices()
            .map(|v| self.out_degree(v))
            .min()
            .unwrap_or(0)
    }

    /// Strongly connected components (Tarjan, iterative), each sorted.
    pub fn strong_components(&self) -> Vec<Vec<VertexId>> {
        let n = self.capacity();
        const UNSEEN: usize = usize::MAX;
        let mut index = vec![UNSEEN; n];
        let mut low = vec![0; n];
        let mut on_stack = vec![false; n];
        let mut stack = Vec::new();
        let mut comps = Vec::new();
        let mut counter = 0;
        for root in self.vertices() {
            if index[root] != UNSEEN {
                continue;
            }
            // (vertex, out-neighbours still to scan)
            let mut call: Vec<(usize, Vec<usize>)> = Vec::new();
            index[root] = counter;
            low[root] = counter;
            counter += 1;
            stack.push(root);
            on_stack[root] = true;
            call.push((
                root,
                self.out[root]
                    .ones()
                    .collect::<Vec<_>>()
                    .into_iter()
                    .rev()
                    .collect(),
            ));
            while let Some((v, pending)) = call.last_mut() {
                let v = *v;
                if let Some(w) = pending.pop() {
                    if index[w] == UNSEEN {
                        index[w] = counter;
                        low[w] = counter;
                        counter += 1;
                        stack.push(w);
                        on_stack[w] = true;
                        call.push((
                            w,
                            self.out[w]
                                .ones()
                                .collect::<Vec<_>>()
                                .into_iter()
                                .rev()
                                .collect(),
                        ));
                    } else if on_stack[w] {
                        low[v] = low[v].min(index[w]);
                    }
                } else {
                    call.pop();
                    if let Some((parent, _)) = call.last() {
                        low[*parent] = low[*parent].min(low[v]);
                    }
                    if low[v] == index[v] {
                        let mut comp = Vec::new();
                        loop {
                            let w = stack.pop().expect("tarjan stack underflow");
                            on_stack[w] = false;
                            comp.push(w);
                            if w == v {
                                break;
                            }
                        }
                        comp.sort_unstable();
                        comps.push(comp);
                    }
                }
            }
        }
        comps
    }

    /// A strong component with no arc leaving it; among several, the one
    /// containing the smallest vertex id.
    pub fn sink_component(&self) -> Option<Vec<VertexId>> {
        let comps = self.strong_components();
        let mut comp_of = vec![usize::MAX; self.capacity()];
        for (i, c) in comps.iter().enumerate() {
            for &v in c {
                comp_of[v] = i;
            }
        }
        comps
            .iter()
            .enumerate()
            .filter(|(i, c)| {
                c.iter()
                    .all(|&v| self.out_neighbors(v).all(|w| comp_of[w] == *i))
            })
            .map(|(_, c)| c.clone())
            .min_by_key(|c| c[0])
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.strong_components().len() == 1
    }

    /// Whether the digraph is an in-arborescence; returns its root.
    pub fn in_arborescence_root(&self) -> Option<VertexId> {
        let n = self.vertex_count();
        if n == 0 || self.arc_count() != n - 1 || !self.underlying().is_connected() {
            return None;
        }
        let mut root = None;
        for v in self.vertices() {
            match self.out_degree(v) {
                0 if root.is_none() => root = Some(v),
                1 => {}
                _ => return None,
            }
        }
        root
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_contracts_to_edge() {
        let g = Graph::complete(3);
        let h = g.contract_edge(0, 1).unwrap();
        assert_eq!(h.vertex_count(), 2);
        assert_eq!(h.edges(), vec![(0, 2)]);
    }

    #[test]
    fn path_contraction_keeps_lower_id() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let h = g.contract_edge(1, 2).unwrap();
        assert_eq!(h.edges(), vec![(0, 1)]);
        assert!(g.contract_edge(0, 2).is_err());
    }

    #[test]
    fn butterfly_examples() {
        let p = Digraph::from_arcs(3, &[(0, 1), (1, 2)]).unwrap();
        let q = p.butterfly_contract(0, 1).unwrap();
        assert_eq!(q.arcs(), vec![(0, 2)]);

        let c = Digraph::directed_cycle(3);
        let q = c.butterfly_contract(1, 2).unwrap();
        assert_eq!(q.arcs(), vec![(0, 1), (1, 0)]);

        let star = Digraph::from_arcs(3, &[(0, 1), (0, 2)]).unwrap();
        let q = star.butterfly_contract(0, 1).unwrap();
        assert_eq!(q.vertex_count(), 2);
        assert_eq!(q.arcs(), vec![(0, 2)]);

        let bad = Digraph::from_arcs(4, &[(0, 1), (0, 2), (3, 1)]).unwrap();
        assert_eq!(bad.butterfly_contract(0, 1), Err(Error::NotButterfly(0, 1)));
    }

    #[test]
    fn apex_constructions() {
        let k1 = Graph::new(1).with_apex();
        assert_eq!(k1.edges(), vec![(0, 1)]);
        let w3 = Graph::from_edges(3, &[(0, 1), (1, 2), (0, 2)])
            .unwrap()
            .with_apex();
        assert_eq!(w3, Graph::complete(4));
        let c = Digraph::directed_cycle(5).with_apex_source();
        assert_eq!(c.out_degree(5), 5);
        assert_eq!(c.in_degree(5), 0);
    }

    #[test]
    fn degree_profiles() {
        assert_eq!(Graph::complete(5).degree_profile().min, 4);
        let bk4 = Digraph::biorientation(&Graph::complete(4));
        assert_eq!(bk4.degree_profile().min_out, 3);
    }

    #[test]
    fn sink_components() {
        assert_eq!(
            Digraph::directed_cycle(3).sink_component(),
            Some(vec![0, 1, 2])
        );
        let d = Digraph::from_arcs(3, &[(0, 1), (1, 2), (2, 1)]).unwrap();
        assert_eq!(d.sink_component(), Some(vec![1, 2]));
        let two = Digraph::from_arcs(6, &[(3, 4), (4, 5), (5, 3), (0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(two.sink_component(), Some(vec![0, 1, 2]));
    }

    #[test]
    fn arborescence_root() {
        let t = Digraph::from_arcs(4, &[(1, 0), (2, 0), (3, 1)]).unwrap();
        assert_eq!(t.in_arborescence_root(), Some(0));
        assert_eq!(Digraph::directed_cycle(3).in_arborescence_root(), None);
    }
}
