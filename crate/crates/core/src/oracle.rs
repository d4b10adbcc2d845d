//! Brute-force containment oracles for small instances: minors, subdivisions
//! and butterfly minors. A "no" is only reported after exhaustive search.

use std::collections::{HashMap, HashSet};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::digraph_finder::{ArcImage, ButterflyBranch, ButterflyEmbedding};
use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph, VertexId};
use crate::iso::subgraph_embedding;
use crate::minor::MinorEmbedding;
use crate::subdivision::{PathImage, SubdivisionEmbedding};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchBudget {
    pub nodes: u64,
    pub millis: u64,
}

impl SearchBudget {
    pub fn new(nodes: u64, millis: u64) -> Result<Self> {
        if nodes == 0 || millis == 0 {
            return Err(Error::Domain("search budget must be positive".into()));
        }
        Ok(SearchBudget { nodes, millis })
    }
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            nodes: 10_000_000,
            millis: 60_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum OracleOutcome<T> {
    Yes(T),
    No,
    BudgetExceeded,
}

impl<T> OracleOutcome<T> {
    pub fn is_yes(&self) -> bool {
        matches!(self, OracleOutcome::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, OracleOutcome::No)
    }

    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> OracleOutcome<U> {
        match self {
            OracleOutcome::Yes(t) => OracleOutcome::Yes(f(t)),
            OracleOutcome::No => OracleOutcome::No,
            OracleOutcome::BudgetExceeded => OracleOutcome::BudgetExceeded,
        }
    }
}

struct Meter {
    nodes: u64,
    limit: u64,
    deadline: Instant,
    exceeded: bool,
}

impl Meter {
    fn new(b: &SearchBudget) -> Self {
        Meter {
            nodes: 0,
            limit: b.nodes,
            deadline: Instant::now() + Duration::from_millis(b.millis),
            exceeded: false,
        }
    }

    /// Counts a node; false once the budget is spent.
    fn tick(&mut self) -> bool {
        self.nodes += 1;
        if self.nodes > self.limit || (self.nodes & 1023 == 0 && Instant::now() > self.deadline) {
            self.exceeded = true;
        }
        !self.exceeded
    }
}

fn too_large<T>(what: &str, n: usize, max: usize) -> Result<T> {
    Err(Error::Domain(format!(
        "{what} oracle handles at most {max} host vertices, got {n}"
    )))
}

// ---------------------------------------------------------------------------
// small digraphs and canonical forms

/// Digraph on `0..n` (`n ≤ 8`), arc `(i, j)` stored at bit `8i + j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SmallDigraph {
    pub n: u8,
    pub arcs: u64,
}

const fn bit(i: usize, j: usize) -> u64 {
    1 << (8 * i + j)
}

impl SmallDigraph {
    pub const MAX: usize = 8;

    /// Compacts `d`, returning the old id of each new vertex.
    pub fn from_digraph(d: &Digraph) -> Option<(SmallDigraph, Vec<VertexId>)> {
        let (c, old) = d.compact();
        if old.len() > Self::MAX {
            return None;
        }
        let arcs = c.arcs().into_iter().fold(0, |m, (u, v)| m | bit(u, v));
        Some((
            SmallDigraph {
                n: old.len() as u8,
                arcs,
            },
            old,
        ))
    }

    pub fn to_digraph(self) -> Digraph {
        let n = self.n as usize;
        let arcs: Vec<_> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|&(i, j)| self.has(i, j))
            .collect();
        Digraph::from_arcs(n, &arcs).expect("small digraph is simple")
    }

    pub fn has(self, i: usize, j: usize) -> bool {
        self.arcs & bit(i, j) != 0
    }

    pub fn arc_count(self) -> u32 {
        self.arcs.count_ones()
    }

    fn out_row(self, i: usize) -> u64 {
        (self.arcs >> (8 * i)) & 0xff
    }

    fn in_col(self, j: usize) -> u64 {
        (0..self.n as usize)
            .filter(|&i| self.has(i, j))
            .fold(0, |m, i| m | 1 << i)
    }

    pub fn out_degree(self, i: usize) -> u32 {
        self.out_row(i).count_ones()
    }

    pub fn in_degree(self, j: usize) -> u32 {
        self.in_col(j).count_ones()
    }

    /// Relabels vertex `i` as `perm[i]`.
    pub fn permuted(self, perm: &[usize]) -> SmallDigraph {
        let mut arcs = 0;
        let mut rest = self.arcs;
        while rest != 0 {
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            arcs |= bit(perm[b / 8], perm[b % 8]);
        }
        SmallDigraph { n: self.n, arcs }
    }

    pub fn without_arc(self, i: usize, j: usize) -> SmallDigraph {
        SmallDigraph {
            n: self.n,
            arcs: self.arcs & !bit(i, j),
        }
    }

    /// Deletes vertex `v`, shifting higher labels down by one.
    pub fn without_vertex(self, v: usize) -> SmallDigraph {
        let n = self.n as usize;
        let shift = |i: usize| if i > v { i - 1 } else { i };
        let mut arcs = 0;
        for i in (0..n).filter(|&i| i != v) {
            for j in (0..n).filter(|&j| j != v && self.has(i, j)) {
                arcs |= bit(shift(i), shift(j));
            }
        }
        SmallDigraph {
            n: self.n - 1,
            arcs,
        }
    }

    pub fn is_butterfly_contractible(self, u: usize, v: usize) -> bool {
        self.has(u, v) && (self.out_degree(u) == 1 || self.in_degree(v) == 1)
    }

    /// Contracts the arc `(u, v)` into the smaller label, dropping loops.
    pub fn contracted(self, u: usize, v: usize) -> SmallDigraph {
        let (s, a) = (u.min(v), u.max(v));
        let mut m = self;
        for j in 0..self.n as usize {
            if self.has(a, j) && j != s {
                m.arcs |= bit(s, j);
            }
            if self.has(j, a) && j != s {
                m.arcs |= bit(j, s);
            }
        }
        m.without_vertex(a)
    }

    /// Minimum arc mask over all labellings that sort vertices by
    /// `(out-degree, in-degree, mutual pairs)`; equal for isomorphic inputs.
    pub fn canonical(self) -> SmallDigraph {
        let n = self.n as usize;
        let inv = |i: usize| {
            let mutual = (self.out_row(i) & self.in_col(i)).count_ones();
            (self.out_degree(i), self.in_degree(i), mutual)
        };
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&i| inv(i));
        let mut cells: Vec<(usize, usize)> = Vec::new();
        let mut start = 0;
        for k in 1..=n {
            if k == n || inv(order[k]) != inv(order[start]) {
                cells.push((start, k));
                start = k;
            }
        }
        let mut best = u64::MAX;
        let mut slots = order.clone();
        let mut perm = vec![0usize; n];
        fn rec(
            g: SmallDigraph,
            cells: &[(usize, usize)],
            c: usize,
            slots: &mut Vec<usize>,
            perm: &mut [usize],
            best: &mut u64,
        ) {
            if c == cells.len() {
                for (pos, &v) in slots.iter().enumerate() {
                    perm[v] = pos;
                }
                *best = (*best).min(g.permuted(perm).arcs);
                return;
            }
            let (a, b) = cells[c];
            permute_range(slots, a, b, &mut |s| rec(g, cells, c + 1, s, perm, best));
        }
        rec(self, &cells, 0, &mut slots, &mut perm, &mut best);
        SmallDigraph {
            n: self.n,
            arcs: if n == 0 { 0 } else { best },
        }
    }

    /// A labelling `perm` of `self` into `host` (same order) with every arc
    /// of `self` present in `host`.
    pub fn spanning_embedding(self, host: SmallDigraph) -> Option<Vec<usize>> {
        let n = self.n as usize;
        if host.n != self.n || self.arc_count() > host.arc_count() {
            return None;
        }
        let mut perm = vec![usize::MAX; n];
        let mut used = 0u64;
        fn rec(
            p: SmallDigraph,
            h: SmallDigraph,
            i: usize,
            perm: &mut Vec<usize>,
            used: &mut u64,
        ) -> bool {
            let n = p.n as usize;
            if i == n {
                return true;
            }
            for c in 0..n {
                if *used & (1 << c) != 0
                    || p.out_degree(i) > h.out_degree(c)
                    || p.in_degree(i) > h.in_degree(c)
                {
                    continue;
                }
                let ok = (0..i).all(|j| {
                    (!p.has(i, j) || h.has(c, perm[j])) && (!p.has(j, i) || h.has(perm[j], c))
                });
                if ok {
                    perm[i] = c;
                    *used |= 1 << c;
                    if rec(p, h, i + 1, perm, used) {
                        return true;
                    }
                    *used &= !(1 << c);
                }
            }
            false
        }
        rec(self, host, 0, &mut perm, &mut used).then_some(perm)
    }

    /// One representative (the minimum arc mask) per isomorphism class of
    /// digraphs on `n ≤ 5` vertices.
    pub fn classes(n: usize) -> Vec<SmallDigraph> {
        assert!(n <= 5, "class enumeration is limited to 5 vertices");
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .collect();
        let m = pairs.len();
        let index: HashMap<(usize, usize), usize> =
            pairs.iter().enumerate().map(|(k, &p)| (p, k)).collect();
        let mut perms = Vec::new();
        let mut slots: Vec<usize> = (0..n).collect();
        permute_range(&mut slots, 0, n, &mut |s| perms.push(s.clone()));
        let maps: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| pairs.iter().map(|&(i, j)| index[&(p[i], p[j])]).collect())
            .collect();
        let mut seen = vec![false; 1 << m];
        let mut out = Vec::new();
        for code in 0..(1u64 << m) {
            if seen[code as usize] {
                continue;
            }
            for map in &maps {
                let mut img = 0u64;
                for (k, &t) in map.iter().enumerate() {
                    if code >> k & 1 == 1 {
                        img |= 1 << t;
                    }
                }
                seen[img as usize] = true;
            }
            let arcs = pairs
                .iter()
                .enumerate()
                .filter(|(k, _)| code >> k & 1 == 1)
                .fold(0, |a, (_, &(i, j))| a | bit(i, j));
            out.push(SmallDigraph { n: n as u8, arcs });
        }
        out
    }
}

/// Calls `f` once for every permutation of `v[a..b]` (Heap's algorithm).
fn permute_range(v: &mut Vec<usize>, a: usize, b: usize, f: &mut dyn FnMut(&mut Vec<usize>)) {
    fn heap(v: &mut Vec<usize>, a: usize, k: usize, f: &mut dyn FnMut(&mut Vec<usize>)) {
        if k <= 1 {
            f(v);
            return;
        }
        for i in 0..k - 1 {
            heap(v, a, k - 1, f);
            if k.is_multiple_of(2) {
                v.swap(a + i, a + k - 1);
            } else {
                v.swap(a, a + k - 1);
            }
        }
        heap(v, a, k - 1, f);
    }
    heap(v, a, b - a, f);
}

pub fn small_isomorphic(a: &Digraph, b: &Digraph) -> Option<bool> {
    let (x, _) = SmallDigraph::from_digraph(a)?;
    let (y, _) = SmallDigraph::from_digraph(b)?;
    Some(x.n == y.n && x.canonical() == y.canonical())
}

// ---------------------------------------------------------------------------
// butterfly minors

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ButterflyMode {
    OperationSequence,
    BranchSet,
}

/// One legal operation, in host ids. A contraction keeps the smaller id.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ButterflyOp {
    DeleteVertex(VertexId),
    DeleteArc(VertexId, VertexId),
    Contract(VertexId, VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum ButterflyWitness {
    Sequence(Vec<ButterflyOp>),
    Model(ButterflyEmbedding),
}

/// Applies `ops` to `d`, rejecting any illegal step.
pub fn replay_butterfly_ops(d: &Digraph, ops: &[ButterflyOp]) -> Result<Digraph> {
    let mut d = d.clone();
    for &op in ops {
        match op {
            ButterflyOp::DeleteVertex(v) => {
                if !d.contains(v) {
                    return Err(Error::Domain(format!("{v} is not a vertex")));
                }
                d.remove_vertex(v);
            }
            ButterflyOp::DeleteArc(u, v) => {
                if !d.has_arc(u, v) {
                    return Err(Error::Domain(format!("({u}, {v}) is not an arc")));
                }
                d.remove_arc(u, v);
            }
            ButterflyOp::Contract(u, v) => {
                d.butterfly_contract_in_place(u, v)?;
            }
        }
    }
    Ok(d)
}

/// Memoized search over digraphs reachable by legal operations. Reusable
/// across hosts for a fixed pattern: failed states are remembered by
/// canonical form.
pub struct OperationSequenceOracle {
    pattern: SmallDigraph,
    failed: HashSet<SmallDigraph>,
}

impl OperationSequenceOracle {
    pub fn new(pattern: &Digraph) -> Result<Self> {
        let (p, _) = SmallDigraph::from_digraph(pattern).ok_or_else(|| {
            Error::Domain("pattern too large for the operation-sequence oracle".into())
        })?;
        Ok(OperationSequenceOracle {
            pattern: p,
            failed: HashSet::new(),
        })
    }

    pub fn query(
        &mut self,
        d: &Digraph,
        budget: &SearchBudget,
    ) -> Result<OracleOutcome<Vec<ButterflyOp>>> {
        let Some((g, ids)) = SmallDigraph::from_digraph(d) else {
            return too_large("operation-sequence", d.vertex_count(), SmallDigraph::MAX);
        };
        let mut meter = Meter::new(budget);
        let mut ops = Vec::new();
        let found = self.dfs(g, ids, &mut ops, &mut meter);
        Ok(match found {
            Some(true) => OracleOutcome::Yes(ops),
            Some(false) => OracleOutcome::No,
            None => OracleOutcome::BudgetExceeded,
        })
    }

    fn dfs(
        &mut self,
        g: SmallDigraph,
        ids: Vec<VertexId>,
        ops: &mut Vec<ButterflyOp>,
        meter: &mut Meter,
    ) -> Option<bool> {
        let p = self.pattern;
        if g.n < p.n || g.arc_count() < p.arc_count() {
            return Some(false);
        }
        let canon = g.canonical();
        if self.failed.contains(&canon) {
            return Some(false);
        }
        if !meter.tick() {
            return None;
        }
        let n = g.n as usize;
        if g.n == p.n {
            // Only arc deletions keep the vertex count.
            if let Some(perm) = p.spanning_embedding(g) {
                let mut image = 0u64;
                for i in 0..n {
                    for j in 0..n {
                        if p.has(i, j) {
                            image |= bit(perm[i], perm[j]);
                        }
                    }
                }
                for i in 0..n {
                    for j in 0..n {
                        if g.has(i, j) && image & bit(i, j) == 0 {
                            ops.push(ButterflyOp::DeleteArc(ids[i], ids[j]));
                        }
                    }
                }
                return Some(true);
            }
            self.failed.insert(canon);
            return Some(false);
        }
        let drop_id = |ids: &[VertexId], v: usize| -> Vec<VertexId> {
            ids.iter()
                .enumerate()
                .filter(|&(i, _)| i != v)
                .map(|(_, &x)| x)
                .collect()
        };
        for u in 0..n {
            for v in 0..n {
                if g.is_butterfly_contractible(u, v) {
                    ops.push(ButterflyOp::Contract(ids[u], ids[v]));
                    match self.dfs(g.contracted(u, v), drop_id(&ids, u.max(v)), ops, meter) {
                        Some(false) => {
                            ops.pop();
                        }
                        other => return other,
                    }
                }
            }
        }
        for v in 0..n {
            ops.push(ButterflyOp::DeleteVertex(ids[v]));
            match self.dfs(g.without_vertex(v), drop_id(&ids, v), ops, meter) {
                Some(false) => {
                    ops.pop();
                }
                other => return other,
            }
        }
        for u in 0..n {
            for v in 0..n {
                if g.has(u, v) {
                    ops.push(ButterflyOp::DeleteArc(ids[u], ids[v]));
                    match self.dfs(g.without_arc(u, v), ids.clone(), ops, meter) {
                        Some(false) => {
                            ops.pop();
                        }
                        other => return other,
                    }
                }
            }
        }
        self.failed.insert(canon);
        Some(false)
    }
}

#[derive(Debug, Clone)]
struct BranchOption {
    branch: ButterflyBranch,
    entry: u64,
    exit: u64,
}

/// Exhaustive search over branch-set models. Options per host subset are
/// cached, so one instance can answer many patterns for the same host.
pub struct BranchSetOracle {
    ids: Vec<VertexId>,
    succ: Vec<u64>,
    pred: Vec<u64>,
    options: HashMap<u64, Vec<BranchOption>>,
}

fn reach_within(start: usize, set: u64, step: &[u64]) -> (u64, Vec<Option<usize>>) {
    let mut seen = 1u64 << start;
    let mut via = vec![None; step.len()];
    let mut stack = vec![start];
    while let Some(x) = stack.pop() {
        let mut nxt = step[x] & set & !seen;
        while nxt != 0 {
            let y = nxt.trailing_zeros() as usize;
            nxt &= nxt - 1;
            seen |= 1 << y;
            via[y] = Some(x);
            stack.push(y);
        }
    }
    (seen, via)
}

fn bits(mut m: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        (m != 0).then(|| {
            let b = m.trailing_zeros() as usize;
            m &= m - 1;
            b
        })
    })
}

impl BranchSetOracle {
    pub const MAX: usize = 16;

    pub fn new(d: &Digraph) -> Result<Self> {
        let (c, ids) = d.compact();
        if ids.len() > Self::MAX {
            return too_large("branch-set", ids.len(), Self::MAX);
        }
        let n = ids.len();
        let mut succ = vec![0u64; n];
        let mut pred = vec![0u64; n];
        for (u, v) in c.arcs() {
            succ[u] |= 1 << v;
            pred[v] |= 1 << u;
        }
        Ok(BranchSetOracle {
            ids,
            succ,
            pred,
            options: HashMap::new(),
        })
    }

    fn weakly_connected(&self, set: u64) -> bool {
        if set == 0 {
            return false;
        }
        let both: Vec<u64> = self
            .succ
            .iter()
            .zip(&self.pred)
            .map(|(a, b)| a | b)
            .collect();
        reach_within(set.trailing_zeros() as usize, set, &both).0 == set
    }

    fn options_for(&mut self, set: u64) -> &[BranchOption] {
        if !self.options.contains_key(&set) {
            let opts = self.compute_options(set);
            self.options.insert(set, opts);
        }
        &self.options[&set]
    }

    fn compute_options(&self, set: u64) -> Vec<BranchOption> {
        let id = |i: usize| self.ids[i];
        let mut out: Vec<BranchOption> = Vec::new();
        let mut sub = set;
        loop {
            let (i_mask, o_mask) = (sub, set & !sub);
            let in_roots: Vec<Option<usize>> = if i_mask == 0 {
                vec![None]
            } else {
                bits(i_mask).map(Some).collect()
            };
            let out_roots: Vec<Option<usize>> = if o_mask == 0 {
                vec![None]
            } else {
                bits(o_mask).map(Some).collect()
            };
            for &ri in &in_roots {
                let in_tree = ri.map(|r| reach_within(r, i_mask, &self.pred));
                if in_tree.as_ref().is_some_and(|(seen, _)| *seen != i_mask) {
                    continue;
                }
                for &ro in &out_roots {
                    if let (Some(a), Some(b)) = (ri, ro) {
                        if self.succ[a] & (1 << b) == 0 {
                            continue;
                        }
                    }
                    let out_tree = ro.map(|r| reach_within(r, o_mask, &self.succ));
                    if out_tree.as_ref().is_some_and(|(seen, _)| *seen != o_mask) {
                        continue;
                    }
                    let mut branch = ButterflyBranch::default();
                    if let Some((_, via)) = &in_tree {
                        branch.in_part = bits(i_mask).map(|v| (id(v), via[v].map(id))).collect();
                    }
                    if let Some((_, via)) = &out_tree {
                        branch.out_part = bits(o_mask).map(|v| (id(v), via[v].map(id))).collect();
                    }
                    let regions: Vec<(u64, u64)> = match (ri, ro) {
                        (None, Some(b)) => vec![(1 << b, o_mask)],
                        (Some(a), None) => vec![(i_mask, 1 << a)],
                        (Some(a), Some(b)) => {
                            vec![(i_mask | 1 << b, o_mask), (i_mask, o_mask | 1 << a)]
                        }
                        (None, None) => vec![],
                    };
                    for (entry, exit) in regions {
                        out.push(BranchOption {
                            branch: branch.clone(),
                            entry,
                            exit,
                        });
                    }
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & set;
        }
        // Keep only options whose regions are not dominated by another.
        let mut kept: Vec<BranchOption> = Vec::new();
        for o in out {
            let dominated = kept
                .iter()
                .any(|k| o.entry & !k.entry == 0 && o.exit & !k.exit == 0);
            if !dominated {
                kept.retain(|k| !(k.entry & !o.entry == 0 && k.exit & !o.exit == 0));
                kept.push(o);
            }
        }
        kept
    }

    pub fn query(
        &mut self,
        pattern: &Digraph,
        budget: &SearchBudget,
    ) -> Result<OracleOutcome<ButterflyEmbedding>> {
        let pv: Vec<VertexId> = pattern.vertices().collect();
        let n = self.ids.len();
        let k = pv.len();
        if k > n || pattern.arc_count() > self.succ.iter().map(|m| m.count_ones() as usize).sum() {
            return Ok(OracleOutcome::No);
        }
        let index: HashMap<VertexId, usize> = pv.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let parcs: Vec<(usize, usize)> = pattern
            .arcs()
            .into_iter()
            .map(|(u, v)| (index[&u], index[&v]))
            .collect();
        let mut meter = Meter::new(budget);
        let mut sets = vec![0u64; k];
        let found = self.assign(0, &mut sets, &parcs, &mut meter);
        if meter.exceeded {
            return Ok(OracleOutcome::BudgetExceeded);
        }
        let Some((sets, choice)) = found else {
            return Ok(OracleOutcome::No);
        };
        let mut branches = vec![ButterflyBranch::default(); pattern.capacity()];
        let mut arcs = Vec::new();
        for (i, &x) in pv.iter().enumerate() {
            branches[x] = self.options[&sets[i]][choice[i]].branch.clone();
        }
        for &(a, b) in &parcs {
            let (oa, ob) = (
                &self.options[&sets[a]][choice[a]],
                &self.options[&sets[b]][choice[b]],
            );
            let (u, v) = bits(oa.exit)
                .find_map(|u| bits(self.succ[u] & ob.entry).next().map(|v| (u, v)))
                .expect("chosen options realize the arc");
            arcs.push(ArcImage {
                pattern: (pv[a], pv[b]),
                host: (self.ids[u], self.ids[v]),
            });
        }
        Ok(OracleOutcome::Yes(ButterflyEmbedding {
            branches,
            arcs,
            apex: None,
        }))
    }

    fn assign(
        &mut self,
        v: usize,
        sets: &mut Vec<u64>,
        parcs: &[(usize, usize)],
        meter: &mut Meter,
    ) -> Option<(Vec<u64>, Vec<usize>)> {
        if !meter.tick() {
            return None;
        }
        let n = self.ids.len();
        let empty = sets.iter().filter(|&&s| s == 0).count();
        if empty > n - v {
            return None;
        }
        if v == n {
            if !sets.iter().all(|&s| self.weakly_connected(s)) {
                return None;
            }
            for &s in sets.iter() {
                self.options_for(s);
            }
            let mut choice = vec![0usize; sets.len()];
            return self
                .choose(0, sets, parcs, &mut choice)
                .then(|| (sets.clone(), choice));
        }
        if let r @ Some(_) = self.assign(v + 1, sets, parcs, meter) {
            return r;
        }
        for i in 0..sets.len() {
            sets[i] |= 1 << v;
            let r = self.assign(v + 1, sets, parcs, meter);
            sets[i] &= !(1 << v);
            if r.is_some() {
                return r;
            }
            if meter.exceeded {
                return None;
            }
        }
        None
    }

    fn choose(
        &self,
        i: usize,
        sets: &[u64],
        parcs: &[(usize, usize)],
        choice: &mut [usize],
    ) -> bool {
        if i == sets.len() {
            return true;
        }
        for c in 0..self.options[&sets[i]].len() {
            choice[i] = c;
            let ok = parcs
                .iter()
                .filter(|&&(a, b)| a.max(b) == i)
                .all(|&(a, b)| {
                    let (oa, ob) = (
                        &self.options[&sets[a]][choice[a]],
                        &self.options[&sets[b]][choice[b]],
                    );
                    bits(oa.exit).any(|u| self.succ[u] & ob.entry != 0)
                });
            if ok && self.choose(i + 1, sets, parcs, choice) {
                return true;
            }
        }
        false
    }
}

/// Whether `pattern` is a butterfly minor of `d`.
pub fn oracle_butterfly(
    d: &Digraph,
    pattern: &Digraph,
    budget: &SearchBudget,
    mode: ButterflyMode,
) -> Result<OracleOutcome<ButterflyWitness>> {
    Ok(match mode {
        ButterflyMode::OperationSequence => OperationSequenceOracle::new(pattern)?
            .query(d, budget)?
            .map(ButterflyWitness::Sequence),
        ButterflyMode::BranchSet => BranchSetOracle::new(d)?
            .query(pattern, budget)?
            .map(ButterflyWitness::Model),
    })
}

// ---------------------------------------------------------------------------
// minors

fn adjacency_masks(g: &Graph) -> Vec<u64> {
    let mut adj = vec![0u64; g.capacity()];
    for (u, v) in g.edges() {
        adj[u] |= 1 << v;
        adj[v] |= 1 << u;
    }
    adj
}

/// Whether `h` is a minor of `g`. When both are connected the branch sets
/// may be taken to cover `V(G)` (leftover pieces join a neighbouring set),
/// so only partitions into `|V(H)|` parts are enumerated; otherwise host
/// vertices may also be left out.
pub fn oracle_minor(
    g: &Graph,
    h: &Graph,
    budget: &SearchBudget,
) -> Result<OracleOutcome<MinorEmbedding>> {
    let (gc, gids) = g.compact();
    let (hc, hids) = h.compact();
    let n = gids.len();
    let k = hids.len();
    if n > 64 {
        return too_large("minor", n, 64);
    }
    let mut branch_sets = vec![Vec::new(); h.capacity()];
    if k == 0 {
        return Ok(OracleOutcome::Yes(MinorEmbedding {
            branch_sets,
            apex: None,
        }));
    }
    if k > n || hc.edge_count() > gc.edge_count() {
        return Ok(OracleOutcome::No);
    }
    let cover = gc.is_connected() && hc.is_connected();
    let adj = adjacency_masks(&gc);
    let mut search = MinorSearch {
        adj,
        k,
        cover,
        hc: &hc,
        meter: Meter::new(budget),
        parts: vec![0; k],
    };
    let found = search.rec(0, 0);
    if search.meter.exceeded {
        return Ok(OracleOutcome::BudgetExceeded);
    }
    let Some((parts, map)) = found else {
        return Ok(OracleOutcome::No);
    };
    for (p, part) in map {
        branch_sets[hids[p]] = bits(parts[part]).map(|v| gids[v]).collect();
    }
    Ok(OracleOutcome::Yes(MinorEmbedding {
        branch_sets,
        apex: None,
    }))
}

struct MinorSearch<'a> {
    adj: Vec<u64>,
    k: usize,
    cover: bool,
    hc: &'a Graph,
    meter: Meter,
    parts: Vec<u64>,
}

/// Branch-set masks and the host-to-part assignment.
type Partition = (Vec<u64>, Vec<(VertexId, usize)>);

impl MinorSearch<'_> {
    /// Restricted-growth assignment of vertex `v` onward with `used` parts opened.
    fn rec(&mut self, v: usize, used: usize) -> Option<Partition> {
        if !self.meter.tick() {
            return None;
        }
        let n = self.adj.len();
        if n - v < self.k - used {
            return None;
        }
        if v == n {
            return self.leaf();
        }
        if !self.cover {
            if let r @ Some(_) = self.rec(v + 1, used) {
                return r;
            }
        }
        for p in 0..(used + 1).min(self.k) {
            self.parts[p] |= 1 << v;
            let r = self.rec(v + 1, used.max(p + 1));
            self.parts[p] &= !(1 << v);
            if r.is_some() || self.meter.exceeded {
                return r;
            }
        }
        None
    }

    fn leaf(&self) -> Option<Partition> {
        for &p in &self.parts {
            if reach_within(p.trailing_zeros() as usize, p, &self.adj).0 != p {
                return None;
            }
        }
        let mut q = Graph::new(self.k);
        for i in 0..self.k {
            let nb = bits(self.parts[i]).fold(0u64, |m, v| m | self.adj[v]);
            for j in (i + 1)..self.k {
                if nb & self.parts[j] != 0 {
                    q.add_edge(i, j).ok()?;
                }
            }
        }
        if q.edge_count() < self.hc.edge_count() {
            return None;
        }
        subgraph_embedding(self.hc, &q, &[]).map(|m| (self.parts.clone(), m))
    }
}

// ---------------------------------------------------------------------------
// subdivisions

struct SubdivisionSearch {
    succ: Vec<u64>,
    out_deg: Vec<u32>,
    in_deg: Vec<u32>,
    /// Pattern vertex order and, per position, the edges to route once
    /// that vertex is placed: `(edge index, from, to)` in pattern indices.
    order: Vec<usize>,
    need: Vec<(u32, u32)>,
    edges_at: Vec<Vec<(usize, usize, usize)>>,
    branch: Vec<usize>,
    used: u64,
    paths: Vec<Vec<usize>>,
    meter: Meter,
}

impl SubdivisionSearch {
    fn place(&mut self, pos: usize) -> bool {
        if pos == self.order.len() {
            return true;
        }
        let x = self.order[pos];
        let (need_out, need_in) = self.need[x];
        for c in 0..self.succ.len() {
            if self.used & (1 << c) != 0 || self.out_deg[c] < need_out || self.in_deg[c] < need_in {
                continue;
            }
            if !self.meter.tick() {
                return false;
            }
            self.branch[x] = c;
            self.used |= 1 << c;
            if self.route(pos, 0) {
                return true;
            }
            self.used &= !(1 << c);
            if self.meter.exceeded {
                return false;
            }
        }
        false
    }

    fn route(&mut self, pos: usize, i: usize) -> bool {
        if i == self.edges_at[pos].len() {
            return self.place(pos + 1);
        }
        let (e, a, b) = self.edges_at[pos][i];
        let (s, t) = (self.branch[a], self.branch[b]);
        let mut path = vec![s];
        self.extend(pos, i, e, t, &mut path)
    }

    fn extend(&mut self, pos: usize, i: usize, e: usize, t: usize, path: &mut Vec<usize>) -> bool {
        if !self.meter.tick() {
            return false;
        }
        let last = *path.last().unwrap();
        if self.succ[last] & (1 << t) != 0 {
            path.push(t);
            self.paths[e] = path.clone();
            if self.route(pos, i + 1) {
                return true;
            }
            path.pop();
            if self.meter.exceeded {
                return false;
            }
        }
        let free = self.succ[last] & !self.used;
        for w in bits(free) {
            self.used |= 1 << w;
            path.push(w);
            let ok = self.extend(pos, i, e, t, path);
            path.pop();
            self.used &= !(1 << w);
            if ok || self.meter.exceeded {
                return ok;
            }
        }
        false
    }
}

#[allow(clippy::too_many_arguments)]
fn oracle_subdivision_core(
    succ: Vec<u64>,
    pred: Vec<u64>,
    host_ids: &[VertexId],
    pattern_ids: &[VertexId],
    pattern_capacity: usize,
    pattern_edges: &[(usize, usize)],
    directed: bool,
    budget: &SearchBudget,
) -> OracleOutcome<SubdivisionEmbedding> {
    let k = pattern_ids.len();
    let mut need = vec![(0u32, 0u32); k];
    for &(a, b) in pattern_edges {
        need[a].0 += 1;
        need[b].1 += 1;
        if !directed {
            need[a].1 += 1;
            need[b].0 += 1;
        }
    }
    if k > succ.len() {
        return OracleOutcome::No;
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&x| std::cmp::Reverse(need[x].0 + need[x].1));
    let mut at = vec![usize::MAX; k];
    for (p, &x) in order.iter().enumerate() {
        at[x] = p;
    }
    let mut edges_at = vec![Vec::new(); k];
    for (e, &(a, b)) in pattern_edges.iter().enumerate() {
        edges_at[at[a].max(at[b])].push((e, a, b));
    }
    let mut s = SubdivisionSearch {
        out_deg: succ.iter().map(|m| m.count_ones()).collect(),
        in_deg: pred.iter().map(|m| m.count_ones()).collect(),
        succ,
        order,
        need,
        edges_at,
        branch: vec![usize::MAX; k],
        used: 0,
        paths: vec![Vec::new(); pattern_edges.len()],
        meter: Meter::new(budget),
    };
    let found = s.place(0);
    if s.meter.exceeded {
        return OracleOutcome::BudgetExceeded;
    }
    if !found {
        return OracleOutcome::No;
    }
    let mut branch = vec![None; pattern_capacity];
    for x in 0..k {
        branch[pattern_ids[x]] = Some(host_ids[s.branch[x]]);
    }
    let paths = pattern_edges
        .iter()
        .zip(&s.paths)
        .map(|(&(a, b), p)| PathImage {
            from: pattern_ids[a],
            to: pattern_ids[b],
            path: p.iter().map(|&v| host_ids[v]).collect(),
        })
        .collect();
    OracleOutcome::Yes(SubdivisionEmbedding { branch, paths })
}

pub fn oracle_subdivision_graph(
    g: &Graph,
    pattern: &Graph,
    budget: &SearchBudget,
) -> Result<OracleOutcome<SubdivisionEmbedding>> {
    let (gc, gids) = g.compact();
    if gids.len() > 64 {
        return too_large("subdivision", gids.len(), 64);
    }
    let (pc, pids) = pattern.compact();
    let adj = adjacency_masks(&gc);
    Ok(oracle_subdivision_core(
        adj.clone(),
        adj,
        &gids,
        &pids,
        pattern.capacity(),
        &pc.edges(),
        false,
        budget,
    ))
}

pub fn oracle_subdivision_digraph(
    d: &Digraph,
    pattern: &Digraph,
    budget: &SearchBudget,
) -> Result<OracleOutcome<SubdivisionEmbedding>> {
    let (dc, dids) = d.compact();
    if dids.len() > 64 {
        return too_large("subdivision", dids.len(), 64);
    }
    let (pc, pids) = pattern.compact();
    let mut succ = vec![0u64; dids.len()];
    let mut pred = vec![0u64; dids.len()];
    for (u, v) in dc.arcs() {
        succ[u] |= 1 << v;
        pred[v] |= 1 << u;
    }
    Ok(oracle_subdivision_core(
        succ,
        pred,
        &dids,
        &pids,
        pattern.capacity(),
        &pc.arcs(),
        true,
        budget,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph_finder::verify_butterfly;
    use crate::generate::{complete_bipartite, petersen};
    use crate::minor::verify_minor;
    use crate::subdivision::{verify_subdivision_digraph, verify_subdivision_graph};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_digraph(n: usize, p: f64, rng: &mut ChaCha8Rng) -> Digraph {
        let arcs: Vec<_> = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .filter(|(i, j)| i != j)
            .filter(|_| rng.gen_bool(p))
            .collect();
        Digraph::from_arcs(n, &arcs).unwrap()
    }

    fn path(n: usize) -> Digraph {
        let arcs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Digraph::from_arcs(n, &arcs).unwrap()
    }

    fn check_witness(d: &Digraph, p: &Digraph, w: &ButterflyWitness) {
        match w {
            ButterflyWitness::Sequence(ops) => {
                let r = replay_butterfly_ops(d, ops).unwrap();
                assert_eq!(small_isomorphic(&r, p), Some(true), "{ops:?}");
            }
            ButterflyWitness::Model(m) => verify_butterfly(d, p, m).unwrap(),
        }
    }

    #[test]
    fn canonical_form_is_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..200 {
            let n = rng.gen_range(1..=7);
            let (g, _) = SmallDigraph::from_digraph(&random_digraph(n, 0.4, &mut rng)).unwrap();
            let mut perm: Vec<usize> = (0..n).collect();
            rand::seq::SliceRandom::shuffle(perm.as_mut_slice(), &mut rng);
            assert_eq!(g.canonical(), g.permuted(&perm).canonical());
        }
    }

    #[test]
    fn class_counts() {
        // Known counts of labelled-up-to-isomorphism digraphs.
        let counts: Vec<usize> = (0..=4).map(|n| SmallDigraph::classes(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 3, 16, 218]);
        let mut canon: Vec<_> = SmallDigraph::classes(4)
            .into_iter()
            .map(|g| g.canonical())
            .collect();
        canon.sort();
        canon.dedup();
        assert_eq!(canon.len(), 218);
    }

    #[test]
    fn minor_oracle() {
        let b = SearchBudget::default();
        let k4 = Graph::complete(4);
        match oracle_minor(&petersen(), &k4, &b).unwrap() {
            OracleOutcome::Yes(e) => verify_minor(&petersen(), &k4, &e).unwrap(),
            o => panic!("{o:?}"),
        }
        assert!(oracle_minor(&k4, &Graph::complete(5), &b).unwrap().is_no());
        assert!(
            oracle_minor(&complete_bipartite(3, 3), &Graph::complete(5), &b)
                .unwrap()
                .is_no()
        );
        // Disconnected pattern inside a connected host.
        let two_edges = Graph::from_edges(4, &[(0, 1), (2, 3)]).unwrap();
        assert!(oracle_minor(
            &Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap(),
            &two_edges,
            &b
        )
        .unwrap()
        .is_yes());
        assert!(oracle_minor(
            &Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap(),
            &two_edges,
            &b
        )
        .unwrap()
        .is_no());
    }

    #[test]
    fn subdivision_oracles() {
        let b = SearchBudget::default();
        let k4 = Graph::complete(4);
        match oracle_subdivision_graph(&petersen(), &k4, &b).unwrap() {
            OracleOutcome::Yes(e) => verify_subdivision_graph(&petersen(), &k4, &e).unwrap(),
            o => panic!("{o:?}"),
        }
        // K4 has no vertex of degree 4.
        assert!(
            oracle_subdivision_graph(&petersen(), &Graph::complete(5), &b)
                .unwrap()
                .is_no()
        );
        let c3 = Digraph::directed_cycle(3);
        assert!(oracle_subdivision_digraph(&path(6), &c3, &b)
            .unwrap()
            .is_no());
        let c6 = Digraph::directed_cycle(6);
        match oracle_subdivision_digraph(&c6, &c3, &b).unwrap() {
            OracleOutcome::Yes(e) => verify_subdivision_digraph(&c6, &c3, &e).unwrap(),
            o => panic!("{o:?}"),
        }
        let tiny = SearchBudget::new(1, 60_000).unwrap();
        assert!(matches!(
            oracle_subdivision_graph(&petersen(), &k4, &tiny).unwrap(),
            OracleOutcome::BudgetExceeded
        ));
    }

    #[test]
    fn butterfly_basics() {
        let b = SearchBudget::default();
        for mode in [ButterflyMode::OperationSequence, ButterflyMode::BranchSet] {
            let d = Digraph::directed_cycle(4);
            match oracle_butterfly(&d, &d, &b, mode).unwrap() {
                OracleOutcome::Yes(w) => check_witness(&d, &d, &w),
                o => panic!("{o:?}"),
            }
            let c2 = Digraph::directed_cycle(2);
            assert!(oracle_butterfly(&path(5), &c2, &b, mode).unwrap().is_no());
            match oracle_butterfly(&Digraph::directed_cycle(5), &c2, &b, mode).unwrap() {
                OracleOutcome::Yes(w) => check_witness(&Digraph::directed_cycle(5), &c2, &w),
                o => panic!("{o:?}"),
            }
        }
    }

    #[test]
    fn butterfly_modes_agree_on_random_pairs() {
        let b = SearchBudget::default();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..150 {
            let d = random_digraph(rng.gen_range(2..=5), 0.35, &mut rng);
            let p = random_digraph(rng.gen_range(1..=3), 0.5, &mut rng);
            let a = oracle_butterfly(&d, &p, &b, ButterflyMode::OperationSequence).unwrap();
            let c = oracle_butterfly(&d, &p, &b, ButterflyMode::BranchSet).unwrap();
            assert_eq!(
                a.is_yes(),
                c.is_yes(),
                "host {:?} pattern {:?}",
                d.arcs(),
                p.arcs()
            );
            for w in [a, c] {
                if let OracleOutcome::Yes(w) = w {
                    check_witness(&d, &p, &w);
                }
            }
        }
    }
}
