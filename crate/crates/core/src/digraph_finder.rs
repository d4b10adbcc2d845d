//! Digraph finders: apex-source in-arborescence butterfly minors, directed
//! wheel subdivisions, and the conversion of butterfly models with small
//! branch sets into subdivisions.

use std::collections::{HashMap, HashSet, VecDeque};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::connectivity::{
    bounded_order_separation, fan_within, in_boundary, linkage_within, live_mask, mask_of, max_fan,
    Linkage,
};
use crate::error::{Error, Result};
use crate::graph::{Digraph, VertexId};
use crate::minor::FinderStats;
use crate::subdivision::{verify_subdivision_digraph, PathImage, SubdivisionEmbedding};

/// One branch set of a butterfly model: an in-arborescence, an
/// out-arborescence, or both joined by the bridge arc from the in-root to
/// the out-root. Parts are `(vertex, parent)` lists; the root has no parent.
/// In-part arcs point at the parent, out-part arcs away from it.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ButterflyBranch {
    pub in_part: Vec<(VertexId, Option<VertexId>)>,
    pub out_part: Vec<(VertexId, Option<VertexId>)>,
}

impl ButterflyBranch {
    pub fn singleton(v: VertexId) -> Self {
        ButterflyBranch {
            in_part: vec![(v, None)],
            out_part: vec![],
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.in_part
            .iter()
            .chain(self.out_part.iter())
            .map(|&(v, _)| v)
    }

    pub fn len(&self) -> usize {
        self.in_part.len() + self.out_part.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn in_root(&self) -> Option<VertexId> {
        self.in_part
            .iter()
            .find(|(_, p)| p.is_none())
            .map(|&(v, _)| v)
    }

    pub fn out_root(&self) -> Option<VertexId> {
        self.out_part
            .iter()
            .find(|(_, p)| p.is_none())
            .map(|&(v, _)| v)
    }

    /// Tree arcs in contraction direction, bridge included.
    pub fn arcs(&self) -> Vec<(VertexId, VertexId)> {
        let mut out: Vec<_> = self
            .in_part
            .iter()
            .filter_map(|&(v, p)| p.map(|p| (v, p)))
            .collect();
        out.extend(self.out_part.iter().filter_map(|&(v, p)| p.map(|p| (p, v))));
        if let (Some(a), Some(b)) = (self.in_root(), self.out_root()) {
            out.push((a, b));
        }
        out
    }
}

/// Host arc realizing the pattern arc `pattern`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArcImage {
    pub pattern: (VertexId, VertexId),
    pub host: (VertexId, VertexId),
}

/// Butterfly model, branch sets indexed by pattern id.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ButterflyEmbedding {
    pub branches: Vec<ButterflyBranch>,
    pub arcs: Vec<ArcImage>,
    /// Pattern vertex whose branch set must be a single vertex.
    pub apex: Option<VertexId>,
}

fn check_part(
    d: &Digraph,
    part: &[(VertexId, Option<VertexId>)],
    inward: bool,
    x: VertexId,
) -> std::result::Result<(), String> {
    if part.is_empty() {
        return Ok(());
    }
    let members: HashMap<VertexId, Option<VertexId>> = part.iter().copied().collect();
    let roots = part.iter().filter(|(_, p)| p.is_none()).count();
    if roots != 1 {
        return Err(format!("a part of branch set {x} has {roots} roots"));
    }
    for &(v, p) in part {
        let Some(p) = p else { continue };
        if !members.contains_key(&p) {
            return Err(format!(
                "parent {p} of {v} lies outside its part in branch set {x}"
            ));
        }
        let (a, b) = if inward { (v, p) } else { (p, v) };
        if !d.has_arc(a, b) {
            return Err(format!(
                "tree arc ({a}, {b}) of branch set {x} is not a host arc"
            ));
        }
        let mut w = v;
        for _ in 0..=part.len() {
            match members[&w] {
                Some(q) => w = q,
                None => break,
            }
        }
        if members[&w].is_some() {
            return Err(format!("parent pointers of branch set {x} contain a cycle"));
        }
    }
    Ok(())
}

/// Checks a butterfly model literally. Each pattern arc has exactly one
/// realizing host arc. With in-part `I` (root `rI`) and out-part `O` (root
/// `rO`), realizing arcs enter at `I ∪ {rO}` and leave from `O ∪ {rI}`,
/// where the two roots may not both be used in that exceptional role.
pub fn verify_butterfly(
    d: &Digraph,
    pattern: &Digraph,
    emb: &ButterflyEmbedding,
) -> std::result::Result<(), String> {
    let mut owner = vec![usize::MAX; d.capacity()];
    for (x, br) in emb.branches.iter().enumerate() {
        if !pattern.contains(x) {
            if !br.is_empty() {
                return Err(format!("branch set for non-pattern vertex {x}"));
            }
            continue;
        }
        for v in br.vertices() {
            if !d.contains(v) {
                return Err(format!("{v} is not a host vertex"));
            }
            if owner[v] != usize::MAX {
                return Err(format!(
                    "branch sets of {} and {x} overlap at {v}",
                    owner[v]
                ));
            }
            owner[v] = x;
        }
        check_part(d, &br.in_part, true, x)?;
        check_part(d, &br.out_part, false, x)?;
        if let (Some(a), Some(b)) = (br.in_root(), br.out_root()) {
            if !d.has_arc(a, b) {
                return Err(format!(
                    "bridge arc ({a}, {b}) of branch set {x} is missing"
                ));
            }
        }
    }
    for x in pattern.vertices() {
        if emb.branches.get(x).is_none_or(ButterflyBranch::is_empty) {
            return Err(format!("branch set of {x} is empty"));
        }
    }
    let wanted: HashSet<(VertexId, VertexId)> = pattern.arcs().into_iter().collect();
    let mut seen = HashSet::new();
    let mut entries: Vec<Vec<VertexId>> = vec![Vec::new(); emb.branches.len()];
    let mut exits: Vec<Vec<VertexId>> = vec![Vec::new(); emb.branches.len()];
    for im in &emb.arcs {
        let (p, q) = im.pattern;
        let (a, b) = im.host;
        if !wanted.contains(&(p, q)) {
            return Err(format!("({p}, {q}) is not a pattern arc"));
        }
        if !seen.insert((p, q)) {
            return Err(format!("pattern arc ({p}, {q}) realized twice"));
        }
        if !d.has_arc(a, b) {
            return Err(format!("({a}, {b}) is not a host arc"));
        }
        if owner.get(a) != Some(&p) || owner.get(b) != Some(&q) {
            return Err(format!(
                "host arc ({a}, {b}) does not join the branch sets of {p} and {q}"
            ));
        }
        exits[p].push(a);
        entries[q].push(b);
    }
    if let Some(&(p, q)) = wanted.iter().find(|k| !seen.contains(k)) {
        return Err(format!("pattern arc ({p}, {q}) is not realized"));
    }
    for x in pattern.vertices() {
        let br = &emb.branches[x];
        let in_set: HashSet<VertexId> = br.in_part.iter().map(|&(v, _)| v).collect();
        let out_set: HashSet<VertexId> = br.out_part.iter().map(|&(v, _)| v).collect();
        let (ri, ro) = (br.in_root(), br.out_root());
        let both = ri.is_some() && ro.is_some();
        let mut entry_exception = false;
        for &v in &entries[x] {
            if Some(v) == ro {
                entry_exception |= both;
            } else if !in_set.contains(&v) {
                return Err(format!(
                    "arc enters branch set {x} at {v}, outside its in-part"
                ));
            }
        }
        let mut exit_exception = false;
        for &v in &exits[x] {
            if Some(v) == ri {
                exit_exception |= both;
            } else if !out_set.contains(&v) {
                return Err(format!(
                    "arc leaves branch set {x} at {v}, outside its out-part"
                ));
            }
        }
        if entry_exception && exit_exception {
            return Err(format!(
                "branch set {x} is entered at its out-root and left at its in-root"
            ));
        }
    }
    if let Some(a) = emb.apex {
        if emb.branches.get(a).map(ButterflyBranch::len) != Some(1) {
            return Err("apex branch set is not a singleton".into());
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ButterflyCertificate {
    /// `T⁺`, the apex source having id `T.capacity()`.
    pub pattern: Digraph,
    pub embedding: ButterflyEmbedding,
    pub stats: FinderStats,
}

fn invariant(msg: impl Into<String>) -> Error {
    Error::Invariant(msg.into())
}

fn first_member_hit(d: &Digraph, from: VertexId, members: &[VertexId]) -> Option<VertexId> {
    members
        .iter()
        .copied()
        .filter(|&o| d.has_arc(from, o))
        .min()
}

/// Finds a butterfly model of `T⁺` with a singleton apex-source branch set,
/// for an in-arborescence `T` and a digraph of minimum out-degree at least
/// `|V(T)|`. Every branch set of the model is an in-arborescence.
pub fn find_apex_inarb_butterfly(d: &Digraph, tree: &Digraph) -> Result<ButterflyCertificate> {
    let root = tree
        .in_arborescence_root()
        .ok_or_else(|| Error::Domain("pattern is not an in-arborescence".into()))?;
    let t = tree.vertex_count();
    let min_out = d.min_out_degree();
    if d.vertex_count() == 0 || min_out < t {
        return Err(Error::Hypothesis(format!(
            "minimum out-degree {min_out} is below |V(T)| = {t}"
        )));
    }
    let tree_parent = |x: VertexId| tree.out_neighbors(x).next();
    let q = d
        .sink_component()
        .ok_or_else(|| invariant("no sink component"))?;
    let mut cur = d.induced(&q);
    let n = d.capacity();
    let mut phi: Vec<Option<VertexId>> = vec![None; tree.capacity()];
    let mut members: Vec<Vec<VertexId>> = vec![Vec::new(); n];
    let mut parent: Vec<Option<VertexId>> = vec![None; n];
    let mut in_s = FixedBitSet::with_capacity(n);
    let mut stats = FinderStats::default();
    let v0 = q[0];
    phi[root] = Some(v0);
    members[v0].push(v0);
    in_s.insert(v0);
    let bound = 2 * q.len() + 2;
    loop {
        stats.steps += 1;
        if stats.steps > bound {
            return Err(invariant(format!(
                "progress bound exceeded with S = {:?}",
                in_s.ones().collect::<Vec<_>>()
            )));
        }
        let s_list: Vec<VertexId> = in_s.ones().collect();
        let s = s_list.len();
        if s == t {
            let v = cur
                .vertices()
                .find(|&v| !in_s.contains(v))
                .ok_or_else(|| invariant("no vertex outside S"))?;
            let fan = max_fan(&cur, v, &s_list, false)?;
            if fan.fan.paths.len() != t {
                return Err(invariant(format!(
                    "fan from {v} has only {} paths",
                    fan.fan.paths.len()
                )));
            }
            let apex = tree.capacity();
            let mut arcs = Vec::new();
            for path in &fan.fan.paths {
                let end = *path.last().unwrap();
                let inner = &path[1..path.len() - 1];
                for w in inner.windows(2) {
                    parent[w[0]] = Some(w[1]);
                }
                let tail = *inner.last().unwrap_or(&v);
                let hit = first_member_hit(d, tail, &members[end]).ok_or_else(|| {
                    invariant(format!("no host arc from {tail} into the set of {end}"))
                })?;
                if let Some(&last) = inner.last() {
                    parent[last] = Some(hit);
                }
                members[end].extend_from_slice(inner);
                let x = phi.iter().position(|&p| p == Some(end)).unwrap();
                let head = inner.first().copied().unwrap_or(hit);
                arcs.push(ArcImage {
                    pattern: (apex, x),
                    host: (v, head),
                });
            }
            let mut branches = vec![ButterflyBranch::default(); apex + 1];
            for x in tree.vertices() {
                let r = phi[x].unwrap();
                branches[x].in_part = members[r]
                    .iter()
                    .map(|&m| (m, if m == r { None } else { parent[m] }))
                    .collect();
                branches[x].in_part.sort_unstable();
                if let Some(y) = tree_parent(x) {
                    let ry = phi[y].unwrap();
                    let hit = first_member_hit(d, r, &members[ry]).ok_or_else(|| {
                        invariant(format!("no host arc from {r} into the set of {ry}"))
                    })?;
                    arcs.push(ArcImage {
                        pattern: (x, y),
                        host: (r, hit),
                    });
                }
            }
            branches[apex] = ButterflyBranch::singleton(v);
            arcs.sort_by_key(|a| a.pattern);
            let pattern = tree.with_apex_source();
            let embedding = ButterflyEmbedding {
                branches,
                arcs,
                apex: Some(apex),
            };
            verify_butterfly(d, &pattern, &embedding)
                .map_err(|e| invariant(format!("certificate rejected: {e}")))?;
            return Ok(ButterflyCertificate {
                pattern,
                embedding,
                stats,
            });
        }
        if let Some(sep) = bounded_order_separation(&cur, &s_list, s, None) {
            if sep.order() != s {
                return Err(invariant(format!(
                    "S is not well-in-connected (order {})",
                    sep.order()
                )));
            }
            stats.separations += 1;
            let a_mask = mask_of(n, &sep.a);
            let Linkage::Paths(paths) = linkage_within(&cur, &sep.separator(), &s_list, &a_mask)
            else {
                return Err(invariant("no linkage from the separator to S"));
            };
            let mut on_path = FixedBitSet::with_capacity(n);
            let mut next: HashMap<VertexId, VertexId> = HashMap::new();
            for p in &paths {
                for w in p.windows(2) {
                    next.insert(w[0], w[1]);
                }
                for &v in p {
                    on_path.insert(v);
                }
            }
            for u in on_path.ones() {
                let outs: Vec<_> = cur.out_neighbors(u).collect();
                for w in outs {
                    let keep = (in_s.contains(u) && in_s.contains(w)) || next.get(&u) == Some(&w);
                    if !keep {
                        cur.remove_arc(u, w);
                    }
                }
            }
            for &v in &sep.a {
                if !on_path.contains(v) {
                    cur.remove_vertex(v);
                }
            }
            for p in paths {
                let end = *p.last().unwrap();
                let inner = &p[..p.len() - 1];
                if inner.is_empty() {
                    continue;
                }
                for w in inner.windows(2) {
                    parent[w[0]] = Some(w[1]);
                }
                let last = *inner.last().unwrap();
                let hit = first_member_hit(d, last, &members[end]).ok_or_else(|| {
                    invariant(format!("no host arc from {last} into the set of {end}"))
                })?;
                parent[last] = Some(hit);
                for &x in inner {
                    cur.merge_into(end, x);
                }
                members[end].extend_from_slice(inner);
                stats.contractions += inner.len();
            }
            continue;
        }
        let frontier = tree
            .vertices()
            .find(|&x| phi[x].is_none() && tree_parent(x).is_some_and(|y| phi[y].is_some()))
            .ok_or_else(|| invariant("pattern has no frontier vertex"))?;
        let target = phi[tree_parent(frontier).unwrap()].unwrap();
        let u = cur
            .in_neighbors(target)
            .find(|&u| !in_s.contains(u))
            .ok_or_else(|| invariant(format!("{target} has no in-neighbour outside S")))?;
        let outs: Vec<_> = cur.out_neighbors(u).filter(|&w| w != target).collect();
        for w in outs {
            cur.remove_arc(u, w);
        }
        phi[frontier] = Some(u);
        members[u].push(u);
        in_s.insert(u);
    }
}

/// Unique directed path from `a` to `b` along the tree arcs of a branch set.
fn route(arcs: &[(VertexId, VertexId)], a: VertexId, b: VertexId) -> Option<Vec<VertexId>> {
    let mut prev: HashMap<VertexId, VertexId> = HashMap::new();
    let mut queue = VecDeque::from([a]);
    let mut seen = HashSet::from([a]);
    while let Some(x) = queue.pop_front() {
        if x == b {
            let mut path = vec![b];
            let mut w = b;
            while w != a {
                w = prev[&w];
                path.push(w);
            }
            path.reverse();
            return Some(path);
        }
        for &(p, q) in arcs {
            if p == x && seen.insert(q) {
                prev.insert(q, x);
                queue.push_back(q);
            }
        }
    }
    None
}

fn is_subcubic(pattern: &Digraph, x: VertexId) -> bool {
    let (i, o) = (pattern.in_degree(x), pattern.out_degree(x));
    i + o <= 3 && i <= 2 && o <= 2
}

/// Turns a butterfly model into a subdivision, choosing inside each branch
/// set a centre from which the entry and exit routes are disjoint. Branch
/// sets of non-subcubic pattern vertices must be singletons.
pub fn butterfly_to_subdivision(
    d: &Digraph,
    pattern: &Digraph,
    emb: &ButterflyEmbedding,
) -> Result<SubdivisionEmbedding> {
    verify_butterfly(d, pattern, emb)
        .map_err(|e| Error::Domain(format!("invalid butterfly model: {e}")))?;
    let mut branch = vec![None; pattern.capacity()];
    let mut into: HashMap<(VertexId, VertexId), Vec<VertexId>> = HashMap::new();
    let mut out_of: HashMap<(VertexId, VertexId), Vec<VertexId>> = HashMap::new();
    for x in pattern.vertices() {
        let br = &emb.branches[x];
        if br.len() > 1 && !is_subcubic(pattern, x) {
            return Err(Error::Domain(format!(
                "pattern vertex {x} is not subcubic but its branch set has {} vertices",
                br.len()
            )));
        }
        let tree = br.arcs();
        let ins: Vec<&ArcImage> = emb.arcs.iter().filter(|a| a.pattern.1 == x).collect();
        let outs: Vec<&ArcImage> = emb.arcs.iter().filter(|a| a.pattern.0 == x).collect();
        let mut verts: Vec<VertexId> = br.vertices().collect();
        verts.sort_unstable();
        let mut found = false;
        for &c in &verts {
            let mut used: HashSet<VertexId> = HashSet::new();
            let mut ok = true;
            let mut routes_in = Vec::new();
            let mut routes_out = Vec::new();
            for a in &ins {
                match route(&tree, a.host.1, c) {
                    Some(r) if r[..r.len() - 1].iter().all(|v| used.insert(*v)) => {
                        routes_in.push((a.pattern, r))
                    }
                    _ => ok = false,
                }
            }
            for a in &outs {
                match route(&tree, c, a.host.0) {
                    Some(r) if r[1..].iter().all(|v| used.insert(*v)) => {
                        routes_out.push((a.pattern, r))
                    }
                    _ => ok = false,
                }
            }
            if ok && !used.contains(&c) {
                branch[x] = Some(c);
                into.extend(routes_in);
                out_of.extend(routes_out);
                found = true;
                break;
            }
        }
        if !found {
            return Err(invariant(format!(
                "branch set of {x} has no routing centre"
            )));
        }
    }
    let mut paths = Vec::new();
    for a in &emb.arcs {
        let mut path = out_of[&a.pattern].clone();
        path.extend_from_slice(&into[&a.pattern]);
        paths.push(PathImage {
            from: a.pattern.0,
            to: a.pattern.1,
            path,
        });
    }
    let sub = SubdivisionEmbedding { branch, paths };
    verify_subdivision_digraph(d, pattern, &sub)
        .map_err(|e| invariant(format!("converted subdivision rejected: {e}")))?;
    Ok(sub)
}

/// `C(k₁, k₂) ∖ a` as an in-arborescence rooted at `b = 0`: path one uses
/// ids `1..k₁`, path two ids `k₁..k₁+k₂−1`, each listed from `a`'s side.
pub fn two_block_tree(k1: usize, k2: usize) -> Result<Digraph> {
    if k1 == 0 || k2 == 0 || k1 + k2 < 3 {
        return Err(Error::Domain(format!(
            "C({k1}, {k2}) needs k1, k2 >= 1 and k1 + k2 >= 3"
        )));
    }
    let n = k1 + k2 - 1;
    let mut arcs = Vec::new();
    let mut next_id = 1;
    for k in [k1, k2] {
        let ids: Vec<VertexId> = (next_id..next_id + k - 1).collect();
        next_id += k - 1;
        for w in ids.windows(2) {
            arcs.push((w[0], w[1]));
        }
        if let Some(&last) = ids.last() {
            arcs.push((last, 0));
        }
    }
    Digraph::from_arcs(n, &arcs)
}

/// `T` plus a source `a = T.capacity()` with arcs to every vertex of
/// in-degree at most one.
pub fn apex_star_pattern(tree: &Digraph) -> Digraph {
    let mut p = tree.with_apex_source();
    let a = tree.capacity();
    for v in tree.vertices() {
        if tree.in_degree(v) > 1 {
            p.remove_arc(a, v);
        }
    }
    p
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoBlockCertificate {
    pub pattern: Digraph,
    pub embedding: SubdivisionEmbedding,
    pub butterfly: ButterflyCertificate,
}

/// Subdivision of `C(k₁, k₂)` plus arcs from `a` to every vertex but `b`,
/// in a digraph of minimum out-degree at least `k₁ + k₂ − 1`.
pub fn find_two_block_wheel(d: &Digraph, k1: usize, k2: usize) -> Result<TwoBlockCertificate> {
    let tree = two_block_tree(k1, k2)?;
    let butterfly = find_apex_inarb_butterfly(d, &tree)?;
    let pattern = apex_star_pattern(&tree);
    let mut emb = butterfly.embedding.clone();
    emb.arcs
        .retain(|a| pattern.has_arc(a.pattern.0, a.pattern.1));
    let embedding = butterfly_to_subdivision(d, &pattern, &emb)?;
    Ok(TwoBlockCertificate {
        pattern,
        embedding,
        butterfly,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WheelTag {
    /// `W⃗_t¹`: `C⃗_t⁺` plus an arc from a cycle vertex back to the apex.
    W1,
    /// `W⃗_{t+1}²`: `C⃗_{t+1}⁺` with one spoke reversed.
    W2,
}

/// Directed wheels on cycle `0 → 1 → … → m−1 → 0` with apex `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum WheelKind {
    /// `C⃗_m⁺`: arcs from the apex to every cycle vertex.
    CPlus,
    /// `W⃗_m¹`: `C⃗_m⁺` plus the arc `0 → m`.
    W1,
    /// `W⃗_m²`: the spoke at `0` reversed.
    W2,
}

pub fn directed_wheel(kind: WheelKind, m: usize) -> Result<Digraph> {
    if m < 2 {
        return Err(Error::Domain(format!(
            "directed wheel needs a cycle of length at least 2, got {m}"
        )));
    }
    let mut arcs: Vec<(VertexId, VertexId)> = (0..m).map(|i| (i, (i + 1) % m)).collect();
    let first_spoke = if kind == WheelKind::W2 { 1 } else { 0 };
    arcs.extend((first_spoke..m).map(|i| (m, i)));
    if kind != WheelKind::CPlus {
        arcs.push((0, m));
    }
    Digraph::from_arcs(m + 1, &arcs)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WheelCertificate {
    pub tag: WheelTag,
    pub t: usize,
    /// `W⃗_t¹` or `W⃗_{t+1}²` per the tag.
    pub pattern: Digraph,
    pub embedding: SubdivisionEmbedding,
    pub stats: FinderStats,
}

impl WheelCertificate {
    fn cycle_len(&self) -> usize {
        match self.tag {
            WheelTag::W1 => self.t,
            WheelTag::W2 => self.t + 1,
        }
    }

    fn path(&self, from: VertexId, to: VertexId) -> Vec<VertexId> {
        self.embedding
            .paths
            .iter()
            .find(|p| p.from == from && p.to == to)
            .expect("wheel path")
            .path
            .clone()
    }

    /// Restriction to a wheel on `t` cycle vertices, dropping cycle branch
    /// vertex `skip` (if any) by joining its two cycle paths.
    fn restrict(
        &self,
        kind: WheelKind,
        skip: Option<VertexId>,
    ) -> Result<(Digraph, SubdivisionEmbedding)> {
        let m = self.cycle_len();
        let apex = m;
        let keep: Vec<VertexId> = (0..m).filter(|&i| Some(i) != skip).collect();
        let t = keep.len();
        let pattern = directed_wheel(kind, t)?;
        let mut branch = vec![None; t + 1];
        for (new, &old) in keep.iter().enumerate() {
            branch[new] = self.embedding.branch[old];
        }
        branch[t] = self.embedding.branch[apex];
        let mut paths = Vec::new();
        for (new, &old) in keep.iter().enumerate() {
            let next_old = keep[(new + 1) % t];
            let mut path = self.path(old, (old + 1) % m);
            if (old + 1) % m != next_old {
                let mid = (old + 1) % m;
                path.extend_from_slice(&self.path(mid, (mid + 1) % m)[1..]);
            }
            paths.push(PathImage {
                from: new,
                to: (new + 1) % t,
                path,
            });
        }
        for (u, v) in pattern.arcs() {
            if u == t {
                paths.push(PathImage {
                    from: t,
                    to: v,
                    path: self.path(apex, keep[v]),
                });
            } else if v == t {
                paths.push(PathImage {
                    from: u,
                    to: t,
                    path: self.path(keep[u], apex),
                });
            }
        }
        Ok((pattern, SubdivisionEmbedding { branch, paths }))
    }

    /// Subdivision of `C⃗_t⁺` contained in the certificate.
    pub fn extract_c_plus(&self) -> Result<(Digraph, SubdivisionEmbedding)> {
        match self.tag {
            WheelTag::W1 => self.restrict(WheelKind::CPlus, None),
            WheelTag::W2 => self.restrict(WheelKind::CPlus, Some(0)),
        }
    }

    /// Subdivision of `W⃗_t²` contained in the certificate.
    pub fn extract_w2(&self) -> Result<(Digraph, SubdivisionEmbedding)> {
        match self.tag {
            WheelTag::W1 => self.restrict(WheelKind::W2, None),
            WheelTag::W2 => self.restrict(WheelKind::W2, Some(self.t)),
        }
    }
}

/// Shortest directed cycle, as a vertex list starting at its smallest
/// possible start vertex among cycles of minimum length.
fn shortest_cycle(d: &Digraph) -> Option<Vec<VertexId>> {
    let n = d.capacity();
    let mut best: Option<Vec<VertexId>> = None;
    for s in d.vertices() {
        let mut prev = vec![usize::MAX; n];
        let mut dist = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for y in d.out_neighbors(x) {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    prev[y] = x;
                    queue.push_back(y);
                }
            }
        }
        let close = d
            .in_neighbors(s)
            .filter(|&u| dist[u] != usize::MAX)
            .min_by_key(|&u| (dist[u], u));
        if let Some(u) = close {
            if best.as_ref().is_none_or(|c| dist[u] + 1 < c.len()) {
                let mut cyc = vec![u];
                let mut w = u;
                while w != s {
                    w = prev[w];
                    cyc.push(w);
                }
                cyc.reverse();
                best = Some(cyc);
            }
        }
    }
    best
}

/// Finds a subdivision of `W⃗_t¹` or of `W⃗_{t+1}²` in a digraph of minimum
/// out-degree at least `t ≥ 2`, growing a set `S` around a cycle `C` with
/// disjoint paths from `∂⁻(S)` to `C` until a large enough fan appears.
pub fn find_wheel_subdivision(d: &Digraph, t: usize) -> Result<WheelCertificate> {
    if t < 2 {
        return Err(Error::Domain(format!(
            "wheel size must be at least 2, got {t}"
        )));
    }
    let min_out = d.min_out_degree();
    if d.vertex_count() == 0 || min_out < t {
        return Err(Error::Hypothesis(format!(
            "minimum out-degree {min_out} is below t = {t}"
        )));
    }
    let q = d
        .sink_component()
        .ok_or_else(|| invariant("no sink component"))?;
    let g = d.induced(&q);
    let n = d.capacity();
    let mut cycle = shortest_cycle(&g).ok_or_else(|| invariant("sink component has no cycle"))?;
    let mut in_s = mask_of(n, &cycle);
    let (mut x, mut y) = cycle
        .iter()
        .find_map(|&x| {
            g.out_neighbors(x)
                .find(|&y| !in_s.contains(y))
                .map(|y| (x, y))
        })
        .ok_or_else(|| invariant("no arc leaves the shortest cycle"))?;
    // Path from each vertex of ∂⁻(S) to the cycle.
    let mut to_cycle: HashMap<VertexId, Vec<VertexId>> = HashMap::new();
    for v in in_boundary(&g, &cycle) {
        to_cycle.insert(v, vec![v]);
    }
    let mut stats = FinderStats::default();
    let all = live_mask(&g);
    loop {
        stats.steps += 1;
        if stats.steps > q.len() + 2 {
            return Err(invariant("progress bound exceeded"));
        }
        let s_list: Vec<VertexId> = in_s.ones().collect();
        let boundary = in_boundary(&g, &s_list);
        let k = boundary.len();
        let fan = fan_within(&g, y, &s_list, &all)?;
        if fan.fan.paths.len() < k {
            let sep = fan
                .separation
                .ok_or_else(|| invariant("small fan without a separation"))?;
            stats.separations += 1;
            let a = sep.a;
            if a.len() <= s_list.len() {
                return Err(invariant("separation does not enlarge S"));
            }
            let new_boundary = in_boundary(&g, &a);
            let Linkage::Paths(links) = linkage_within(&g, &new_boundary, &s_list, &mask_of(n, &a))
            else {
                return Err(invariant("no linkage from the new boundary to S"));
            };
            let mut next = HashMap::new();
            for link in links {
                let end = *link.last().unwrap();
                let tail = to_cycle
                    .get(&end)
                    .ok_or_else(|| invariant(format!("{end} has no path to the cycle")))?;
                let mut path = link;
                path.extend_from_slice(&tail[1..]);
                next.insert(path[0], path);
            }
            to_cycle = next;
            in_s = mask_of(n, &a);
            continue;
        }
        let mut allowed = all.clone();
        for &v in &s_list {
            allowed.set(v, false);
        }
        for &v in &boundary {
            allowed.insert(v);
        }
        let fan = fan_within(&g, y, &boundary, &allowed)?;
        if fan.fan.paths.len() != k {
            return Err(invariant(format!(
                "fan from {y} reaches {} of {k} boundary vertices",
                fan.fan.paths.len()
            )));
        }
        let spokes: Vec<Vec<VertexId>> = fan
            .fan
            .paths
            .into_iter()
            .map(|p| {
                let j = (1..p.len())
                    .rev()
                    .find(|&j| g.has_arc(y, p[j]))
                    .unwrap_or(1);
                let mut short = vec![y];
                short.extend_from_slice(&p[j..]);
                short
            })
            .collect();
        let pos_x = cycle.iter().position(|&c| c == x).unwrap();
        let len = cycle.len();
        let rotated: Vec<VertexId> = (0..len).map(|i| cycle[(pos_x + i) % len]).collect();
        let ends: HashMap<VertexId, VertexId> = boundary
            .iter()
            .map(|&w| (*to_cycle[&w].last().unwrap(), w))
            .collect();
        if k >= t {
            let full: Vec<Vec<VertexId>> = spokes
                .iter()
                .map(|q| {
                    let mut p = q.clone();
                    p.extend_from_slice(&to_cycle[q.last().unwrap()][1..]);
                    p
                })
                .collect();
            return assemble_wheel(d, t, &rotated, y, &full, stats);
        }
        let on_spokes: HashSet<VertexId> = spokes.iter().flatten().copied().collect();
        let y2 = g
            .out_neighbors(y)
            .find(|&w| !in_s.contains(w) && !on_spokes.contains(&w))
            .ok_or_else(|| invariant(format!("{y} has no out-neighbour off the fan")))?;
        let zi = (1..len)
            .find(|&i| ends.contains_key(&rotated[i]))
            .or_else(|| ends.contains_key(&x).then_some(0))
            .ok_or_else(|| invariant("no boundary path reaches the cycle"))?;
        let z = rotated[zi];
        let w = ends[&z];
        let spoke = spokes
            .iter()
            .find(|q| q.last() == Some(&w))
            .ok_or_else(|| invariant(format!("no fan path ends at {w}")))?;
        let mut new_cycle: Vec<VertexId> = if zi == 0 {
            vec![x]
        } else {
            rotated[zi..].iter().copied().chain([x]).collect()
        };
        new_cycle.extend_from_slice(spoke);
        new_cycle.extend_from_slice(&to_cycle[&w][1..]);
        new_cycle.pop();
        for &v in spoke {
            in_s.insert(v);
            to_cycle.insert(v, vec![v]);
        }
        let s_list: Vec<VertexId> = in_s.ones().collect();
        let keep: HashSet<VertexId> = in_boundary(&g, &s_list).into_iter().collect();
        to_cycle.retain(|v, _| keep.contains(v));
        cycle = new_cycle;
        x = y;
        y = y2;
    }
}

/// Wheel from a cycle (starting at `x`), the arc `x → y`, and disjoint
/// paths from `y` to distinct cycle vertices.
fn assemble_wheel(
    d: &Digraph,
    t: usize,
    cycle: &[VertexId],
    y: VertexId,
    spokes: &[Vec<VertexId>],
    stats: FinderStats,
) -> Result<WheelCertificate> {
    let x = cycle[0];
    let by_end: HashMap<VertexId, &Vec<VertexId>> =
        spokes.iter().map(|p| (*p.last().unwrap(), p)).collect();
    let mut picks: Vec<usize> = (0..cycle.len())
        .filter(|&i| by_end.contains_key(&cycle[i]))
        .collect();
    let tag = if picks.first() == Some(&0) {
        WheelTag::W1
    } else {
        WheelTag::W2
    };
    let m = match tag {
        WheelTag::W1 => {
            picks.truncate(t);
            t
        }
        WheelTag::W2 => {
            picks.truncate(t);
            picks.insert(0, 0);
            t + 1
        }
    };
    if picks.len() != m {
        return Err(invariant(format!(
            "only {} spokes reach the cycle",
            by_end.len()
        )));
    }
    let kind = if tag == WheelTag::W1 {
        WheelKind::W1
    } else {
        WheelKind::W2
    };
    let pattern = directed_wheel(kind, m)?;
    let mut branch = vec![None; m + 1];
    for (i, &p) in picks.iter().enumerate() {
        branch[i] = Some(cycle[p]);
    }
    branch[m] = Some(y);
    let mut paths = Vec::new();
    for i in 0..m {
        let (a, b) = (picks[i], if i + 1 < m { picks[i + 1] } else { cycle.len() });
        let mut path: Vec<VertexId> = cycle[a..b].to_vec();
        path.push(cycle[b % cycle.len()]);
        paths.push(PathImage {
            from: i,
            to: (i + 1) % m,
            path,
        });
    }
    for (u, v) in pattern.arcs() {
        if u == m {
            paths.push(PathImage {
                from: m,
                to: v,
                path: by_end[&cycle[picks[v]]].clone(),
            });
        } else if v == m {
            paths.push(PathImage {
                from: u,
                to: m,
                path: vec![x, y],
            });
        }
    }
    let embedding = SubdivisionEmbedding { branch, paths };
    verify_subdivision_digraph(d, &pattern, &embedding)
        .map_err(|e| invariant(format!("wheel rejected: {e}")))?;
    Ok(WheelCertificate {
        tag,
        t,
        pattern,
        embedding,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{inarborescence, min_outdegree_digraph};
    use crate::graph::Graph;

    fn bi_complete(n: usize) -> Digraph {
        Digraph::biorientation(&Graph::complete(n))
    }

    #[test]
    fn verifier_rejections() {
        // pattern arc 0 -> 1; host path 0 -> 1 -> 2 with branch set {0,1} for 0
        let d = Digraph::from_arcs(3, &[(0, 1), (1, 2)]).unwrap();
        let p = Digraph::from_arcs(2, &[(0, 1)]).unwrap();
        let good = ButterflyEmbedding {
            branches: vec![
                ButterflyBranch {
                    in_part: vec![(0, Some(1)), (1, None)],
                    out_part: vec![],
                },
                ButterflyBranch::singleton(2),
            ],
            arcs: vec![ArcImage {
                pattern: (0, 1),
                host: (1, 2),
            }],
            apex: None,
        };
        assert_eq!(verify_butterfly(&d, &p, &good), Ok(()));
        // leaving an in-arborescence from a non-root vertex
        let d2 = Digraph::from_arcs(3, &[(0, 1), (0, 2)]).unwrap();
        let bad = ButterflyEmbedding {
            branches: good.branches.clone(),
            arcs: vec![ArcImage {
                pattern: (0, 1),
                host: (0, 2),
            }],
            apex: None,
        };
        assert!(verify_butterfly(&d2, &p, &bad)
            .unwrap_err()
            .contains("leaves"));
        // both parts present but the bridge arc is missing
        let d3 = Digraph::from_arcs(3, &[(1, 2)]).unwrap();
        let bridge = ButterflyEmbedding {
            branches: vec![
                ButterflyBranch {
                    in_part: vec![(0, None)],
                    out_part: vec![(1, None)],
                },
                ButterflyBranch::singleton(2),
            ],
            arcs: vec![ArcImage {
                pattern: (0, 1),
                host: (1, 2),
            }],
            apex: None,
        };
        assert!(verify_butterfly(&d3, &p, &bridge)
            .unwrap_err()
            .contains("bridge"));
    }

    #[test]
    fn single_vertex_tree() {
        let d = Digraph::directed_cycle(3);
        let tree = Digraph::new(1);
        let cert = find_apex_inarb_butterfly(&d, &tree).unwrap();
        assert_eq!(cert.embedding.branches[1].len(), 1);
    }

    #[test]
    fn arborescence_examples() {
        let path = Digraph::from_arcs(2, &[(1, 0)]).unwrap();
        let d = bi_complete(3);
        let cert = find_apex_inarb_butterfly(&d, &path).unwrap();
        assert_eq!(verify_butterfly(&d, &cert.pattern, &cert.embedding), Ok(()));
        let star = Digraph::from_arcs(4, &[(1, 0), (2, 0), (3, 0)]).unwrap();
        for seed in 0..20 {
            let d = min_outdegree_digraph(12, 4, seed).unwrap();
            let cert = find_apex_inarb_butterfly(&d, &star).unwrap();
            assert_eq!(verify_butterfly(&d, &cert.pattern, &cert.embedding), Ok(()));
        }
        assert!(matches!(
            find_apex_inarb_butterfly(&bi_complete(3), &star),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn random_arborescences() {
        for seed in 0..60 {
            let t = 2 + (seed as usize % 5);
            let tree = inarborescence(t, seed).unwrap();
            let d = min_outdegree_digraph(t + 3 + seed as usize % 9, t, seed).unwrap();
            let cert = find_apex_inarb_butterfly(&d, &tree).unwrap();
            assert_eq!(verify_butterfly(&d, &cert.pattern, &cert.embedding), Ok(()));
        }
    }

    #[test]
    fn split_branch_set_converts() {
        // pattern: 1 -> 0 <- 2, 0 -> 3; branch set of 0 is the path 4 -> 5
        let p = Digraph::from_arcs(4, &[(1, 0), (2, 0), (0, 3)]).unwrap();
        let d = Digraph::from_arcs(6, &[(1, 4), (2, 4), (4, 5), (5, 3)]).unwrap();
        let mut branches = vec![ButterflyBranch::default(); 4];
        branches[0] = ButterflyBranch {
            in_part: vec![(4, Some(5)), (5, None)],
            out_part: vec![],
        };
        for (v, b) in branches.iter_mut().enumerate().take(4).skip(1) {
            *b = ButterflyBranch::singleton(v);
        }
        let arcs = vec![
            ArcImage {
                pattern: (1, 0),
                host: (1, 4),
            },
            ArcImage {
                pattern: (2, 0),
                host: (2, 4),
            },
            ArcImage {
                pattern: (0, 3),
                host: (5, 3),
            },
        ];
        let emb = ButterflyEmbedding {
            branches,
            arcs,
            apex: None,
        };
        let sub = butterfly_to_subdivision(&d, &p, &emb).unwrap();
        assert_eq!(sub.branch[0], Some(4));
    }

    #[test]
    fn wheels_in_complete_digraphs() {
        for t in 2..6 {
            let d = bi_complete(t + 1);
            let cert = find_wheel_subdivision(&d, t).unwrap();
            assert!(cert.embedding.paths.iter().all(|p| p.path.len() == 2));
            let (p, e) = cert.extract_c_plus().unwrap();
            assert_eq!(verify_subdivision_digraph(&d, &p, &e), Ok(()));
            let (p, e) = cert.extract_w2().unwrap();
            assert_eq!(verify_subdivision_digraph(&d, &p, &e), Ok(()));
        }
        assert!(matches!(
            find_wheel_subdivision(&Digraph::directed_cycle(3), 2),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn wheels_in_random_digraphs() {
        for seed in 0..80 {
            let t = 2 + (seed as usize % 4);
            let d = min_outdegree_digraph(t + 2 + seed as usize % 12, t, seed).unwrap();
            let cert = find_wheel_subdivision(&d, t).unwrap();
            for (p, e) in [cert.extract_c_plus().unwrap(), cert.extract_w2().unwrap()] {
                assert_eq!(
                    verify_subdivision_digraph(&d, &p, &e),
                    Ok(()),
                    "seed {seed}"
                );
            }
        }
    }

    #[test]
    fn two_block_examples() {
        let cert = find_two_block_wheel(&bi_complete(3), 2, 1).unwrap();
        assert_eq!(cert.pattern.vertex_count(), 3);
        for seed in 0..10 {
            let d = min_outdegree_digraph(12, 3, seed).unwrap();
            let cert = find_two_block_wheel(&d, 2, 2).unwrap();
            assert_eq!(
                verify_subdivision_digraph(&d, &cert.pattern, &cert.embedding),
                Ok(())
            );
        }
        assert!(find_two_block_wheel(&bi_complete(3), 1, 1).is_err());
    }
}
