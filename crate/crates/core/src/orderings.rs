//! Recursive and contractible orderings, explicit and implicit.
//!
//! Positions are 0-based: the prefix `ω_[s]` is `omega[..s]` and the vertex
//! added after it is `omega[s]`. A contraction step names the two prefix
//! vertices adjacent to `omega[s]` by id.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::graph::{Graph, VertexId};
use crate::iso::isomorphism;
use crate::outerplanar::{
    gen_family, recognize_maximal_outerplanar, weak_dual_tree, Family, Triangulation,
};

fn is_permutation(h: &Graph, omega: &[VertexId]) -> bool {
    let mut seen = FixedBitSet::with_capacity(h.capacity());
    omega.len() == h.vertex_count() && omega.iter().all(|&v| h.contains(v) && !seen.put(v))
}

/// Neighbours of `omega[s]` among `omega[..s]`, in prefix order.
pub fn back_neighbors(h: &Graph, omega: &[VertexId], s: usize) -> Vec<VertexId> {
    omega[..s]
        .iter()
        .copied()
        .filter(|&w| h.has_edge(omega[s], w))
        .collect()
}

pub fn is_recursive_ordering(h: &Graph, omega: &[VertexId]) -> bool {
    is_permutation(h, omega) && first_recursive_failure(h, omega).is_none()
}

fn first_recursive_failure(h: &Graph, omega: &[VertexId]) -> Option<usize> {
    (1..omega.len()).find(|&s| {
        let back = back_neighbors(h, omega, s);
        back.len() > 2 || (back.len() == 2 && !h.has_edge(back[0], back[1]))
    })
}

/// Every `root`-rooted recursive ordering of `h` (exponential; small hosts only).
pub fn recursive_orderings(h: &Graph, root: &[VertexId]) -> Vec<Vec<VertexId>> {
    let mut out = Vec::new();
    let mut cur: Vec<VertexId> = Vec::new();
    for &r in root {
        if !h.contains(r) || cur.contains(&r) {
            return out;
        }
        cur.push(r);
        if first_recursive_failure(h, &cur).is_some() {
            return out;
        }
    }
    let mut used = FixedBitSet::with_capacity(h.capacity());
    for &r in root {
        used.insert(r);
    }
    fn rec(
        h: &Graph,
        cur: &mut Vec<VertexId>,
        used: &mut FixedBitSet,
        out: &mut Vec<Vec<VertexId>>,
    ) {
        if cur.len() == h.vertex_count() {
            out.push(cur.clone());
            return;
        }
        for v in h.vertices() {
            if used.contains(v) {
                continue;
            }
            let back: Vec<_> = cur.iter().copied().filter(|&w| h.has_edge(v, w)).collect();
            if back.len() > 2 || (back.len() == 2 && !h.has_edge(back[0], back[1])) {
                continue;
            }
            used.insert(v);
            cur.push(v);
            rec(h, cur, used, out);
            cur.pop();
            used.set(v, false);
        }
    }
    rec(h, &mut cur, &mut used, &mut out);
    out
}

/// Result of a contraction step: `ordering` is `ω'` and `image[k]` is the
/// vertex of `H[ω_[s]]/ab` that `ω'_k` maps to, for `k < s−1`. The merged
/// vertex may be named by either `a` or `b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Replacement {
    pub ordering: Vec<VertexId>,
    pub image: Vec<VertexId>,
}

/// An implicit (rooted) contractible ordering.
pub trait OrderingScheme: Send + Sync {
    fn host(&self) -> &Graph;
    fn root(&self) -> &[VertexId];
    fn initial(&self) -> Vec<VertexId>;
    /// The rooted contraction step for `s ≥ 3`; preconditions are checked by
    /// [`scheme_replace`].
    fn replace(
        &self,
        omega: &[VertexId],
        s: usize,
        a: VertexId,
        b: VertexId,
    ) -> Result<Replacement>;
    /// Witness that `ab` is a root-contractible edge: an emitted ordering
    /// whose first `t−1` entries induce `H/ab`.
    fn contraction_witness(&self, a: VertexId, b: VertexId) -> Result<Replacement> {
        let omega = self.initial();
        let last = *omega
            .last()
            .ok_or_else(|| Error::ContractStep("empty host".into()))?;
        if !self.host().has_edge(a, b)
            || (a != last && b != last)
            || omega.len() <= self.root().len()
        {
            return Err(Error::ContractStep(format!(
                "no identity witness for edge {a}{b}"
            )));
        }
        let image = omega[..omega.len() - 1].to_vec();
        Ok(Replacement {
            ordering: omega,
            image,
        })
    }
    fn describe(&self) -> String;
}

/// The contraction query issued by the minor finder: validates the step,
/// answers `s = 2` generically (`K₂/e ≅ K₁`) and delegates the rest.
pub fn scheme_replace(
    scheme: &dyn OrderingScheme,
    omega: &[VertexId],
    s: usize,
    a: VertexId,
    b: VertexId,
) -> Result<Replacement> {
    let h = scheme.host();
    if s >= omega.len() || s < 2 {
        return Err(Error::ContractStep(format!("step s={s} out of range")));
    }
    let mut back = back_neighbors(h, omega, s);
    back.sort_unstable();
    let mut ab = [a, b];
    ab.sort_unstable();
    if back != ab {
        return Err(Error::ContractStep(format!(
            "vertex {} is not adjacent to exactly {a} and {b} among the first {s}",
            omega[s]
        )));
    }
    if s == 2 {
        return Ok(Replacement {
            ordering: omega.to_vec(),
            image: vec![a.min(b)],
        });
    }
    let root = scheme.root();
    if root.len() == 2 && ab.contains(&root[0]) && ab.contains(&root[1]) {
        return Err(Error::ContractStep("contraction of the root edge".into()));
    }
    scheme.replace(omega, s, a, b)
}

/// `H[ω_[s]]` with `ab` contracted (smaller id survives).
pub fn contracted_prefix(
    h: &Graph,
    omega: &[VertexId],
    s: usize,
    a: VertexId,
    b: VertexId,
) -> Result<Graph> {
    h.induced(&omega[..s]).contract_edge(a, b)
}

/// Independent check of a replacement: `ω'` is a rooted recursive ordering
/// and `ω'_k ↦ image[k]` is a root-fixing isomorphism
/// `H[ω'_[s−1]] → H[ω_[s]]/ab`.
pub fn check_replacement(
    h: &Graph,
    root: &[VertexId],
    omega: &[VertexId],
    s: usize,
    a: VertexId,
    b: VertexId,
    rep: &Replacement,
) -> std::result::Result<(), String> {
    if !is_recursive_ordering(h, &rep.ordering) {
        return Err("replacement is not a recursive ordering".into());
    }
    if rep.ordering.len() < root.len() || rep.ordering[..root.len()] != *root {
        return Err("replacement is not rooted".into());
    }
    if rep.image.len() != s - 1 {
        return Err(format!(
            "image has length {}, expected {}",
            rep.image.len(),
            s - 1
        ));
    }
    let k = contracted_prefix(h, omega, s, a, b).map_err(|e| e.to_string())?;
    let survivor = a.min(b);
    let class = |v: VertexId| if v == a || v == b { survivor } else { v };
    let img: Vec<VertexId> = rep.image.iter().map(|&v| class(v)).collect();
    let mut seen = HashSet::new();
    if !img.iter().all(|&v| k.contains(v) && seen.insert(v)) || seen.len() != k.vertex_count() {
        return Err("image is not a bijection onto the contracted prefix".into());
    }
    let pre = &rep.ordering[..s - 1];
    for x in 0..s - 1 {
        for y in x + 1..s - 1 {
            if h.has_edge(pre[x], pre[y]) != k.has_edge(img[x], img[y]) {
                return Err(format!("edge mismatch at {}{}", pre[x], pre[y]));
            }
        }
    }
    for (idx, &r) in root.iter().enumerate() {
        if idx < s - 1 && img[idx] != class(r) {
            return Err(format!("root {r} not fixed"));
        }
    }
    Ok(())
}

/// Reason an explicit set fails to be a contractible ordering.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub ordering: Vec<VertexId>,
    pub s: usize,
    pub i: Option<VertexId>,
    pub j: Option<VertexId>,
    pub reason: String,
}

/// Brute-force check of the (rooted) contractible-ordering definition.
/// `Ok(None)` means the set qualifies.
pub fn verify_contractible(
    h: &Graph,
    set: &[Vec<VertexId>],
    root: Option<&[VertexId]>,
) -> Result<Option<Violation>> {
    for omega in set {
        if !is_permutation(h, omega) {
            return domain(format!("{omega:?} is not an ordering of the host"));
        }
    }
    let fail = |omega: &Vec<VertexId>, s, i, j, reason: &str| {
        Ok(Some(Violation {
            ordering: omega.clone(),
            s,
            i,
            j,
            reason: reason.into(),
        }))
    };
    if set.is_empty() {
        return Ok(Some(Violation {
            ordering: vec![],
            s: 0,
            i: None,
            j: None,
            reason: "empty set".into(),
        }));
    }
    for omega in set {
        if let Some(s) = first_recursive_failure(h, omega) {
            return fail(omega, s, None, None, "not a recursive ordering");
        }
        if let Some(r) = root {
            if omega.len() < r.len() || omega[..r.len()] != *r {
                return fail(omega, 0, None, None, "not rooted");
            }
        }
    }
    // cache by prefix vertex set
    let mut answers: HashMap<(Vec<VertexId>, VertexId, VertexId), bool> = HashMap::new();
    for omega in set {
        for s in 2..omega.len() {
            let back = back_neighbors(h, omega, s);
            if back.len() != 2 {
                continue;
            }
            let (a, b) = (back[0].min(back[1]), back[0].max(back[1]));
            if let Some(r) = root {
                if s < 3 {
                    continue;
                }
                if r.len() == back.len() && r.iter().all(|x| back.contains(x)) {
                    return fail(omega, s, Some(a), Some(b), "contracts the root");
                }
            }
            let mut key_set = omega[..s].to_vec();
            key_set.sort_unstable();
            let key = (key_set, a, b);
            let ok = match answers.get(&key) {
                Some(&ok) => ok,
                None => {
                    let k = contracted_prefix(h, omega, s, a, b)?;
                    let survivor = a;
                    let ok = has_matching_prefix(h, set, &k, s - 1, root, |v| {
                        if v == b {
                            survivor
                        } else {
                            v
                        }
                    });
                    answers.insert(key, ok);
                    ok
                }
            };
            if !ok {
                return fail(
                    omega,
                    s,
                    Some(a),
                    Some(b),
                    "no member realizes the contraction",
                );
            }
        }
    }
    Ok(None)
}

fn has_matching_prefix(
    h: &Graph,
    set: &[Vec<VertexId>],
    k: &Graph,
    len: usize,
    root: Option<&[VertexId]>,
    class: impl Fn(VertexId) -> VertexId,
) -> bool {
    let mut tried: HashSet<Vec<VertexId>> = HashSet::new();
    set.iter().any(|w| {
        let prefix = &w[..len];
        let r = root.unwrap_or(&[]);
        let mut key = prefix.to_vec();
        if r.is_empty() {
            key.sort_unstable();
        } else {
            key[r.len().min(len)..].sort_unstable();
        }
        if !tried.insert(key) {
            return false;
        }
        let sub = h.induced(prefix);
        let fixed: Vec<_> = r.iter().take(len).map(|&x| (x, class(x))).collect();
        isomorphism(&sub, k, &fixed).is_some()
    })
}

/// Closure of the scheme's initial ordering under [`scheme_replace`], up to
/// `limit` members.
pub fn materialize(scheme: &dyn OrderingScheme, limit: usize) -> Result<Vec<Vec<VertexId>>> {
    let h = scheme.host();
    let start = scheme.initial();
    let mut seen: HashSet<Vec<VertexId>> = HashSet::from([start.clone()]);
    let mut out = vec![start.clone()];
    let mut queue = VecDeque::from([start]);
    while let Some(omega) = queue.pop_front() {
        for s in 2..omega.len() {
            let back = back_neighbors(h, &omega, s);
            if back.len() != 2 {
                continue;
            }
            let rep = scheme_replace(scheme, &omega, s, back[0], back[1])?;
            if seen.insert(rep.ordering.clone()) {
                if out.len() >= limit {
                    return Err(Error::Domain(format!("closure exceeds {limit} orderings")));
                }
                out.push(rep.ordering.clone());
                queue.push_back(rep.ordering);
            }
        }
    }
    Ok(out)
}

/// Id-tie-broken BFS order of the component of `start`.
pub fn bfs_order(g: &Graph, start: VertexId) -> Vec<VertexId> {
    let mut seen = FixedBitSet::with_capacity(g.capacity());
    seen.insert(start);
    let mut order = vec![start];
    let mut k = 0;
    while k < order.len() {
        let u = order[k];
        k += 1;
        for w in g.neighbors(u) {
            if !seen.put(w) {
                order.push(w);
            }
        }
    }
    order
}

/// Extends `start` greedily, each time by the smallest vertex whose earlier
/// neighbours are exactly two adjacent vertices, exhausting `first` before
/// touching any other vertex. Intended for maximal outerplanar hosts.
fn grow_order(h: &Graph, start: &[VertexId], first: Option<&FixedBitSet>) -> Option<Vec<VertexId>> {
    let mut placed = FixedBitSet::with_capacity(h.capacity());
    for &v in start {
        placed.insert(v);
    }
    let mut order = start.to_vec();
    let attachable = |v: VertexId, placed: &FixedBitSet| {
        let back: Vec<_> = h.neighbors(v).filter(|&w| placed.contains(w)).collect();
        back.len() == 2 && h.has_edge(back[0], back[1])
    };
    while order.len() < h.vertex_count() {
        let pick = |restrict: bool, placed: &FixedBitSet| {
            h.vertices().find(|&v| {
                !placed.contains(v)
                    && (!restrict || first.is_some_and(|f| f.contains(v)))
                    && attachable(v, placed)
            })
        };
        let pending = first.is_some_and(|f| f.ones().any(|v| !placed.contains(v)));
        let v = if pending {
            pick(true, &placed)?
        } else {
            pick(false, &placed)?
        };
        placed.insert(v);
        order.push(v);
    }
    Some(order)
}

/// `{ω}` for a BFS ordering `ω` of a tree: a `(v)`-rooted contractible
/// ordering in which no step has two earlier neighbours.
#[derive(Debug, Clone)]
pub struct TreeScheme {
    host: Graph,
    root: Vec<VertexId>,
    order: Vec<VertexId>,
}

pub fn scheme_for_tree(t: &Graph, v: VertexId) -> Result<TreeScheme> {
    if !t.is_tree() {
        return Err(Error::Hypothesis("host is not a tree".into()));
    }
    if !t.contains(v) {
        return domain(format!("root {v} is not a vertex"));
    }
    Ok(TreeScheme {
        host: t.clone(),
        root: vec![v],
        order: bfs_order(t, v),
    })
}

impl TreeScheme {
    pub fn unrooted(mut self) -> Self {
        self.root.clear();
        self
    }
}

impl OrderingScheme for TreeScheme {
    fn host(&self) -> &Graph {
        &self.host
    }
    fn root(&self) -> &[VertexId] {
        &self.root
    }
    fn initial(&self) -> Vec<VertexId> {
        self.order.clone()
    }
    fn replace(&self, _: &[VertexId], s: usize, _: VertexId, _: VertexId) -> Result<Replacement> {
        Err(Error::ContractStep(format!(
            "tree orderings never add a vertex with two earlier neighbours (s={s})"
        )))
    }
    fn describe(&self) -> String {
        format!("tree from {}", self.order[0])
    }
}

/// Maximal outerplanar host whose weak dual is a path, ordered face by face
/// from the end containing the root edge. Every contraction step merges the
/// newest vertex into an older one, so `{ω}` answers every step with itself.
#[derive(Debug, Clone)]
pub struct SnakeScheme {
    host: Graph,
    root: Vec<VertexId>,
    order: Vec<VertexId>,
}

pub fn scheme_for_snake(h: &Graph, u: VertexId, v: VertexId) -> Result<SnakeScheme> {
    let ts = recognize_maximal_outerplanar(h)
        .ok_or_else(|| Error::Hypothesis("host is not maximal outerplanar".into()))?;
    if h.vertex_count() < 3 || !weak_dual_tree(&ts).is_path() {
        return Err(Error::Hypothesis("weak dual tree is not a path".into()));
    }
    if !h.has_edge(u, v) || (h.degree(u) != 2 && h.degree(v) != 2) {
        return Err(Error::Hypothesis(format!(
            "{u}{v} is not an edge with an end of degree 2"
        )));
    }
    let w = h
        .neighbors(u)
        .find(|&w| h.has_edge(v, w))
        .ok_or_else(|| Error::Invariant("root edge lies on no face".into()))?;
    let order = grow_order(h, &[u, v, w], None)
        .ok_or_else(|| Error::Invariant("face path ordering got stuck".into()))?;
    Ok(SnakeScheme {
        host: h.clone(),
        root: vec![u, v],
        order,
    })
}

impl SnakeScheme {
    pub fn unrooted(mut self) -> Self {
        self.root.clear();
        self
    }

    /// The same ordering viewed as `(u)`-rooted.
    pub fn with_single_root(mut self) -> Self {
        self.root.truncate(1);
        self
    }

    /// The root-contractible edge at the far degree-2 vertex `z`.
    pub fn contractible_edge(&self) -> (VertexId, VertexId) {
        let z = *self.order.last().unwrap();
        let nb = self.host.neighbors(z).next().unwrap();
        (z.min(nb), z.max(nb))
    }
}

/// The designated `(u,v)`-contractible edge: incident to a degree-2 vertex
/// `z ∉ {u, v}`.
pub fn contractible_edge_for_snake(
    h: &Graph,
    u: VertexId,
    v: VertexId,
) -> Result<(VertexId, VertexId)> {
    Ok(scheme_for_snake(h, u, v)?.contractible_edge())
}

impl OrderingScheme for SnakeScheme {
    fn host(&self) -> &Graph {
        &self.host
    }
    fn root(&self) -> &[VertexId] {
        &self.root
    }
    fn initial(&self) -> Vec<VertexId> {
        self.order.clone()
    }
    fn replace(
        &self,
        omega: &[VertexId],
        s: usize,
        a: VertexId,
        b: VertexId,
    ) -> Result<Replacement> {
        if omega != self.order.as_slice() {
            return Err(Error::ContractStep(
                "ordering was not emitted by this scheme".into(),
            ));
        }
        let newest = omega[s - 1];
        if a != newest && b != newest {
            return Err(Error::Invariant(format!(
                "snake step at s={s} does not involve {newest}"
            )));
        }
        Ok(Replacement {
            ordering: omega.to_vec(),
            image: omega[..s - 1].to_vec(),
        })
    }
    fn describe(&self) -> String {
        format!("path-dual triangulation rooted at {:?}", self.root)
    }
}

/// Universal (`(x)`-rooted) or binary-dual (`(x,y)`-rooted) outerplanar
/// scheme: all recursive orderings starting with the root face `(x,y,z)`.
/// Contraction steps embed the contracted prefix back into the host, root
/// face onto root face, by walking the weak dual tree.
#[derive(Debug, Clone)]
pub struct OuterplanarScheme {
    host: Graph,
    tri: Triangulation,
    root: Vec<VertexId>,
    face: [VertexId; 3],
    height: usize,
    order: Vec<VertexId>,
}

pub fn scheme_for_universal(h: usize) -> Result<(Graph, OuterplanarScheme)> {
    let g = gen_family(Family::Universal(h))?;
    let tri = recognize_maximal_outerplanar(&g).expect("generated family");
    let shape = weak_dual_tree(&tri);
    let f = tri.triangles[shape.centers[0]];
    let face = [f[0], f[1], f[2]];
    let order = grow_order(&g, &face, None).expect("maximal outerplanar");
    Ok((
        g.clone(),
        OuterplanarScheme {
            host: g,
            tri,
            root: vec![face[0]],
            face,
            height: h,
            order,
        },
    ))
}

pub fn scheme_for_binary_dual(h: usize) -> Result<(Graph, OuterplanarScheme)> {
    let g = gen_family(Family::Binary(h))?;
    let tri = recognize_maximal_outerplanar(&g).expect("generated family");
    let (_, r) = weak_dual_tree(&tri).binary.expect("binary dual");
    let f = tri.triangles[r];
    let (x, y) = [(f[0], f[1]), (f[0], f[2]), (f[1], f[2])]
        .into_iter()
        .find(|&(p, q)| tri.is_boundary_edge(p, q))
        .expect("root face has a boundary edge");
    let z = f.into_iter().find(|&w| w != x && w != y).unwrap();
    let face = [x, y, z];
    let order = grow_order(&g, &face, None).expect("maximal outerplanar");
    Ok((
        g.clone(),
        OuterplanarScheme {
            host: g,
            tri,
            root: vec![x, y],
            face,
            height: h,
            order,
        },
    ))
}

fn edge_faces(t: &Triangulation) -> HashMap<(VertexId, VertexId), Vec<usize>> {
    let mut m: HashMap<(VertexId, VertexId), Vec<usize>> = HashMap::new();
    for (f, tr) in t.triangles.iter().enumerate() {
        for (p, q) in [(tr[0], tr[1]), (tr[0], tr[2]), (tr[1], tr[2])] {
            m.entry((p, q)).or_default().push(f);
        }
    }
    m
}

fn key(p: VertexId, q: VertexId) -> (VertexId, VertexId) {
    (p.min(q), p.max(q))
}

impl OuterplanarScheme {
    pub fn root_face(&self) -> [VertexId; 3] {
        self.face
    }

    /// Embedding of `k` into the host sending `kface` to the root face with
    /// the given vertex assignment.
    fn embed(
        &self,
        k: &Triangulation,
        kface: usize,
        assign: &[(VertexId, VertexId); 3],
    ) -> Option<HashMap<VertexId, VertexId>> {
        let hfaces = edge_faces(&self.tri);
        let kfaces = edge_faces(k);
        let hroot = (0..self.tri.triangles.len())
            .find(|&f| self.face.iter().all(|v| self.tri.triangles[f].contains(v)))?;
        let mut phi: HashMap<VertexId, VertexId> = assign.iter().copied().collect();
        let mut used: HashSet<VertexId> = assign.iter().map(|&(_, w)| w).collect();
        let mut visited = vec![false; k.triangles.len()];
        visited[kface] = true;
        let mut queue = VecDeque::from([(kface, hroot)]);
        while let Some((f, g)) = queue.pop_front() {
            let tr = k.triangles[f];
            for (p, q) in [(tr[0], tr[1]), (tr[0], tr[2]), (tr[1], tr[2])] {
                for &f2 in &kfaces[&(p, q)] {
                    if visited[f2] {
                        continue;
                    }
                    let v = k.triangles[f2].into_iter().find(|&w| w != p && w != q)?;
                    let (hp, hq) = (phi[&p], phi[&q]);
                    let g2 = *hfaces.get(&key(hp, hq))?.iter().find(|&&x| x != g)?;
                    let w = self.tri.triangles[g2]
                        .into_iter()
                        .find(|&w| w != hp && w != hq)?;
                    if phi.contains_key(&v) || !used.insert(w) {
                        return None;
                    }
                    phi.insert(v, w);
                    visited[f2] = true;
                    queue.push_back((f2, g2));
                }
            }
        }
        Some(phi)
    }
}

impl OrderingScheme for OuterplanarScheme {
    fn host(&self) -> &Graph {
        &self.host
    }
    fn root(&self) -> &[VertexId] {
        &self.root
    }
    fn initial(&self) -> Vec<VertexId> {
        self.order.clone()
    }
    fn replace(
        &self,
        omega: &[VertexId],
        s: usize,
        a: VertexId,
        b: VertexId,
    ) -> Result<Replacement> {
        if omega[..3] != self.face {
            return Err(Error::ContractStep(
                "ordering does not start with the root face".into(),
            ));
        }
        let survivor = a.min(b);
        let class = |v: VertexId| if v == a || v == b { survivor } else { v };
        let [x, y, z] = self.face;
        let k = contracted_prefix(&self.host, omega, s, a, b)?;
        let ordering = |image_set: &FixedBitSet| {
            grow_order(&self.host, &self.face, Some(image_set))
                .ok_or_else(|| Error::Invariant("image does not grow from the root face".into()))
        };
        if k.vertex_count() == 2 {
            let cx = class(x);
            let other = k.vertices().find(|&v| v != cx).unwrap();
            let ordering = grow_order(&self.host, &self.face, None).expect("maximal outerplanar");
            return Ok(Replacement {
                ordering,
                image: vec![cx, other],
            });
        }
        let kt = recognize_maximal_outerplanar(&k).ok_or_else(|| {
            Error::Invariant("contracted prefix is not maximal outerplanar".into())
        })?;
        let shape = weak_dual_tree(&kt);
        let mut candidates: Vec<usize> = (0..kt.triangles.len())
            .filter(|&f| shape.eccentricity[f] <= self.height)
            .filter(|&f| {
                let tr = kt.triangles[f];
                if self.root.len() == 1 {
                    tr.contains(&class(x))
                } else {
                    tr.contains(&class(x))
                        && tr.contains(&class(y))
                        && kt.is_boundary_edge(class(x), class(y))
                }
            })
            .collect();
        candidates.sort_by_key(|&f| (shape.eccentricity[f], f));
        for f in candidates {
            let tr = kt.triangles[f];
            let assigns: Vec<[(VertexId, VertexId); 3]> = if self.root.len() == 1 {
                let rest: Vec<_> = tr.into_iter().filter(|&v| v != class(x)).collect();
                vec![
                    [(class(x), x), (rest[0], y), (rest[1], z)],
                    [(class(x), x), (rest[1], y), (rest[0], z)],
                ]
            } else {
                let third = tr
                    .into_iter()
                    .find(|&v| v != class(x) && v != class(y))
                    .unwrap();
                vec![[(class(x), x), (class(y), y), (third, z)]]
            };
            for assign in assigns {
                let Some(phi) = self.embed(&kt, f, &assign) else {
                    continue;
                };
                let mut image_set = FixedBitSet::with_capacity(self.host.capacity());
                let mut inverse = HashMap::new();
                for (&kv, &hv) in &phi {
                    image_set.insert(hv);
                    inverse.insert(hv, kv);
                }
                let ordering = ordering(&image_set)?;
                let image = ordering[..s - 1].iter().map(|v| inverse[v]).collect();
                return Ok(Replacement { ordering, image });
            }
        }
        Err(Error::Invariant(format!(
            "no root-preserving embedding of the contracted prefix (s={s})"
        )))
    }
    fn describe(&self) -> String {
        if self.root.len() == 1 {
            format!("universal outerplanar, height {}", self.height)
        } else {
            format!("binary-dual outerplanar, height {}", self.height)
        }
    }
}

/// Gluing cases for combining two rooted schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GlueCase {
    /// Unrooted attachment on a disjoint vertex set.
    Disjoint,
    /// `(ρ'₁)`-rooted attachment sharing exactly `ρ'₁`.
    Vertex,
    /// `(ρ'₁,ρ'₂)`-rooted attachment sharing exactly a root-contractible edge.
    Edge,
}

/// `ψ = ω ++ ω'[m'..]` over `H ∪ H'`.
pub struct GluedScheme {
    host: Graph,
    base: Box<dyn OrderingScheme>,
    attach: Box<dyn OrderingScheme>,
    t: usize,
    m2: usize,
}

fn union(g: &Graph, h: &Graph) -> Graph {
    let cap = g.capacity().max(h.capacity());
    let mut u = Graph::new(cap);
    for v in 0..cap {
        if !g.contains(v) && !h.contains(v) {
            u.remove_vertex(v);
        }
    }
    for (p, q) in g.edges().into_iter().chain(h.edges()) {
        u.insert_edge(p, q);
    }
    u
}

pub fn glue_schemes(
    base: Box<dyn OrderingScheme>,
    attach: Box<dyn OrderingScheme>,
    case: GlueCase,
) -> Result<GluedScheme> {
    let shared: Vec<VertexId> = base
        .host()
        .vertices()
        .filter(|&v| attach.host().contains(v))
        .collect();
    let r2 = attach.root().to_vec();
    let mut r2_sorted = r2.clone();
    r2_sorted.sort_unstable();
    let ok = match case {
        GlueCase::Disjoint => r2.is_empty() && shared.is_empty(),
        GlueCase::Vertex => r2.len() == 1 && shared == r2,
        GlueCase::Edge => {
            let mut r1 = base.root().to_vec();
            r1.sort_unstable();
            r2.len() == 2
                && shared == r2_sorted
                && r1 != r2_sorted
                && base.contraction_witness(r2[0], r2[1]).is_ok()
        }
    };
    if !ok {
        return Err(Error::Hypothesis(format!(
            "gluing conditions for {case:?} not met"
        )));
    }
    let host = union(base.host(), attach.host());
    let t = base.host().vertex_count();
    Ok(GluedScheme {
        host,
        base,
        attach,
        t,
        m2: r2.len(),
    })
}

impl OrderingScheme for GluedScheme {
    fn host(&self) -> &Graph {
        &self.host
    }
    fn root(&self) -> &[VertexId] {
        self.base.root()
    }
    fn initial(&self) -> Vec<VertexId> {
        let mut psi = self.base.initial();
        psi.extend_from_slice(&self.attach.initial()[self.m2..]);
        psi
    }
    fn replace(&self, psi: &[VertexId], s: usize, a: VertexId, b: VertexId) -> Result<Replacement> {
        let t = self.t;
        if s < t {
            let rep = self.base.replace(&psi[..t], s, a, b)?;
            let mut ordering = rep.ordering;
            ordering.extend_from_slice(&psi[t..]);
            return Ok(Replacement {
                ordering,
                image: rep.image,
            });
        }
        let in_base = |v: VertexId| self.base.host().contains(v);
        if in_base(a) && in_base(b) {
            let rep = self.base.contraction_witness(a, b)?;
            let mut ordering = rep.ordering;
            ordering.extend_from_slice(&psi[t..]);
            return Ok(Replacement {
                ordering,
                image: rep.image,
            });
        }
        let s2 = s - t + self.m2;
        if s2 == 2 {
            return Ok(Replacement {
                ordering: psi.to_vec(),
                image: psi[..s - 1].to_vec(),
            });
        }
        let mut omega2 = self.attach.root().to_vec();
        omega2.extend_from_slice(&psi[t..]);
        let rep = self.attach.replace(&omega2, s2, a, b)?;
        let mut ordering = psi[..t].to_vec();
        ordering.extend_from_slice(&rep.ordering[self.m2..]);
        let mut image = psi[..t].to_vec();
        image.extend_from_slice(&rep.image[self.m2..]);
        Ok(Replacement { ordering, image })
    }
    fn describe(&self) -> String {
        format!("({}) + ({})", self.base.describe(), self.attach.describe())
    }
}

/// Blocks of `g` as edge lists (biconnected components, isolated vertices
/// excluded).
pub fn blocks(g: &Graph) -> Vec<Vec<(VertexId, VertexId)>> {
    let n = g.capacity();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0; n];
    let mut time = 0;
    let mut out = Vec::new();
    let mut edge_stack: Vec<(VertexId, VertexId)> = Vec::new();
    for s in g.vertices() {
        if disc[s] != usize::MAX {
            continue;
        }
        disc[s] = time;
        low[s] = time;
        time += 1;
        // (vertex, parent, neighbour list, cursor)
        let mut stack: Vec<(VertexId, usize, Vec<VertexId>, usize)> =
            vec![(s, usize::MAX, g.neighbors(s).collect(), 0)];
        while let Some(top) = stack.last_mut() {
            let (u, parent) = (top.0, top.1);
            if top.3 < top.2.len() {
                let w = top.2[top.3];
                top.3 += 1;
                if disc[w] == usize::MAX {
                    edge_stack.push((u, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, u, g.neighbors(w).collect(), 0));
                } else if w != parent && disc[w] < disc[u] {
                    edge_stack.push((u, w));
                    low[u] = low[u].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(p) = stack.last() {
                    let p = p.0;
                    low[p] = low[p].min(low[u]);
                    if low[u] >= disc[p] {
                        let mut block = Vec::new();
                        while let Some(e) = edge_stack.pop() {
                            block.push(key(e.0, e.1));
                            if e == (p, u) {
                                break;
                            }
                        }
                        block.sort_unstable();
                        out.push(block);
                    }
                }
            }
        }
    }
    out
}

/// Supergraph `H ⊇ G` (spanning) of a cactus together with an `(r)`-rooted
/// scheme: each cycle block becomes a fan centred at the smallest neighbour
/// of its attachment vertex, and blocks are glued on in BFS order from `r`.
pub fn scheme_for_cactus(g: &Graph, r: VertexId) -> Result<(Graph, Box<dyn OrderingScheme>)> {
    if !g.contains(r) || !g.is_connected() {
        return Err(Error::Hypothesis(
            "cactus must be connected and contain the root".into(),
        ));
    }
    let n = g.capacity();
    let mut block_vertices: Vec<Vec<VertexId>> = Vec::new();
    let bl = blocks(g);
    for b in &bl {
        let vs: BTreeSet<VertexId> = b.iter().flat_map(|&(p, q)| [p, q]).collect();
        let is_cycle = b.len() == vs.len()
            && vs
                .iter()
                .all(|&v| b.iter().filter(|e| e.0 == v || e.1 == v).count() == 2);
        if b.len() != 1 && !is_cycle {
            return Err(Error::Hypothesis(
                "a block is neither an edge nor a cycle".into(),
            ));
        }
        block_vertices.push(vs.into_iter().collect());
    }
    let single = g.induced(&[r]);
    let mut scheme: Box<dyn OrderingScheme> = Box::new(scheme_for_tree(&single, r)?);
    let mut done = vec![false; bl.len()];
    let mut queue = VecDeque::from([r]);
    while let Some(u) = queue.pop_front() {
        let mut here: Vec<usize> = (0..bl.len())
            .filter(|&i| !done[i] && block_vertices[i].contains(&u))
            .collect();
        here.sort_by_key(|&i| block_vertices[i].clone());
        for i in here {
            done[i] = true;
            let vs = &block_vertices[i];
            let mut bh = Graph::new(n).induced(vs);
            for &(p, q) in &bl[i] {
                bh.insert_edge(p, q);
            }
            let piece: Box<dyn OrderingScheme> = if bl[i].len() == 1 {
                Box::new(scheme_for_tree(&bh, u)?)
            } else {
                let v = bh.neighbors(u).next().unwrap();
                for &w in vs {
                    if w != v {
                        bh.insert_edge(v, w);
                    }
                }
                Box::new(scheme_for_snake(&bh, u, v)?.with_single_root())
            };
            scheme = Box::new(glue_schemes(scheme, piece, GlueCase::Vertex)?);
            for &w in vs {
                if w != u {
                    queue.push_back(w);
                }
            }
        }
    }
    Ok((scheme.host().clone(), scheme))
}

/// A finite, explicitly listed set answered by brute-force isomorphism.
#[derive(Debug, Clone)]
pub struct ExplicitScheme {
    host: Graph,
    root: Vec<VertexId>,
    members: Vec<Vec<VertexId>>,
}

impl ExplicitScheme {
    pub fn new(host: Graph, root: Vec<VertexId>, members: Vec<Vec<VertexId>>) -> Result<Self> {
        if members.is_empty() {
            return domain("an ordering set must be nonempty");
        }
        for m in &members {
            if !is_recursive_ordering(&host, m)
                || m.len() < root.len()
                || m[..root.len()] != root[..]
            {
                return domain(format!("{m:?} is not a rooted recursive ordering"));
            }
        }
        Ok(ExplicitScheme {
            host,
            root,
            members,
        })
    }

    pub fn members(&self) -> &[Vec<VertexId>] {
        &self.members
    }
}

impl OrderingScheme for ExplicitScheme {
    fn host(&self) -> &Graph {
        &self.host
    }
    fn root(&self) -> &[VertexId] {
        &self.root
    }
    fn initial(&self) -> Vec<VertexId> {
        self.members[0].clone()
    }
    fn replace(
        &self,
        omega: &[VertexId],
        s: usize,
        a: VertexId,
        b: VertexId,
    ) -> Result<Replacement> {
        let k = contracted_prefix(&self.host, omega, s, a, b)?;
        let survivor = a.min(b);
        let class = |v: VertexId| if v == a || v == b { survivor } else { v };
        for m in &self.members {
            let prefix = &m[..s - 1];
            let fixed: Vec<_> = self
                .root
                .iter()
                .take(s - 1)
                .map(|&r| (r, class(r)))
                .collect();
            if let Some(map) = isomorphism(&self.host.induced(prefix), &k, &fixed) {
                let lookup: HashMap<_, _> = map.into_iter().collect();
                let image = prefix.iter().map(|v| lookup[v]).collect();
                return Ok(Replacement {
                    ordering: m.clone(),
                    image,
                });
            }
        }
        Err(Error::ContractStep(format!(
            "no member realizes the contraction at s={s}"
        )))
    }
    fn describe(&self) -> String {
        format!("explicit set of {} orderings", self.members.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap()
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = vec![];
        for p in permutations(n - 1) {
            for k in 0..n {
                let mut q = p.clone();
                q.insert(k, n - 1);
                out.push(q);
            }
        }
        out
    }

    /// Materializes, checks every step with the independent checker and
    /// runs both the rooted and unrooted definition checks.
    fn assert_scheme_sound(scheme: &dyn OrderingScheme) {
        let h = scheme.host();
        let set = materialize(scheme, 5000).unwrap();
        for omega in &set {
            for s in 2..omega.len() {
                let back = back_neighbors(h, omega, s);
                if back.len() == 2 {
                    let rep = scheme_replace(scheme, omega, s, back[0], back[1]).unwrap();
                    let root = if s >= 3 { scheme.root() } else { &[] };
                    check_replacement(h, root, omega, s, back[0], back[1], &rep).unwrap_or_else(
                        |e| panic!("{}: {e} at {omega:?} s={s}", scheme.describe()),
                    );
                }
            }
        }
        assert_eq!(
            verify_contractible(h, &set, Some(scheme.root())).unwrap(),
            None,
            "{}",
            scheme.describe()
        );
        assert_eq!(verify_contractible(h, &set, None).unwrap(), None);
    }

    #[test]
    fn recursive_examples() {
        let k4 = Graph::complete(4);
        assert!(permutations(4)
            .iter()
            .all(|p| !is_recursive_ordering(&k4, p)));
        assert!(!is_recursive_ordering(&c4(), &[0, 1, 2, 3]));
        assert!(recursive_orderings(&c4(), &[]).is_empty());
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(is_recursive_ordering(&path, &[1, 0, 2]));
        assert!(!is_recursive_ordering(&path, &[0, 1]));
    }

    #[test]
    fn verify_small_sets() {
        let k3 = Graph::complete(3);
        assert_eq!(
            verify_contractible(&k3, &permutations(3), None).unwrap(),
            None
        );
        for p in permutations(4) {
            assert!(verify_contractible(&c4(), &[p], None).unwrap().is_some());
        }
        assert!(verify_contractible(&k3, &[vec![0, 1]], None).is_err());
        assert!(verify_contractible(&k3, &[], None).unwrap().is_some());
    }

    #[test]
    fn tree_scheme_examples() {
        let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(scheme_for_tree(&path, 1).unwrap().initial(), vec![1, 0, 2]);
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert_eq!(
            scheme_for_tree(&star, 2).unwrap().initial(),
            vec![2, 0, 1, 3]
        );
        assert_eq!(
            scheme_for_tree(&Graph::new(1), 0).unwrap().initial(),
            vec![0]
        );
        assert!(scheme_for_tree(&c4(), 0).is_err());
        let t = scheme_for_tree(&star, 2).unwrap();
        assert!(t.replace(&[2, 0, 1, 3], 3, 0, 1).is_err());
        assert_scheme_sound(&t);
    }

    #[test]
    fn snake_schemes() {
        let k3 = Graph::complete(3);
        assert_eq!(contractible_edge_for_snake(&k3, 0, 1).unwrap(), (0, 2));
        for n in 3..=10 {
            let g = gen_family(Family::Snake(n)).unwrap();
            let s = scheme_for_snake(&g, 0, 1).unwrap();
            assert_scheme_sound(&s);
            let (p, q) = s.contractible_edge();
            let z = *s.initial().last().unwrap();
            assert!((p == z || q == z) && z > 1 && g.degree(z) == 2);
        }
        let g = gen_family(Family::Snake(4)).unwrap();
        let (p, q) = contractible_edge_for_snake(&g, 0, 1).unwrap();
        assert!(p == 2 || q == 2);
    }

    #[test]
    fn snake_six_step_five() {
        let g = gen_family(Family::Snake(6)).unwrap();
        let s = scheme_for_snake(&g, 0, 1).unwrap();
        let omega = s.initial();
        let back = back_neighbors(&g, &omega, 5);
        let rep = scheme_replace(&s, &omega, 5, back[0], back[1]).unwrap();
        let four = gen_family(Family::Snake(4)).unwrap();
        assert!(isomorphism(&g.induced(&rep.ordering[..4]), &four, &[]).is_some());
        check_replacement(&g, s.root(), &omega, 5, back[0], back[1], &rep).unwrap();
    }

    #[test]
    fn outerplanar_schemes() {
        for h in 0..=1 {
            let (g, s) = scheme_for_universal(h).unwrap();
            assert_eq!(g.vertex_count(), 3 << h);
            assert_scheme_sound(&s);
        }
        for h in 1..=2 {
            let (_, s) = scheme_for_binary_dual(h).unwrap();
            assert_scheme_sound(&s);
        }
    }

    #[test]
    fn binary_h1_full_set() {
        let (g, s) = scheme_for_binary_dual(1).unwrap();
        let all = recursive_orderings(&g, s.root());
        assert_eq!(verify_contractible(&g, &all, Some(s.root())).unwrap(), None);
    }

    #[test]
    fn gluing_cases() {
        let a = Graph::from_edges(4, &[(0, 1)]).unwrap().induced(&[0, 1]);
        let b = Graph::from_edges(4, &[(2, 3)]).unwrap().induced(&[2, 3]);
        let base = Box::new(scheme_for_tree(&a, 0).unwrap().unrooted());
        let att = Box::new(scheme_for_tree(&b, 2).unwrap().unrooted());
        let glued = glue_schemes(base, att, GlueCase::Disjoint).unwrap();
        assert_eq!(glued.host().edge_count(), 2);
        assert_scheme_sound(&glued);

        let path = Graph::from_edges(5, &[(0, 1), (1, 2)])
            .unwrap()
            .induced(&[0, 1, 2]);
        let tri = Graph::from_edges(5, &[(2, 3), (3, 4), (2, 4)])
            .unwrap()
            .induced(&[2, 3, 4]);
        let base = Box::new(scheme_for_tree(&path, 0).unwrap());
        let att = Box::new(scheme_for_snake(&tri, 2, 3).unwrap().with_single_root());
        assert_scheme_sound(&glue_schemes(base, att, GlueCase::Vertex).unwrap());

        let t1 = Graph::from_edges(4, &[(0, 1), (1, 2), (0, 2)])
            .unwrap()
            .induced(&[0, 1, 2]);
        let t2 = Graph::from_edges(4, &[(0, 2), (2, 3), (0, 3)])
            .unwrap()
            .induced(&[0, 2, 3]);
        let base = scheme_for_snake(&t1, 0, 1).unwrap();
        assert_eq!(base.contractible_edge(), (0, 2));
        let att = Box::new(scheme_for_snake(&t2, 0, 2).unwrap());
        let glued = glue_schemes(Box::new(base), att, GlueCase::Edge).unwrap();
        assert_eq!(glued.host().edge_count(), 5);
        assert_scheme_sound(&glued);

        // the root edge itself may not be shared
        let base = Box::new(scheme_for_snake(&t1, 0, 2).unwrap());
        let att = Box::new(scheme_for_snake(&t2, 0, 2).unwrap());
        assert!(glue_schemes(base, att, GlueCase::Edge).is_err());
    }

    #[test]
    fn cactus_schemes() {
        let tree = Graph::from_edges(4, &[(0, 1), (1, 2), (1, 3)]).unwrap();
        let (h, s) = scheme_for_cactus(&tree, 0).unwrap();
        assert_eq!(h, tree);
        assert_scheme_sound(s.as_ref());

        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let (h, s) = scheme_for_cactus(&c5, 2).unwrap();
        assert!(recognize_maximal_outerplanar(&h).is_some());
        assert_eq!(h.degree(1), 4);
        assert_scheme_sound(s.as_ref());

        let bowtie =
            Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (2, 4)]).unwrap();
        let (_, s) = scheme_for_cactus(&bowtie, 0).unwrap();
        assert_scheme_sound(s.as_ref());
        assert!(scheme_for_cactus(&Graph::complete(4), 0).is_err());
    }

    #[test]
    fn explicit_scheme() {
        let k3 = Graph::complete(3);
        let e = ExplicitScheme::new(k3.clone(), vec![], permutations(3)).unwrap();
        assert_scheme_sound(&e);
        assert!(ExplicitScheme::new(c4(), vec![], vec![vec![0, 1, 2, 3]]).is_err());
    }
}
