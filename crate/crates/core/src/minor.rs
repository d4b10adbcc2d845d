//! Apex-minor finder: the well-connected-set induction run forward as a
//! loop, with every reduction logged so the final model lifts back to the
//! input graph.

use std::collections::VecDeque;

use fixedbitset::FixedBitSet;
use serde::{Deserialize, Serialize};

use crate::connectivity::{bounded_order_separation, disjoint_linkage, max_fan, Linkage};
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::orderings::{back_neighbors, scheme_replace, OrderingScheme};
use crate::subdivision::{PathImage, SubdivisionEmbedding};

/// Branch sets indexed by pattern vertex id (empty for ids that are not
/// pattern vertices).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorEmbedding {
    pub branch_sets: Vec<Vec<VertexId>>,
    pub apex: Option<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Reduction {
    /// The path was contracted onto its first vertex.
    ContractPath {
        path: Vec<VertexId>,
    },
    DeleteVertices {
        vertices: Vec<VertexId>,
    },
    ContractEdge {
        survivor: VertexId,
        absorbed: VertexId,
    },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionLog {
    pub steps: Vec<Reduction>,
}

impl ReductionLog {
    /// Applies the logged reductions to `g`.
    pub fn replay(&self, g: &Graph) -> Result<Graph> {
        let mut g = g.clone();
        for step in &self.steps {
            match step {
                Reduction::ContractPath { path } => {
                    for w in path.windows(2) {
                        if !g.has_edge(path[0], w[1]) {
                            return Err(Error::Invariant(format!(
                                "path step {}{} is not an edge",
                                w[0], w[1]
                            )));
                        }
                        g.merge_into(path[0], w[1]);
                    }
                }
                Reduction::DeleteVertices { vertices } => {
                    for &v in vertices {
                        g.remove_vertex(v);
                    }
                }
                Reduction::ContractEdge { survivor, absorbed } => {
                    if !g.has_edge(*survivor, *absorbed) {
                        return Err(Error::Invariant("contracted pair is not an edge".into()));
                    }
                    g.merge_into(*survivor, *absorbed);
                }
            }
        }
        Ok(g)
    }

    /// Expands branch sets of the reduced graph to the original graph.
    pub fn lift(&self, sets: &mut [Vec<VertexId>]) {
        for step in self.steps.iter().rev() {
            let (keep, extra): (VertexId, Vec<VertexId>) = match step {
                Reduction::ContractPath { path } => (path[0], path[1..].to_vec()),
                Reduction::ContractEdge { survivor, absorbed } => (*survivor, vec![*absorbed]),
                Reduction::DeleteVertices { .. } => continue,
            };
            if let Some(set) = sets.iter_mut().find(|s| s.contains(&keep)) {
                set.extend(extra);
            }
        }
        for set in sets.iter_mut() {
            set.sort_unstable();
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FinderStats {
    pub steps: usize,
    pub separations: usize,
    pub contractions: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinorCertificate {
    pub embedding: MinorEmbedding,
    pub log: ReductionLog,
    pub stats: FinderStats,
}

fn invariant(msg: String, state: &str) -> Error {
    Error::Invariant(format!("{msg}; state: {state}"))
}

/// Finds an `H⁺`-minor of `g` whose apex branch set is a single vertex,
/// where `H` is the scheme's host and the apex has id `H.capacity()`.
/// Requires minimum degree at least `|V(H)|`.
pub fn find_apex_minor(g: &Graph, scheme: &dyn OrderingScheme) -> Result<MinorCertificate> {
    let h = scheme.host();
    let t = h.vertex_count();
    if t == 0 {
        return Err(Error::Hypothesis("pattern has no vertices".into()));
    }
    let min_deg = g.degree_profile().min;
    if g.vertex_count() == 0 || min_deg < t {
        return Err(Error::Hypothesis(format!(
            "minimum degree {min_deg} is below |V(H)| = {t}"
        )));
    }
    let mut cur = g.clone();
    let mut log = ReductionLog::default();
    let mut stats = FinderStats::default();
    let mut omega = scheme.initial();
    let mut phi: Vec<VertexId> = Vec::new();
    let mut in_s = FixedBitSet::with_capacity(g.capacity());
    let bound = g.vertex_count() * (g.vertex_count() + t) + 1;
    loop {
        stats.steps += 1;
        let dump = || {
            format!(
                "s={} S={:?} omega={:?} steps={}",
                phi.len(),
                phi,
                omega,
                stats.steps
            )
        };
        if stats.steps > bound {
            return Err(invariant("progress bound exceeded".into(), &dump()));
        }
        let s = phi.len();
        if s == t {
            let v = cur
                .vertices()
                .find(|&v| !in_s.contains(v))
                .ok_or_else(|| invariant("no vertex outside S".into(), &dump()))?;
            let fan = max_fan(&cur, v, &phi, false)?;
            if fan.fan.paths.len() != t {
                return Err(invariant(
                    format!("fan from {v} has only {} paths", fan.fan.paths.len()),
                    &dump(),
                ));
            }
            let apex = h.capacity();
            let mut sets = vec![Vec::new(); apex + 1];
            for path in &fan.fan.paths {
                let end = *path.last().unwrap();
                let k = phi.iter().position(|&x| x == end).unwrap();
                sets[omega[k]] = path[1..].to_vec();
            }
            sets[apex] = vec![v];
            log.lift(&mut sets);
            return Ok(MinorCertificate {
                embedding: MinorEmbedding {
                    branch_sets: sets,
                    apex: Some(apex),
                },
                log,
                stats,
            });
        }
        if let Some(sep) = bounded_order_separation(&cur, &phi, s, None) {
            if sep.order() != s {
                return Err(invariant(
                    format!("S is not well-connected (order {})", sep.order()),
                    &dump(),
                ));
            }
            stats.separations += 1;
            let Linkage::Paths(paths) = disjoint_linkage(&cur, &phi, &sep.separator()) else {
                return Err(invariant(
                    "no linkage from S to the separator".into(),
                    &dump(),
                ));
            };
            let mut on_path = FixedBitSet::with_capacity(cur.capacity());
            for path in &paths {
                for &v in path {
                    on_path.insert(v);
                }
            }
            for path in paths {
                if path.len() > 1 {
                    for w in path.windows(2) {
                        cur.merge_into(path[0], w[1]);
                    }
                    log.steps.push(Reduction::ContractPath { path });
                }
            }
            let doomed: Vec<VertexId> = sep
                .a
                .iter()
                .copied()
                .filter(|&v| !on_path.contains(v))
                .collect();
            for &v in &doomed {
                cur.remove_vertex(v);
            }
            if !doomed.is_empty() {
                log.steps
                    .push(Reduction::DeleteVertices { vertices: doomed });
            }
            continue;
        }
        let back = back_neighbors(h, &omega, s);
        let pos = |x: VertexId| omega.iter().position(|&w| w == x).unwrap();
        let outside = |v: VertexId| !in_s.contains(v);
        let next = match back.len() {
            0 => cur.vertices().find(|&v| outside(v)),
            1 => {
                let p = phi[pos(back[0])];
                cur.neighbors(p).find(|&v| outside(v))
            }
            2 => {
                let (p, q) = (phi[pos(back[0])], phi[pos(back[1])]);
                let common = cur.neighbors(p).find(|&v| outside(v) && cur.has_edge(q, v));
                match common {
                    Some(v) => Some(v),
                    None => {
                        if !cur.has_edge(p, q) {
                            return Err(invariant(format!("images {p},{q} not adjacent"), &dump()));
                        }
                        let (survivor, absorbed) = (p.min(q), p.max(q));
                        cur.merge_into(survivor, absorbed);
                        in_s.set(absorbed, false);
                        log.steps
                            .push(Reduction::ContractEdge { survivor, absorbed });
                        stats.contractions += 1;
                        let rep = scheme_replace(scheme, &omega, s, back[0], back[1])?;
                        let merged = |x: VertexId| if x == absorbed { survivor } else { x };
                        phi = rep.image.iter().map(|&x| merged(phi[pos(x)])).collect();
                        omega = rep.ordering;
                        continue;
                    }
                }
            }
            _ => return Err(invariant("ordering is not recursive".into(), &dump())),
        };
        let v = next.ok_or_else(|| invariant("no admissible vertex to add".into(), &dump()))?;
        in_s.insert(v);
        phi.push(v);
    }
}

/// Checks a minor model literally: nonempty, disjoint, connected branch
/// sets covering every pattern edge, and a singleton apex set if one is named.
pub fn verify_minor(
    g: &Graph,
    pattern: &Graph,
    emb: &MinorEmbedding,
) -> std::result::Result<(), String> {
    let mut owner = vec![usize::MAX; g.capacity()];
    for x in pattern.vertices() {
        let set = emb
            .branch_sets
            .get(x)
            .ok_or(format!("no branch set for {x}"))?;
        if set.is_empty() {
            return Err(format!("branch set of {x} is empty"));
        }
        for &v in set {
            if !g.contains(v) {
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
        if !g.is_connected_set(set) {
            return Err(format!("branch set of {x} is not connected"));
        }
    }
    for (x, y) in pattern.edges() {
        let touching = emb.branch_sets[x]
            .iter()
            .any(|&u| g.neighbors(u).any(|w| owner[w] == y));
        if !touching {
            return Err(format!("pattern edge {x}{y} is not realized"));
        }
    }
    if let Some(a) = emb.apex {
        if emb.branch_sets.get(a).map(Vec::len) != Some(1) {
            return Err("apex branch set is not a singleton".into());
        }
    }
    Ok(())
}

fn tree_path(parent: &[usize], from: VertexId, to: VertexId) -> Vec<VertexId> {
    // both ends in one BFS tree: climb from each to the common ancestor
    let ancestors = |mut v: VertexId| {
        let mut out = vec![v];
        while parent[v] != usize::MAX {
            v = parent[v];
            out.push(v);
        }
        out
    };
    let a = ancestors(from);
    let b = ancestors(to);
    let common = *a.iter().find(|v| b.contains(v)).unwrap();
    let mut path: Vec<_> = a.iter().copied().take_while(|&v| v != common).collect();
    path.push(common);
    let tail: Vec<_> = b.iter().copied().take_while(|&v| v != common).collect();
    path.extend(tail.into_iter().rev());
    path
}

/// Converts a minor model in which every pattern vertex of degree at least
/// 4 has a singleton branch set into a subdivision.
pub fn minor_to_subdivision(
    g: &Graph,
    pattern: &Graph,
    emb: &MinorEmbedding,
) -> Result<SubdivisionEmbedding> {
    verify_minor(g, pattern, emb).map_err(Error::Domain)?;
    let n = g.capacity();
    let mut owner = vec![usize::MAX; n];
    for x in pattern.vertices() {
        for &v in &emb.branch_sets[x] {
            owner[v] = x;
        }
    }
    // one host edge per pattern edge
    let mut attach: Vec<((VertexId, VertexId), (VertexId, VertexId))> = Vec::new();
    for (x, y) in pattern.edges() {
        let (p, q) = emb.branch_sets[x]
            .iter()
            .find_map(|&p| g.neighbors(p).find(|&q| owner[q] == y).map(|q| (p, q)))
            .unwrap();
        attach.push(((x, y), (p, q)));
    }
    let mut parent = vec![usize::MAX; n];
    let mut branch = vec![None; pattern.capacity()];
    for x in pattern.vertices() {
        let set = &emb.branch_sets[x];
        if set.len() > 1 && pattern.degree(x) > 3 {
            return Err(Error::Domain(format!(
                "pattern vertex {x} has degree {} but a branch set of size {}",
                pattern.degree(x),
                set.len()
            )));
        }
        // BFS tree of G[set]
        let root = set[0];
        let mut queue = VecDeque::from([root]);
        let mut seen = FixedBitSet::with_capacity(n);
        seen.insert(root);
        while let Some(u) = queue.pop_front() {
            for w in g.neighbors(u) {
                if owner[w] == x && !seen.put(w) {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        let points: Vec<VertexId> = attach
            .iter()
            .filter_map(|&((a, b), (p, q))| {
                if a == x {
                    Some(p)
                } else if b == x {
                    Some(q)
                } else {
                    None
                }
            })
            .collect();
        let c = match points.len() {
            0 => root,
            1 | 2 => points[0],
            _ => {
                let p01 = tree_path(&parent, points[0], points[1]);
                let p02 = tree_path(&parent, points[0], points[2]);
                let p12 = tree_path(&parent, points[1], points[2]);
                *p01.iter()
                    .find(|v| p02.contains(v) && p12.contains(v))
                    .unwrap()
            }
        };
        branch[x] = Some(c);
    }
    let paths = attach
        .iter()
        .map(|&((x, y), (p, q))| {
            let mut path = tree_path(&parent, branch[x].unwrap(), p);
            path.extend(tree_path(&parent, q, branch[y].unwrap()));
            PathImage {
                from: x,
                to: y,
                path,
            }
        })
        .collect();
    Ok(SubdivisionEmbedding { branch, paths })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::petersen;
    use crate::orderings::{scheme_for_snake, scheme_for_tree, scheme_for_universal};
    use crate::outerplanar::{gen_family, Family};
    use crate::subdivision::verify_subdivision_graph;

    #[test]
    fn complete_host() {
        let (h, s) = scheme_for_universal(0).unwrap();
        let g = Graph::complete(4);
        let cert = find_apex_minor(&g, &s).unwrap();
        verify_minor(&g, &h.with_apex(), &cert.embedding).unwrap();
        assert!(cert.embedding.branch_sets.iter().all(|b| b.len() == 1));
    }

    #[test]
    fn petersen_path() {
        let p3 = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let s = scheme_for_tree(&p3, 0).unwrap();
        let g = petersen();
        let cert = find_apex_minor(&g, &s).unwrap();
        let pattern = p3.with_apex();
        verify_minor(&g, &pattern, &cert.embedding).unwrap();
        let sub = minor_to_subdivision(&g, &pattern, &cert.embedding).unwrap();
        verify_subdivision_graph(&g, &pattern, &sub).unwrap();
        assert!(cert.log.replay(&g).unwrap().vertex_count() <= g.vertex_count());
    }

    #[test]
    fn degree_hypothesis() {
        let s = scheme_for_snake(&gen_family(Family::Snake(6)).unwrap(), 0, 1).unwrap();
        assert!(matches!(
            find_apex_minor(&petersen(), &s),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn verify_rejects() {
        let g = Graph::complete(3);
        let p = Graph::complete(2);
        let overlap = MinorEmbedding {
            branch_sets: vec![vec![0, 1], vec![1]],
            apex: None,
        };
        assert!(verify_minor(&g, &p, &overlap).is_err());
        let path = Graph::from_edges(3, &[(0, 1)]).unwrap();
        let missing = MinorEmbedding {
            branch_sets: vec![vec![0], vec![2]],
            apex: None,
        };
        assert!(verify_minor(&path, &p, &missing).is_err());
    }

    #[test]
    fn split_degree_three() {
        // K4 minus an edge with vertex 0 spread over {0, 4}
        let g = Graph::from_edges(5, &[(0, 4), (0, 1), (4, 2), (4, 3), (1, 2), (2, 3), (1, 3)])
            .unwrap();
        let p = Graph::complete(4);
        let emb = MinorEmbedding {
            branch_sets: vec![vec![0, 4], vec![1], vec![2], vec![3]],
            apex: None,
        };
        verify_minor(&g, &p, &emb).unwrap();
        let sub = minor_to_subdivision(&g, &p, &emb).unwrap();
        verify_subdivision_graph(&g, &p, &sub).unwrap();
    }
}
