//! Small-graph isomorphism and subgraph-embedding search by backtracking.

use crate::graph::{Graph, VertexId};

/// An injective map `φ: V(p) → V(h)` with `φ(u)φ(v) ∈ E(h)` for every
/// `uv ∈ E(p)`, extending the prescribed pairs. Returned as
/// `(pattern vertex, host vertex)` pairs in pattern-id order.
pub fn subgraph_embedding(
    p: &Graph,
    h: &Graph,
    fixed: &[(VertexId, VertexId)],
) -> Option<Vec<(VertexId, VertexId)>> {
    search(p, h, fixed, false)
}

/// An isomorphism `p → h` extending the prescribed pairs.
pub fn isomorphism(
    p: &Graph,
    h: &Graph,
    fixed: &[(VertexId, VertexId)],
) -> Option<Vec<(VertexId, VertexId)>> {
    if p.vertex_count() != h.vertex_count() || p.edge_count() != h.edge_count() {
        return None;
    }
    search(p, h, fixed, true)
}

fn search(
    p: &Graph,
    h: &Graph,
    fixed: &[(VertexId, VertexId)],
    exact: bool,
) -> Option<Vec<(VertexId, VertexId)>> {
    if p.vertex_count() > h.vertex_count() || p.edge_count() > h.edge_count() {
        return None;
    }
    let mut map = vec![usize::MAX; p.capacity()];
    let mut used = vec![false; h.capacity()];
    for &(a, b) in fixed {
        if !p.contains(a) || !h.contains(b) || used[b] || (map[a] != usize::MAX && map[a] != b) {
            return None;
        }
        map[a] = b;
        used[b] = true;
    }
    for &(a, b) in fixed {
        if !fits(p, h, &map, a, b, exact) {
            return None;
        }
    }
    // pattern vertices in an order that keeps the mapped part connected
    let mut order: Vec<VertexId> = Vec::new();
    let mut placed = vec![false; p.capacity()];
    for &(a, _) in fixed {
        if !placed[a] {
            placed[a] = true;
        }
    }
    let rest: Vec<VertexId> = p.vertices().filter(|&v| !placed[v]).collect();
    let mut remaining = rest.len();
    while remaining > 0 {
        let next = rest
            .iter()
            .copied()
            .filter(|&v| !placed[v])
            .max_by_key(|&v| {
                let anchored = p.neighbors(v).filter(|&w| placed[w]).count();
                (anchored, p.degree(v), std::cmp::Reverse(v))
            })
            .unwrap();
        placed[next] = true;
        order.push(next);
        remaining -= 1;
    }
    let hosts: Vec<VertexId> = h.vertices().collect();
    if extend(p, h, &order, 0, &hosts, &mut map, &mut used, exact) {
        Some(p.vertices().map(|v| (v, map[v])).collect())
    } else {
        None
    }
}

fn fits(p: &Graph, h: &Graph, map: &[usize], a: VertexId, b: VertexId, exact: bool) -> bool {
    if exact {
        if p.degree(a) != h.degree(b) {
            return false;
        }
    } else if p.degree(a) > h.degree(b) {
        return false;
    }
    for w in p.vertices() {
        let mw = map[w];
        if w == a || mw == usize::MAX {
            continue;
        }
        let pe = p.has_edge(a, w);
        let he = h.has_edge(b, mw);
        if (pe && !he) || (exact && he && !pe) {
            return false;
        }
    }
    true
}

#[allow(clippy::too_many_arguments)]
fn extend(
    p: &Graph,
    h: &Graph,
    order: &[VertexId],
    k: usize,
    hosts: &[VertexId],
    map: &mut [usize],
    used: &mut [bool],
    exact: bool,
) -> bool {
    let Some(&a) = order.get(k) else { return true };
    for &b in hosts {
        if used[b] || !fits(p, h, map, a, b, exact) {
            continue;
        }
        map[a] = b;
        used[b] = true;
        if extend(p, h, order, k + 1, hosts, map, used, exact) {
            return true;
        }
        map[a] = usize::MAX;
        used[b] = false;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles() {
        let c4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let c4b = Graph::from_edges(4, &[(0, 2), (2, 1), (1, 3), (3, 0)]).unwrap();
        let map = isomorphism(&c4, &c4b, &[(0, 0)]).unwrap();
        for (u, v) in c4.edges() {
            assert!(c4b.has_edge(map[u].1, map[v].1));
        }
        let p4 = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(isomorphism(&c4, &p4, &[]).is_none());
        assert!(subgraph_embedding(&p4, &c4, &[]).is_some());
        assert!(subgraph_embedding(&c4, &p4, &[]).is_none());
    }

    #[test]
    fn fixed_pairs_respected() {
        let star = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap();
        assert!(isomorphism(&star, &star, &[(1, 0)]).is_none());
        assert!(isomorphism(&star, &star, &[(1, 3)]).is_some());
    }
}
