//! Maximal outerplanar graphs: recognition by ear peeling, weak dual trees
//! and the canonical generator families.

use std::collections::VecDeque;

use crate::error::{domain, Result};
use crate::graph::{Graph, VertexId};

/// A recognized maximal outerplanar graph together with its unique
/// outerplanar embedding.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Triangulation {
    pub graph: Graph,
    /// Hamiltonian boundary cycle, starting at the smallest id and
    /// continuing towards the smaller of its two boundary neighbours.
    pub outer_cycle: Vec<VertexId>,
    /// Bounded faces as sorted triples, in construction order (the final
    /// triangle of the peel first).
    pub triangles: Vec<[VertexId; 3]>,
    pub diagonals: Vec<(VertexId, VertexId)>,
    /// Weak dual tree on triangle indices.
    pub dual: Graph,
}

impl Triangulation {
    /// Indices of the faces containing edge `uv`.
    pub fn faces_with_edge(&self, u: VertexId, v: VertexId) -> Vec<usize> {
        (0..self.triangles.len())
            .filter(|&f| self.triangles[f].contains(&u) && self.triangles[f].contains(&v))
            .collect()
    }

    pub fn boundary_edges(&self) -> Vec<(VertexId, VertexId)> {
        let c = &self.outer_cycle;
        if c.len() < 2 {
            return vec![];
        }
        if c.len() == 2 {
            return vec![(c[0].min(c[1]), c[0].max(c[1]))];
        }
        let mut out: Vec<_> = (0..c.len())
            .map(|k| {
                let (a, b) = (c[k], c[(k + 1) % c.len()]);
                (a.min(b), a.max(b))
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_boundary_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.boundary_edges().contains(&(u.min(v), u.max(v)))
    }
}

/// Accepts exactly the maximal outerplanar graphs (`K₁` and `K₂` included,
/// with an empty dual).
pub fn recognize_maximal_outerplanar(h: &Graph) -> Option<Triangulation> {
    let n = h.vertex_count();
    if n == 0 {
        return None;
    }
    if n <= 2 {
        if h.edge_count() != n - 1 {
            return None;
        }
        return Some(Triangulation {
            graph: h.clone(),
            outer_cycle: h.vertices().collect(),
            triangles: vec![],
            diagonals: vec![],
            dual: Graph::new(0),
        });
    }
    if h.edge_count() != 2 * n - 3 {
        return None;
    }
    let mut work = h.clone();
    let mut peeled: Vec<(VertexId, VertexId, VertexId)> = Vec::new();
    while work.vertex_count() > 3 {
        let ear = work.vertices().find_map(|z| {
            if work.degree(z) != 2 {
                return None;
            }
            let mut nb = work.neighbors(z);
            let (a, b) = (nb.next()?, nb.next()?);
            work.has_edge(a, b).then_some((z, a, b))
        })?;
        work.remove_vertex(ear.0);
        peeled.push(ear);
    }
    let last: Vec<_> = work.vertices().collect();
    if work.edge_count() != 3 {
        return None;
    }
    let mut cycle = last.clone();
    let mut triangles = vec![[last[0], last[1], last[2]]];
    for &(z, a, b) in peeled.iter().rev() {
        let len = cycle.len();
        let pa = cycle.iter().position(|&x| x == a)?;
        let pb = cycle.iter().position(|&x| x == b)?;
        if (pa + 1) % len == pb {
            cycle.insert(pa + 1, z);
        } else if (pb + 1) % len == pa {
            cycle.insert(pb + 1, z);
        } else {
            // glued onto a diagonal
            return None;
        }
        let mut t = [z, a, b];
        t.sort_unstable();
        triangles.push(t);
    }
    let start = cycle
        .iter()
        .position(|&x| x == *cycle.iter().min().unwrap())
        .unwrap();
    cycle.rotate_left(start);
    if cycle[1] > cycle[cycle.len() - 1] {
        cycle[1..].reverse();
    }
    let mut dual = Graph::new(triangles.len());
    for f in 0..triangles.len() {
        for g in f + 1..triangles.len() {
            let shared = triangles[f]
                .iter()
                .filter(|v| triangles[g].contains(v))
                .count();
            if shared == 2 {
                dual.insert_edge(f, g);
            }
        }
    }
    let mut ts = Triangulation {
        graph: h.clone(),
        outer_cycle: cycle,
        triangles,
        diagonals: vec![],
        dual,
    };
    let boundary = ts.boundary_edges();
    ts.diagonals = h
        .edges()
        .into_iter()
        .filter(|e| boundary.binary_search(e).is_err())
        .collect();
    Some(ts)
}

/// Shape data of a (weak dual) tree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeShape {
    pub tree: Graph,
    /// `None` for the empty tree.
    pub radius: Option<usize>,
    pub eccentricity: Vec<usize>,
    /// Vertices whose eccentricity equals the radius.
    pub centers: Vec<usize>,
    /// `Some(h)` iff the tree is the complete cubic tree of height `h`.
    pub cubic_height: Option<usize>,
    /// `Some((h, root))` iff the tree is a complete binary tree of height `h ≥ 1`.
    pub binary: Option<(usize, usize)>,
}

impl TreeShape {
    pub fn of(tree: &Graph) -> TreeShape {
        let n = tree.capacity();
        let eccentricity: Vec<usize> = (0..n)
            .map(|v| {
                if tree.contains(v) {
                    distances(tree, v).into_iter().flatten().max().unwrap_or(0)
                } else {
                    0
                }
            })
            .collect();
        let radius = tree.vertices().map(|v| eccentricity[v]).min();
        let centers = match radius {
            Some(r) => tree.vertices().filter(|&v| eccentricity[v] == r).collect(),
            None => vec![],
        };
        let cubic_height = radius
            .filter(|_| centers.len() == 1)
            .filter(|&h| complete_from(tree, centers[0], h, 3));
        let binary = tree
            .vertices()
            .filter(|&r| tree.degree(r) == 2)
            .find_map(|r| {
                let h = eccentricity[r];
                (h >= 1 && complete_from(tree, r, h, 2)).then_some((h, r))
            });
        TreeShape {
            tree: tree.clone(),
            radius,
            eccentricity,
            centers,
            cubic_height,
            binary,
        }
    }

    /// All `h`-centers: vertices within distance `h` of every vertex.
    pub fn h_centers(&self, h: usize) -> Vec<usize> {
        self.tree
            .vertices()
            .filter(|&v| self.eccentricity[v] <= h)
            .collect()
    }

    pub fn is_path(&self) -> bool {
        self.tree.vertices().all(|v| self.tree.degree(v) <= 2) && self.tree.is_connected()
    }
}

fn distances(g: &Graph, s: VertexId) -> Vec<Option<usize>> {
    let mut dist = vec![None; g.capacity()];
    dist[s] = Some(0);
    let mut queue = VecDeque::from([s]);
    while let Some(u) = queue.pop_front() {
        for w in g.neighbors(u) {
            if dist[w].is_none() {
                dist[w] = Some(dist[u].unwrap() + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Every vertex at depth `< h` has `root_children` children at the root and
/// two elsewhere; every vertex at depth `h` is a leaf.
fn complete_from(tree: &Graph, root: usize, h: usize, root_children: usize) -> bool {
    if !tree.is_tree() {
        return false;
    }
    let dist = distances(tree, root);
    tree.vertices().all(|v| {
        let d = dist[v].unwrap();
        let children = tree.degree(v) - usize::from(v != root);
        if d < h {
            children == if v == root { root_children } else { 2 }
        } else {
            d == h && children == 0
        }
    })
}

pub fn weak_dual_tree(ts: &Triangulation) -> TreeShape {
    TreeShape::of(&ts.dual)
}

/// Canonical maximal outerplanar families; all are labelled so that the
/// boundary cycle reads `0, 1, …, n−1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    /// Weak dual is the complete cubic tree of height `h`; `3·2^h` vertices.
    Universal(usize),
    /// Weak dual is the complete binary tree of height `h ≥ 1`; boundary
    /// edge `01` lies on the root face.
    Binary(usize),
    /// Zig-zag triangulated strip on `n ≥ 3` vertices (maximum degree 4).
    Snake(usize),
    /// Vertex 0 joined to the path `1, …, n−1`.
    Fan(usize),
}

pub fn gen_family(kind: Family) -> Result<Graph> {
    let triangles = match kind {
        Family::Universal(h) => {
            if h > 16 {
                return domain("height too large");
            }
            grown(h, &[(0, 1), (1, 2), (2, 0)])
        }
        Family::Binary(h) => {
            if h == 0 || h > 16 {
                return domain("binary height must be in 1..=16");
            }
            grown(h, &[(1, 2), (2, 0)])
        }
        Family::Snake(n) => {
            if n < 3 {
                return domain("snake needs at least 3 vertices");
            }
            let mut p = Vec::with_capacity(n);
            let (mut lo, mut hi) = (0, n - 1);
            while lo <= hi {
                p.push(lo);
                if lo != hi {
                    p.push(hi);
                }
                lo += 1;
                hi = hi.wrapping_sub(1);
                if hi == usize::MAX {
                    break;
                }
            }
            return Ok(from_triangles(
                n,
                &p.windows(3).map(|w| [w[0], w[1], w[2]]).collect::<Vec<_>>(),
            ));
        }
        Family::Fan(n) => {
            if n < 3 {
                return domain("fan needs at least 3 vertices");
            }
            return Ok(from_triangles(
                n,
                &(1..n - 1).map(|i| [0, i, i + 1]).collect::<Vec<_>>(),
            ));
        }
    };
    let n = triangles.iter().flatten().max().unwrap() + 1;
    let g = from_triangles(n, &triangles);
    let ts = recognize_maximal_outerplanar(&g).expect("grown triangulation");
    // relabel along the boundary, starting at temporary vertex 0 towards 1 if
    // possible, else towards the smaller neighbour
    let mut cycle = ts.outer_cycle.clone();
    let start = cycle.iter().position(|&v| v == 0).unwrap();
    cycle.rotate_left(start);
    let len = cycle.len();
    if cycle[len - 1] == 1 || (cycle[1] != 1 && cycle[1] > cycle[len - 1]) {
        cycle[1..].reverse();
    }
    let mut label = vec![0; n];
    for (pos, &v) in cycle.iter().enumerate() {
        label[v] = pos;
    }
    let relabelled: Vec<[usize; 3]> = triangles
        .iter()
        .map(|t| [label[t[0]], label[t[1]], label[t[2]]])
        .collect();
    Ok(from_triangles(n, &relabelled))
}

/// Root triangle `012` grown across the listed edges, each new face spawning
/// two more, up to depth `h`.
fn grown(h: usize, root_edges: &[(usize, usize)]) -> Vec<[usize; 3]> {
    let mut triangles = vec![[0, 1, 2]];
    let mut next = 3;
    let mut queue: VecDeque<(usize, usize, usize)> =
        root_edges.iter().map(|&(a, b)| (a, b, 1)).collect();
    while let Some((a, b, d)) = queue.pop_front() {
        if d > h {
            continue;
        }
        let v = next;
        next += 1;
        triangles.push([a, b, v]);
        queue.push_back((a, v, d + 1));
        queue.push_back((v, b, d + 1));
    }
    triangles
}

fn from_triangles(n: usize, triangles: &[[usize; 3]]) -> Graph {
    let mut g = Graph::new(n);
    for t in triangles {
        g.insert_edge(t[0], t[1]);
        g.insert_edge(t[1], t[2]);
        g.insert_edge(t[0], t[2]);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        let k3 = Graph::complete(3);
        let ts = recognize_maximal_outerplanar(&k3).unwrap();
        assert_eq!(ts.dual.vertex_count(), 1);
        assert!(recognize_maximal_outerplanar(&Graph::complete(4)).is_none());
        assert!(recognize_maximal_outerplanar(&Graph::complete(2)).is_some());
        assert!(recognize_maximal_outerplanar(&Graph::new(2)).is_none());
    }

    #[test]
    fn fan_five() {
        let f = gen_family(Family::Fan(5)).unwrap();
        let ts = recognize_maximal_outerplanar(&f).unwrap();
        let shape = weak_dual_tree(&ts);
        assert!(shape.is_path());
        assert_eq!(shape.tree.vertex_count(), 3);
        assert_eq!(ts.outer_cycle, vec![0, 1, 2, 3, 4]);
    }

    #[test]
    fn snake_six() {
        let s = gen_family(Family::Snake(6)).unwrap();
        assert_eq!(s.degree_profile().max, 4);
        let ts = recognize_maximal_outerplanar(&s).unwrap();
        assert_eq!(ts.outer_cycle, (0..6).collect::<Vec<_>>());
        let shape = weak_dual_tree(&ts);
        assert!(shape.is_path());
        assert_eq!(shape.tree.vertex_count(), 4);
    }

    #[test]
    fn universal_sizes() {
        for h in 0..=4 {
            let g = gen_family(Family::Universal(h)).unwrap();
            assert_eq!(g.vertex_count(), 3 << h);
            let ts = recognize_maximal_outerplanar(&g).unwrap();
            assert_eq!(ts.outer_cycle, (0..g.vertex_count()).collect::<Vec<_>>());
            let shape = weak_dual_tree(&ts);
            assert_eq!(shape.cubic_height, Some(h));
            assert_eq!(shape.centers.len(), 1);
        }
    }

    #[test]
    fn binary_root_edge() {
        for h in 1..=4 {
            let g = gen_family(Family::Binary(h)).unwrap();
            assert_eq!(g.vertex_count(), (1 << (h + 1)) + 1);
            let ts = recognize_maximal_outerplanar(&g).unwrap();
            let shape = weak_dual_tree(&ts);
            let (height, root) = shape.binary.unwrap();
            assert_eq!(height, h);
            assert!(ts.triangles[root].contains(&0) && ts.triangles[root].contains(&1));
            assert!(ts.is_boundary_edge(0, 1));
        }
    }

    #[test]
    fn rejects_k23_plus_edge() {
        // three triangles on one edge
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (1, 2), (0, 3), (1, 3), (0, 4), (1, 4)])
            .unwrap();
        assert!(recognize_maximal_outerplanar(&g).is_none());
    }
}
