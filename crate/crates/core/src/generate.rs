//! Seeded random instance generators.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Result};
use crate::graph::{Digraph, Graph};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn petersen() -> Graph {
    let mut e = vec![];
    for i in 0..5 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((i + 5, (i + 2) % 5 + 5));
    }
    Graph::from_edges(10, &e).expect("petersen edges")
}

/// Icosahedron: poles 0 and 11, rings 1..=5 and 6..=10.
pub fn icosahedron() -> Graph {
    let mut e = vec![];
    for i in 0..5 {
        let (u, u2) = (1 + i, 1 + (i + 1) % 5);
        let (l, l2) = (6 + i, 6 + (i + 1) % 5);
        e.extend([(0, u), (u, u2), (l, l2), (l, 11), (u, l), (u2, l)]);
    }
    Graph::from_edges(12, &e).expect("icosahedron edges")
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let e: Vec<_> = (0..a)
        .flat_map(|i| (a..a + b).map(move |j| (i, j)))
        .collect();
    Graph::from_edges(a + b, &e).expect("bipartite edges")
}

/// Random graph on `n` vertices with minimum degree at least `t`: a sparse
/// binomial base repaired by joining deficient vertices to random
/// non-neighbours (at most `n²` repair attempts).
pub fn min_degree_graph(n: usize, t: usize, seed: u64) -> Result<Graph> {
    if t >= n {
        return domain(format!("minimum degree {t} impossible on {n} vertices"));
    }
    let mut r = rng(seed);
    let mut g = Graph::new(n);
    let p = if n > 1 {
        0.5 * t as f64 / (n - 1) as f64
    } else {
        0.0
    };
    for u in 0..n {
        for v in u + 1..n {
            if r.gen_bool(p) {
                g.insert_edge(u, v);
            }
        }
    }
    let mut attempts = 0;
    for u in 0..n {
        while g.degree(u) < t {
            attempts += 1;
            if attempts > n * n {
                return domain("degree repair did not converge");
            }
            let free: Vec<usize> = (0..n).filter(|&v| v != u && !g.has_edge(u, v)).collect();
            g.insert_edge(
                u,
                *free.choose(&mut r).expect("t < n leaves a non-neighbour"),
            );
        }
    }
    Ok(g)
}

/// Random digraph with minimum out-degree at least `t`.
pub fn min_outdegree_digraph(n: usize, t: usize, seed: u64) -> Result<Digraph> {
    if t >= n {
        return domain(format!("minimum out-degree {t} impossible on {n} vertices"));
    }
    let mut r = rng(seed);
    let mut d = Digraph::new(n);
    let p = if n > 1 {
        0.5 * t as f64 / (n - 1) as f64
    } else {
        0.0
    };
    for u in 0..n {
        for v in 0..n {
            if u != v && r.gen_bool(p) {
                d.insert_arc(u, v);
            }
        }
    }
    let mut attempts = 0;
    for u in 0..n {
        while d.out_degree(u) < t {
            attempts += 1;
            if attempts > n * n {
                return domain("out-degree repair did not converge");
            }
            let free: Vec<usize> = (0..n).filter(|&v| v != u && !d.has_arc(u, v)).collect();
            d.insert_arc(
                u,
                *free.choose(&mut r).expect("t < n leaves a non-neighbour"),
            );
        }
    }
    Ok(d)
}

/// Random cactus: pendant edges and cycles of length 3 to 6 hung on
/// random existing vertices.
pub fn cactus(n: usize, seed: u64) -> Result<Graph> {
    if n == 0 {
        return domain("cactus needs at least one vertex");
    }
    let mut r = rng(seed);
    let mut g = Graph::new(n);
    let mut count = 1;
    while count < n {
        let at = r.gen_range(0..count);
        let room = n - count;
        if room >= 2 && r.gen_bool(0.5) {
            let len = r.gen_range(3..=6usize.min(room + 1));
            let mut prev = at;
            for k in 0..len - 1 {
                let v = count + k;
                g.insert_edge(prev, v);
                prev = v;
            }
            g.insert_edge(prev, at);
            count += len - 1;
        } else {
            g.insert_edge(at, count);
            count += 1;
        }
    }
    Ok(g)
}

/// Random recursive tree: vertex `i > 0` joins a uniform earlier vertex.
pub fn tree(n: usize, seed: u64) -> Result<Graph> {
    if n == 0 {
        return domain("tree needs at least one vertex");
    }
    let mut r = rng(seed);
    let mut g = Graph::new(n);
    for i in 1..n {
        g.insert_edge(i, r.gen_range(0..i));
    }
    Ok(g)
}

/// Random in-arborescence rooted at 0: arc `i → parent(i)` with `parent(i) < i`.
pub fn inarborescence(n: usize, seed: u64) -> Result<Digraph> {
    if n == 0 {
        return domain("arborescence needs at least one vertex");
    }
    let mut r = rng(seed);
    let mut d = Digraph::new(n);
    for i in 1..n {
        d.insert_arc(i, r.gen_range(0..i));
    }
    Ok(d)
}

/// Random in-arborescence rooted at 0 in which every vertex has in-degree
/// at most 2, so every vertex is subcubic.
pub fn subcubic_inarborescence(n: usize, seed: u64) -> Result<Digraph> {
    if n == 0 {
        return domain("arborescence needs at least one vertex");
    }
    let mut r = rng(seed);
    let mut d = Digraph::new(n);
    for i in 1..n {
        let open: Vec<usize> = (0..i).filter(|&p| d.in_degree(p) < 2).collect();
        let parent = *open
            .choose(&mut r)
            .expect("a binary tree always has an open slot");
        d.insert_arc(i, parent);
    }
    Ok(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn forced_and_profiles() {
        assert_eq!(min_degree_graph(6, 5, 3).unwrap(), Graph::complete(6));
        assert!(min_degree_graph(5, 5, 0).is_err());
        for seed in 0..20 {
            assert!(min_degree_graph(15, 4, seed).unwrap().degree_profile().min >= 4);
            assert!(min_outdegree_digraph(12, 3, seed).unwrap().min_out_degree() >= 3);
        }
    }

    #[test]
    fn trees_and_cacti() {
        assert_eq!(cactus(1, 7).unwrap().vertex_count(), 1);
        for seed in 0..20 {
            let c = cactus(9, seed).unwrap();
            assert!(c.is_connected());
            assert!(tree(8, seed).unwrap().is_tree());
            let a = inarborescence(7, seed).unwrap();
            assert_eq!(a.in_arborescence_root(), Some(0));
            let b = subcubic_inarborescence(9, seed).unwrap();
            assert_eq!(b.in_arborescence_root(), Some(0));
            assert!(b.vertices().all(|v| b.in_degree(v) <= 2));
        }
    }

    #[test]
    fn deterministic() {
        assert_eq!(
            min_degree_graph(12, 4, 9).unwrap(),
            min_degree_graph(12, 4, 9).unwrap()
        );
    }

    #[test]
    fn named_graphs() {
        let p = petersen();
        assert_eq!(p.edge_count(), 15);
        assert!(p.vertices().all(|v| p.degree(v) == 3));
        let i = icosahedron();
        assert_eq!(i.edge_count(), 30);
        assert!(i.vertices().all(|v| i.degree(v) == 5));
        assert_eq!(complete_bipartite(2, 3).edge_count(), 6);
    }
}
