//! Subdivision (topological minor) certificates for graphs and digraphs.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::connectivity::Adjacency;
use crate::graph::{Digraph, Graph, VertexId};

/// Host path realizing the pattern edge or arc `(from, to)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathImage {
    pub from: VertexId,
    pub to: VertexId,
    pub path: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionEmbedding {
    /// Branch vertex of each pattern vertex, indexed by pattern id.
    pub branch: Vec<Option<VertexId>>,
    pub paths: Vec<PathImage>,
}

pub fn verify_subdivision_graph(
    g: &Graph,
    pattern: &Graph,
    emb: &SubdivisionEmbedding,
) -> Result<(), String> {
    let wanted: HashSet<(VertexId, VertexId)> = pattern.edges().into_iter().collect();
    verify(g, pattern.vertices().collect(), wanted, emb, false)
}

pub fn verify_subdivision_digraph(
    d: &Digraph,
    pattern: &Digraph,
    emb: &SubdivisionEmbedding,
) -> Result<(), String> {
    let wanted: HashSet<(VertexId, VertexId)> = pattern.arcs().into_iter().collect();
    verify(d, pattern.vertices().collect(), wanted, emb, true)
}

fn verify(
    host: &impl Adjacency,
    pattern_vertices: Vec<VertexId>,
    wanted: HashSet<(VertexId, VertexId)>,
    emb: &SubdivisionEmbedding,
    directed: bool,
) -> Result<(), String> {
    let mut branch_owner = vec![usize::MAX; host.capacity()];
    for &x in &pattern_vertices {
        let b = emb
            .branch
            .get(x)
            .copied()
            .flatten()
            .ok_or(format!("pattern vertex {x} has no branch vertex"))?;
        if !host.contains(b) {
            return Err(format!("branch vertex {b} is not a host vertex"));
        }
        if branch_owner[b] != usize::MAX {
            return Err(format!("branch vertex {b} used twice"));
        }
        branch_owner[b] = x;
    }
    let mut covered = HashSet::new();
    let mut interior = vec![false; host.capacity()];
    for p in &emb.paths {
        let k = if directed {
            (p.from, p.to)
        } else {
            (p.from.min(p.to), p.from.max(p.to))
        };
        if !wanted.contains(&k) {
            return Err(format!("path for non-edge {:?}", (p.from, p.to)));
        }
        if !covered.insert(k) {
            return Err(format!("edge {k:?} realized twice"));
        }
        let (Some(&first), Some(&last)) = (p.path.first(), p.path.last()) else {
            return Err("empty path".into());
        };
        if first != emb.branch[p.from].unwrap() || last != emb.branch[p.to].unwrap() {
            return Err(format!("path for {k:?} has wrong ends"));
        }
        if p.path.len() < 2 {
            return Err(format!("path for {k:?} is trivial"));
        }
        for w in p.path.windows(2) {
            if !host.successors(w[0]).contains(&w[1]) {
                return Err(format!("{}{} is not a host edge or arc", w[0], w[1]));
            }
        }
        for &v in &p.path[1..p.path.len() - 1] {
            if !host.contains(v) || branch_owner[v] != usize::MAX || interior[v] {
                return Err(format!("interior vertex {v} reused"));
            }
            interior[v] = true;
        }
    }
    if covered.len() != wanted.len() {
        return Err("some pattern edges are not realized".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triangle_in_c5() {
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]).unwrap();
        let k3 = Graph::complete(3);
        let emb = SubdivisionEmbedding {
            branch: vec![Some(0), Some(1), Some(3)],
            paths: vec![
                PathImage {
                    from: 0,
                    to: 1,
                    path: vec![0, 1],
                },
                PathImage {
                    from: 1,
                    to: 2,
                    path: vec![1, 2, 3],
                },
                PathImage {
                    from: 0,
                    to: 2,
                    path: vec![0, 4, 3],
                },
            ],
        };
        assert!(verify_subdivision_graph(&c5, &k3, &emb).is_ok());
        let mut bad = emb.clone();
        bad.paths[2].path = vec![0, 1, 2, 3];
        assert!(verify_subdivision_graph(&c5, &k3, &bad).is_err());
    }

    #[test]
    fn direction_matters() {
        let d = Digraph::from_arcs(3, &[(0, 1), (1, 2)]).unwrap();
        let p = Digraph::from_arcs(2, &[(0, 1)]).unwrap();
        let ok = SubdivisionEmbedding {
            branch: vec![Some(0), Some(2)],
            paths: vec![PathImage {
                from: 0,
                to: 1,
                path: vec![0, 1, 2],
            }],
        };
        assert!(verify_subdivision_digraph(&d, &p, &ok).is_ok());
        let rev = SubdivisionEmbedding {
            branch: vec![Some(2), Some(0)],
            paths: vec![PathImage {
                from: 0,
                to: 1,
                path: vec![2, 1, 0],
            }],
        };
        assert!(verify_subdivision_digraph(&d, &p, &rev).is_err());
    }
}
