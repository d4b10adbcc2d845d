//! Named patterns and the ordering schemes used for them.

use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::digraph_finder::{directed_wheel, WheelKind};
use crate::error::{Error, Result};
use crate::generate::{cactus, complete_bipartite, icosahedron, inarborescence, petersen, tree};
use crate::graph::{Digraph, Graph};
use crate::orderings::{
    scheme_for_binary_dual, scheme_for_cactus, scheme_for_snake, scheme_for_tree,
    scheme_for_universal, OrderingScheme,
};
use crate::outerplanar::{gen_family, recognize_maximal_outerplanar, weak_dual_tree, Family};

/// Families with a known contractible-ordering scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeFamily {
    /// Random tree on `n` vertices.
    Tree,
    /// Spanning completion of a random cactus on `n` vertices.
    Cactus,
    Snake,
    Fan,
    /// Height `h`, `3·2^h` vertices.
    Universal,
    /// Height `h ≥ 1`.
    Binary,
}

impl FromStr for SchemeFamily {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.to_ascii_lowercase().as_str() {
            "tree" => SchemeFamily::Tree,
            "cactus" => SchemeFamily::Cactus,
            "snake" => SchemeFamily::Snake,
            "fan" => SchemeFamily::Fan,
            "universal" => SchemeFamily::Universal,
            "binary" => SchemeFamily::Binary,
            _ => return Err(Error::Domain(format!("unknown pattern family `{s}`"))),
        })
    }
}

impl SchemeFamily {
    /// Whether the size parameter is a height rather than a vertex count.
    pub fn sized_by_height(self) -> bool {
        matches!(self, SchemeFamily::Universal | SchemeFamily::Binary)
    }
}

/// Scheme for a member of `family`; `size` is `n` or `h` as appropriate and
/// `seed` only matters for the random families.
pub fn family_scheme(
    family: SchemeFamily,
    size: usize,
    seed: u64,
) -> Result<Box<dyn OrderingScheme>> {
    Ok(match family {
        SchemeFamily::Tree => Box::new(scheme_for_tree(&tree(size, seed)?, 0)?),
        SchemeFamily::Cactus => scheme_for_cactus(&cactus(size, seed)?, 0)?.1,
        SchemeFamily::Snake => Box::new(scheme_for_snake(&gen_family(Family::Snake(size))?, 0, 1)?),
        SchemeFamily::Fan => Box::new(scheme_for_snake(&gen_family(Family::Fan(size))?, 0, 1)?),
        SchemeFamily::Universal => Box::new(scheme_for_universal(size)?.1),
        SchemeFamily::Binary => Box::new(scheme_for_binary_dual(size)?.1),
    })
}

/// A scheme whose host contains `h` as a spanning subgraph with the same ids:
/// trees directly, cacti through their fan completion, and maximal
/// outerplanar graphs with a path weak dual.
pub fn scheme_covering(h: &Graph) -> Result<Box<dyn OrderingScheme>> {
    let first = h
        .vertices()
        .next()
        .ok_or_else(|| Error::Hypothesis("pattern has no vertices".into()))?;
    if h.is_tree() {
        return Ok(Box::new(scheme_for_tree(h, first)?));
    }
    if let Some(ts) = recognize_maximal_outerplanar(h) {
        if weak_dual_tree(&ts).is_path() {
            if let Some((u, v)) = h
                .edges()
                .into_iter()
                .find(|&(u, v)| h.degree(u) == 2 || h.degree(v) == 2)
            {
                return Ok(Box::new(scheme_for_snake(h, u, v)?));
            }
        }
    }
    match scheme_for_cactus(h, first) {
        Ok((_, s)) => Ok(s),
        Err(_) => Err(Error::Hypothesis(
            "no ordering scheme known for this pattern (need a tree, cactus, or path-dual maximal outerplanar graph)"
                .into(),
        )),
    }
}

fn parse_suffix(s: &str, prefix: &str) -> Option<usize> {
    s.strip_prefix(prefix)?.parse().ok()
}

/// Undirected graphs by name: `Kn`, `Ka,b`, `Cn`, `Pn`, `petersen`,
/// `icosahedron`, each optionally followed by `+` for the apex extension.
pub fn named_graph(name: &str) -> Result<Graph> {
    if let Some(base) = name.strip_suffix('+') {
        return Ok(named_graph(base)?.with_apex());
    }
    let bad = || Error::Domain(format!("unknown graph name `{name}`"));
    let lower = name.to_ascii_lowercase();
    match lower.as_str() {
        "petersen" => return Ok(petersen()),
        "icosahedron" | "icosa" => return Ok(icosahedron()),
        _ => {}
    }
    if let Some(rest) = lower.strip_prefix('k') {
        if let Some((a, b)) = rest.split_once(',') {
            let (a, b) = (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?);
            return Ok(complete_bipartite(a, b));
        }
        return Ok(Graph::complete(rest.parse().map_err(|_| bad())?));
    }
    if let Some(n) = parse_suffix(&lower, "c") {
        if n < 3 {
            return Err(bad());
        }
        let e: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        return Graph::from_edges(n, &e);
    }
    if let Some(n) = parse_suffix(&lower, "p") {
        let e: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        return Graph::from_edges(n, &e);
    }
    Err(bad())
}

/// Digraphs by name: `Cn` (directed cycle), `Cn+` (apex source over it),
/// `W1-t`, `W2-t`, `instar-n`, `inpath-n`, `inarb-n-seed`, `bi-<graph>`.
pub fn named_digraph(name: &str) -> Result<Digraph> {
    let bad = || Error::Domain(format!("unknown digraph name `{name}`"));
    let lower = name.to_ascii_lowercase();
    if let Some(g) = lower.strip_prefix("bi-") {
        return Ok(Digraph::biorientation(&named_graph(g)?));
    }
    if let Some(t) = parse_suffix(&lower, "w1-") {
        return directed_wheel(WheelKind::W1, t);
    }
    if let Some(t) = parse_suffix(&lower, "w2-") {
        return directed_wheel(WheelKind::W2, t);
    }
    if let Some(n) = parse_suffix(&lower, "instar-") {
        let arcs: Vec<_> = (1..n).map(|i| (i, 0)).collect();
        return Digraph::from_arcs(n.max(1), &arcs);
    }
    if let Some(n) = parse_suffix(&lower, "inpath-") {
        let arcs: Vec<_> = (1..n).map(|i| (i, i - 1)).collect();
        return Digraph::from_arcs(n.max(1), &arcs);
    }
    if let Some(rest) = lower.strip_prefix("inarb-") {
        let (n, seed) = rest.split_once('-').ok_or_else(bad)?;
        return inarborescence(
            n.parse().map_err(|_| bad())?,
            seed.parse().map_err(|_| bad())?,
        );
    }
    if let Some(base) = lower.strip_suffix('+') {
        if let Some(t) = parse_suffix(base, "c") {
            return directed_wheel(WheelKind::CPlus, t);
        }
    }
    if let Some(n) = parse_suffix(&lower, "c") {
        if n < 2 {
            return Err(bad());
        }
        return Ok(Digraph::directed_cycle(n));
    }
    Err(bad())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names() {
        assert_eq!(named_graph("K5").unwrap().edge_count(), 10);
        let k23p = named_graph("K2,3+").unwrap();
        assert_eq!((k23p.vertex_count(), k23p.edge_count()), (6, 11));
        assert_eq!(named_graph("icosahedron").unwrap().edge_count(), 30);
        assert_eq!(named_graph("C4").unwrap().edge_count(), 4);
        assert!(named_graph("Q3").is_err());
        assert_eq!(named_digraph("C3").unwrap().arc_count(), 3);
        assert_eq!(named_digraph("C3+").unwrap().arc_count(), 6);
        assert_eq!(named_digraph("W1-3").unwrap().arc_count(), 7);
        assert_eq!(
            named_digraph("instar-4").unwrap().in_arborescence_root(),
            Some(0)
        );
        assert_eq!(named_digraph("bi-K3").unwrap().arc_count(), 6);
    }

    #[test]
    fn schemes() {
        for (f, s) in [
            (SchemeFamily::Tree, 5),
            (SchemeFamily::Cactus, 6),
            (SchemeFamily::Snake, 6),
            (SchemeFamily::Fan, 5),
            (SchemeFamily::Universal, 1),
            (SchemeFamily::Binary, 2),
        ] {
            let sc = family_scheme(f, s, 1).unwrap();
            assert!(sc.host().vertex_count() >= 3, "{f:?}");
        }
        let c5 = named_graph("C5").unwrap();
        let sc = scheme_covering(&c5).unwrap();
        assert!(c5.edges().iter().all(|&(u, v)| sc.host().has_edge(u, v)));
        assert!(scheme_covering(&named_graph("K4").unwrap()).is_err());
    }
}
