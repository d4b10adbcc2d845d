//! Edge-list text format.
//!
//! ```text
//! # comment
//! n 4
//! 0 1        undirected edge
//! 2 > 3      arc
//! ```
//! A file is either all edges or all arcs.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EdgeList {
    Undirected(Graph),
    Directed(Digraph),
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn parse_edge_list(text: &str) -> Result<EdgeList> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    let mut arcs = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let num = |s: &str| -> Result<usize> {
            s.parse::<usize>()
                .map_err(|_| parse_err(line_no, format!("expected a vertex id, found `{s}`")))
        };
        match tokens.as_slice() {
            ["n", count] => {
                if n.is_some() {
                    return Err(parse_err(line_no, "duplicate header"));
                }
                n = Some(num(count)?);
            }
            [u, ">", v] => arcs.push((line_no, num(u)?, num(v)?)),
            [u, v] => edges.push((line_no, num(u)?, num(v)?)),
            _ => return Err(parse_err(line_no, format!("unrecognised line `{line}`"))),
        }
    }
    let n = n.ok_or_else(|| parse_err(0, "missing `n <count>` header"))?;
    if !edges.is_empty() && !arcs.is_empty() {
        return Err(parse_err(arcs[0].0.min(edges[0].0), "mixed edges and arcs"));
    }
    if !arcs.is_empty() {
        let mut d = Digraph::new(n);
        for (line, u, v) in arcs {
            d.add_arc(u, v)
                .map_err(|e| parse_err(line, e.to_string()))?;
        }
        Ok(EdgeList::Directed(d))
    } else {
        let mut g = Graph::new(n);
        for (line, u, v) in edges {
            g.add_edge(u, v)
                .map_err(|e| parse_err(line, e.to_string()))?;
        }
        Ok(EdgeList::Undirected(g))
    }
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    match parse_edge_list(text)? {
        EdgeList::Undirected(g) => Ok(g),
        EdgeList::Directed(_) => Err(parse_err(0, "expected an undirected edge list")),
    }
}

pub fn parse_digraph(text: &str) -> Result<Digraph> {
    match parse_edge_list(text)? {
        EdgeList::Directed(d) => Ok(d),
        // an edgeless file parses as undirected; accept it as an arcless digraph
        EdgeList::Undirected(g) if g.edge_count() == 0 => Ok(Digraph::new(g.capacity())),
        EdgeList::Undirected(_) => Err(parse_err(0, "expected a directed edge list")),
    }
}

/// Writes the graph compacted to ids `0..k`.
pub fn write_graph(g: &Graph) -> String {
    let (g, _) = g.compact();
    let mut s = format!("n {}\n", g.capacity());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

pub fn write_digraph(d: &Digraph) -> String {
    let (d, _) = d.compact();
    let mut s = format!("n {}\n", d.capacity());
    for (u, v) in d.arcs() {
        let _ = writeln!(s, "{u} > {v}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_both_kinds() {
        let g = parse_graph("# triangle\nn 3\n0 1\n1 2\n0 2\n").unwrap();
        assert_eq!(g.edge_count(), 3);
        let d = parse_digraph("n 2\n0 > 1\n1 > 0\n").unwrap();
        assert_eq!(d.arc_count(), 2);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(parse_edge_list("0 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(
            parse_edge_list("n 2\n0 0\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("n 3\n0 1\n1 > 2\n"),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            parse_edge_list("n 2\n0 5\n"),
            Err(Error::Parse { .. })
        ));
    }

    #[test]
    fn write_then_parse() {
        let g = Graph::complete(4);
        assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
        let d = Digraph::directed_cycle(4);
        assert_eq!(parse_digraph(&write_digraph(&d)).unwrap(), d);
    }
}
