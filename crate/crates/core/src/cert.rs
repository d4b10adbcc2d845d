//! JSON certificates tying an embedding to a host by digest.

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::digraph_finder::{
    verify_butterfly, ArcImage, ButterflyBranch, ButterflyEmbedding, WheelTag,
};
use crate::error::{Error, Result};
use crate::graph::{Digraph, Graph, VertexId};
use crate::io::EdgeList;
use crate::minor::{verify_minor, MinorEmbedding};
use crate::subdivision::{
    verify_subdivision_digraph, verify_subdivision_graph, PathImage, SubdivisionEmbedding,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CertKind {
    Minor,
    Butterfly,
    Subdivision,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertKind,
    pub directed: bool,
    /// Serialized `Graph` or `Digraph`, depending on `directed`.
    pub pattern: Value,
    pub host_hash: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch_sets: Option<Vec<Vec<VertexId>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub apex: Option<VertexId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parts: Option<Vec<ButterflyBranch>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arcs: Option<Vec<ArcImage>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub branch: Option<Vec<Option<VertexId>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub paths: Option<Vec<PathImage>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tag: Option<WheelTag>,
}

fn digest<T: Serialize>(x: &T) -> String {
    let bytes = serde_json::to_vec(x).expect("graphs serialize");
    hex::encode(Sha256::digest(bytes))
}

/// SHA-256 of the host's serialized form (capacity, live vertices, sorted edges).
pub fn graph_hash(g: &Graph) -> String {
    digest(g)
}

pub fn digraph_hash(d: &Digraph) -> String {
    digest(d)
}

pub fn host_hash(host: &EdgeList) -> String {
    match host {
        EdgeList::Undirected(g) => graph_hash(g),
        EdgeList::Directed(d) => digraph_hash(d),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("graphs serialize")
}

impl Certificate {
    fn bare(kind: CertKind, directed: bool, pattern: Value, host_hash: String) -> Self {
        Certificate {
            kind,
            directed,
            pattern,
            host_hash,
            branch_sets: None,
            apex: None,
            parts: None,
            arcs: None,
            branch: None,
            paths: None,
            tag: None,
        }
    }

    pub fn minor(host: &Graph, pattern: &Graph, emb: &MinorEmbedding) -> Self {
        let mut c = Self::bare(CertKind::Minor, false, to_value(pattern), graph_hash(host));
        c.branch_sets = Some(emb.branch_sets.clone());
        c.apex = emb.apex;
        c
    }

    pub fn butterfly(host: &Digraph, pattern: &Digraph, emb: &ButterflyEmbedding) -> Self {
        let mut c = Self::bare(
            CertKind::Butterfly,
            true,
            to_value(pattern),
            digraph_hash(host),
        );
        c.parts = Some(emb.branches.clone());
        c.arcs = Some(emb.arcs.clone());
        c.apex = emb.apex;
        c
    }

    pub fn subdivision_graph(host: &Graph, pattern: &Graph, emb: &SubdivisionEmbedding) -> Self {
        let mut c = Self::bare(
            CertKind::Subdivision,
            false,
            to_value(pattern),
            graph_hash(host),
        );
        c.branch = Some(emb.branch.clone());
        c.paths = Some(emb.paths.clone());
        c
    }

    pub fn subdivision_digraph(
        host: &Digraph,
        pattern: &Digraph,
        emb: &SubdivisionEmbedding,
        tag: Option<WheelTag>,
    ) -> Self {
        let mut c = Self::bare(
            CertKind::Subdivision,
            true,
            to_value(pattern),
            digraph_hash(host),
        );
        c.branch = Some(emb.branch.clone());
        c.paths = Some(emb.paths.clone());
        c.tag = tag;
        c
    }

    pub fn pattern_graph(&self) -> Result<Graph> {
        if self.directed {
            return Err(Error::Domain("certificate pattern is directed".into()));
        }
        serde_json::from_value(self.pattern.clone())
            .map_err(|e| Error::Domain(format!("bad pattern: {e}")))
    }

    pub fn pattern_digraph(&self) -> Result<Digraph> {
        if !self.directed {
            return Err(Error::Domain("certificate pattern is undirected".into()));
        }
        serde_json::from_value(self.pattern.clone())
            .map_err(|e| Error::Domain(format!("bad pattern: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Domain(format!("bad certificate: {e}")))
    }
}

fn missing(field: &str) -> String {
    format!("certificate lacks `{field}`")
}

/// Checks `cert` against `host`: digest, orientation, then the matching verifier.
pub fn check_certificate(host: &EdgeList, cert: &Certificate) -> std::result::Result<(), String> {
    if host_hash(host) != cert.host_hash {
        return Err("host digest does not match".into());
    }
    match (host, cert.kind) {
        (EdgeList::Undirected(g), CertKind::Minor) => {
            let p = cert.pattern_graph().map_err(|e| e.to_string())?;
            let emb = MinorEmbedding {
                branch_sets: cert
                    .branch_sets
                    .clone()
                    .ok_or_else(|| missing("branch_sets"))?,
                apex: cert.apex,
            };
            verify_minor(g, &p, &emb)
        }
        (EdgeList::Directed(d), CertKind::Butterfly) => {
            let p = cert.pattern_digraph().map_err(|e| e.to_string())?;
            let emb = ButterflyEmbedding {
                branches: cert.parts.clone().ok_or_else(|| missing("parts"))?,
                arcs: cert.arcs.clone().ok_or_else(|| missing("arcs"))?,
                apex: cert.apex,
            };
            verify_butterfly(d, &p, &emb)
        }
        (_, CertKind::Subdivision) => {
            let emb = SubdivisionEmbedding {
                branch: cert.branch.clone().ok_or_else(|| missing("branch"))?,
                paths: cert.paths.clone().ok_or_else(|| missing("paths"))?,
            };
            match host {
                EdgeList::Undirected(g) => verify_subdivision_graph(
                    g,
                    &cert.pattern_graph().map_err(|e| e.to_string())?,
                    &emb,
                ),
                EdgeList::Directed(d) => verify_subdivision_digraph(
                    d,
                    &cert.pattern_digraph().map_err(|e| e.to_string())?,
                    &emb,
                ),
            }
        }
        (_, kind) => Err(format!(
            "{kind:?} certificate does not fit this host's orientation"
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::digraph_finder::{find_apex_inarb_butterfly, find_wheel_subdivision};
    use crate::generate::{inarborescence, min_degree_graph, min_outdegree_digraph, tree};
    use crate::minor::find_apex_minor;
    use crate::orderings::scheme_for_tree;

    #[test]
    fn round_trips_and_checks() {
        let g = min_degree_graph(12, 4, 3).unwrap();
        let t = tree(4, 3).unwrap();
        let scheme = scheme_for_tree(&t, 0).unwrap();
        let m = find_apex_minor(&g, &scheme).unwrap();
        let c = Certificate::minor(&g, &t.with_apex(), &m.embedding);
        let back = Certificate::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        let host = EdgeList::Undirected(g.clone());
        check_certificate(&host, &back).unwrap();

        let mut other = g.clone();
        let (u, v) = other.edges()[0];
        other.remove_edge(u, v);
        assert!(check_certificate(&EdgeList::Undirected(other), &c).is_err());

        let mut bad = c.clone();
        bad.branch_sets.as_mut().unwrap()[0].clear();
        assert!(check_certificate(&host, &bad).is_err());
        assert!(check_certificate(&EdgeList::Directed(Digraph::biorientation(&g)), &c).is_err());
    }

    #[test]
    fn directed_certificates() {
        let d = min_outdegree_digraph(10, 3, 5).unwrap();
        let host = EdgeList::Directed(d.clone());
        let a = inarborescence(3, 5).unwrap();
        let b = find_apex_inarb_butterfly(&d, &a).unwrap();
        let c = Certificate::butterfly(&d, &b.pattern, &b.embedding);
        check_certificate(&host, &Certificate::from_json(&c.to_json()).unwrap()).unwrap();
        let w = find_wheel_subdivision(&d, 3).unwrap();
        let c = Certificate::subdivision_digraph(&d, &w.pattern, &w.embedding, Some(w.tag));
        check_certificate(&host, &Certificate::from_json(&c.to_json()).unwrap()).unwrap();
    }
}
