//! Apex-minor and butterfly-minor finders for graphs and digraphs.

pub mod catalog;
pub mod cert;
pub mod connectivity;
pub mod digraph_finder;
pub mod error;
pub mod generate;
pub mod graph;
pub mod io;
pub mod iso;
pub mod minor;
pub mod oracle;
pub mod orderings;
pub mod outerplanar;
pub mod subdivision;
pub mod suite;

pub use error::{Error, Result};
pub use graph::{Digraph, Graph, VertexId};
