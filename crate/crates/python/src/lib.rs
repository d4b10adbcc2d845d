//! Python module `apex_minors`.

use pyo3::create_exception;
use pyo3::exceptions::{PyException, PyValueError};
use pyo3::prelude::*;

use apex_minors::catalog::{
    family_scheme, named_digraph, named_graph, scheme_covering, SchemeFamily,
};
use apex_minors::cert::{check_certificate, host_hash, CertKind, Certificate as CoreCertificate};
use apex_minors::digraph_finder::{
    find_apex_inarb_butterfly, find_two_block_wheel, find_wheel_subdivision, verify_butterfly,
    WheelTag,
};
use apex_minors::generate;
use apex_minors::io::{parse_edge_list, write_digraph, write_graph, EdgeList};
use apex_minors::minor::{find_apex_minor as core_find_apex_minor, verify_minor};
use apex_minors::oracle::{
    oracle_butterfly as core_oracle_butterfly, oracle_minor as core_oracle_minor,
    oracle_subdivision_digraph, oracle_subdivision_graph, ButterflyMode, ButterflyOp,
    ButterflyWitness, OracleOutcome, SearchBudget,
};
use apex_minors::subdivision::verify_subdivision_digraph;
use apex_minors::Error;

create_exception!(apex_minors, HypothesisError, PyException);
create_exception!(apex_minors, InvariantError, PyException);
create_exception!(apex_minors, CertificateError, PyException);

fn to_py(e: Error) -> PyErr {
    match e {
        Error::Hypothesis(_) => HypothesisError::new_err(e.to_string()),
        Error::Invariant(_) | Error::ContractStep(_) | Error::NotButterfly(..) => {
            InvariantError::new_err(e.to_string())
        }
        Error::Domain(_) | Error::Parse { .. } => PyValueError::new_err(e.to_string()),
    }
}

fn invariant(what: &str, msg: String) -> PyErr {
    InvariantError::new_err(format!("{what}: {msg}"))
}

/// Undirected simple graph on ids `0..n`.
#[pyclass(module = "apex_minors", from_py_object)]
#[derive(Clone)]
pub struct Graph {
    inner: apex_minors::Graph,
}

#[pymethods]
impl Graph {
    #[new]
    #[pyo3(signature = (n, edges = Vec::new()))]
    fn new(n: usize, edges: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(Graph {
            inner: apex_minors::Graph::from_edges(n, &edges).map_err(to_py)?,
        })
    }

    /// `K5`, `K2,3`, `C6`, `P4`, `petersen`, `icosahedron`; a trailing `+` adds an apex.
    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        Ok(Graph {
            inner: named_graph(name).map_err(to_py)?,
        })
    }

    /// A member of a pattern family: tree, cactus, snake, fan, universal, binary.
    #[staticmethod]
    #[pyo3(signature = (family, size, seed = 0))]
    fn family(family: &str, size: usize, seed: u64) -> PyResult<Self> {
        let fam: SchemeFamily = family.parse().map_err(to_py)?;
        Ok(Graph {
            inner: family_scheme(fam, size, seed)
                .map_err(to_py)?
                .host()
                .clone(),
        })
    }

    /// Random graph with minimum degree at least `t`.
    #[staticmethod]
    #[pyo3(signature = (n, t, seed = 0))]
    fn min_degree(n: usize, t: usize, seed: u64) -> PyResult<Self> {
        Ok(Graph {
            inner: generate::min_degree_graph(n, t, seed).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Graph {
            inner: apex_minors::io::parse_graph(text).map_err(to_py)?,
        })
    }

    fn to_text(&self) -> String {
        write_graph(&self.inner)
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    fn vertices(&self) -> Vec<usize> {
        self.inner.vertices().collect()
    }

    fn edges(&self) -> Vec<(usize, usize)> {
        self.inner.edges()
    }

    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.inner.has_edge(u, v)
    }

    fn degree(&self, v: usize) -> usize {
        self.inner.degree(v)
    }

    fn contract_edge(&self, u: usize, v: usize) -> PyResult<Self> {
        Ok(Graph {
            inner: self.inner.contract_edge(u, v).map_err(to_py)?,
        })
    }

    /// Copy with a new vertex adjacent to everything, at id `capacity`.
    fn with_apex(&self) -> Self {
        Graph {
            inner: self.inner.with_apex(),
        }
    }

    fn digest(&self) -> String {
        host_hash(&EdgeList::Undirected(self.inner.clone()))
    }

    fn __repr__(&self) -> String {
        format!(
            "Graph(n={}, m={})",
            self.inner.vertex_count(),
            self.inner.edge_count()
        )
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

/// Simple digraph on ids `0..n`.
#[pyclass(module = "apex_minors", from_py_object)]
#[derive(Clone)]
pub struct Digraph {
    inner: apex_minors::Digraph,
}

#[pymethods]
impl Digraph {
    #[new]
    #[pyo3(signature = (n, arcs = Vec::new()))]
    fn new(n: usize, arcs: Vec<(usize, usize)>) -> PyResult<Self> {
        Ok(Digraph {
            inner: apex_minors::Digraph::from_arcs(n, &arcs).map_err(to_py)?,
        })
    }

    /// `C5`, `C5+`, `W1-4`, `W2-4`, `instar-n`, `inpath-n`, `inarb-n-seed`, `bi-<graph>`.
    #[staticmethod]
    fn named(name: &str) -> PyResult<Self> {
        Ok(Digraph {
            inner: named_digraph(name).map_err(to_py)?,
        })
    }

    /// Random digraph with minimum out-degree at least `t`.
    #[staticmethod]
    #[pyo3(signature = (n, t, seed = 0))]
    fn min_outdegree(n: usize, t: usize, seed: u64) -> PyResult<Self> {
        Ok(Digraph {
            inner: generate::min_outdegree_digraph(n, t, seed).map_err(to_py)?,
        })
    }

    /// Random in-arborescence on `n` vertices.
    #[staticmethod]
    #[pyo3(signature = (n, seed = 0))]
    fn inarborescence(n: usize, seed: u64) -> PyResult<Self> {
        Ok(Digraph {
            inner: generate::inarborescence(n, seed).map_err(to_py)?,
        })
    }

    #[staticmethod]
    fn biorientation(g: &Graph) -> Self {
        Digraph {
            inner: apex_minors::Digraph::biorientation(&g.inner),
        }
    }

    #[staticmethod]
    fn parse(text: &str) -> PyResult<Self> {
        Ok(Digraph {
            inner: apex_minors::io::parse_digraph(text).map_err(to_py)?,
        })
    }

    fn to_text(&self) -> String {
        write_digraph(&self.inner)
    }

    #[getter]
    fn vertex_count(&self) -> usize {
        self.inner.vertex_count()
    }

    #[getter]
    fn arc_count(&self) -> usize {
        self.inner.arc_count()
    }

    fn vertices(&self) -> Vec<usize> {
        self.inner.vertices().collect()
    }

    fn arcs(&self) -> Vec<(usize, usize)> {
        self.inner.arcs()
    }

    fn has_arc(&self, u: usize, v: usize) -> bool {
        self.inner.has_arc(u, v)
    }

    fn out_degree(&self, v: usize) -> usize {
        self.inner.out_degree(v)
    }

    fn in_degree(&self, v: usize) -> usize {
        self.inner.in_degree(v)
    }

    fn is_butterfly_contractible(&self, u: usize, v: usize) -> bool {
        self.inner.is_butterfly_contractible(u, v)
    }

    fn butterfly_contract(&self, u: usize, v: usize) -> PyResult<Self> {
        Ok(Digraph {
            inner: self.inner.butterfly_contract(u, v).map_err(to_py)?,
        })
    }

    fn strong_components(&self) -> Vec<Vec<usize>> {
        self.inner.strong_components()
    }

    fn with_apex_source(&self) -> Self {
        Digraph {
            inner: self.inner.with_apex_source(),
        }
    }

    fn digest(&self) -> String {
        host_hash(&EdgeList::Directed(self.inner.clone()))
    }

    fn __repr__(&self) -> String {
        format!(
            "Digraph(n={}, m={})",
            self.inner.vertex_count(),
            self.inner.arc_count()
        )
    }

    fn __eq__(&self, other: &Self) -> bool {
        self.inner == other.inner
    }
}

/// Serializable witness tied to a host by digest.
#[pyclass(module = "apex_minors", from_py_object)]
#[derive(Clone)]
pub struct Certificate {
    inner: CoreCertificate,
}

#[pymethods]
impl Certificate {
    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        Ok(Certificate {
            inner: CoreCertificate::from_json(text).map_err(to_py)?,
        })
    }

    fn to_json(&self) -> String {
        self.inner.to_json()
    }

    /// `"minor"`, `"butterfly"` or `"subdivision"`.
    #[getter]
    fn kind(&self) -> &'static str {
        match self.inner.kind {
            CertKind::Minor => "minor",
            CertKind::Butterfly => "butterfly",
            CertKind::Subdivision => "subdivision",
        }
    }

    #[getter]
    fn directed(&self) -> bool {
        self.inner.directed
    }

    #[getter]
    fn host_hash(&self) -> String {
        self.inner.host_hash.clone()
    }

    #[getter]
    fn apex(&self) -> Option<usize> {
        self.inner.apex
    }

    #[getter]
    fn branch_sets(&self) -> Option<Vec<Vec<usize>>> {
        self.inner.branch_sets.clone()
    }

    /// `"W1"` or `"W2"` for wheel certificates.
    #[getter]
    fn tag(&self) -> Option<&'static str> {
        self.inner.tag.map(|t| match t {
            WheelTag::W1 => "W1",
            WheelTag::W2 => "W2",
        })
    }

    /// The pattern as a `Graph` or `Digraph`.
    fn pattern(&self, py: Python<'_>) -> PyResult<Py<PyAny>> {
        if self.inner.directed {
            let d = self.inner.pattern_digraph().map_err(to_py)?;
            Ok(Py::new(py, Digraph { inner: d })?.into_any())
        } else {
            let g = self.inner.pattern_graph().map_err(to_py)?;
            Ok(Py::new(py, Graph { inner: g })?.into_any())
        }
    }

    /// Raises `CertificateError` unless this certificate is valid for `host`.
    fn check(&self, host: &Bound<'_, PyAny>) -> PyResult<()> {
        check_certificate(&edge_list(host)?, &self.inner).map_err(CertificateError::new_err)
    }

    fn __repr__(&self) -> String {
        format!(
            "Certificate(kind={:?}, directed={})",
            self.kind(),
            self.inner.directed
        )
    }
}

fn edge_list(host: &Bound<'_, PyAny>) -> PyResult<EdgeList> {
    if let Ok(g) = host.cast::<Graph>() {
        return Ok(EdgeList::Undirected(g.borrow().inner.clone()));
    }
    if let Ok(d) = host.cast::<Digraph>() {
        return Ok(EdgeList::Directed(d.borrow().inner.clone()));
    }
    Err(PyValueError::new_err("expected a Graph or Digraph"))
}

/// Parses the text edge-list format into a `Graph` or `Digraph`.
#[pyfunction]
fn parse(py: Python<'_>, text: &str) -> PyResult<Py<PyAny>> {
    Ok(match parse_edge_list(text).map_err(to_py)? {
        EdgeList::Undirected(g) => Py::new(py, Graph { inner: g })?.into_any(),
        EdgeList::Directed(d) => Py::new(py, Digraph { inner: d })?.into_any(),
    })
}

/// Finds `H⁺` as a minor of `g`, where `H` is either `pattern` or a family
/// member `(family, size, seed)`. Raises `HypothesisError` when the degree
/// condition fails.
#[pyfunction]
#[pyo3(signature = (g, pattern = None, family = None, size = 0, seed = 0))]
fn find_apex_minor(
    g: &Graph,
    pattern: Option<&Graph>,
    family: Option<&str>,
    size: usize,
    seed: u64,
) -> PyResult<Certificate> {
    let (scheme, wanted) = match (pattern, family) {
        (Some(p), None) => (scheme_covering(&p.inner).map_err(to_py)?, p.inner.clone()),
        (None, Some(f)) => {
            let s = family_scheme(f.parse().map_err(to_py)?, size, seed).map_err(to_py)?;
            let h = s.host().clone();
            (s, h)
        }
        _ => {
            return Err(PyValueError::new_err(
                "give exactly one of `pattern` and `family`",
            ))
        }
    };
    let cert = core_find_apex_minor(&g.inner, scheme.as_ref()).map_err(to_py)?;
    if scheme.host().capacity() != wanted.capacity() {
        return Err(invariant(
            "minor certificate",
            "scheme host relabelled the pattern".into(),
        ));
    }
    let pat = wanted.with_apex();
    verify_minor(&g.inner, &pat, &cert.embedding).map_err(|e| invariant("minor certificate", e))?;
    Ok(Certificate {
        inner: CoreCertificate::minor(&g.inner, &pat, &cert.embedding),
    })
}

/// Finds the in-arborescence `tree` with an apex source as a butterfly minor of `d`.
#[pyfunction]
fn find_butterfly(d: &Digraph, tree: &Digraph) -> PyResult<Certificate> {
    let cert = find_apex_inarb_butterfly(&d.inner, &tree.inner).map_err(to_py)?;
    verify_butterfly(&d.inner, &cert.pattern, &cert.embedding)
        .map_err(|e| invariant("butterfly certificate", e))?;
    Ok(Certificate {
        inner: CoreCertificate::butterfly(&d.inner, &cert.pattern, &cert.embedding),
    })
}

/// Finds a directed wheel subdivision in `d`. `extract` may be `"cplus"` or `"w2"`.
#[pyfunction]
#[pyo3(signature = (d, t, extract = None))]
fn find_wheel(d: &Digraph, t: usize, extract: Option<&str>) -> PyResult<Certificate> {
    let cert = find_wheel_subdivision(&d.inner, t).map_err(to_py)?;
    let (pattern, emb, tag) = match extract {
        None => (cert.pattern.clone(), cert.embedding.clone(), Some(cert.tag)),
        Some("cplus") => {
            let (p, e) = cert.extract_c_plus().map_err(to_py)?;
            (p, e, None)
        }
        Some("w2") => {
            let (p, e) = cert.extract_w2().map_err(to_py)?;
            (p, e, None)
        }
        Some(other) => {
            return Err(PyValueError::new_err(format!(
                "unknown extraction `{other}`"
            )))
        }
    };
    verify_subdivision_digraph(&d.inner, &pattern, &emb)
        .map_err(|e| invariant("wheel certificate", e))?;
    Ok(Certificate {
        inner: CoreCertificate::subdivision_digraph(&d.inner, &pattern, &emb, tag),
    })
}

/// Finds a two-block wheel subdivision with blocks of sizes `k1` and `k2`.
#[pyfunction]
fn find_two_block(d: &Digraph, k1: usize, k2: usize) -> PyResult<Certificate> {
    let cert = find_two_block_wheel(&d.inner, k1, k2).map_err(to_py)?;
    verify_subdivision_digraph(&d.inner, &cert.pattern, &cert.embedding)
        .map_err(|e| invariant("two-block certificate", e))?;
    Ok(Certificate {
        inner: CoreCertificate::subdivision_digraph(&d.inner, &cert.pattern, &cert.embedding, None),
    })
}

fn outcome<T>(
    o: OracleOutcome<T>,
    f: impl FnOnce(T) -> PyResult<Py<PyAny>>,
) -> PyResult<(&'static str, Option<Py<PyAny>>)> {
    Ok(match o {
        OracleOutcome::Yes(w) => ("yes", Some(f(w)?)),
        OracleOutcome::No => ("no", None),
        OracleOutcome::BudgetExceeded => ("budget_exceeded", None),
    })
}

fn budget(nodes: u64, millis: u64) -> PyResult<SearchBudget> {
    SearchBudget::new(nodes, millis).map_err(to_py)
}

/// Exhaustive minor test. Returns `(answer, certificate or None)` where the
/// answer is `"yes"`, `"no"` or `"budget_exceeded"`.
#[pyfunction]
#[pyo3(signature = (g, h, budget_nodes = 10_000_000, budget_ms = 60_000))]
fn oracle_minor(
    py: Python<'_>,
    g: &Graph,
    h: &Graph,
    budget_nodes: u64,
    budget_ms: u64,
) -> PyResult<(&'static str, Option<Py<PyAny>>)> {
    let o =
        core_oracle_minor(&g.inner, &h.inner, &budget(budget_nodes, budget_ms)?).map_err(to_py)?;
    outcome(o, |emb| {
        let c = CoreCertificate::minor(&g.inner, &h.inner, &emb);
        Ok(Py::new(py, Certificate { inner: c })?.into_any())
    })
}

/// Exhaustive topological-minor test on two graphs or two digraphs.
#[pyfunction]
#[pyo3(signature = (host, pattern, budget_nodes = 10_000_000, budget_ms = 60_000))]
fn oracle_subdivision(
    py: Python<'_>,
    host: &Bound<'_, PyAny>,
    pattern: &Bound<'_, PyAny>,
    budget_nodes: u64,
    budget_ms: u64,
) -> PyResult<(&'static str, Option<Py<PyAny>>)> {
    let b = budget(budget_nodes, budget_ms)?;
    match (edge_list(host)?, edge_list(pattern)?) {
        (EdgeList::Undirected(g), EdgeList::Undirected(p)) => {
            outcome(oracle_subdivision_graph(&g, &p, &b).map_err(to_py)?, |e| {
                Ok(Py::new(
                    py,
                    Certificate {
                        inner: CoreCertificate::subdivision_graph(&g, &p, &e),
                    },
                )?
                .into_any())
            })
        }
        (EdgeList::Directed(d), EdgeList::Directed(p)) => outcome(
            oracle_subdivision_digraph(&d, &p, &b).map_err(to_py)?,
            |e| {
                let c = CoreCertificate::subdivision_digraph(&d, &p, &e, None);
                Ok(Py::new(py, Certificate { inner: c })?.into_any())
            },
        ),
        _ => Err(PyValueError::new_err(
            "host and pattern must both be directed or both undirected",
        )),
    }
}

/// Exhaustive butterfly-minor test. `mode="branch-sets"` yields a
/// certificate; `mode="operations"` yields a list of `(op, u[, v])` tuples.
#[pyfunction]
#[pyo3(signature = (d, pattern, mode = "branch-sets", budget_nodes = 10_000_000, budget_ms = 60_000))]
fn oracle_butterfly(
    py: Python<'_>,
    d: &Digraph,
    pattern: &Digraph,
    mode: &str,
    budget_nodes: u64,
    budget_ms: u64,
) -> PyResult<(&'static str, Option<Py<PyAny>>)> {
    let mode = match mode {
        "branch-sets" => ButterflyMode::BranchSet,
        "operations" => ButterflyMode::OperationSequence,
        other => return Err(PyValueError::new_err(format!("unknown mode `{other}`"))),
    };
    let o = core_oracle_butterfly(
        &d.inner,
        &pattern.inner,
        &budget(budget_nodes, budget_ms)?,
        mode,
    )
    .map_err(to_py)?;
    outcome(o, |w| match w {
        ButterflyWitness::Model(emb) => {
            let c = CoreCertificate::butterfly(&d.inner, &pattern.inner, &emb);
            Ok(Py::new(py, Certificate { inner: c })?.into_any())
        }
        ButterflyWitness::Sequence(ops) => {
            let items: Vec<(&str, usize, Option<usize>)> = ops
                .into_iter()
                .map(|op| match op {
                    ButterflyOp::DeleteVertex(v) => ("delete_vertex", v, None),
                    ButterflyOp::DeleteArc(u, v) => ("delete_arc", u, Some(v)),
                    ButterflyOp::Contract(u, v) => ("contract", u, Some(v)),
                })
                .collect();
            Ok(items.into_pyobject(py)?.into_any().unbind())
        }
    })
}

#[pymodule]
#[pyo3(name = "apex_minors")]
fn apex_minors_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Graph>()?;
    m.add_class::<Digraph>()?;
    m.add_class::<Certificate>()?;
    m.add_function(wrap_pyfunction!(parse, m)?)?;
    m.add_function(wrap_pyfunction!(find_apex_minor, m)?)?;
    m.add_function(wrap_pyfunction!(find_butterfly, m)?)?;
    m.add_function(wrap_pyfunction!(find_wheel, m)?)?;
    m.add_function(wrap_pyfunction!(find_two_block, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_minor, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_subdivision, m)?)?;
    m.add_function(wrap_pyfunction!(oracle_butterfly, m)?)?;
    let py = m.py();
    m.add("HypothesisError", py.get_type::<HypothesisError>())?;
    m.add("InvariantError", py.get_type::<InvariantError>())?;
    m.add("CertificateError", py.get_type::<CertificateError>())?;
    Ok(())
}
