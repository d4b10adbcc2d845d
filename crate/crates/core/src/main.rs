use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use apex_minors::catalog::{
    family_scheme, named_digraph, named_graph, scheme_covering, SchemeFamily,
};
use apex_minors::cert::{check_certificate, host_hash, Certificate};
use apex_minors::digraph_finder::{
    find_apex_inarb_butterfly, find_two_block_wheel, find_wheel_subdivision, verify_butterfly,
};
use apex_minors::generate::{
    cactus, inarborescence, min_degree_graph, min_outdegree_digraph, tree,
};
use apex_minors::io::{parse_edge_list, write_digraph, write_graph, EdgeList};
use apex_minors::minor::{find_apex_minor, verify_minor, FinderStats};
use apex_minors::oracle::{
    oracle_butterfly, oracle_minor, oracle_subdivision_digraph, oracle_subdivision_graph,
    replay_butterfly_ops, small_isomorphic, ButterflyMode, ButterflyWitness, OracleOutcome,
    SearchBudget,
};
use apex_minors::orderings::{materialize, verify_contractible, OrderingScheme};
use apex_minors::outerplanar::{gen_family, Family};
use apex_minors::subdivision::{verify_subdivision_digraph, verify_subdivision_graph};
use apex_minors::{Digraph, Error, Graph};

#[derive(Parser)]
#[command(
    name = "apex-minors",
    version,
    about = "Find and verify apex minors, butterfly minors and directed wheels"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 10_000_000)]
    budget_nodes: u64,
    #[arg(long, global = true, default_value_t = 60_000)]
    budget_ms: u64,
    /// Write the main artifact (edge list or certificate) here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenKind {
    Universal,
    Binary,
    Snake,
    Fan,
    Tree,
    Cactus,
    MinDegree,
    MinOutdegree,
    Inarb,
    Named,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleMode {
    Minor,
    Subdivision,
    ButterflyOps,
    ButterflySets,
}

#[derive(Clone, Copy, ValueEnum)]
enum Extract {
    Cplus,
    W2,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit a generated instance as an edge list.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        h: usize,
        /// Minimum (out-)degree for the random host generators.
        #[arg(long, default_value_t = 3)]
        t: usize,
        /// Graph or digraph name for `--kind named`.
        #[arg(long)]
        name: Option<String>,
        #[arg(long)]
        directed: bool,
    },
    /// Check the contractible-ordering definition on a scheme's closure or an explicit set.
    VerifyOrdering {
        /// Family name (tree, cactus, snake, fan, universal, binary).
        #[arg(long)]
        pattern: Option<String>,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        h: usize,
        /// Host edge list, used with `--orderings`.
        #[arg(long)]
        host: Option<PathBuf>,
        /// JSON array of orderings.
        #[arg(long)]
        orderings: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        root: Vec<usize>,
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
    },
    /// Print a family's scheme: host, root and materialized orderings.
    MakeScheme {
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        h: usize,
        #[arg(long, default_value_t = 100_000)]
        limit: usize,
    },
    /// Find an H+ minor with singleton apex branch set.
    FindMinor {
        #[arg(long)]
        host: PathBuf,
        /// Family name, graph name, or edge-list path.
        #[arg(long)]
        pattern: String,
        #[arg(long, default_value_t = 6)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        h: usize,
    },
    /// Find a butterfly minor of an in-arborescence plus apex source.
    FindButterfly {
        #[arg(long)]
        host: PathBuf,
        /// Digraph name (instar-n, inpath-n, inarb-n-seed) or edge-list path.
        #[arg(long)]
        tree: String,
    },
    /// Find a directed wheel subdivision.
    FindWheel {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum)]
        extract: Option<Extract>,
    },
    /// Find a subdivision of the two-block wheel C(k1, k2).
    FindTwoBlock {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        k1: usize,
        #[arg(long)]
        k2: usize,
    },
    /// Exhaustive containment test; exit 0 yes, 1 no or budget exhausted.
    Oracle {
        #[arg(long, value_enum)]
        mode: OracleMode,
        #[arg(long)]
        host: PathBuf,
        /// Graph or digraph name, or edge-list path.
        #[arg(long)]
        pattern: String,
    },
    /// Verify a JSON certificate against a host.
    CheckCert {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Run the seeded finder corpus.
    Suite {
        #[arg(long, default_value_t = 50)]
        trials: usize,
    },
}

enum Failure {
    Negative(Value),
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Outcome = Result<Value, Failure>;

fn invariant(msg: String) -> Failure {
    Failure::Lib(Error::Invariant(msg))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn read_host(path: &Path) -> Result<EdgeList, Failure> {
    Ok(parse_edge_list(&read(path)?)?)
}

fn undirected(host: EdgeList) -> Result<Graph, Failure> {
    match host {
        EdgeList::Undirected(g) => Ok(g),
        EdgeList::Directed(_) => Err(Failure::Usage("expected an undirected host".into())),
    }
}

fn directed(host: EdgeList) -> Result<Digraph, Failure> {
    match host {
        EdgeList::Directed(d) => Ok(d),
        EdgeList::Undirected(g) if g.edge_count() == 0 => Ok(Digraph::new(g.capacity())),
        EdgeList::Undirected(_) => Err(Failure::Usage("expected a directed host".into())),
    }
}

fn pattern_graph(arg: &str) -> Result<Graph, Failure> {
    if Path::new(arg).is_file() {
        return undirected(read_host(Path::new(arg))?);
    }
    Ok(named_graph(arg)?)
}

fn pattern_digraph(arg: &str) -> Result<Digraph, Failure> {
    if Path::new(arg).is_file() {
        return directed(read_host(Path::new(arg))?);
    }
    Ok(named_digraph(arg)?)
}

fn family_size(f: SchemeFamily, n: usize, h: usize) -> usize {
    if f.sized_by_height() {
        h
    } else {
        n
    }
}

fn stats_json(s: &FinderStats) -> Value {
    json!({"steps": s.steps, "separations": s.separations, "contractions": s.contractions})
}

/// Report for a found certificate; the certificate goes to `--out` when given.
fn found(
    op: &str,
    digest: String,
    cert: &Certificate,
    stats: Value,
    start: Instant,
    out: &Option<PathBuf>,
) -> Outcome {
    let mut report = json!({
        "operation": op,
        "input_digest": digest,
        "outcome": "found",
        "stats": stats,
        "millis": start.elapsed().as_millis() as u64,
    });
    match out {
        Some(p) => {
            std::fs::write(p, cert.to_json())
                .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
            report["certificate_path"] = json!(p.display().to_string());
        }
        None => report["certificate"] = serde_json::to_value(cert).expect("certificate serializes"),
    }
    Ok(report)
}

fn to_json<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("serializable")
}

fn run(cli: Cli) -> Outcome {
    let start = Instant::now();
    let budget = SearchBudget::new(cli.budget_nodes, cli.budget_ms)?;
    match cli.cmd {
        Cmd::Gen {
            kind,
            n,
            h,
            t,
            name,
            directed,
        } => {
            let seed = cli.seed;
            let text = match kind {
                GenKind::Universal => write_graph(&gen_family(Family::Universal(h))?),
                GenKind::Binary => write_graph(&gen_family(Family::Binary(h))?),
                GenKind::Snake => write_graph(&gen_family(Family::Snake(n))?),
                GenKind::Fan => write_graph(&gen_family(Family::Fan(n))?),
                GenKind::Tree => write_graph(&tree(n, seed)?),
                GenKind::Cactus => write_graph(&cactus(n, seed)?),
                GenKind::MinDegree => write_graph(&min_degree_graph(n, t, seed)?),
                GenKind::MinOutdegree => write_digraph(&min_outdegree_digraph(n, t, seed)?),
                GenKind::Inarb => write_digraph(&inarborescence(n, seed)?),
                GenKind::Named => {
                    let name =
                        name.ok_or_else(|| Failure::Usage("--kind named needs --name".into()))?;
                    if directed {
                        write_digraph(&named_digraph(&name)?)
                    } else {
                        write_graph(&named_graph(&name)?)
                    }
                }
            };
            match &cli.out {
                Some(p) => {
                    std::fs::write(p, &text)
                        .map_err(|e| Failure::Usage(format!("{}: {e}", p.display())))?;
                    Ok(
                        json!({"operation": "gen", "outcome": "written", "path": p.display().to_string()}),
                    )
                }
                None => {
                    use std::io::Write;
                    let _ = std::io::stdout().write_all(text.as_bytes());
                    Ok(Value::Null)
                }
            }
        }
        Cmd::VerifyOrdering {
            pattern,
            n,
            h,
            host,
            orderings,
            root,
            limit,
        } => {
            let (g, set, root) = match (pattern, host, orderings) {
                (Some(p), None, None) => {
                    let f: SchemeFamily = p.parse()?;
                    let scheme = family_scheme(f, family_size(f, n, h), cli.seed)?;
                    let set = materialize(scheme.as_ref(), limit)?;
                    (scheme.host().clone(), set, scheme.root().to_vec())
                }
                (None, Some(hp), Some(op)) => {
                    let g = undirected(read_host(&hp)?)?;
                    let set: Vec<Vec<usize>> = serde_json::from_str(&read(&op)?)
                        .map_err(|e| Failure::Usage(format!("orderings: {e}")))?;
                    (g, set, root)
                }
                _ => {
                    return Err(Failure::Usage(
                        "give either --pattern or both --host and --orderings".into(),
                    ))
                }
            };
            let root_arg = (!root.is_empty()).then_some(root.as_slice());
            let violation = verify_contractible(&g, &set, root_arg)?;
            let report = json!({
                "operation": "verify-ordering",
                "members": set.len(),
                "root": root,
                "valid": violation.is_none(),
                "violation": violation,
            });
            if violation.is_some() {
                Err(Failure::Negative(report))
            } else {
                Ok(report)
            }
        }
        Cmd::MakeScheme {
            pattern,
            n,
            h,
            limit,
        } => {
            let f: SchemeFamily = pattern.parse()?;
            let scheme = family_scheme(f, family_size(f, n, h), cli.seed)?;
            let set = materialize(scheme.as_ref(), limit)?;
            Ok(json!({
                "operation": "make-scheme",
                "description": scheme.describe(),
                "host": to_json(scheme.host()),
                "root": scheme.root(),
                "initial": scheme.initial(),
                "orderings": set,
            }))
        }
        Cmd::FindMinor {
            host,
            pattern,
            n,
            h,
        } => {
            let g = undirected(read_host(&host)?)?;
            let (scheme, wanted): (Box<dyn OrderingScheme>, Graph) =
                match pattern.parse::<SchemeFamily>() {
                    Ok(f) => {
                        let s = family_scheme(f, family_size(f, n, h), cli.seed)?;
                        let w = s.host().clone();
                        (s, w)
                    }
                    Err(_) => {
                        let w = pattern_graph(&pattern)?;
                        (scheme_covering(&w)?, w)
                    }
                };
            eprintln!("scheme: {}", scheme.describe());
            let cert = find_apex_minor(&g, scheme.as_ref())?;
            // The scheme host may be a spanning supergraph of the requested
            // pattern with the same ids, so the model carries over.
            if scheme.host().capacity() != wanted.capacity() {
                return Err(invariant("scheme host relabelled the pattern".into()));
            }
            let pat = wanted.with_apex();
            verify_minor(&g, &pat, &cert.embedding)
                .map_err(|e| invariant(format!("minor certificate: {e}")))?;
            let c = Certificate::minor(&g, &pat, &cert.embedding);
            found(
                "find-minor",
                host_hash(&EdgeList::Undirected(g)),
                &c,
                stats_json(&cert.stats),
                start,
                &cli.out,
            )
        }
        Cmd::FindButterfly { host, tree } => {
            let d = directed(read_host(&host)?)?;
            let t = pattern_digraph(&tree)?;
            let cert = find_apex_inarb_butterfly(&d, &t)?;
            verify_butterfly(&d, &cert.pattern, &cert.embedding)
                .map_err(|e| invariant(format!("butterfly certificate: {e}")))?;
            let c = Certificate::butterfly(&d, &cert.pattern, &cert.embedding);
            found(
                "find-butterfly",
                host_hash(&EdgeList::Directed(d)),
                &c,
                stats_json(&cert.stats),
                start,
                &cli.out,
            )
        }
        Cmd::FindWheel { host, t, extract } => {
            let d = directed(read_host(&host)?)?;
            let cert = find_wheel_subdivision(&d, t)?;
            let (pattern, emb, tag) = match extract {
                None => (cert.pattern.clone(), cert.embedding.clone(), Some(cert.tag)),
                Some(Extract::Cplus) => {
                    let (p, e) = cert.extract_c_plus()?;
                    (p, e, None)
                }
                Some(Extract::W2) => {
                    let (p, e) = cert.extract_w2()?;
                    (p, e, None)
                }
            };
            verify_subdivision_digraph(&d, &pattern, &emb)
                .map_err(|e| invariant(format!("wheel certificate: {e}")))?;
            let c = Certificate::subdivision_digraph(&d, &pattern, &emb, tag);
            found(
                "find-wheel",
                host_hash(&EdgeList::Directed(d)),
                &c,
                stats_json(&cert.stats),
                start,
                &cli.out,
            )
        }
        Cmd::FindTwoBlock { host, k1, k2 } => {
            let d = directed(read_host(&host)?)?;
            let cert = find_two_block_wheel(&d, k1, k2)?;
            verify_subdivision_digraph(&d, &cert.pattern, &cert.embedding)
                .map_err(|e| invariant(format!("two-block certificate: {e}")))?;
            let c = Certificate::subdivision_digraph(&d, &cert.pattern, &cert.embedding, None);
            let stats = stats_json(&cert.butterfly.stats);
            found(
                "find-two-block",
                host_hash(&EdgeList::Directed(d)),
                &c,
                stats,
                start,
                &cli.out,
            )
        }
        Cmd::Oracle {
            mode,
            host,
            pattern,
        } => {
            let h = read_host(&host)?;
            let digest = host_hash(&h);
            let (outcome, cert, witness): (OracleOutcome<()>, Option<Certificate>, Value) =
                match (mode, h) {
                    (OracleMode::Minor, EdgeList::Undirected(g)) => {
                        let p = pattern_graph(&pattern)?;
                        match oracle_minor(&g, &p, &budget)? {
                            OracleOutcome::Yes(e) => {
                                verify_minor(&g, &p, &e)
                                    .map_err(|e| invariant(format!("oracle minor: {e}")))?;
                                (
                                    OracleOutcome::Yes(()),
                                    Some(Certificate::minor(&g, &p, &e)),
                                    Value::Null,
                                )
                            }
                            o => (o.map(|_| ()), None, Value::Null),
                        }
                    }
                    (OracleMode::Subdivision, EdgeList::Undirected(g)) => {
                        let p = pattern_graph(&pattern)?;
                        match oracle_subdivision_graph(&g, &p, &budget)? {
                            OracleOutcome::Yes(e) => {
                                verify_subdivision_graph(&g, &p, &e)
                                    .map_err(|e| invariant(format!("oracle subdivision: {e}")))?;
                                (
                                    OracleOutcome::Yes(()),
                                    Some(Certificate::subdivision_graph(&g, &p, &e)),
                                    Value::Null,
                                )
                            }
                            o => (o.map(|_| ()), None, Value::Null),
                        }
                    }
                    (OracleMode::Subdivision, EdgeList::Directed(d)) => {
                        let p = pattern_digraph(&pattern)?;
                        match oracle_subdivision_digraph(&d, &p, &budget)? {
                            OracleOutcome::Yes(e) => {
                                verify_subdivision_digraph(&d, &p, &e)
                                    .map_err(|e| invariant(format!("oracle subdivision: {e}")))?;
                                let c = Certificate::subdivision_digraph(&d, &p, &e, None);
                                (OracleOutcome::Yes(()), Some(c), Value::Null)
                            }
                            o => (o.map(|_| ()), None, Value::Null),
                        }
                    }
                    (
                        OracleMode::ButterflyOps | OracleMode::ButterflySets,
                        EdgeList::Directed(d),
                    ) => {
                        let p = pattern_digraph(&pattern)?;
                        let m = if matches!(mode, OracleMode::ButterflyOps) {
                            ButterflyMode::OperationSequence
                        } else {
                            ButterflyMode::BranchSet
                        };
                        match oracle_butterfly(&d, &p, &budget, m)? {
                            OracleOutcome::Yes(ButterflyWitness::Model(e)) => {
                                verify_butterfly(&d, &p, &e)
                                    .map_err(|e| invariant(format!("oracle butterfly: {e}")))?;
                                (
                                    OracleOutcome::Yes(()),
                                    Some(Certificate::butterfly(&d, &p, &e)),
                                    Value::Null,
                                )
                            }
                            OracleOutcome::Yes(ButterflyWitness::Sequence(ops)) => {
                                let r = replay_butterfly_ops(&d, &ops)?;
                                if small_isomorphic(&r, &p) != Some(true) {
                                    return Err(invariant(
                                        "operation sequence does not yield the pattern".into(),
                                    ));
                                }
                                (OracleOutcome::Yes(()), None, to_json(&ops))
                            }
                            o => (o.map(|_| ()), None, Value::Null),
                        }
                    }
                    _ => {
                        return Err(Failure::Usage(
                            "oracle mode does not fit the host's orientation".into(),
                        ))
                    }
                };
            let name = match outcome {
                OracleOutcome::Yes(()) => "yes",
                OracleOutcome::No => "no",
                OracleOutcome::BudgetExceeded => "budget_exceeded",
            };
            let mut report = json!({
                "operation": "oracle",
                "input_digest": digest,
                "outcome": name,
                "millis": start.elapsed().as_millis() as u64,
            });
            if !witness.is_null() {
                report["operations"] = witness;
            }
            match cert {
                Some(c) => {
                    found("oracle", digest, &c, Value::Null, start, &cli.out).map(|mut r| {
                        r["outcome"] = json!("yes");
                        if !report["operations"].is_null() {
                            r["operations"] = report["operations"].clone();
                        }
                        r
                    })
                }
                None if outcome.is_yes() => Ok(report),
                None => Err(Failure::Negative(report)),
            }
        }
        Cmd::CheckCert { host, cert } => {
            let h = read_host(&host)?;
            let c = Certificate::from_json(&read(&cert)?)?;
            match check_certificate(&h, &c) {
                Ok(()) => Ok(json!({"operation": "check-cert", "outcome": "valid"})),
                Err(e) => Err(Failure::Negative(
                    json!({"operation": "check-cert", "outcome": "invalid", "reason": e}),
                )),
            }
        }
        Cmd::Suite { trials } => {
            let report = apex_minors::suite::run_suite(cli.seed, trials);
            for l in &report.lines {
                eprintln!("{:<32} {}/{}", l.name, l.passed, l.trials);
            }
            let v = to_json(&report);
            if report.all_passed() {
                Ok(v)
            } else {
                Err(invariant(format!(
                    "suite failures: {}",
                    serde_json::to_string(&report.lines).unwrap()
                )))
            }
        }
    }
}

fn print(v: &Value) {
    if !v.is_null() {
        use std::io::Write;
        let _ = writeln!(
            std::io::stdout(),
            "{}",
            serde_json::to_string_pretty(v).expect("json")
        );
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e)
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(64);
        }
    };
    match run(cli) {
        Ok(v) => {
            print(&v);
            ExitCode::SUCCESS
        }
        Err(Failure::Negative(v)) => {
            print(&v);
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(64)
        }
        Err(Failure::Lib(e)) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::Hypothesis(_) => 2,
                Error::Domain(_) | Error::Parse { .. } => 64,
                Error::Invariant(_) | Error::ContractStep(_) | Error::NotButterfly(..) => 3,
            };
            print(&json!({"outcome": "error", "error": e.to_string(), "exit": code}));
            ExitCode::from(code)
        }
    }
}
