use std::collections::HashSet;

use proptest::prelude::*;

use apex_minors::catalog::{family_scheme, SchemeFamily};
use apex_minors::connectivity::{bounded_order_separation, is_well_connected, max_fan};
use apex_minors::digraph_finder::{
    find_apex_inarb_butterfly, find_wheel_subdivision, verify_butterfly,
};
use apex_minors::generate::{
    complete_bipartite, inarborescence, min_degree_graph, min_outdegree_digraph,
};
use apex_minors::minor::{find_apex_minor, verify_minor};
use apex_minors::oracle::{
    oracle_butterfly, oracle_minor, replay_butterfly_ops, small_isomorphic, ButterflyMode,
    ButterflyWitness, OracleOutcome, SearchBudget,
};
use apex_minors::orderings::{
    back_neighbors, check_replacement, is_recursive_ordering, materialize, scheme_replace,
    verify_contractible,
};
use apex_minors::outerplanar::recognize_maximal_outerplanar;
use apex_minors::subdivision::verify_subdivision_digraph;
use apex_minors::{Digraph, Graph};

fn graph_from(n: usize, bits: &[bool]) -> Graph {
    let mut g = Graph::new(n);
    let mut k = 0;
    for u in 0..n {
        for v in u + 1..n {
            if bits[k % bits.len()] {
                g.add_edge(u, v).unwrap();
            }
            k += 1;
        }
    }
    g
}

fn digraph_from(n: usize, bits: &[bool]) -> Digraph {
    let mut d = Digraph::new(n);
    let mut k = 0;
    for u in 0..n {
        for v in 0..n {
            if u != v {
                if bits[k % bits.len()] {
                    d.add_arc(u, v).unwrap();
                }
                k += 1;
            }
        }
    }
    d
}

fn arb_graph(max: usize) -> impl Strategy<Value = Graph> {
    (1..=max, prop::collection::vec(any::<bool>(), 64)).prop_map(|(n, b)| graph_from(n, &b))
}

fn arb_digraph(max: usize) -> impl Strategy<Value = Digraph> {
    (
        1..=max,
        prop::collection::vec(prop::bool::weighted(0.35), 64),
    )
        .prop_map(|(n, b)| digraph_from(n, &b))
}

fn is_simple(g: &Graph) -> bool {
    g.edges()
        .iter()
        .all(|&(u, v)| u != v && g.contains(u) && g.contains(v))
}

fn family() -> impl Strategy<Value = (SchemeFamily, usize)> {
    prop_oneof![
        (3usize..=7).prop_map(|n| (SchemeFamily::Tree, n)),
        (3usize..=7).prop_map(|n| (SchemeFamily::Cactus, n)),
        (3usize..=8).prop_map(|n| (SchemeFamily::Snake, n)),
        (3usize..=7).prop_map(|n| (SchemeFamily::Fan, n)),
        (0usize..=1).prop_map(|h| (SchemeFamily::Universal, h)),
        (1usize..=2).prop_map(|h| (SchemeFamily::Binary, h)),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn edge_contraction_is_simple_and_maps_edges(g in arb_graph(8), pick in any::<usize>()) {
        let edges = g.edges();
        prop_assume!(!edges.is_empty());
        let (u, v) = edges[pick % edges.len()];
        let c = g.contract_edge(u, v).unwrap();
        prop_assert!(is_simple(&c));
        prop_assert_eq!(c.vertex_count(), g.vertex_count() - 1);
        let f = |x: usize| if x == v.max(u) { u.min(v) } else { x };
        for (x, y) in edges.into_iter().filter(|&e| e != (u, v)) {
            prop_assert!(c.has_edge(f(x), f(y)));
        }
    }

    #[test]
    fn butterfly_sequences_stay_simple(d in arb_digraph(8), picks in prop::collection::vec(any::<usize>(), 1..8)) {
        let mut d = d;
        for p in picks {
            let ok: Vec<_> = d.arcs().into_iter().filter(|&(u, v)| d.is_butterfly_contractible(u, v)).collect();
            if ok.is_empty() {
                break;
            }
            let (u, v) = ok[p % ok.len()];
            let before = d.vertex_count();
            d = d.butterfly_contract(u, v).unwrap();
            prop_assert_eq!(d.vertex_count(), before - 1);
            prop_assert!(d.arcs().iter().all(|&(x, y)| x != y && d.contains(x) && d.contains(y)));
        }
    }

    #[test]
    fn sink_component_is_closed(d in arb_digraph(8)) {
        let q = d.sink_component().unwrap();
        let set: HashSet<_> = q.iter().copied().collect();
        for &v in &q {
            prop_assert!(d.out_neighbors(v).all(|w| set.contains(&w)));
        }
    }

    #[test]
    fn fans_are_deterministic_and_separations_valid(g in arb_graph(8), v in 0usize..8, mask in 1u8..=255) {
        prop_assume!(g.contains(v));
        let s: Vec<_> = g.vertices().filter(|&x| x != v && mask >> x & 1 == 1).collect();
        prop_assume!(!s.is_empty());
        let a = max_fan(&g, v, &s, false).unwrap();
        prop_assert_eq!(&a, &max_fan(&g, v, &s, false).unwrap());
        for p in &a.fan.paths {
            prop_assert_eq!(p[0], v);
            prop_assert!(s.contains(p.last().unwrap()));
        }
        match &a.separation {
            Some(sep) => {
                prop_assert!(sep.is_valid_for(&g));
                prop_assert_eq!(sep.order(), a.fan.paths.len());
                prop_assert!(s.iter().all(|x| sep.a.contains(x)));
                prop_assert!(sep.b_only().contains(&v));
            }
            None => prop_assert_eq!(a.fan.paths.len(), s.len()),
        }
    }

    #[test]
    fn well_connected_sets_have_no_small_separation(g in arb_graph(8), mask in 1u8..=255) {
        let s: Vec<_> = g.vertices().filter(|&x| mask >> x & 1 == 1).collect();
        prop_assume!(!s.is_empty());
        if is_well_connected(&g, &s).holds() {
            prop_assert!(bounded_order_separation(&g, &s, s.len() - 1, None).is_none());
        }
    }

    #[test]
    fn scheme_orderings_are_contractible((f, size) in family(), seed in 0u64..1000) {
        let scheme = family_scheme(f, size, seed).unwrap();
        let h = scheme.host();
        let set = materialize(scheme.as_ref(), 5000).unwrap();
        let root = scheme.root().to_vec();
        for omega in &set {
            prop_assert!(is_recursive_ordering(h, omega));
            let m = root.len().min(omega.len());
            prop_assert_eq!(&omega[..m], &root[..m]);
            for s in 3..omega.len() {
                let back = back_neighbors(h, omega, s);
                if back.len() == 2 {
                    let rep = scheme_replace(scheme.as_ref(), omega, s, back[0], back[1]).unwrap();
                    prop_assert!(check_replacement(h, &root, omega, s, back[0], back[1], &rep).is_ok());
                }
            }
        }
        prop_assert!(verify_contractible(h, &set, Some(&root)).unwrap().is_none());
        // Rooted sets are contractible orderings outright.
        prop_assert!(verify_contractible(h, &set, None).unwrap().is_none());
    }

    #[test]
    fn recognized_outerplanar_shape(g in arb_graph(8)) {
        let n = g.vertex_count();
        prop_assume!(n >= 3);
        let budget = SearchBudget::default();
        let outerplanar = [Graph::complete(4), complete_bipartite(2, 3)]
            .iter()
            .all(|k| oracle_minor(&g, k, &budget).unwrap().is_no());
        let recognized = recognize_maximal_outerplanar(&g);
        prop_assert_eq!(recognized.is_some(), outerplanar && g.edge_count() == 2 * n - 3);
        if let Some(t) = recognized {
            prop_assert_eq!(g.edge_count(), 2 * n - 3);
            prop_assert!(t.dual.is_tree());
            prop_assert!(t.dual.vertices().all(|f| t.dual.degree(f) <= 3));
            let mut c = t.outer_cycle.clone();
            prop_assert_eq!(c.len(), n);
            for i in 0..n {
                prop_assert!(g.has_edge(c[i], c[(i + 1) % n]));
            }
            c.sort_unstable();
            c.dedup();
            prop_assert_eq!(c.len(), n);
        }
    }

    #[test]
    fn apex_minor_finder_verifies((f, size) in family(), seed in 0u64..10_000, extra in 1usize..8) {
        let scheme = family_scheme(f, size, seed).unwrap();
        let t = scheme.host().vertex_count();
        let g = min_degree_graph(t + extra, t, seed).unwrap();
        let cert = find_apex_minor(&g, scheme.as_ref()).unwrap();
        prop_assert!(verify_minor(&g, &scheme.host().with_apex(), &cert.embedding).is_ok());
        let n = g.vertex_count();
        prop_assert!(cert.stats.steps <= n * (n + t));
        prop_assert_eq!(&cert, &find_apex_minor(&g, scheme.as_ref()).unwrap());
    }

    #[test]
    fn digraph_finders_verify(t in 2usize..=5, extra in 1usize..10, seed in 0u64..10_000) {
        let d = min_outdegree_digraph(t + extra, t, seed).unwrap();
        let tree = inarborescence(t, seed).unwrap();
        let b = find_apex_inarb_butterfly(&d, &tree).unwrap();
        prop_assert!(verify_butterfly(&d, &b.pattern, &b.embedding).is_ok());
        let w = find_wheel_subdivision(&d, t).unwrap();
        prop_assert!(verify_subdivision_digraph(&d, &w.pattern, &w.embedding).is_ok());
        let (p, e) = w.extract_c_plus().unwrap();
        prop_assert!(verify_subdivision_digraph(&d, &p, &e).is_ok());
        let (p, e) = w.extract_w2().unwrap();
        prop_assert!(verify_subdivision_digraph(&d, &p, &e).is_ok());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn oracle_yes_answers_verify(d in arb_digraph(5), p in arb_digraph(3)) {
        let budget = SearchBudget::default();
        if let OracleOutcome::Yes(ButterflyWitness::Sequence(ops)) =
            oracle_butterfly(&d, &p, &budget, ButterflyMode::OperationSequence).unwrap()
        {
            let r = replay_butterfly_ops(&d, &ops).unwrap();
            prop_assert_eq!(small_isomorphic(&r, &p), Some(true));
        }
        if let OracleOutcome::Yes(ButterflyWitness::Model(m)) =
            oracle_butterfly(&d, &p, &budget, ButterflyMode::BranchSet).unwrap()
        {
            prop_assert!(verify_butterfly(&d, &p, &m).is_ok());
        }
    }

    #[test]
    fn minor_oracle_confirms_finder(t in 3usize..=4, extra in 1usize..4, seed in 0u64..10_000) {
        let scheme = family_scheme(SchemeFamily::Tree, t, seed).unwrap();
        let g = min_degree_graph(t + extra, t, seed).unwrap();
        let pattern = scheme.host().with_apex();
        prop_assert!(find_apex_minor(&g, scheme.as_ref()).is_ok());
        match oracle_minor(&g, &pattern, &SearchBudget::default()).unwrap() {
            OracleOutcome::Yes(e) => prop_assert!(verify_minor(&g, &pattern, &e).is_ok()),
            o => prop_assert!(false, "oracle disagrees with finder: {:?}", o),
        }
    }

    #[test]
    fn butterfly_oracle_confirms_finder_and_transitivity(t in 2usize..=3, extra in 1usize..4, seed in 0u64..10_000) {
        let d = min_outdegree_digraph(t + extra, t, seed).unwrap();
        let tree = inarborescence(t, seed).unwrap();
        let mid = find_apex_inarb_butterfly(&d, &tree).unwrap().pattern;
        let budget = SearchBudget::default();
        prop_assert!(oracle_butterfly(&d, &mid, &budget, ButterflyMode::BranchSet).unwrap().is_yes());
        // Any butterfly minor of the pattern is one of the host.
        let small = Digraph::directed_cycle(2);
        if oracle_butterfly(&mid, &small, &budget, ButterflyMode::OperationSequence).unwrap().is_yes() {
            prop_assert!(oracle_butterfly(&d, &small, &budget, ButterflyMode::OperationSequence).unwrap().is_yes());
        }
        let star = mid.induced(&mid.vertices().collect::<Vec<_>>());
        prop_assert!(oracle_butterfly(&d, &star, &budget, ButterflyMode::OperationSequence).unwrap().is_yes());
    }
}
