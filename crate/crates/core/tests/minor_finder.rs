use apex_minors::generate::{cactus, min_degree_graph, tree};
use apex_minors::minor::{find_apex_minor, minor_to_subdivision, verify_minor};
use apex_minors::orderings::{
    scheme_for_cactus, scheme_for_snake, scheme_for_tree, scheme_for_universal, OrderingScheme,
};
use apex_minors::outerplanar::{gen_family, Family};
use apex_minors::subdivision::verify_subdivision_graph;

fn schemes(t: usize, seed: u64) -> Vec<Box<dyn OrderingScheme>> {
    let mut out: Vec<Box<dyn OrderingScheme>> = vec![
        Box::new(scheme_for_tree(&tree(t, seed).unwrap(), 0).unwrap()),
        scheme_for_cactus(&cactus(t, seed).unwrap(), 0).unwrap().1,
    ];
    if t.is_multiple_of(3) {
        out.push(Box::new(
            scheme_for_snake(&gen_family(Family::Snake(t)).unwrap(), 0, 1).unwrap(),
        ));
    }
    if t == 3 || t == 6 {
        out.push(Box::new(scheme_for_universal(t / 6).unwrap().1));
    }
    out
}

#[test]
fn random_instances_verify() {
    let mut count = 0;
    for seed in 0..40u64 {
        for t in 3..=6 {
            let n = t + 1 + (seed as usize % (18 - t));
            let g = min_degree_graph(n, t, seed * 31 + t as u64).unwrap();
            for s in schemes(t, seed) {
                let cert = find_apex_minor(&g, s.as_ref())
                    .unwrap_or_else(|e| panic!("{}: {e}", s.describe()));
                let pattern = s.host().with_apex();
                verify_minor(&g, &pattern, &cert.embedding).unwrap();
                count += 1;
            }
        }
    }
    assert!(count > 300);
}

#[test]
fn wheel_subdivision_from_cycle_model() {
    // C_t⁺ via the cactus scheme of a cycle, then converted
    for seed in 0..20u64 {
        let t = 4 + (seed as usize % 3);
        let cycle: Vec<_> = (0..t).map(|i| (i, (i + 1) % t)).collect();
        let c = apex_minors::Graph::from_edges(t, &cycle).unwrap();
        let (h, s) = scheme_for_cactus(&c, 0).unwrap();
        let g = min_degree_graph(14, t, seed).unwrap();
        let cert = find_apex_minor(&g, s.as_ref()).unwrap();
        let wheel = c.with_apex();
        assert!(h.vertex_count() == t);
        verify_minor(&g, &wheel, &cert.embedding).unwrap();
        let sub = minor_to_subdivision(&g, &wheel, &cert.embedding).unwrap();
        verify_subdivision_graph(&g, &wheel, &sub).unwrap();
    }
}
