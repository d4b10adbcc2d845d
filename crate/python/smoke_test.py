"""Smoke test for the apex_minors extension.

Build and install first:
    pip install -e crates/python --no-build-isolation
"""

import apex_minors as am


def expect_raises(exc, fn, *args, **kwargs):
    try:
        fn(*args, **kwargs)
    except exc:
        return
    raise AssertionError(f"{fn.__name__} did not raise {exc.__name__}")


def main():
    k5 = am.Graph.named("K5")
    assert (k5.vertex_count, k5.edge_count) == (5, 10)
    assert am.parse(k5.to_text()) == k5

    # Apex minors from a family and from an explicit pattern.
    g = am.Graph.min_degree(14, 6, seed=3)
    cert = am.find_apex_minor(g, family="snake", size=6)
    assert cert.kind == "minor" and len(cert.branch_sets[cert.apex]) == 1
    cert.check(g)
    again = am.Certificate.from_json(cert.to_json())
    again.check(g)
    expect_raises(am.CertificateError, again.check, am.Graph.min_degree(14, 6, seed=4))

    path = am.Graph(4, [(0, 1), (1, 2), (2, 3)])
    am.find_apex_minor(am.Graph.min_degree(10, 4, seed=1), pattern=path).check(am.Graph.min_degree(10, 4, seed=1))
    expect_raises(am.HypothesisError, am.find_apex_minor, am.Graph.named("C8"), family="tree", size=5)

    # Oracles.
    ico = am.Graph.named("icosahedron")
    assert am.oracle_minor(ico, k5)[0] == "no"
    ans, c = am.oracle_minor(ico, am.Graph.named("K4"))
    assert ans == "yes"
    c.check(ico)
    assert am.oracle_minor(ico, k5, budget_nodes=1)[0] == "budget_exceeded"

    # Directed finders.
    d = am.Digraph.min_outdegree(12, 3, seed=5)
    tree = am.Digraph.inarborescence(3, seed=5)
    am.find_butterfly(d, tree).check(d)
    w = am.find_wheel(d, 3)
    assert w.tag in ("W1", "W2")
    w.check(d)
    am.find_wheel(d, 3, extract="cplus").check(d)
    am.find_wheel(d, 3, extract="w2").check(d)
    am.find_two_block(am.Digraph.min_outdegree(12, 3, seed=6), 2, 2)

    c4 = am.Digraph.named("C4")
    c3 = am.Digraph.named("C3")
    ans, model = am.oracle_butterfly(c4, c3)
    assert ans == "yes"
    model.check(c4)
    ans, ops = am.oracle_butterfly(c4, c3, mode="operations")
    assert ans == "yes" and ops[0][0] in ("contract", "delete_arc", "delete_vertex")
    assert am.oracle_butterfly(c3, c4)[0] == "no"

    ans, sub = am.oracle_subdivision(am.Graph.named("petersen"), am.Graph.named("K4"))
    assert ans == "yes" and sub.kind == "subdivision"

    expect_raises(ValueError, am.Graph, 3, [(0, 0)])
    print("smoke test OK")


if __name__ == "__main__":
    main()
