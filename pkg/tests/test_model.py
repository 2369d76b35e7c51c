import pytest

from cqcsp import model
from cqcsp.model import (
    InvalidStructureError,
    Quantifier,
    are_isomorphic,
    build_template,
    canonical_database,
    canonical_query,
    graph_view,
    instance_graph,
    parse_family_spec,
    parse_fragment_spec,
    sentence,
)


def test_cycle_template_conventions():
    c4 = build_template(model.cycle(4))
    assert c4.domain_size == 4
    assert len(c4.tuples("E")) == 8
    assert graph_view(c4).bipartition() is not None
    # adjacency pattern |i-j| in {1, n-1}
    assert (0, 3) in c4.tuples("E") and (3, 0) in c4.tuples("E")
    assert (0, 2) not in c4.tuples("E")


def test_star_template_centre_zero():
    k13 = build_template(model.star(3))
    assert k13.domain_size == 4
    assert all((0, j) in k13.tuples("E") and (j, 0) in k13.tuples("E") for j in (1, 2, 3))
    assert (1, 2) not in k13.tuples("E")


def test_single_quantifier_template_case1_count():
    b = build_template(model.single_quantifier_template(4, 2))
    assert b.tuples("U") == frozenset({(0,), (1,)})
    # all 64 triples minus the 8 all-odd and 8 all-even ones
    assert len(b.tuples("R")) == 48


def test_single_quantifier_template_case2():
    b = build_template(model.single_quantifier_template(3, 2))
    # high threshold: only entries <= n-j = 1 are truth values; dropped
    # triples are the monochromatic ones over {0} and {1}
    assert len(b.tuples("R")) == 27 - 2
    assert (2, 2, 2) in b.tuples("R")


def test_reflexive_cycle_and_hairy_counts():
    c4s = build_template(model.reflexive_cycle(4))
    assert len(c4s.tuples("E")) == 8 + 4
    hairy = build_template(model.hairy_cycle(6))
    assert hairy.domain_size == 18
    g = graph_view(hairy)
    assert g.girth() == 6
    assert g.diameter() == 5


def test_hj_template():
    h4 = build_template(model.hj_template(4))
    assert h4.domain_size == 7
    g = graph_view(h4)
    assert g.bipartition() is not None
    assert g.contains_c4()
    h3 = build_template(model.hj_template(3))
    assert are_isomorphic(h3, build_template(model.cycle(6)))


def test_invalid_family_parameters():
    with pytest.raises(InvalidStructureError):
        model.cycle(2)
    with pytest.raises(InvalidStructureError):
        model.complete_bipartite(0, 2)
    with pytest.raises(InvalidStructureError):
        model.forest_from_edges([(0, 1), (1, 2), (2, 0)])


def test_canonical_database_examples():
    s = sentence([(2, "x"), (2, "y")], [("E", ("x", "y")), ("E", ("y", "x"))])
    db = canonical_database(s)
    assert db.domain_size == 2
    assert db.tuples("E") == frozenset({(0, 1), (1, 0)})
    empty = canonical_database(sentence([(1, "x"), (1, "y")], []))
    assert empty.domain_size == 2
    assert not empty.signature.relations


def test_canonical_query_of_k3():
    k3 = build_template(model.clique(3))
    q = canonical_query(k3)
    assert len(q.prefix) == 3
    assert all(qq.threshold == 1 for qq in q.prefix)
    assert len(q.atoms) == 6
    assert are_isomorphic(canonical_database(q), k3)


def test_canonical_query_requires_constant_free():
    b = model.make_structure([("E", 2)], 2, {"E": {(0, 1)}}, {"c": 0})
    with pytest.raises(InvalidStructureError):
        canonical_query(b)


@pytest.mark.parametrize("family", [
    model.clique(3),
    model.cycle(5),
    model.cycle(6),
    model.path(4),
    model.star(3),
    model.complete_bipartite(2, 3),
    model.nae_boolean(),
])
def test_canonical_roundtrip_is_isomorphic(family):
    b = build_template(family)
    assert are_isomorphic(canonical_database(canonical_query(b)), b)


def test_instance_graph_examples():
    s = sentence([(2, "x"), (2, "y")], [("E", ("x", "y")), ("E", ("y", "x"))])
    ig = instance_graph(s)
    assert ig.edges == frozenset({(0, 1)})
    assert ig.predecessors(1) == [0]
    tri = sentence(
        [(1, "x"), (1, "y"), (1, "z")],
        [("E", ("x", "y")), ("E", ("y", "z")), ("E", ("z", "x"))],
    )
    ig = instance_graph(tri)
    assert len(ig.edges) == 3
    assert ig.bipartition() is None
    loop = sentence([(1, "x")], [("E", ("x", "x"))])
    ig = instance_graph(loop)
    assert ig.loops == frozenset({0}) and not ig.edges


def test_instance_graph_rejects_mixed_signature():
    s = sentence([(1, "x")], [("R", ("x", "x", "x"))])
    with pytest.raises(InvalidStructureError):
        instance_graph(s)


def test_instance_graph_vertex_order_and_predecessors():
    s = sentence(
        [(1, "a"), (1, "b"), (1, "c")],
        [("E", ("c", "a")), ("E", ("b", "c"))],
    )
    ig = instance_graph(s)
    assert ig.variables == ("a", "b", "c")
    assert ig.predecessors(2) == [0, 1]
    assert ig.predecessors(0) == []


@pytest.mark.parametrize("n", range(3, 13))
def test_cycle_vertex_transitive(n):
    c = build_template(model.cycle(n))
    tuples = c.tuples("E")
    for shift in range(n):
        rotated = frozenset(((a + shift) % n, (b + shift) % n) for a, b in tuples)
        assert rotated == tuples


def test_sentence_invariants():
    with pytest.raises(InvalidStructureError):
        sentence([(1, "x"), (1, "x")], [])
    with pytest.raises(InvalidStructureError):
        sentence([(1, "x")], [("E", ("x", "y"))])
    with pytest.raises(InvalidStructureError):
        sentence([(1, "x")], [("E", ("x", "x")), ("E", ("x", "x", "x"))])
    with pytest.raises(InvalidStructureError):
        Quantifier(0, "x")


def test_universal_sugar_resolution():
    s = sentence([(None, "x"), (2, "y")], [("E", ("x", "y"))])
    rs = s.resolved(5)
    assert rs.prefix[0].threshold == 5
    assert s.threshold_set(5) == frozenset({5, 2})


def test_structure_equality_canonical():
    a = model.graph_structure(3, [(0, 1), (1, 2)])
    b = model.graph_structure(3, [(1, 2), (0, 1)])
    assert a == b
    assert a != model.graph_structure(3, [(0, 1)])


def test_family_spec_parsing_roundtrip():
    for text in ["clique:5", "cycle:6", "reflexive-cycle:4", "path:5", "star:3",
                 "bipartite:2,3", "nae", "single:4,2", "hairy:6", "hj:4",
                 "forest:0-1,1-2", "graph:0-1,1-2,2-0"]:
        fam = parse_family_spec(text)
        assert parse_family_spec(str(fam)) == fam
    with pytest.raises(InvalidStructureError):
        parse_family_spec("widget:3")


def test_fragment_spec_parsing():
    assert parse_fragment_spec("X=1,2").thresholds == frozenset({1, 2})
    assert parse_fragment_spec("prefix=2^3 1*").m == 3
    assert parse_fragment_spec("prefix=2^0").m == 0
    with pytest.raises(InvalidStructureError):
        parse_fragment_spec("X=")


def test_graph_view_properties():
    g = graph_view(build_template(model.complete_bipartite(2, 3)))
    assert g.complete_bipartite_sides() == (2, 3)
    assert g.contains_c4()
    p5 = graph_view(build_template(model.path(5)))
    assert p5.is_path_graph() and p5.is_forest()
    assert p5.girth() is None
    c5 = graph_view(build_template(model.cycle(5)))
    assert c5.is_cycle() and c5.girth() == 5 and c5.bipartition() is None
    k4 = graph_view(build_template(model.clique(4)))
    assert k4.is_complete()
