import math

import pytest

from cqcsp import model, reductions as rd
from cqcsp.model import (
    InvalidStructureError,
    Quantifier,
    Sentence,
    build_template,
    make_structure,
)
from cqcsp.textio import parse_sentence, render_sentence
from cqcsp.oracle import evaluate


def _closure_with_pins(template, gadget, pins):
    """Evaluate a gadget's quantified closure under fixed attachment values
    by pinning attachments through fresh unary relations."""
    sig = [(name, arity) for name, arity in template.signature.relations]
    rels = {name: set(template.tuples(name)) for name in template.signature.names()}
    atoms = list(gadget.atoms)
    prefix = []
    for i, (var, value) in enumerate(sorted(pins.items())):
        rname = f"Pin{i}"
        sig.append((rname, 1))
        rels[rname] = {(value,)}
        atoms.append((rname, (var,)))
        prefix.append(Quantifier(1, var))
    prefix.extend(gadget.quantifiers)
    s = Sentence(tuple(prefix), tuple(atoms))
    t = make_structure(sig, template.domain_size, rels)
    return evaluate(t, s)


def test_block_gadget_shape():
    g = rd.block_distinctness_gadget(3, ["x1", "x2", "x3"], ["y1", "y2", "y3"], "e0")
    assert len(g.fresh_variables) == 4
    assert len(g.atoms) == 9 + 3 + 3
    assert [q.threshold for q in g.quantifiers] == [3, 3, 3, 3]
    with pytest.raises(InvalidStructureError):
        rd.block_distinctness_gadget(1, ["x"], ["y"], "e0")


def test_block_gadget_semantics_on_k5():
    """The threshold-2 closure holds iff the two attachment blocks overlap
    in fewer than 2 elements."""
    k5 = build_template(model.clique(5))
    g = rd.block_distinctness_gadget(2, ["x1", "x2"], ["y1", "y2"], "e0")
    for a1 in range(5):
        for a2 in range(5):
            for b1 in range(5):
                for b2 in range(5):
                    want = len({a1, a2} & {b1, b2}) < 2
                    got = _closure_with_pins(
                        k5, g, {"x1": a1, "x2": a2, "y1": b1, "y2": b2}
                    )
                    assert got == want, (a1, a2, b1, b2)


def test_reduce_nae_shape():
    src = parse_sentence("A x E1 y E1 z | R(x,y,z)")
    target, out = rd.reduce_nae(2, 4, src)
    assert target.tuples("U") == frozenset({(0,), (1,)})
    assert [q.threshold for q in out.prefix] == [2, 2, 2]
    assert ("U", ("x",)) in out.atoms
    with pytest.raises(InvalidStructureError):
        rd.reduce_nae(1, 4, src)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_reduce_nae_equivalence(n, zoo):
    """Source and target verdicts agree on every <=2-atom sentence with
    <= 3 variables (both simulation cases: low and high threshold)."""
    import itertools

    nae = zoo["NAE"]
    names = ["x", "y", "z"]
    for m in (1, 2, 3):
        vs = names[:m]
        triples = list(itertools.product(vs, repeat=3))
        matrices = [()] + [(t,) for t in triples]
        if m <= 2:
            matrices += [(t1, t2) for t1 in triples for t2 in triples]
        for prefix_bits in range(1 << m):
            prefix = tuple(
                Quantifier(2 if prefix_bits >> i & 1 else 1, v) for i, v in enumerate(vs)
            )
            for mat in matrices:
                src = Sentence(prefix, tuple(("R", t) for t in mat))
                target, out = rd.reduce_nae(2, n, src)
                assert evaluate(nae, src) == evaluate(target, out), (n, str(src))


def test_pad_clique_examples(zoo):
    src = parse_sentence("E2 a E2 b | E(a,b)")
    target, out = rd.pad_clique(2, 6, src)
    assert target.domain_size == 6
    assert len(out.prefix) == 3
    assert out.prefix[0].variable.startswith("pad~")
    with pytest.raises(InvalidStructureError):
        rd.pad_clique(2, 5, src)


def test_pad_clique_equivalence():
    import random

    rng = random.Random(3)
    k5 = build_template(model.clique(5))
    for _ in range(40):
        src = rd._random_graph_sentence(rng, rng.randint(1, 3), 3, [2])
        target, out = rd.pad_clique(2, 6, src)
        assert evaluate(k5, src) == evaluate(target, out), str(src)


def test_reduce_clique_one_j_examples():
    src = parse_sentence("A v | E(v,v)")
    target, out = rd.reduce_clique_one_j(3, 3, src)
    # j = n collapses a universal to a bare threshold-n quantifier
    assert [q.threshold for q in out.prefix] == [3]
    with pytest.raises(InvalidStructureError):
        rd.reduce_clique_one_j(3, 1, src)


@pytest.mark.parametrize("n,j", [(3, 2), (4, 2), (4, 3)])
def test_reduce_clique_one_j_equivalence(n, j):
    import random

    rng = random.Random(5)
    kn = build_template(model.clique(n))
    for _ in range(40):
        src = rd._random_graph_sentence(rng, rng.randint(1, 3), 3, [1, n])
        target, out = rd.reduce_clique_one_j(n, j, src)
        assert evaluate(kn, src) == evaluate(target, out), (n, j, str(src))


def test_reduce_clique_blocks_counts():
    src = parse_sentence("A u E1 v | E(u,v)")
    target, out = rd.reduce_clique_single_threshold(2, src)
    assert target.domain_size == 5
    # forcing cliques (2 blocks of 3) + two vertex blocks + one edge gadget
    assert len(out.prefix) == 6 + 2 + 2 + 3
    assert all(q.threshold == 2 for q in out.prefix)
    big = math.comb(5, 2)
    assert big == 10


def test_reduce_clique_blocks_equivalence():
    k10 = build_template(model.clique(10))
    cases = [
        "E1 u E1 v | E(u,v)",
        "A u E1 v | E(u,v)",
        "E1 u A v | E(u,v)",
        "A u A v | E(u,v)",
        "E1 u | E(u,u)",
        "E1 u |",
        "A u |",
    ]
    for text in cases:
        src = parse_sentence(text)
        target, out = rd.reduce_clique_single_threshold(2, src)
        assert evaluate(k10, src) == evaluate(target, out), text


def test_universal_path_gadget_shape():
    g = rd.universal_path_gadget(3, 2, "x")
    assert len(g.fresh_variables) == 3
    assert [q.threshold for q in g.quantifiers] == [2, 2, 2, 2]
    assert len(g.atoms) == 3
    g = rd.universal_path_gadget(5, 3, "x")
    assert len(g.fresh_variables) == 10
    assert [q.threshold for q in g.quantifiers] == [3] * 6 + [1] * 5
    assert len(g.atoms) == 10
    with pytest.raises(InvalidStructureError):
        rd.universal_path_gadget(3, 1, "x")
    with pytest.raises(InvalidStructureError):
        rd.universal_path_gadget(3, 3, "x")


def test_universal_path_gadget_soundness_and_completeness():
    report = rd.verify_reduction(
        rd.rule("odd-cycle-path", n=5, j=2),
        build_template(model.cycle(5)),
        [],
    )
    assert report.ok()
    assert len(report.cases) == 6
    assert all(c.status == "agree" for c in report.cases)


def test_even_cycle_offsets():
    r, alpha = rd.even_cycle_offsets(6, 2)
    assert r == 0
    assert alpha == [0, 1, 2, 3, 4]
    r, alpha = rd.even_cycle_offsets(8, 3)
    assert alpha[-1] == 5
    assert all(alpha[k + 1] - alpha[k] == 2 for k in range(len(alpha) - 1))


def test_even_cycle_csp_equivalence(zoo):
    k3 = zoo["K3"]
    for text in ["E1 u |", "E1 u | E(u,u)", "E1 u E1 v | E(u,v)",
                 "E1 u E1 v E1 t | E(u,v) & E(v,t) & E(t,u)"]:
        src = parse_sentence(text)
        target, out = rd.reduce_even_cycle(6, 2, src, False)
        assert target == zoo["C6"]
        assert evaluate(k3, src) == evaluate(target, out, budget=50_000_000), text


def test_even_cycle_qcsp_equivalence(zoo):
    k3 = zoo["K3"]
    for text in ["A u E1 v | E(u,v)", "A u A v | E(u,v)"]:
        src = parse_sentence(text)
        target, out = rd.reduce_even_cycle(6, 2, src, True)
        assert evaluate(k3, src) == evaluate(target, out, budget=50_000_000), text


def test_even_cycle_source_validation():
    with pytest.raises(InvalidStructureError):
        rd.reduce_even_cycle(5, 2, parse_sentence("E1 u |"), False)
    with pytest.raises(InvalidStructureError):
        rd.reduce_even_cycle(6, 2, parse_sentence("E2 u |"), False)


def test_girth_isolation_structure(zoo):
    c6 = zoo["C6"]
    src = parse_sentence("E1 u E1 v | E(u,v)")
    h, out = rd.girth_isolation(c6, src)
    assert h == c6
    twos = [q for q in out.prefix if q.threshold == 2]
    # diameter 3: spine of 4 plus one candidate-chain head
    assert len(twos) == 5
    # the threshold-2 block matches the even-cycle construction's budget
    _, direct = rd.reduce_even_cycle(6, 2, src, False)
    assert len([q for q in direct.prefix if q.threshold == 2]) == 5
    # bounded-prefix shape: all threshold-2 quantifiers lead
    th = [q.threshold for q in out.prefix]
    assert th[: len(twos)] == [2] * len(twos)
    assert all(t == 1 for t in th[len(twos):])


def test_girth_isolation_equivalence(zoo):
    k3 = zoo["K3"]
    for text in ["E1 u |", "E1 u | E(u,u)", "E1 u E1 v | E(u,v)"]:
        src = parse_sentence(text)
        h, out = rd.girth_isolation(zoo["C6"], src)
        assert evaluate(k3, src) == evaluate(h, out, budget=50_000_000), text


def test_girth_isolation_preconditions(zoo):
    with pytest.raises(InvalidStructureError):
        rd.girth_isolation(zoo["C4"], parse_sentence("E1 u |"))
    with pytest.raises(InvalidStructureError):
        rd.girth_isolation(zoo["P5"], parse_sentence("E1 u |"))
    with pytest.raises(InvalidStructureError):
        rd.girth_isolation(zoo["C5"], parse_sentence("E1 u |"))


def test_hairy_spine_blocks(zoo):
    hairy = build_template(model.hairy_cycle(6))
    spine = rd.isolation_spine(hairy)
    blocks = rd.isolation_blocks(hairy)
    assert len(blocks) == 3
    assert len([q for q in spine.prefix if q.threshold == 2]) == 6 + 3
    assert evaluate(hairy, spine)


def test_reflexive_c4_reduction(zoo):
    k4 = zoo["K4"]
    for text in ["E1 u E1 v | E(u,v)", "A u A v | E(u,v)", "A u E1 v | E(u,v)",
                 "E1 u | E(u,u)"]:
        src = parse_sentence(text)
        target, out = rd.reduce_reflexive_c4(src)
        assert target == zoo["C4star"]
        assert evaluate(k4, src) == evaluate(target, out), text


def test_reflexive_c4_gadget_size():
    src = parse_sentence("E1 u E1 v | E(u,v)")
    _, out = rd.reduce_reflexive_c4(src)
    # fixed copy (4) + source vars (2) + three layers minus shared y (11)
    assert len(out.prefix) == 4 + 2 + 11
    prefix = [q.threshold for q in out.prefix]
    assert prefix[:4] == [1, 2, 3, 2]


def test_macro_expansion_examples(zoo):
    c4s = zoo["C4star"]
    src = parse_sentence("E2 x | E(x,x)")
    out = rd.expand_reflexive_c4_macros(src)
    assert render_sentence(out) == "E4 x~p~1 E1 x | E(x,x) & E(x~p~1,x)"
    assert evaluate(c4s, src) and evaluate(c4s, out)
    src = parse_sentence("E3 x | E(x,x)")
    out = rd.expand_reflexive_c4_macros(src)
    assert evaluate(c4s, src) == evaluate(c4s, out) is True


def test_macro_expansion_exhaustive(zoo):
    c4s = zoo["C4star"]
    for src in rd.default_sources(rd.rule("c4star-macros"), trials=0, seed=0):
        out = rd.expand_reflexive_c4_macros(src)
        assert set(q.threshold for q in out.prefix) <= {1, 4}
        assert evaluate(c4s, src) == evaluate(c4s, out), str(src)


def test_compiled_sentences_roundtrip_and_are_wellformed(zoo):
    from cqcsp.textio import parse_sentence as ps

    src = parse_sentence("A u E1 v | E(u,v)")
    nae_src = parse_sentence("A x E1 y | R(x,y,y)")
    gj_src = Sentence((Quantifier(10, "u"), Quantifier(1, "v")), (("E", ("u", "v")),))
    compiled = [
        rd.reduce_nae(2, 4, nae_src),
        rd.reduce_clique_single_threshold(2, gj_src),
        rd.pad_clique(2, 6, parse_sentence("E2 a E2 b | E(a,b)")),
        rd.reduce_clique_one_j(4, 2, src),
        rd.reduce_reflexive_c4(src),
        rd.reduce_even_cycle(6, 2, src, True),
        rd.girth_isolation(zoo["C6"], parse_sentence("E1 u E1 v | E(u,v)")),
        (zoo["C4star"], rd.expand_reflexive_c4_macros(parse_sentence("E3 x | E(x,x)"))),
    ]
    for target, out in compiled:
        assert ps(render_sentence(out)) == out
        rs = out.resolved(target.domain_size)
        assert all(1 <= q.threshold <= target.domain_size for q in rs.prefix)


def test_compilation_deterministic():
    src = parse_sentence("A u E1 v | E(u,v)")
    a = rd.reduce_even_cycle(6, 2, src, True)
    b = rd.reduce_even_cycle(6, 2, src, True)
    from cqcsp.textio import render_sentence, render_structure

    assert render_sentence(a[1]) == render_sentence(b[1])
    assert render_structure(a[0]) == render_structure(b[0])


def test_fresh_variable_hygiene():
    # source variables deliberately shaped like generated names
    src = Sentence(
        (Quantifier(1, "pad~c~1"), Quantifier(2, "u")),
        (("E", ("pad~c~1", "u")),),
    )
    target, out = rd.pad_clique(2, 6, parse_sentence("E2 pad~c~1 E2 u | E(pad~c~1,u)"))
    names = [q.variable for q in out.prefix]
    assert len(names) == len(set(names))


def test_verify_reduction_report_and_fault_injection(zoo):
    rule = rd.rule("clique-pad", j=2, n=6)
    sources = rd.default_sources(rule, trials=12, seed=7)
    report = rd.verify_reduction(rule, build_template(model.clique(5)), sources)
    assert report.ok()
    assert all(c.status == "agree" for c in report.cases)
    assert report.lines()[0].split()[3] == "agree"

    corrupted = rd.verify_reduction(
        rule, build_template(model.clique(5)), sources, corrupt=True
    )
    assert corrupted.disagreements(), "fault injection must surface a disagreement"


def test_verify_reduction_budget_skip(zoo):
    rule = rd.rule("even-cycle-csp", n=6, j=2)
    sources = [parse_sentence("E1 u E1 v | E(u,v)")]
    report = rd.verify_reduction(rule, zoo["K3"], sources, budget=50)
    assert [c.status for c in report.cases] == ["budget-skipped"]
    assert report.ok()  # skipped is not a pass, but not a disagreement


def test_verify_reduction_precondition_row(zoo):
    rule = rd.rule("clique-pad", j=2, n=6)
    bad = [parse_sentence("E3 a |")]  # wrong threshold for a {j}-sentence
    report = rd.verify_reduction(rule, build_template(model.clique(5)), bad)
    assert report.cases[0].status.startswith("precondition")
