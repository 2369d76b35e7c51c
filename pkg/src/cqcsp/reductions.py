"""The gadget compiler: every hardness reduction as an executable
sentence/template transformation, plus an oracle-backed equivalence
verifier.

Fresh variables follow the ``<orig>~<role>~<index>`` naming scheme and are
kept disjoint from source variables, so compiled sentences never collide.
Compilation is deterministic: atom and quantifier orders depend only on the
input, and identical inputs render byte-identically.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from . import oracle
from .model import (
    Atom,
    InvalidStructureError,
    Quantifier,
    Sentence,
    Structure,
    build_template,
    clique,
    cycle,
    make_structure,
    nae_boolean,
    reflexive_cycle,
    require_graph,
    single_quantifier_template,
)

RULE_NAMES = (
    "nae",
    "clique-gj",
    "clique-pad",
    "clique-1j",
    "odd-cycle-path",
    "even-cycle",
    "even-cycle-csp",
    "girth-isolation",
    "reflexive-c4",
    "c4star-macros",
)


@dataclass(frozen=True)
class ReductionRule:
    """A named reduction with its integer (or template-spec) parameters."""

    name: str
    params: tuple[tuple[str, object], ...] = ()

    def __post_init__(self) -> None:
        if self.name not in RULE_NAMES:
            raise InvalidStructureError(f"unknown reduction rule {self.name!r}")

    def get(self, key: str, default=None):
        for k, v in self.params:
            if k == key:
                return v
        return default

    def __str__(self) -> str:
        body = " ".join(f"{k}={v}" for k, v in self.params)
        return f"{self.name} {body}".strip()


def rule(name: str, **params) -> ReductionRule:
    return ReductionRule(name, tuple(sorted(params.items())))


@dataclass(frozen=True)
class GadgetBlueprint:
    """A reusable sub-sentence: fresh variables with their quantifier block,
    atoms over fresh plus attachment variables, and the attachment points.

    The universal-path blueprint also (re)quantifies its attachment point;
    its quantifier block therefore covers the attachments as well.
    """

    fresh_variables: tuple[str, ...]
    quantifiers: tuple[Quantifier, ...]
    atoms: tuple[Atom, ...]
    attachments: tuple[str, ...]

    def __post_init__(self) -> None:
        if set(self.fresh_variables) & set(self.attachments):
            raise InvalidStructureError("fresh variables overlap the attachment points")


class _Names:
    """Deterministic fresh-name source that avoids a given taken set."""

    def __init__(self, taken: Iterable[str]) -> None:
        self.taken = set(taken)

    def make(self, base: str) -> str:
        name = base
        bump = 0
        while name in self.taken:
            bump += 1
            name = f"{base}~{bump}"
        self.taken.add(name)
        return name


def _resolve_for(s: Sentence, domain_size: int, allowed: set[int], what: str) -> Sentence:
    rs = s.resolved(domain_size)
    bad = {q.threshold for q in rs.prefix} - allowed
    if bad:
        raise InvalidStructureError(
            f"{what}: source thresholds {sorted(bad)} outside {sorted(allowed)}"
        )
    return rs


def _dedup_edges(s: Sentence) -> list[tuple[str, str]]:
    """Distinct undirected matrix edges (loops included) in first-occurrence
    order; requires a single binary symbol."""
    seen = set()
    out = []
    for name, vs in s.atoms:
        if len(vs) != 2:
            raise InvalidStructureError("graph reduction needs binary atoms")
        key = frozenset(vs)
        if key not in seen:
            seen.add(key)
            out.append((vs[0], vs[1]))
    return out


# ---------------------------------------------------------------------------
# Single-quantifier simulation of quantified not-all-equal satisfiability


def reduce_nae(j: int, n: int, s: Sentence) -> tuple[Structure, Sentence]:
    """Compile an exists/for-all sentence over the not-all-equal template
    into a single-threshold sentence over the n-element simulation template.

    Every quantifier becomes threshold j; former universals gain a U(x)
    conjunct, which pins their witness set to the designated block.
    """
    if not (3 <= n and 1 < j < n):
        raise InvalidStructureError("needs 3 <= n and 1 < j < n")
    rs = _resolve_for(s, 2, {1, 2}, "nae reduction")
    for name, vs in rs.atoms:
        if name != "R" or len(vs) != 3:
            raise InvalidStructureError("nae sources use the ternary relation R only")
    target = build_template(single_quantifier_template(n, j))
    prefix = tuple(Quantifier(j, q.variable) for q in rs.prefix)
    atoms = list(rs.atoms)
    for q in rs.prefix:
        if q.threshold == 2:
            atoms.append(("U", (q.variable,)))
    return target, Sentence(prefix, tuple(atoms))


# ---------------------------------------------------------------------------
# Cliques


def block_distinctness_gadget(
    j: int, xs: Sequence[str], ys: Sequence[str], tag: str, names: Optional[_Names] = None
) -> GadgetBlueprint:
    """The edge gadget for single-threshold cliques: with the fresh block
    quantified at threshold j over the (2j+1)-clique, it is satisfiable iff
    the x-block and y-block values overlap in fewer than j elements."""
    if j < 2:
        raise InvalidStructureError("gadget needs j >= 2")
    if len(xs) != j or len(ys) != j:
        raise InvalidStructureError("gadget attachments must be two j-blocks")
    names = names or _Names(list(xs) + list(ys))
    zs = [names.make(f"{tag}~z~{b}") for b in range(1, j + 1)]
    w = names.make(f"{tag}~w~1")
    atoms: list[Atom] = []
    for x in xs:
        for z in zs:
            atoms.append(("E", (x, z)))
    for y in ys:
        atoms.append(("E", (w, y)))
    for z in zs:
        atoms.append(("E", (w, z)))
    quantifiers = tuple(Quantifier(j, v) for v in zs + [w])
    return GadgetBlueprint(tuple(zs + [w]), quantifiers, tuple(atoms), tuple(xs) + tuple(ys))


def reduce_clique_single_threshold(j: int, s: Sentence) -> tuple[Structure, Sentence]:
    """Compile a quantified colouring sentence over the choose(2j+1, j)
    clique into a pure threshold-j sentence over the (2j+1)-clique.

    Vertices become independent j-blocks; edges become distinctness
    gadgets with per-edge fresh variables quantified innermost; universal
    vertices are preceded by j forcing cliques of size j+1.
    """
    if j < 2:
        raise InvalidStructureError("needs j >= 2")
    big = math.comb(2 * j + 1, j)
    rs = _resolve_for(s, big, {1, big}, "clique block reduction")
    names = _Names([q.variable for q in rs.prefix])
    blocks = {
        q.variable: [names.make(f"{q.variable}~blk~{i}") for i in range(1, j + 1)]
        for q in rs.prefix
    }
    prefix: list[Quantifier] = []
    atoms: list[Atom] = []
    for q in rs.prefix:
        if q.threshold == big:
            for i in range(1, j + 1):
                forcing = [names.make(f"{q.variable}~u{i}~{t}") for t in range(1, j + 2)]
                prefix.extend(Quantifier(j, f) for f in forcing)
                members = forcing + [blocks[q.variable][i - 1]]
                for a in range(len(members)):
                    for b in range(a + 1, len(members)):
                        atoms.append(("E", (members[a], members[b])))
        prefix.extend(Quantifier(j, v) for v in blocks[q.variable])
    for e, (x, y) in enumerate(_dedup_edges(rs)):
        gadget = block_distinctness_gadget(j, blocks[x], blocks[y], f"e{e}", names)
        prefix.extend(gadget.quantifiers)
        atoms.extend(gadget.atoms)
    return build_template(clique(2 * j + 1)), Sentence(tuple(prefix), tuple(atoms))


def pad_clique(j: int, n: int, s: Sentence) -> tuple[Structure, Sentence]:
    """Lift a threshold-j sentence from the (2j+1)-clique to the n-clique by
    an outermost (n-2j-1)-clique of fresh variables adjacent to
    everything."""
    if not n > 2 * j + 1 >= 5:
        raise InvalidStructureError("needs n > 2j+1 >= 5")
    rs = _resolve_for(s, 2 * j + 1, {j}, "clique padding")
    names = _Names([q.variable for q in rs.prefix])
    pads = [names.make(f"pad~c~{i}") for i in range(1, n - 2 * j)]
    prefix = tuple(Quantifier(j, p) for p in pads) + rs.prefix
    atoms = list(rs.atoms)
    for a in range(len(pads)):
        for b in range(a + 1, len(pads)):
            atoms.append(("E", (pads[a], pads[b])))
    for p in pads:
        for q in rs.prefix:
            atoms.append(("E", (p, q.variable)))
    return build_template(clique(n)), Sentence(prefix, tuple(atoms))


def reduce_clique_one_j(n: int, j: int, s: Sentence) -> tuple[Structure, Sentence]:
    """Simulate quantified n-colouring with thresholds {1, j}: universal
    vertices gain n-j fresh threshold-j companions clique-joined with
    them."""
    if not 1 < j <= n:
        raise InvalidStructureError("needs 1 < j <= n")
    rs = _resolve_for(s, n, {1, n}, "clique {1,j} reduction")
    names = _Names([q.variable for q in rs.prefix])
    prefix: list[Quantifier] = []
    atoms = list(rs.atoms)
    for q in rs.prefix:
        if q.threshold == n and n > 1:
            companions = [names.make(f"{q.variable}~u~{t}") for t in range(1, n - j + 1)]
            prefix.extend(Quantifier(j, c) for c in companions)
            prefix.append(Quantifier(j, q.variable))
            members = companions + [q.variable]
            for a in range(len(members)):
                for b in range(a + 1, len(members)):
                    atoms.append(("E", (members[a], members[b])))
        else:
            prefix.append(Quantifier(1, q.variable))
    return build_template(clique(n)), Sentence(tuple(prefix), tuple(atoms))


# ---------------------------------------------------------------------------
# Cycles


def universal_path_gadget(
    n: int, j: int, x: str, names: Optional[_Names] = None
) -> GadgetBlueprint:
    """The path block simulating a universal quantifier on the n-cycle with
    thresholds {1, j}: n segments of j-1 fresh path vertices ending at x.

    The block quantifies the segment heads and x at threshold j, then the
    fillers existentially; the attachment point x is rebound by the block.
    """
    if not (n >= 3 and 2 <= j < n):
        raise InvalidStructureError("needs n >= 3 and 2 <= j < n")
    names = names or _Names([x])
    segs = [
        [names.make(f"{x}~p{k}~{i}") for i in range(1, j)]
        for k in range(1, n + 1)
    ]
    path = [v for seg in segs for v in seg] + [x]
    atoms = tuple(("E", (path[t], path[t + 1])) for t in range(len(path) - 1))
    quantifiers = [Quantifier(j, seg[0]) for seg in segs]
    quantifiers.append(Quantifier(j, x))
    for seg in segs:
        quantifiers.extend(Quantifier(1, v) for v in seg[1:])
    fresh = tuple(v for seg in segs for v in seg)
    return GadgetBlueprint(fresh, tuple(quantifiers), atoms, (x,))


def even_cycle_offsets(n: int, j: int) -> tuple[int, list[int]]:
    """(r, alpha) for the even-cycle reduction: r is the path length
    correction and alpha the threshold-j cycle indices, ending at n/2+1."""
    r = (-(n // 2) - 2) % (j - 1)
    count = (n // 2 + 2 + r) // (j - 1)
    alpha = [k * j - r - k - 1 for k in range(1, count + 1)]
    if alpha[-1] != n // 2 + 1:
        raise AssertionError("alpha indices must end at n/2 + 1")
    return r, alpha


def reduce_even_cycle(
    n: int, j: int, s: Sentence, source_is_qcsp: bool
) -> tuple[Structure, Sentence]:
    """Compile a sentence over the (n/2)-clique into one over the n-cycle
    (even n) with thresholds {1, j}.

    The construction appends a fixed cycle with an anchoring path, forces
    part of it at threshold j, and replaces every source edge by a chain of
    3n/2 cycle copies whose far end carries the edge's endpoints; in the
    quantified variant universal variables are first replaced by path
    blocks.
    """
    if n < 6 or n % 2 or not 2 <= j <= n // 2:
        raise InvalidStructureError("needs even n >= 6 and 2 <= j <= n/2")
    half = n // 2
    allowed = {1, half} if source_is_qcsp else {1}
    rs = _resolve_for(s, half, allowed, "even-cycle reduction")
    r, alpha = even_cycle_offsets(n, j)

    names = _Names([q.variable for q in rs.prefix])
    w = [names.make(f"w~p~{i}") for i in range(r + 1)]
    v = [names.make(f"v~c~{i}") for i in range(n)]
    atoms: list[Atom] = []
    for i in range(n):
        atoms.append(("E", (v[i], v[(i + 1) % n])))
    for i in range(r):
        atoms.append(("E", (w[i], w[i + 1])))
    atoms.append(("E", (w[r], v[0])))

    prefix: list[Quantifier] = [Quantifier(1, w[0])]
    prefix.extend(Quantifier(j, v[a]) for a in alpha)
    rest = [w[i] for i in range(1, r + 1)] + [v[i] for i in range(n) if i not in set(alpha)]
    prefix.extend(Quantifier(1, u) for u in rest)

    inner: list[Quantifier] = []
    for q in rs.prefix:
        if source_is_qcsp and q.threshold == half:
            gadget = universal_path_gadget(n, j, q.variable, names)
            inner.extend(gadget.quantifiers)
            atoms.extend(gadget.atoms)
        else:
            inner.append(Quantifier(1, q.variable))
    prefix.extend(inner)

    copies = 3 * half
    gadget_vars: list[str] = []
    for e, (x, y) in enumerate(_dedup_edges(rs)):
        vertex: dict[tuple[int, int], str] = {(1, i): v[i] for i in range(n)}
        for c in range(2, copies + 1):
            for i in range(n):
                if c == copies and i == half:
                    vertex[(c, i)] = y
                else:
                    name = names.make(f"e{e}~g{c}~{i}")
                    vertex[(c, i)] = name
                    gadget_vars.append(name)
        for c in range(1, copies):
            for i in range(n):
                atoms.append(("E", (vertex[(c, i)], vertex[(c + 1, i)])))
        for c in range(2, copies + 1):
            for i in range(n):
                atoms.append(("E", (vertex[(c, i)], vertex[(c, (i + 1) % n)])))
        tail = [names.make(f"e{e}~x~{t}") for t in range(1, half - 2)] + [x]
        gadget_vars.extend(tail[:-1])
        chain = [vertex[(copies, 0)]] + tail
        for t in range(len(chain) - 1):
            atoms.append(("E", (chain[t], chain[t + 1])))
    prefix.extend(Quantifier(1, u) for u in gadget_vars)
    return build_template(cycle(n)), Sentence(tuple(prefix), tuple(atoms))


# ---------------------------------------------------------------------------
# Girth isolation for bipartite templates of girth >= 6


def _isolation_plan(g) -> tuple[int, int]:
    girth = g.girth()
    if girth is None:
        raise InvalidStructureError("template is acyclic; nothing to isolate")
    if girth % 2 or girth < 6:
        raise InvalidStructureError("needs a bipartite template of girth >= 6")
    if g.bipartition() is None:
        raise InvalidStructureError("template is not bipartite")
    d = g.diameter()
    if d is None:
        raise InvalidStructureError("template must be connected")
    return girth // 2, d


def isolation_spine(h: Structure) -> Sentence:
    """The spine part of the girth-isolation sentence: a threshold-2 path of
    diameter+1 vertices plus one candidate cycle per window.

    Each candidate chain closes a window of the spine into a girth-length
    cycle; the chain's first vertex keeps threshold 2 (it is the adversary's
    probe that a stretched window really lies on a shortest cycle) while the
    remaining chain vertices are existential, since their completions along
    a tight arc are forced anyway.
    """
    g = require_graph(h)
    j, d = _isolation_plan(g)
    spine = [f"v~s~{i}" for i in range(1, d + 2)]
    prefix = [Quantifier(2, u) for u in spine]
    atoms: list[Atom] = [("E", (spine[i], spine[i + 1])) for i in range(d)]
    tail_quantifiers: list[Quantifier] = []
    for i in range(1, d - j + 2):
        block = [f"x{i}~b~{t}" for t in range(1, j)]
        prefix.append(Quantifier(2, block[0]))
        tail_quantifiers.extend(Quantifier(1, u) for u in block[1:])
        atoms.append(("E", (block[0], spine[i - 1])))
        for t in range(len(block) - 1):
            atoms.append(("E", (block[t], block[t + 1])))
        atoms.append(("E", (block[-1], spine[i - 1 + j])))
    return Sentence(tuple(prefix) + tuple(tail_quantifiers), tuple(atoms))


def isolation_blocks(h: Structure) -> list[list[str]]:
    """The candidate 2j-cycles of the spine, each in cyclic vertex order."""
    g = require_graph(h)
    j, d = _isolation_plan(g)
    spine = [f"v~s~{i}" for i in range(1, d + 2)]
    out = []
    for i in range(1, d - j + 2):
        block = [f"x{i}~b~{t}" for t in range(1, j)]
        out.append(spine[i - 1 : i + j] + list(reversed(block)))
    return out


def girth_isolation(h: Structure, s: Sentence) -> tuple[Structure, Sentence]:
    """Compile a colouring sentence over the girth/2 clique into the
    bounded-prefix fragment over a bipartite template of girth >= 6.

    A threshold-2 spine with one candidate cycle per window guarantees at
    least one faithfully embedded short cycle; each candidate carries its
    own copy of the downstream chain construction and of the source
    variables.
    """
    g = require_graph(h)
    j, d = _isolation_plan(g)
    rs = _resolve_for(s, j, {1}, "girth isolation")
    spine_sentence = isolation_spine(h)
    blocks = isolation_blocks(h)
    names = _Names(v for v in spine_sentence.variables())
    prefix = list(spine_sentence.prefix)
    atoms = list(spine_sentence.atoms)

    n = 2 * j
    copies = 3 * j
    edges = _dedup_edges(rs)
    for bi, cyc in enumerate(blocks, start=1):
        copy_of = {q.variable: names.make(f"b{bi}~{q.variable}") for q in rs.prefix}
        w0 = names.make(f"b{bi}~w~0")
        prefix.append(Quantifier(1, w0))
        atoms.append(("E", (w0, cyc[0])))
        prefix.extend(Quantifier(1, copy_of[q.variable]) for q in rs.prefix)
        for e, (x, y) in enumerate(edges):
            vertex: dict[tuple[int, int], str] = {(1, i): cyc[i] for i in range(n)}
            tail_names: list[str] = []
            for c in range(2, copies + 1):
                for i in range(n):
                    if c == copies and i == j:
                        vertex[(c, i)] = copy_of[y]
                    else:
                        name = names.make(f"b{bi}~e{e}~g{c}~{i}")
                        vertex[(c, i)] = name
                        tail_names.append(name)
            for c in range(1, copies):
                for i in range(n):
                    atoms.append(("E", (vertex[(c, i)], vertex[(c + 1, i)])))
            for c in range(2, copies + 1):
                for i in range(n):
                    atoms.append(("E", (vertex[(c, i)], vertex[(c, (i + 1) % n)])))
            tail = [names.make(f"b{bi}~e{e}~x~{t}") for t in range(1, j - 2)] + [copy_of[x]]
            tail_names.extend(tail[:-1])
            chain = [vertex[(copies, 0)]] + tail
            for t in range(len(chain) - 1):
                atoms.append(("E", (chain[t], chain[t + 1])))
            prefix.extend(Quantifier(1, u) for u in tail_names)
    return h, Sentence(tuple(prefix), tuple(atoms))


# ---------------------------------------------------------------------------
# The reflexive 4-cycle


def reduce_reflexive_c4(s: Sentence) -> tuple[Structure, Sentence]:
    """Compile a quantified 4-colouring sentence into thresholds {1,2,3,4}
    over the reflexive 4-cycle: a mixed-threshold fixed copy of the
    template plus one three-layer square gadget per source edge."""
    rs = _resolve_for(s, 4, {1, 4}, "reflexive-C4 reduction")
    names = _Names([q.variable for q in rs.prefix])
    z = [names.make(f"z~c~{p}") for p in range(1, 5)]
    prefix: list[Quantifier] = [
        Quantifier(1, z[0]),
        Quantifier(2, z[1]),
        Quantifier(3, z[2]),
        Quantifier(2, z[3]),
    ]
    atoms: list[Atom] = []
    for p in range(4):
        atoms.append(("E", (z[p], z[(p + 1) % 4])))
    for p in range(4):
        atoms.append(("E", (z[p], z[p])))
    for q in rs.prefix:
        prefix.append(Quantifier(4 if q.threshold == 4 else 1, q.variable))
    inner: list[str] = []
    for e, (x, y) in enumerate(_dedup_edges(rs)):
        layers = [z]
        for tag in ("a", "b", "c"):
            layer = []
            for p in range(1, 5):
                if tag == "c" and p == 3:
                    layer.append(y)
                else:
                    name = names.make(f"e{e}~{tag}~{p}")
                    layer.append(name)
                    inner.append(name)
            layers.append(layer)
        for layer in layers[1:]:
            for p in range(4):
                atoms.append(("E", (layer[p], layer[(p + 1) % 4])))
        for outer_layer, inner_layer in zip(layers, layers[1:]):
            for p in range(4):
                atoms.append(("E", (outer_layer[p], inner_layer[p])))
                atoms.append(("E", (outer_layer[p], inner_layer[(p + 1) % 4])))
        atoms.append(("E", (x, layers[3][0])))
    prefix.extend(Quantifier(1, u) for u in inner)
    return build_template(reflexive_cycle(4)), Sentence(tuple(prefix), tuple(atoms))


def expand_reflexive_c4_macros(s: Sentence) -> Sentence:
    """Rewrite thresholds 2 and 3 into for-all/exists shorthand, valid on
    the reflexive 4-cycle: each threshold-2 quantifier gains one universal
    guard adjacent to it, each threshold-3 quantifier two."""
    rs = _resolve_for(s, 4, {1, 2, 3, 4}, "macro expansion")
    names = _Names([q.variable for q in rs.prefix])
    prefix: list[Quantifier] = []
    atoms = list(rs.atoms)
    for q in rs.prefix:
        if q.threshold in (2, 3):
            guards = [
                names.make(f"{q.variable}~p~{t}")
                for t in range(1, q.threshold)
            ]
            prefix.extend(Quantifier(4, guard) for guard in guards)
            prefix.append(Quantifier(1, q.variable))
            for guard in guards:
                atoms.append(("E", (guard, q.variable)))
        else:
            prefix.append(q)
    return Sentence(tuple(prefix), tuple(atoms))


# ---------------------------------------------------------------------------
# Verification


@dataclass
class ReductionCase:
    index: int
    source: str
    source_verdict: str
    target_verdict: str
    status: str
    target_vars: int = 0
    target_atoms: int = 0
    seconds: float = 0.0

    def line(self) -> str:
        return f"{self.index} {self.source_verdict} {self.target_verdict} {self.status}"


@dataclass
class ReductionReport:
    rule: ReductionRule
    cases: list[ReductionCase] = field(default_factory=list)

    def lines(self) -> list[str]:
        return [c.line() for c in self.cases]

    def disagreements(self) -> list[ReductionCase]:
        return [c for c in self.cases if c.status == "DISAGREE"]

    def skipped(self) -> list[ReductionCase]:
        return [c for c in self.cases if c.status == "budget-skipped"]

    def ok(self) -> bool:
        return not self.disagreements()


def compile_rule(
    rule_: ReductionRule, source_template: Structure, source: Sentence
) -> tuple[Structure, Sentence]:
    """Compile one source under the rule; raises on precondition failure."""
    name = rule_.name
    if name == "nae":
        if source_template != build_template(nae_boolean()):
            raise InvalidStructureError("nae sources live on the not-all-equal template")
        return reduce_nae(rule_.get("j"), rule_.get("n"), source)
    if name == "clique-gj":
        j = rule_.get("j")
        expected = build_template(clique(math.comb(2 * j + 1, j)))
        if source_template != expected:
            raise InvalidStructureError("clique size mismatch for the block reduction")
        return reduce_clique_single_threshold(j, source)
    if name == "clique-pad":
        j, n = rule_.get("j"), rule_.get("n")
        if source_template != build_template(clique(2 * j + 1)):
            raise InvalidStructureError("padding sources live on the (2j+1)-clique")
        return pad_clique(j, n, source)
    if name == "clique-1j":
        j, n = rule_.get("j"), rule_.get("n")
        if source_template != build_template(clique(n)):
            raise InvalidStructureError("clique size mismatch")
        return reduce_clique_one_j(n, j, source)
    if name == "even-cycle":
        n, j = rule_.get("n"), rule_.get("j")
        if source_template != build_template(clique(n // 2)):
            raise InvalidStructureError("source template must be the n/2 clique")
        return reduce_even_cycle(n, j, source, True)
    if name == "even-cycle-csp":
        n, j = rule_.get("n"), rule_.get("j")
        if source_template != build_template(clique(n // 2)):
            raise InvalidStructureError("source template must be the n/2 clique")
        return reduce_even_cycle(n, j, source, False)
    if name == "girth-isolation":
        h = rule_.get("h")
        if h is None:
            raise InvalidStructureError("girth isolation needs the target template h")
        return girth_isolation(h, source)
    if name == "reflexive-c4":
        if source_template != build_template(clique(4)):
            raise InvalidStructureError("sources live on the 4-clique")
        return reduce_reflexive_c4(source)
    if name == "c4star-macros":
        if source_template != build_template(reflexive_cycle(4)):
            raise InvalidStructureError("macro sources live on the reflexive 4-cycle")
        return build_template(reflexive_cycle(4)), expand_reflexive_c4_macros(source)
    raise InvalidStructureError(f"rule {name!r} has no direct compiler")


def corrupt_compiled(target: tuple[Structure, Sentence]) -> tuple[Structure, Sentence]:
    """Deliberately break a compiled sentence by rewiring its last atom onto
    the first prefix variable; used by fault-injection tests to prove the
    verifier catches bad gadgets."""
    template, s = target
    if not s.atoms or not s.prefix:
        return target
    name, vs = s.atoms[-1]
    first = s.prefix[0].variable
    mutated = (name, tuple(first for _ in vs))
    return template, Sentence(s.prefix, s.atoms[:-1] + (mutated,))


def universal_path_cases(n: int, j: int) -> list[tuple[str, bool, Structure, Sentence]]:
    """Soundness and adversary-completeness checks for the path block on
    the n-cycle: the block alone must hold, and for every target vertex the
    block with that vertex excluded for x must fail."""
    gadget = universal_path_gadget(n, j, "x")
    base = build_template(cycle(n))
    sentence = Sentence(gadget.quantifiers, gadget.atoms)
    cases: list[tuple[str, bool, Structure, Sentence]] = [
        ("prover-soundness", True, base, sentence)
    ]
    sig = [("E", 2), ("Avoid", 1)]
    for target_value in range(n):
        template = make_structure(
            sig,
            n,
            {
                "E": set(base.tuples("E")),
                "Avoid": {(u,) for u in range(n) if u != target_value},
            },
        )
        avoided = Sentence(gadget.quantifiers, gadget.atoms + (("Avoid", ("x",)),))
        cases.append((f"adversary-forces-{target_value}", False, template, avoided))
    return cases


def _random_graph_sentence(
    rng, n_vars: int, max_atoms: int, thresholds: Sequence[Optional[int]]
) -> Sentence:
    names = [f"s{i}" for i in range(n_vars)]
    prefix = tuple(Quantifier(rng.choice(list(thresholds)), v) for v in names)
    atoms = []
    for _ in range(rng.randint(0, max_atoms)):
        a = rng.choice(names)
        b = rng.choice(names)
        atoms.append(("E", (a, b)))
    return Sentence(prefix, tuple(atoms))


def default_sources(rule_: ReductionRule, trials: int, seed: int) -> list[Sentence]:
    """A seeded source suite for command-line verification of a rule."""
    import random

    rng = random.Random(seed)
    name = rule_.name
    out: list[Sentence] = []
    if name == "odd-cycle-path":
        return []
    if name == "nae":
        names = ["a", "b", "c"]
        for _ in range(trials):
            n_vars = rng.randint(1, 3)
            vs = names[:n_vars]
            prefix = tuple(Quantifier(rng.choice((1, 2)), v) for v in vs)
            atoms = []
            for _ in range(rng.randint(1, 2)):
                triple = [rng.choice(vs) for _ in range(3)]
                if len(set(triple)) == 1 and len(vs) > 1:
                    # avoid the trivially-false all-equal atom most of the time
                    triple[rng.randrange(3)] = rng.choice(
                        [v for v in vs if v != triple[0]]
                    )
                atoms.append(("R", tuple(triple)))
            out.append(Sentence(prefix, tuple(atoms)))
        return out
    if name == "clique-gj":
        j = rule_.get("j")
        big = math.comb(2 * j + 1, j)
        fixed = [
            Sentence((Quantifier(1, "u"),), ()),
            Sentence((Quantifier(1, "u"),), (("E", ("u", "u")),)),
            Sentence((Quantifier(1, "u"), Quantifier(1, "v")), (("E", ("u", "v")),)),
            Sentence((Quantifier(big, "u"), Quantifier(1, "v")), (("E", ("u", "v")),)),
            Sentence((Quantifier(1, "u"), Quantifier(big, "v")), (("E", ("u", "v")),)),
            Sentence((Quantifier(big, "u"), Quantifier(big, "v")), (("E", ("u", "v")),)),
        ]
        return fixed[: max(1, trials)]
    if name == "clique-pad":
        j = rule_.get("j")
        for _ in range(trials):
            out.append(_random_graph_sentence(rng, rng.randint(1, 3), 3, [j]))
        return out
    if name == "clique-1j":
        n = rule_.get("n")
        for _ in range(trials):
            out.append(_random_graph_sentence(rng, rng.randint(1, 3), 3, [1, n]))
        return out
    if name in ("even-cycle", "even-cycle-csp"):
        half = rule_.get("n") // 2
        fixed = [
            Sentence((Quantifier(1, "u"),), ()),
            Sentence((Quantifier(1, "u"),), (("E", ("u", "u")),)),
            Sentence((Quantifier(1, "u"), Quantifier(1, "v")), (("E", ("u", "v")),)),
        ]
        if name == "even-cycle":
            fixed.append(
                Sentence((Quantifier(half, "u"), Quantifier(1, "v")), (("E", ("u", "v")),))
            )
            fixed.append(
                Sentence((Quantifier(half, "u"), Quantifier(half, "v")), (("E", ("u", "v")),))
            )
        else:
            fixed.append(
                Sentence(
                    (Quantifier(1, "u"), Quantifier(1, "v"), Quantifier(1, "t")),
                    (("E", ("u", "v")), ("E", ("v", "t"))),
                )
            )
        return fixed[: max(1, trials)]
    if name == "girth-isolation":
        fixed = [
            Sentence((Quantifier(1, "u"),), ()),
            Sentence((Quantifier(1, "u"),), (("E", ("u", "u")),)),
            Sentence((Quantifier(1, "u"), Quantifier(1, "v")), (("E", ("u", "v")),)),
        ]
        return fixed[: max(1, trials)]
    if name == "reflexive-c4":
        fixed = [
            Sentence((Quantifier(1, "u"), Quantifier(1, "v")), (("E", ("u", "v")),)),
            Sentence((Quantifier(4, "u"), Quantifier(1, "v")), (("E", ("u", "v")),)),
            Sentence((Quantifier(4, "u"), Quantifier(4, "v")), (("E", ("u", "v")),)),
            Sentence((Quantifier(1, "u"),), (("E", ("u", "u")),)),
        ]
        out.extend(fixed)
        while len(out) < trials:
            out.append(_random_graph_sentence(rng, rng.randint(1, 3), 2, [1, 4]))
        return out[: max(1, trials)]
    if name == "c4star-macros":
        names = ["x", "y"]
        for n_vars in (1, 2):
            vs = names[:n_vars]
            slots = [(a, b) for a in vs for b in vs]
            for combo_bits in range(1 << len(slots)):
                atom_list = [
                    ("E", slots[i]) for i in range(len(slots)) if combo_bits >> i & 1
                ]
                if len(atom_list) > 2:
                    continue
                for thresholds in _threshold_tuples(n_vars):
                    prefix = tuple(Quantifier(t, v) for t, v in zip(thresholds, vs))
                    out.append(Sentence(prefix, tuple(atom_list)))
        return out
    raise InvalidStructureError(f"no default source suite for rule {name!r}")


def _threshold_tuples(n_vars: int):
    import itertools as _it

    return _it.product((1, 2, 3, 4), repeat=n_vars)


def verify_reduction(
    rule_: ReductionRule,
    source_template: Structure,
    sources: Sequence[Sentence],
    *,
    budget: Optional[int] = None,
    compiler: Optional[Callable[[ReductionRule, Structure, Sentence], tuple[Structure, Sentence]]]
    = None,
    corrupt: bool = False,
) -> ReductionReport:
    """Evaluate each source and its compiled target with the oracle.

    Any disagreement is a hard failure (status DISAGREE).  Cases whose
    oracle run exceeds the node budget are reported as budget-skipped,
    never as passed.  Precondition violations are reported per source.
    """
    report = ReductionReport(rule_)
    if rule_.name == "odd-cycle-path":
        n, j = rule_.get("n"), rule_.get("j")
        for index, (label, expected, template, s) in enumerate(universal_path_cases(n, j)):
            start = time.perf_counter()
            want = "yes" if expected else "no"
            try:
                got = oracle.evaluate(template, s, budget=budget)
            except oracle.BudgetExceededError:
                report.cases.append(
                    ReductionCase(index, label, want, "?", "budget-skipped")
                )
                continue
            status = "agree" if got == expected else "DISAGREE"
            report.cases.append(
                ReductionCase(
                    index,
                    label,
                    want,
                    "yes" if got else "no",
                    status,
                    len(s.prefix),
                    len(s.atoms),
                    time.perf_counter() - start,
                )
            )
        return report

    compile_fn = compiler or compile_rule
    for index, source in enumerate(sources):
        label = str(source)
        start = time.perf_counter()
        try:
            compiled = compile_fn(rule_, source_template, source)
            if corrupt:
                compiled = corrupt_compiled(compiled)
        except InvalidStructureError as exc:
            report.cases.append(
                ReductionCase(index, label, "?", "?", f"precondition({exc})")
            )
            continue
        target_template, target_sentence = compiled
        source_verdict = "?"
        target_verdict = "?"
        try:
            source_verdict = "yes" if oracle.evaluate(source_template, source, budget=budget) else "no"
            target_verdict = (
                "yes" if oracle.evaluate(target_template, target_sentence, budget=budget) else "no"
            )
        except oracle.BudgetExceededError:
            report.cases.append(
                ReductionCase(
                    index,
                    label,
                    source_verdict,
                    target_verdict,
                    "budget-skipped",
                    len(target_sentence.prefix),
                    len(target_sentence.atoms),
                    time.perf_counter() - start,
                )
            )
            continue
        status = "agree" if source_verdict == target_verdict else "DISAGREE"
        report.cases.append(
            ReductionCase(
                index,
                label,
                source_verdict,
                target_verdict,
                status,
                len(target_sentence.prefix),
                len(target_sentence.atoms),
                time.perf_counter() - start,
            )
        )
    return report
