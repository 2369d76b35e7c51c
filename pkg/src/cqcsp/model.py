"""Core domain types: finite relational templates, counting-quantifier
sentences, instance graphs, and the template-family generators.

Conventions kept throughout the package:

* domain elements are the contiguous integers ``0..n-1``;
* undirected graphs are stored as symmetric sets of directed pairs, and
  the generators always emit both orientations;
* cycle vertices are numbered so that ``i`` and ``j`` are adjacent iff
  ``|i-j|`` is 1 or ``n-1``; the star centre is vertex 0.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence


class InvalidStructureError(ValueError):
    """A structure, sentence or family parameter violates an invariant."""


Atom = tuple[str, tuple[str, ...]]


@dataclass(frozen=True)
class Signature:
    """Relation names with arities. Names are unique, arities >= 1."""

    relations: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        names = [name for name, _ in self.relations]
        if len(set(names)) != len(names):
            raise InvalidStructureError("duplicate relation name in signature")
        for name, arity in self.relations:
            if arity < 1:
                raise InvalidStructureError(f"relation {name!r}: arity must be >= 1")

    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.relations)

    def arity(self, name: str) -> int:
        for rel, arity in self.relations:
            if rel == name:
                return arity
        raise KeyError(name)

    def __contains__(self, name: object) -> bool:
        return any(rel == name for rel, _ in self.relations)


GRAPH_SIGNATURE = Signature((("E", 2),))


@dataclass(frozen=True, eq=False)
class Structure:
    """A finite relational structure over ``0..domain_size-1``.

    ``constants`` optionally names domain elements; retraction instances
    use them to pin variables.  Equality is by canonical sorted-tuple
    form, so two structures built in different tuple orders compare equal.
    """

    signature: Signature
    domain_size: int
    relations: dict[str, frozenset[tuple[int, ...]]]
    constants: dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.domain_size < 1:
            raise InvalidStructureError("domain size must be positive")
        if set(self.relations) != set(self.signature.names()):
            raise InvalidStructureError("relation map does not match signature")
        for name, tuples in self.relations.items():
            arity = self.signature.arity(name)
            for t in tuples:
                if len(t) != arity:
                    raise InvalidStructureError(
                        f"tuple {t} has wrong arity for relation {name!r}"
                    )
                for entry in t:
                    if not 0 <= entry < self.domain_size:
                        raise InvalidStructureError(
                            f"element {entry} out of range in relation {name!r}"
                        )
        for cname, value in self.constants.items():
            if not 0 <= value < self.domain_size:
                raise InvalidStructureError(f"constant {cname!r} out of range")

    def tuples(self, name: str) -> frozenset[tuple[int, ...]]:
        return self.relations[name]

    def canonical_form(self):
        return (
            self.domain_size,
            tuple(sorted(self.signature.relations)),
            tuple(sorted((name, tuple(sorted(ts))) for name, ts in self.relations.items())),
            tuple(sorted(self.constants.items())),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Structure):
            return NotImplemented
        return self.canonical_form() == other.canonical_form()

    def __hash__(self) -> int:
        return hash(self.canonical_form())

    def __repr__(self) -> str:
        rels = ", ".join(f"{n}:{len(ts)}" for n, ts in sorted(self.relations.items()))
        return f"Structure(n={self.domain_size}, {rels})"


def make_structure(
    relation_arities: Sequence[tuple[str, int]],
    domain_size: int,
    relations: dict[str, Iterable[tuple[int, ...]]],
    constants: Optional[dict[str, int]] = None,
) -> Structure:
    sig = Signature(tuple(relation_arities))
    rels = {name: frozenset(tuple(t) for t in relations.get(name, ())) for name in sig.names()}
    return Structure(sig, domain_size, rels, dict(constants or {}))


def graph_structure(
    domain_size: int,
    undirected_edges: Iterable[tuple[int, int]],
    loops: Iterable[int] = (),
) -> Structure:
    """Graph template over the single binary symbol E; both orientations."""
    tuples: set[tuple[int, int]] = set()
    for a, b in undirected_edges:
        tuples.add((a, b))
        tuples.add((b, a))
    for v in loops:
        tuples.add((v, v))
    return make_structure([("E", 2)], domain_size, {"E": tuples})


# ---------------------------------------------------------------------------
# Sentences


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_~]*\Z")


@dataclass(frozen=True)
class Quantifier:
    """One prefix entry.  ``threshold=None`` is the for-all sugar: it
    resolves to the template's domain size at solve time."""

    threshold: Optional[int]
    variable: str

    def __post_init__(self) -> None:
        if self.threshold is not None and self.threshold < 1:
            raise InvalidStructureError("quantifier threshold must be >= 1")
        if not _IDENT.match(self.variable):
            raise InvalidStructureError(f"bad variable name {self.variable!r}")

    def __str__(self) -> str:
        if self.threshold is None:
            return f"A {self.variable}"
        return f"E{self.threshold} {self.variable}"


@dataclass(frozen=True)
class Sentence:
    """A prenex sentence: counting-quantifier prefix over a conjunction of
    positive atoms.  Template-independent; thresholds are checked against a
    concrete template only when the sentence is evaluated."""

    prefix: tuple[Quantifier, ...]
    atoms: tuple[Atom, ...]

    def __post_init__(self) -> None:
        seen: set[str] = set()
        for q in self.prefix:
            if q.variable in seen:
                raise InvalidStructureError(f"duplicate prefix variable {q.variable!r}")
            seen.add(q.variable)
        arities: dict[str, int] = {}
        for name, vs in self.atoms:
            if not vs:
                raise InvalidStructureError(f"atom {name!r} has no arguments")
            if arities.setdefault(name, len(vs)) != len(vs):
                raise InvalidStructureError(f"relation {name!r} used with two arities")
            for v in vs:
                if v not in seen:
                    raise InvalidStructureError(f"atom variable {v!r} not bound by the prefix")

    def variables(self) -> tuple[str, ...]:
        return tuple(q.variable for q in self.prefix)

    def var_index(self) -> dict[str, int]:
        return {q.variable: i for i, q in enumerate(self.prefix)}

    def resolved(self, domain_size: int) -> "Sentence":
        """Replace the for-all sugar by the concrete threshold ``domain_size``."""
        if all(q.threshold is not None for q in self.prefix):
            return self
        prefix = tuple(
            Quantifier(domain_size if q.threshold is None else q.threshold, q.variable)
            for q in self.prefix
        )
        return Sentence(prefix, self.atoms)

    def thresholds(self) -> tuple[Optional[int], ...]:
        return tuple(q.threshold for q in self.prefix)

    def threshold_set(self, domain_size: Optional[int] = None) -> frozenset[int]:
        out = set()
        for q in self.prefix:
            if q.threshold is None:
                if domain_size is None:
                    raise InvalidStructureError("universal sugar needs a domain size")
                out.add(domain_size)
            else:
                out.add(q.threshold)
        return frozenset(out)

    def __str__(self) -> str:
        head = " ".join(str(q) for q in self.prefix)
        body = " & ".join(f"{n}({','.join(vs)})" for n, vs in self.atoms)
        return f"{head} | {body}".strip()


def sentence(prefix: Sequence[tuple[Optional[int], str]], atoms: Sequence[Atom]) -> Sentence:
    return Sentence(
        tuple(Quantifier(j, v) for j, v in prefix),
        tuple((n, tuple(vs)) for n, vs in atoms),
    )


# ---------------------------------------------------------------------------
# Instance graphs


@dataclass(frozen=True)
class InstanceGraph:
    """The graph induced by a sentence's matrix over a single binary symbol.

    Vertices are the prefix variables in quantifier order; proper edges are
    deduplicated index pairs ``(i, j)`` with ``i < j``; a loop atom is
    recorded as a flag, not an edge.
    """

    variables: tuple[str, ...]
    thresholds: tuple[Optional[int], ...]
    edges: frozenset[tuple[int, int]]
    loops: frozenset[int]

    def n_vars(self) -> int:
        return len(self.variables)

    def neighbors(self, i: int) -> list[int]:
        out = set()
        for a, b in self.edges:
            if a == i:
                out.add(b)
            elif b == i:
                out.add(a)
        return sorted(out)

    def predecessors(self, i: int) -> list[int]:
        """Earlier-quantified neighbours of vertex ``i``."""
        return [v for v in self.neighbors(i) if v < i]

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        comps = []
        for start in range(len(self.variables)):
            if start in seen:
                continue
            comp = [start]
            seen.add(start)
            stack = [start]
            while stack:
                v = stack.pop()
                for u in self.neighbors(v):
                    if u not in seen:
                        seen.add(u)
                        comp.append(u)
                        stack.append(u)
            comps.append(sorted(comp))
        return comps

    def component_of(self, i: int) -> list[int]:
        for comp in self.components():
            if i in comp:
                return comp
        raise IndexError(i)

    def bipartition(self) -> Optional[list[int]]:
        """Two-colouring by parity over proper edges, or None on an odd
        cycle.  Loops are ignored here; callers reject them separately."""
        colors: list[int] = [-1] * len(self.variables)
        for start in range(len(self.variables)):
            if colors[start] != -1:
                continue
            colors[start] = 0
            queue = [start]
            while queue:
                v = queue.pop()
                for u in self.neighbors(v):
                    if colors[u] == -1:
                        colors[u] = 1 - colors[v]
                        queue.append(u)
                    elif colors[u] == colors[v]:
                        return None
        return colors

    def distances_from(self, i: int) -> dict[int, int]:
        dist = {i: 0}
        frontier = [i]
        while frontier:
            nxt = []
            for v in frontier:
                for u in self.neighbors(v):
                    if u not in dist:
                        dist[u] = dist[v] + 1
                        nxt.append(u)
            frontier = nxt
        return dist


def instance_graph(s: Sentence) -> InstanceGraph:
    """Build the instance graph; requires a single binary relation symbol."""
    names = {name for name, _ in s.atoms}
    if len(names) > 1:
        raise InvalidStructureError("instance graph needs a single relation symbol")
    for name, vs in s.atoms:
        if len(vs) != 2:
            raise InvalidStructureError("instance graph needs a binary relation symbol")
    index = s.var_index()
    edges: set[tuple[int, int]] = set()
    loops: set[int] = set()
    for _, (a, b) in s.atoms:
        i, j = index[a], index[b]
        if i == j:
            loops.add(i)
        else:
            edges.add((min(i, j), max(i, j)))
    return InstanceGraph(s.variables(), s.thresholds(), frozenset(edges), frozenset(loops))


# ---------------------------------------------------------------------------
# Canonical query / canonical database


def canonical_database(s: Sentence) -> Structure:
    """The structure whose domain is the sentence's variables (in prefix
    order) and whose tuples are exactly the atoms."""
    index = s.var_index()
    arities: dict[str, int] = {}
    rels: dict[str, set[tuple[int, ...]]] = {}
    for name, vs in s.atoms:
        arities[name] = len(vs)
        rels.setdefault(name, set()).add(tuple(index[v] for v in vs))
    sig = tuple(sorted(arities.items()))
    n = max(1, len(s.prefix))
    return make_structure(sig, n, {k: v for k, v in rels.items()})


def canonical_query(b: Structure) -> Sentence:
    """All variables quantified exists>=1, one atom per tuple of ``b``."""
    if b.constants:
        raise InvalidStructureError("canonical query of a structure with constants")
    names = [f"v{i}" for i in range(b.domain_size)]
    atoms = []
    for rel in b.signature.names():
        for t in sorted(b.tuples(rel)):
            atoms.append((rel, tuple(names[e] for e in t)))
    return sentence([(1, v) for v in names], atoms)


# ---------------------------------------------------------------------------
# Template families


@dataclass(frozen=True)
class TemplateFamily:
    """A named template generator with parameters; see the factory helpers."""

    kind: str
    n: Optional[int] = None
    k: Optional[int] = None
    l: Optional[int] = None
    j: Optional[int] = None
    edges: Optional[tuple[tuple[int, int], ...]] = None

    def __str__(self) -> str:
        if self.kind == "clique":
            return f"clique:{self.n}"
        if self.kind == "cycle":
            return f"cycle:{self.n}"
        if self.kind == "reflexive_cycle":
            return f"reflexive-cycle:{self.n}"
        if self.kind == "path":
            return f"path:{self.n}"
        if self.kind == "star":
            return f"star:{self.n}"
        if self.kind == "complete_bipartite":
            return f"bipartite:{self.k},{self.l}"
        if self.kind == "nae":
            return "nae"
        if self.kind == "single_quantifier":
            return f"single:{self.n},{self.j}"
        if self.kind == "hairy":
            return f"hairy:{self.n}"
        if self.kind == "hj":
            return f"hj:{self.j}"
        if self.kind in ("forest", "graph"):
            body = ",".join(f"{a}-{b}" for a, b in (self.edges or ()))
            return f"{self.kind}:{body}"
        return self.kind


def clique(n: int) -> TemplateFamily:
    if n < 1:
        raise InvalidStructureError("clique size must be >= 1")
    return TemplateFamily("clique", n=n)


def cycle(n: int) -> TemplateFamily:
    if n < 3:
        raise InvalidStructureError("cycle needs n >= 3")
    return TemplateFamily("cycle", n=n)


def reflexive_cycle(n: int) -> TemplateFamily:
    if n < 3:
        raise InvalidStructureError("reflexive cycle needs n >= 3")
    return TemplateFamily("reflexive_cycle", n=n)


def path(n: int) -> TemplateFamily:
    if n < 1:
        raise InvalidStructureError("path needs n >= 1")
    return TemplateFamily("path", n=n)


def star(n: int) -> TemplateFamily:
    if n < 1:
        raise InvalidStructureError("star needs >= 1 leaf")
    return TemplateFamily("star", n=n)


def complete_bipartite(k: int, l: int) -> TemplateFamily:
    if k < 1 or l < 1:
        raise InvalidStructureError("complete bipartite sides must be >= 1")
    return TemplateFamily("complete_bipartite", k=k, l=l)


def forest_from_edges(edges: Sequence[tuple[int, int]], n: Optional[int] = None) -> TemplateFamily:
    fam = TemplateFamily("forest", n=n, edges=tuple((min(a, b), max(a, b)) for a, b in edges))
    _check_forest(fam)
    return fam


def general_graph(edges: Sequence[tuple[int, int]], n: Optional[int] = None) -> TemplateFamily:
    for a, b in edges:
        if a == b:
            raise InvalidStructureError("general graphs are loop-free")
    return TemplateFamily("graph", n=n, edges=tuple((min(a, b), max(a, b)) for a, b in edges))


def nae_boolean() -> TemplateFamily:
    return TemplateFamily("nae")


def single_quantifier_template(n: int, j: int) -> TemplateFamily:
    if not (3 <= n and 1 < j < n):
        raise InvalidStructureError("single-quantifier template needs n >= 3 and 1 < j < n")
    return TemplateFamily("single_quantifier", n=n, j=j)


def hairy_cycle(n: int) -> TemplateFamily:
    if n < 3:
        raise InvalidStructureError("hairy cycle needs n >= 3")
    return TemplateFamily("hairy", n=n)


def hj_template(j: int) -> TemplateFamily:
    if j < 3:
        raise InvalidStructureError("hj template needs j >= 3")
    return TemplateFamily("hj", j=j)


def _check_forest(fam: TemplateFamily) -> None:
    parent: dict[int, int] = {}

    def find(x: int) -> int:
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in fam.edges or ():
        if a == b:
            raise InvalidStructureError("forest edge list contains a loop")
        ra, rb = find(a), find(b)
        if ra == rb:
            raise InvalidStructureError("forest edge list contains a cycle")
        parent[ra] = rb


def build_template(family: TemplateFamily) -> Structure:
    """Materialise a family with the package's vertex-numbering conventions."""
    kind = family.kind
    if kind == "clique":
        n = family.n
        return graph_structure(n, [(i, j) for i in range(n) for j in range(i + 1, n)])
    if kind == "cycle":
        n = family.n
        return graph_structure(n, [(i, (i + 1) % n) for i in range(n)])
    if kind == "reflexive_cycle":
        n = family.n
        return graph_structure(n, [(i, (i + 1) % n) for i in range(n)], loops=range(n))
    if kind == "path":
        n = family.n
        return graph_structure(n, [(i, i + 1) for i in range(n - 1)])
    if kind == "star":
        n = family.n
        return graph_structure(n + 1, [(0, j) for j in range(1, n + 1)])
    if kind == "complete_bipartite":
        k, l = family.k, family.l
        return graph_structure(k + l, [(i, k + j) for i in range(k) for j in range(l)])
    if kind in ("forest", "graph"):
        edges = family.edges or ()
        if family.n is not None:
            n = family.n
        elif edges:
            n = max(max(a, b) for a, b in edges) + 1
        else:
            n = 1
        for a, b in edges:
            if not (0 <= a < n and 0 <= b < n):
                raise InvalidStructureError("edge endpoint out of range")
        return graph_structure(n, edges)
    if kind == "nae":
        triples = {
            t for t in itertools.product((0, 1), repeat=3) if t != (0, 0, 0) and t != (1, 1, 1)
        }
        return make_structure([("R", 3)], 2, {"R": triples})
    if kind == "single_quantifier":
        n, j = family.n, family.j
        if j <= n // 2:
            # low threshold: drop every triple whose entries share a parity
            def dropped(t: tuple[int, int, int]) -> bool:
                return len({e % 2 for e in t}) == 1
        else:
            # high threshold: only entries <= n - j can act as truth values
            def dropped(t: tuple[int, int, int]) -> bool:
                return all(e <= n - j for e in t) and len({e % 2 for e in t}) == 1

        triples = {t for t in itertools.product(range(n), repeat=3) if not dropped(t)}
        return make_structure(
            [("U", 1), ("R", 3)], n, {"U": {(u,) for u in range(j)}, "R": triples}
        )
    if kind == "hairy":
        n = family.n
        edges = [(i, (i + 1) % n) for i in range(n)]
        for i in range(n):
            edges.append((i, n + 2 * i))
            edges.append((i, n + 2 * i + 1))
        return graph_structure(3 * n, edges)
    if kind == "hj":
        j = family.j
        edges = [(i, (i + 1) % 6) for i in range(6)]
        for a in range(j - 3):
            apex = 6 + a
            edges.extend([(apex, 1), (apex, 3), (apex, 5)])
        return graph_structure(6 + (j - 3), edges)
    raise InvalidStructureError(f"unknown template family {kind!r}")


_FAMILY_RE = re.compile(r"([a-z0-9*-]+)(?::(.*))?\Z")


def parse_family_spec(text: str) -> TemplateFamily:
    """Parse CLI family specs such as ``clique:5`` or ``forest:0-1,1-2``."""
    m = _FAMILY_RE.match(text.strip())
    if not m:
        raise InvalidStructureError(f"bad family spec {text!r}")
    head, arg = m.group(1), m.group(2)

    def ints(expect: int) -> list[int]:
        if arg is None:
            raise InvalidStructureError(f"family {head!r} needs parameters")
        parts = arg.split(",")
        if len(parts) != expect:
            raise InvalidStructureError(f"family {head!r} expects {expect} parameter(s)")
        try:
            return [int(p) for p in parts]
        except ValueError:
            raise InvalidStructureError(f"bad integer in family spec {text!r}") from None

    def edge_list() -> list[tuple[int, int]]:
        if not arg:
            return []
        out = []
        for part in arg.split(","):
            bits = part.split("-")
            if len(bits) != 2:
                raise InvalidStructureError(f"bad edge {part!r} in family spec")
            try:
                out.append((int(bits[0]), int(bits[1])))
            except ValueError:
                raise InvalidStructureError(f"bad edge {part!r} in family spec") from None
        return out

    if head == "clique":
        return clique(ints(1)[0])
    if head == "cycle":
        return cycle(ints(1)[0])
    if head == "reflexive-cycle":
        return reflexive_cycle(ints(1)[0])
    if head == "path":
        return path(ints(1)[0])
    if head == "star":
        return star(ints(1)[0])
    if head == "bipartite":
        k, l = ints(2)
        return complete_bipartite(k, l)
    if head == "nae":
        return nae_boolean()
    if head == "single":
        n, j = ints(2)
        return single_quantifier_template(n, j)
    if head == "hairy":
        return hairy_cycle(ints(1)[0])
    if head == "hj":
        return hj_template(ints(1)[0])
    if head == "forest":
        return forest_from_edges(edge_list())
    if head == "graph":
        return general_graph(edge_list())
    raise InvalidStructureError(f"unknown family {head!r}")


# ---------------------------------------------------------------------------
# Fragments


@dataclass(frozen=True)
class ThresholdSet:
    """The fragment whose prefixes use exactly the thresholds in X."""

    thresholds: frozenset[int]

    def __post_init__(self) -> None:
        if not self.thresholds:
            raise InvalidStructureError("threshold set must be nonempty")
        if any(j < 1 for j in self.thresholds):
            raise InvalidStructureError("thresholds must be >= 1")

    def __str__(self) -> str:
        return "X=" + ",".join(str(j) for j in sorted(self.thresholds))


@dataclass(frozen=True)
class BoundedPrefix:
    """The fragment with at most m threshold-2 quantifiers followed by
    plain existentials."""

    m: int

    def __post_init__(self) -> None:
        if self.m < 0:
            raise InvalidStructureError("prefix bound must be >= 0")

    def __str__(self) -> str:
        return f"prefix=2^{self.m}1*"


FragmentSpec = ThresholdSet | BoundedPrefix


def threshold_set(*thresholds: int) -> ThresholdSet:
    return ThresholdSet(frozenset(thresholds))


def parse_fragment_spec(text: str) -> FragmentSpec:
    """Parse CLI fragment specs: ``X=1,2`` or ``prefix=2^3 1*``."""
    body = text.strip()
    if body.startswith("X="):
        try:
            values = frozenset(int(p) for p in body[2:].split(","))
        except ValueError:
            raise InvalidStructureError(f"bad threshold set {text!r}") from None
        return ThresholdSet(values)
    m = re.match(r"prefix=2\^(\d+)(?:\s*1\*)?\Z", body)
    if m:
        return BoundedPrefix(int(m.group(1)))
    raise InvalidStructureError(f"bad fragment spec {text!r}")


# ---------------------------------------------------------------------------
# Graph analysis of templates (used by the deciders and reductions)


@dataclass(frozen=True)
class GraphView:
    """Adjacency view of a structure with one symmetric binary relation."""

    n: int
    adj: tuple[frozenset[int], ...]
    loops: frozenset[int]
    relation: str

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def edge_count(self) -> int:
        return sum(len(a) for a in self.adj) // 2

    def components(self) -> list[list[int]]:
        seen: set[int] = set()
        comps = []
        for start in range(self.n):
            if start in seen:
                continue
            comp = [start]
            seen.add(start)
            stack = [start]
            while stack:
                v = stack.pop()
                for u in self.adj[v]:
                    if u not in seen:
                        seen.add(u)
                        comp.append(u)
                        stack.append(u)
            comps.append(sorted(comp))
        return comps

    def bipartition(self) -> Optional[list[int]]:
        """Colour classes, or None if the graph has a loop or odd cycle."""
        if self.loops:
            return None
        colors = [-1] * self.n
        for start in range(self.n):
            if colors[start] != -1:
                continue
            colors[start] = 0
            queue = [start]
            while queue:
                v = queue.pop()
                for u in self.adj[v]:
                    if colors[u] == -1:
                        colors[u] = 1 - colors[v]
                        queue.append(u)
                    elif colors[u] == colors[v]:
                        return None
        return colors

    def distances_from(self, source: int) -> dict[int, int]:
        dist = {source: 0}
        frontier = [source]
        while frontier:
            nxt = []
            for v in frontier:
                for u in self.adj[v]:
                    if u not in dist:
                        dist[u] = dist[v] + 1
                        nxt.append(u)
            frontier = nxt
        return dist

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def is_complete(self) -> bool:
        return not self.loops and all(len(self.adj[v]) == self.n - 1 for v in range(self.n))

    def is_cycle(self) -> bool:
        return (
            self.n >= 3
            and not self.loops
            and self.is_connected()
            and all(len(self.adj[v]) == 2 for v in range(self.n))
        )

    def is_path_graph(self) -> bool:
        if self.loops or not self.is_connected():
            return False
        if self.n == 1:
            return True
        degs = sorted(len(self.adj[v]) for v in range(self.n))
        return degs[0] == 1 and degs[1] == 1 and all(d == 2 for d in degs[2:])

    def is_forest(self) -> bool:
        if self.loops:
            return False
        return self.edge_count() == self.n - len(self.components())

    def complete_bipartite_sides(self) -> Optional[tuple[int, int]]:
        """(k, l) if the graph is a complete bipartite K_{k,l}, else None."""
        if self.loops or not self.is_connected():
            return None
        colors = self.bipartition()
        if colors is None:
            return None
        side = [v for v in range(self.n) if colors[v] == 0]
        other = [v for v in range(self.n) if colors[v] == 1]
        if not side or not other:
            return None
        for v in side:
            if len(self.adj[v]) != len(other):
                return None
        for v in other:
            if len(self.adj[v]) != len(side):
                return None
        return (len(side), len(other))

    def contains_c4(self) -> bool:
        """Does some 4-cycle occur as a (not necessarily induced) subgraph."""
        for u in range(self.n):
            for v in range(u + 1, self.n):
                common = (self.adj[u] & self.adj[v]) - {u, v}
                if len(common) >= 2:
                    return True
        return False

    def girth(self) -> Optional[int]:
        """Length of a shortest cycle; None if the graph is a forest.
        A loop counts as girth 1."""
        if self.loops:
            return 1
        best: Optional[int] = None
        for src in range(self.n):
            dist = {src: 0}
            parent = {src: -1}
            frontier = [src]
            while frontier:
                nxt = []
                for v in frontier:
                    for u in self.adj[v]:
                        if u not in dist:
                            dist[u] = dist[v] + 1
                            parent[u] = v
                            nxt.append(u)
                        elif parent[v] != u and dist[u] >= dist[v]:
                            length = dist[u] + dist[v] + 1
                            if best is None or length < best:
                                best = length
                frontier = nxt
        return best

    def diameter(self) -> Optional[int]:
        """Max distance over pairs; None when the graph is disconnected."""
        if not self.is_connected():
            return None
        best = 0
        for v in range(self.n):
            best = max(best, max(self.distances_from(v).values()))
        return best


def graph_view(b: Structure) -> Optional[GraphView]:
    """View ``b`` as a symmetric graph, or None if it is not one."""
    names = b.signature.names()
    if len(names) != 1 or b.signature.arity(names[0]) != 2 or b.constants:
        return None
    name = names[0]
    tuples = b.tuples(name)
    adj: list[set[int]] = [set() for _ in range(b.domain_size)]
    loops: set[int] = set()
    for a, c in tuples:
        if (c, a) not in tuples:
            return None
        if a == c:
            loops.add(a)
        else:
            adj[a].add(c)
    return GraphView(b.domain_size, tuple(frozenset(s) for s in adj), frozenset(loops), name)


def require_graph(b: Structure) -> GraphView:
    g = graph_view(b)
    if g is None:
        raise InvalidStructureError("template is not a symmetric graph over one binary symbol")
    return g


# ---------------------------------------------------------------------------
# Isomorphism (brute force; only used on small structures in tests)


def are_isomorphic(a: Structure, b: Structure) -> bool:
    if a.domain_size != b.domain_size:
        return False
    if sorted(a.signature.relations) != sorted(b.signature.relations):
        return False
    if sorted(a.constants) != sorted(b.constants):
        return False
    if any(len(a.tuples(r)) != len(b.tuples(r)) for r in a.signature.names()):
        return False
    names = a.signature.names()
    for perm in itertools.permutations(range(a.domain_size)):
        if any(perm[a.constants[c]] != b.constants[c] for c in a.constants):
            continue
        if all(
            frozenset(tuple(perm[e] for e in t) for t in a.tuples(r)) == b.tuples(r)
            for r in names
        ):
            return True
    return False
