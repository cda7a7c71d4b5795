"""Graph insertion operads and the constructions relating them to pre-Lie.

Every instance here composes by removing the vertex ``*`` of the outer graph
and reconnecting each loose end independently.  What an end connects to is
decided by the end's symbol through an :class:`EndPolicy`:

* ``SUM_ALL``  - the formal sum of all vertices of the inner graph;
* ``ROOT``     - the root of the inner graph.

``PreLieOperad`` works on rooted trees directly and is cross-checked against
its image in the oriented pointed multigraph operad.
"""
from __future__ import annotations

import enum
import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Iterator, Mapping, Sequence

from . import graphs as gm
from .exact import LinComb
from .graphs import (ARROW, PLAIN, UNLABELLED, GraphError, Label, MultiHyperGraph,
                     RootedGraph, label_key)

STAR = "*"


class CarrierError(ValueError):
    """An operand lies outside the operad's carrier species."""


class EndPolicy(enum.Enum):
    SUM_ALL = "sum"
    ROOT = "root"


# ---------------------------------------------------------------------------
# rooted trees

class RootedTree:
    """Rooted tree stored as a parent map (``root -> None``)."""

    __slots__ = ("vertices", "root", "parent", "_hash", "_key")

    def __init__(self, parent: Mapping[Label, Label | None]):
        roots = [v for v, p in parent.items() if p is None]
        if len(roots) != 1:
            raise GraphError("a rooted tree needs exactly one root")
        for v, p in parent.items():
            if p is not None and p not in parent:
                raise GraphError(f"parent {p!r} of {v!r} is not a vertex")
        self.root = roots[0]
        self.vertices = tuple(sorted(parent, key=label_key))
        self.parent = {v: parent[v] for v in self.vertices}
        for v in self.vertices:
            seen = set()
            u = v
            while u is not None:
                if u in seen:
                    raise GraphError("parent map has a cycle")
                seen.add(u)
                u = self.parent[u]
        self._hash = None
        self._key = None

    @classmethod
    def from_tree(cls, t: MultiHyperGraph, root: Label) -> "RootedTree":
        if not gm.is_tree(gm.forget_orientation(t)):
            raise GraphError("not a tree")
        return cls(gm._tree_parents(t, root))

    @property
    def key(self) -> tuple:
        if self._key is None:
            self._key = (tuple((label_key(v), None if self.parent[v] is None else label_key(self.parent[v]))
                               for v in self.vertices),)
        return self._key

    def canonical_key(self) -> bytes:
        return repr(self.key).encode()

    @property
    def edge_count(self) -> int:
        return len(self.vertices) - 1

    def children(self, v: Label) -> list:
        return [u for u in self.vertices if self.parent[u] == v]

    def tree(self) -> MultiHyperGraph:
        return MultiHyperGraph.from_pairs(self.vertices, [(v, p) for v, p in self.parent.items() if p is not None])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RootedTree):
            return NotImplemented
        return self.parent == other.parent

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.parent.items()))
        return self._hash

    def __repr__(self) -> str:
        edges = ", ".join(f"{p}->{v}" for v, p in self.parent.items() if p is not None)
        return f"RootedTree(root={self.root!r}; {edges})"


def rooted_tree_to_oriented(t: RootedTree) -> RootedGraph:
    """Embedding ``(t, r) -> (t_r, r)`` into pointed oriented multigraphs."""
    return RootedGraph(gm.orient_tree(t.tree(), t.root), t.root)


def oriented_to_rooted_tree(x: RootedGraph) -> RootedTree:
    parent: dict = {x.root: None}
    for e in x.graph.edges:
        (a, s), (b, u) = e
        if {s, u} != {ARROW, UNLABELLED}:
            raise GraphError("not the orientation of a rooted tree")
        p, c = (a, b) if s == ARROW else (b, a)
        if c in parent:
            raise GraphError("vertex with two parents")
        parent[c] = p
    if set(parent) != set(x.graph.vertices):
        raise GraphError("not spanning")
    t = RootedTree(parent)
    if rooted_tree_to_oriented(t) != x:
        raise GraphError("not the orientation of a rooted tree")
    return t


def relabel_tree(t: RootedTree, sigma: Mapping[Label, Label]) -> RootedTree:
    return RootedTree({sigma[v]: None if p is None else sigma[p] for v, p in t.parent.items()})


def all_rooted_trees(labels: Sequence[Label]) -> Iterator[RootedTree]:
    for t in gm.all_trees(labels):
        for r in t.vertices:
            yield RootedTree.from_tree(t, r)


# ---------------------------------------------------------------------------
# operad descriptors

def _vertices(x) -> tuple:
    return x.vertices


def _relabel(x, sigma):
    if isinstance(x, RootedTree):
        return relabel_tree(x, sigma)
    return gm.relabel(x, sigma)


@dataclass(frozen=True)
class GraphOperad:
    """A graph insertion operad: carrier predicate plus one policy per end symbol."""

    name: str
    carrier: Callable[[Any], bool]
    policies: Mapping[str, EndPolicy]
    rooted: bool = False
    oriented: bool = False
    simple: bool = True          # carrier has finitely many elements per vertex set
    connected: bool = False
    trees_only: bool = False
    edgeless: bool = False
    description: str = ""

    def contains(self, x) -> bool:
        if self.rooted != isinstance(x, (RootedGraph, RootedTree)):
            return False
        return self.carrier(x)

    def vertices(self, x) -> tuple:
        return _vertices(x)

    def relabel(self, x, sigma):
        return _relabel(x, sigma)

    def unit(self, v: Label):
        g = MultiHyperGraph([v])
        return RootedGraph(g, v) if self.rooted else g

    def is_unit(self, x) -> bool:
        return len(x.vertices) == 1 and x.edge_count == 0

    def compose_basis(self, x, star: Label, y) -> LinComb:
        if not self.contains(x) or not self.contains(y):
            raise CarrierError(f"operand outside the carrier of {self.name}")
        gx = x.graph if self.rooted else x
        gy = y.graph if self.rooted else y
        if star not in gx.vertices:
            raise GraphError(f"{star!r} is not a vertex of the outer operand")
        rep = {}
        sum_all = {v: 1 for v in gy.vertices}
        for sym, pol in self.policies.items():
            if pol is EndPolicy.SUM_ALL:
                rep[sym] = sum_all
            else:
                rep[sym] = {y.root: 1}
        out = gm.substitute(gx, star, rep, gy)
        if self.rooted:
            root = x.root if x.root != star else y.root
            out = out.map_basis(lambda g: RootedGraph(g, root))
        return out

    # enumeration used by the axiom checker and the span engine
    def elements(self, labels: Sequence[Label], max_edges: int | None = None) -> Iterator:
        labels = tuple(sorted(labels, key=label_key))
        if self.edgeless:
            base: Iterable = [MultiHyperGraph(labels)]
        elif self.trees_only:
            base = gm.all_trees(labels)
        elif self.simple and not self.oriented:
            base = gm.all_graphs(labels)
        else:
            if max_edges is None:
                raise ValueError(f"{self.name} has infinitely many elements per arity; give max_edges")
            base = gm.all_multigraphs(labels, max_edges, oriented=self.oriented)
        for g in base:
            if max_edges is not None and g.edge_count > max_edges:
                continue
            cands = [RootedGraph(g, r) for r in labels] if self.rooted else [g]
            for c in cands:
                if self.carrier(c):
                    yield c

    def random_element(self, rng: random.Random, labels: Sequence[Label], max_edges: int = 4):
        labels = tuple(sorted(labels, key=label_key))
        for _ in range(1000):
            g = _random_graph(self, rng, labels, max_edges)
            c = RootedGraph(g, rng.choice(labels)) if self.rooted else g
            if self.carrier(c):
                return c
        raise RuntimeError(f"could not sample an element of {self.name}")


def _random_graph(op: GraphOperad, rng: random.Random, labels: tuple, max_edges: int) -> MultiHyperGraph:
    if op.edgeless:
        return MultiHyperGraph(labels)
    if op.trees_only:
        if len(labels) <= 2:
            return next(gm.all_trees(labels))
        seq = [rng.randrange(len(labels)) for _ in range(len(labels) - 2)]
        return MultiHyperGraph.from_pairs(labels, [(labels[a], labels[b]) for a, b in gm.prufer_edges(seq, len(labels))])
    if op.simple and not op.oriented:
        pairs = gm.pair_types(labels, loops=False)
        p = rng.choice((0.3, 0.5, 0.7))
        chosen = [e for e in pairs if rng.random() < p]
        g = MultiHyperGraph._trusted(labels, chosen)
        if op.connected and not gm.is_connected(g):
            # add a random spanning path so connected carriers are hit quickly
            order = list(labels)
            rng.shuffle(order)
            extra = [gm.make_edge([(a, PLAIN), (b, PLAIN)]) for a, b in zip(order, order[1:])]
            g = MultiHyperGraph._trusted(labels, list({*chosen, *extra}))
        return g
    types = gm.oriented_edge_types(labels) if op.oriented else gm.pair_types(labels)
    k = rng.randint(0, max_edges)
    edges = [rng.choice(types) for _ in range(k)]
    if op.connected:
        order = list(labels)
        rng.shuffle(order)
        for a, b in zip(order, order[1:]):
            if op.oriented:
                edges.append(gm.make_edge([(a, rng.choice((UNLABELLED, ARROW))), (b, rng.choice((UNLABELLED, ARROW)))]))
            else:
                edges.append(gm.make_edge([(a, PLAIN), (b, PLAIN)]))
    return MultiHyperGraph._trusted(labels, edges)


class PreLieOperad(GraphOperad):
    """Rooted trees with the pre-Lie grafting rule, composed directly."""

    def contains(self, x) -> bool:
        return isinstance(x, RootedTree)

    def unit(self, v: Label):
        return RootedTree({v: None})

    def compose_basis(self, x, star, y) -> LinComb:
        return plie_compose(x, star, y)

    def elements(self, labels, max_edges=None):
        yield from all_rooted_trees(tuple(sorted(labels, key=label_key)))

    def random_element(self, rng, labels, max_edges=4):
        labels = tuple(sorted(labels, key=label_key))
        t = _random_graph(self, rng, labels, max_edges)
        return RootedTree.from_tree(t, rng.choice(labels))


def _plain(pred):
    return lambda g: isinstance(g, MultiHyperGraph) and gm.is_plain(g) and pred(g)


def _rooted(pred):
    return lambda x: isinstance(x, RootedGraph) and pred(x.graph)


_SUM = {PLAIN: EndPolicy.SUM_ALL}

MG = GraphOperad("mg", _plain(gm.is_multigraph), _SUM, simple=False,
                 description="multigraphs, ends reconnected to every inner vertex")
MGC = GraphOperad("mgc", _plain(lambda g: gm.is_multigraph(g) and gm.is_connected(g)), _SUM,
                  simple=False, connected=True, description="connected multigraphs")
G = GraphOperad("g", _plain(gm.is_graph), _SUM, description="simple graphs")
GC = GraphOperad("gc", _plain(lambda g: gm.is_graph(g) and gm.is_connected(g)), _SUM,
                 connected=True, description="connected simple graphs")
T = GraphOperad("t", _plain(gm.is_tree), _SUM, connected=True, trees_only=True,
                description="trees")
E = GraphOperad("e", _plain(lambda g: not g.edges), _SUM, edgeless=True,
                description="singleton set operad as edgeless graphs")
GPOINTED = GraphOperad("gpointed", _rooted(lambda g: gm.is_plain(g) and gm.is_graph(g)),
                       {PLAIN: EndPolicy.ROOT}, rooted=True,
                       description="pointed simple graphs, ends reconnected to the inner root")
ID = GraphOperad("id", _rooted(lambda g: gm.is_plain(g) and not g.edges), {PLAIN: EndPolicy.ROOT},
                 rooted=True, edgeless=True, description="identity set operad as pointed edgeless graphs")
MGOR = GraphOperad("mgor", _rooted(lambda g: gm.is_multigraph(g) and gm.is_oriented(g)),
                   {UNLABELLED: EndPolicy.ROOT, ARROW: EndPolicy.SUM_ALL}, rooted=True,
                   oriented=True, simple=False,
                   description="pointed oriented multigraphs")
MGORC = GraphOperad("mgorc", _rooted(lambda g: gm.is_multigraph(g) and gm.is_oriented(g) and gm.is_connected(g)),
                    {UNLABELLED: EndPolicy.ROOT, ARROW: EndPolicy.SUM_ALL}, rooted=True,
                    oriented=True, simple=False, connected=True,
                    description="pointed connected oriented multigraphs")
PLIE = PreLieOperad("plie", lambda x: isinstance(x, RootedTree), {}, rooted=True, trees_only=True,
                    connected=True, description="rooted trees, pre-Lie grafting")

OPERADS: dict[str, GraphOperad] = {op.name: op for op in (MG, MGC, G, GC, T, E, GPOINTED, ID, MGOR, MGORC, PLIE)}


def get_operad(name: str) -> GraphOperad:
    try:
        return OPERADS[name]
    except KeyError:
        raise ValueError(f"unknown operad {name!r}; choose from {sorted(OPERADS)}") from None


# ---------------------------------------------------------------------------
# composition

def _as_lincomb(x) -> LinComb:
    return x if isinstance(x, LinComb) else LinComb.of(x)


def compose(op: GraphOperad, x, star: Label, y) -> LinComb:
    """Bilinear partial composition ``x o_star y``."""
    x, y = _as_lincomb(x), _as_lincomb(y)
    acc: dict = {}
    for gx, cx in x.items():
        for gy, cy in y.items():
            vx = set(op.vertices(gx))
            if star not in vx:
                raise GraphError(f"{star!r} is not a vertex of {gx!r}")
            if (vx - {star}) & set(op.vertices(gy)) or star in op.vertices(gy):
                raise GraphError("vertex sets of the operands overlap")
            for h, c in op.compose_basis(gx, star, gy).items():
                acc[h] = acc.get(h, 0) + cx * cy * c
    return LinComb({h: c for h, c in acc.items() if c})


def plie_compose(t1: RootedTree, star: Label, t2: RootedTree) -> LinComb:
    """Pre-Lie grafting: the parent of ``star`` adopts the root of ``t2``; each
    child of ``star`` is re-attached to any vertex of ``t2``."""
    if star not in t1.parent:
        raise GraphError(f"{star!r} is not a vertex of the outer tree")
    if (set(t1.vertices) - {star}) & set(t2.vertices) or star in t2.parent:
        raise GraphError("vertex sets of the operands overlap")
    base = {v: p for v, p in t1.parent.items() if v != star}
    p_star = t1.parent[star]
    kids = [v for v, p in base.items() if p == star]
    inner = dict(t2.parent)
    if p_star is not None:
        inner[t2.root] = p_star
    out: dict = {}
    for choice in itertools.product(t2.vertices, repeat=len(kids)):
        parent = dict(base)
        parent.update(inner)
        for k, v in zip(kids, choice):
            parent[k] = v
        t = RootedTree(parent)
        out[t] = out.get(t, 0) + 1
    return LinComb(out)


def plie_compose_via_oriented(t1: RootedTree, star: Label, t2: RootedTree) -> LinComb:
    """Same composition computed inside the pointed oriented multigraph operad."""
    img = compose(MGOR, rooted_tree_to_oriented(t1), star, rooted_tree_to_oriented(t2))
    return img.map_basis(oriented_to_rooted_tree)


# ---------------------------------------------------------------------------
# axiom checking

@dataclass
class AxiomReport:
    operad: str
    checked: dict = field(default_factory=lambda: {"sequential": 0, "parallel": 0, "left_unit": 0, "right_unit": 0})
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def total(self) -> int:
        return sum(self.checked.values())


def _labelled(prefix: str, k: int) -> list[str]:
    return [f"{prefix}{i}" for i in range(1, k + 1)]


def _check_sequential(op, x, y, z, s1, s2, report):
    left = compose(op, compose(op, x, s1, y), s2, z)
    right = compose(op, x, s1, compose(op, y, s2, z))
    report.checked["sequential"] += 1
    if left != right:
        report.violations.append(("sequential", x, y, z))


def _check_parallel(op, x, y, z, s1, s2, report):
    left = compose(op, compose(op, x, s1, y), s2, z)
    right = compose(op, compose(op, x, s2, z), s1, y)
    report.checked["parallel"] += 1
    if left != right:
        report.violations.append(("parallel", x, y, z))


def _check_units(op, g, star, report):
    # left unit: e(star) o_star g = g  (g must not contain star)
    v = "u0"
    lhs = compose(op, op.unit(star), star, g)
    report.checked["left_unit"] += 1
    if lhs != LinComb.of(g):
        report.violations.append(("left_unit", g))
    verts = op.vertices(g)
    s = verts[0]
    rhs = compose(op, g, s, op.unit(v))
    sigma = {u: (v if u == s else u) for u in verts}
    report.checked["right_unit"] += 1
    if rhs != LinComb.of(op.relabel(g, sigma)):
        report.violations.append(("right_unit", g))


def _triples(op, xl, yl, zl, total):
    """All carrier triples on the given label sets, with at most ``total``
    edges altogether when the carrier is infinite per arity."""
    cap = None if op.simple else total
    xs = list(op.elements(xl, cap))
    ys = list(op.elements(yl, cap))
    zs = list(op.elements(zl, cap))
    for x in xs:
        for y in ys:
            if cap is not None and x.edge_count + y.edge_count > cap:
                continue
            for z in zs:
                if cap is not None and x.edge_count + y.edge_count + z.edge_count > cap:
                    continue
                yield x, y, z


def check_axioms(op: GraphOperad, n_max: int = 5, samples: int = 500, seed: int = 0,
                 exhaustive_n: int = 3, exhaustive_edges: int | None = None,
                 random_edges: int = 2) -> AxiomReport:
    """Check both associativity diagrams and both unit laws.

    Exhaustive part: every triple whose composite has at most ``exhaustive_n``
    vertices; carriers with unboundedly many edges are cut at
    ``exhaustive_edges`` edges for the whole triple (3 unoriented, 2 oriented
    by default).  Random part: ``samples`` triples of each associativity kind
    with composites of at most ``n_max`` vertices.
    """
    if exhaustive_edges is None:
        exhaustive_edges = 2 if op.oriented else 3
    report = AxiomReport(op.name)
    s1, s2 = "*1", "*2"
    n = exhaustive_n

    for k in range(1, n + 1):
        for g in op.elements(_labelled("a", k), None if op.simple else exhaustive_edges):
            _check_units(op, g, "w", report)

    # sequential: |x| = i (incl. s1), |y| = j (incl. s2), |z| = k
    for i, j, k in itertools.product(range(1, n + 1), repeat=3):
        if i + j + k - 2 > n:
            continue
        for x, y, z in _triples(op, _labelled("a", i - 1) + [s1], _labelled("b", j - 1) + [s2],
                                _labelled("c", k), exhaustive_edges):
            _check_sequential(op, x, y, z, s1, s2, report)
    # parallel: x holds both stars
    for i, j, k in itertools.product(range(2, n + 2), range(1, n + 1), range(1, n + 1)):
        if i + j + k - 2 > n:
            continue
        for x, y, z in _triples(op, _labelled("a", i - 2) + [s1, s2], _labelled("b", j),
                                _labelled("c", k), exhaustive_edges):
            _check_parallel(op, x, y, z, s1, s2, report)

    rng = random.Random(seed)
    for _ in range(samples):
        n = rng.randint(1, n_max)
        # split n = (i - 1) + (j - 1) + k
        i = rng.randint(1, n)
        j = rng.randint(1, n - i + 1)
        k = n - (i - 1) - (j - 1)
        x = op.random_element(rng, _labelled("a", i - 1) + [s1], random_edges)
        y = op.random_element(rng, _labelled("b", j - 1) + [s2], random_edges)
        z = op.random_element(rng, _labelled("c", k), random_edges)
        _check_sequential(op, x, y, z, s1, s2, report)

        n = rng.randint(2, max(2, n_max))
        i = rng.randint(2, n)
        j = rng.randint(1, n - i + 1)
        k = n - (i - 2) - j
        x = op.random_element(rng, _labelled("a", i - 2) + [s1, s2], random_edges)
        y = op.random_element(rng, _labelled("b", j), random_edges)
        z = op.random_element(rng, _labelled("c", k), random_edges)
        _check_parallel(op, x, y, z, s1, s2, report)
        g = op.random_element(rng, _labelled("a", rng.randint(1, n_max)), random_edges)
        _check_units(op, g, "w", report)
    return report


# ---------------------------------------------------------------------------
# psi and the spanning-tree orientations

def psi(t: MultiHyperGraph) -> LinComb:
    """Sum of ``t`` rooted at each of its vertices."""
    if not gm.is_tree(t):
        raise GraphError("psi is defined on trees")
    return LinComb({RootedTree.from_tree(t, r): 1 for r in t.vertices})


def st_element(g: MultiHyperGraph, t: MultiHyperGraph, r: Label) -> RootedGraph:
    if not (gm.is_multigraph(g) and gm.is_connected(g)):
        raise GraphError("g must be a connected multigraph")
    return RootedGraph(gm.orient_by_tree(g, t, r), r)


def o1_element(g: MultiHyperGraph, trees: Mapping[Label, MultiHyperGraph]) -> LinComb:
    """``sum_r (g oriented by trees[r] from r, r)``."""
    return LinComb({st_element(g, trees[r], r): 1 for r in g.vertices})


def o2_element(g: MultiHyperGraph, t1: MultiHyperGraph, t2: MultiHyperGraph, r: Label) -> LinComb:
    return LinComb.of(st_element(g, t1, r)) - LinComb.of(st_element(g, t2, r))


def forget_rooted(w: LinComb) -> LinComb:
    """``U x id``: forget end labels, keep the root."""
    return w.map_basis(gm.forget_orientation)


def rooted_at(w: LinComb, r: Label) -> LinComb:
    return w.map_basis(lambda g: RootedGraph(g, r))


def tree_graph(g: MultiHyperGraph, indices: Iterable[int]) -> MultiHyperGraph:
    return gm.edge_subgraph(gm.forget_orientation(g), indices)
