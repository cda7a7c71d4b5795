"""Multi-hypergraphs in the polynomial encoding, with end labels and roots.

An edge is a sorted tuple of *ends* ``(vertex, symbol)``; a plain edge uses the
empty symbol ``""`` for every end, oriented multigraphs use ``"_"`` (unlabelled
end) and ``">"`` (arrow-head end).  A loop ``a^2`` is the edge
``(("a", ""), ("a", ""))``.  The edge multiset is a sorted tuple of edges, so two
graphs on the same vertex set are equal iff their canonical keys are equal.

Vertex labels are ints or strings; mixed label sets are ordered ints first.
"""
from __future__ import annotations

import itertools
import json
from collections import Counter, defaultdict, deque
from typing import Any, Iterable, Iterator, Mapping, Sequence, Union

from .exact import LinComb

Label = Union[int, str]
End = tuple  # (Label, str)
Edge = tuple  # tuple of End, sorted

PLAIN = ""
UNLABELLED = "_"
ARROW = ">"

SHAPE_BOUND = 8


class GraphError(ValueError):
    pass


def label_key(v: Label) -> tuple:
    if isinstance(v, bool):
        raise GraphError(f"invalid vertex label {v!r}")
    if isinstance(v, int):
        return (0, v)
    if isinstance(v, str):
        return (1, v)
    raise GraphError(f"invalid vertex label {v!r}")


def _end_key(end: End) -> tuple:
    return (label_key(end[0]), end[1])


def _edge_key(edge: Edge) -> tuple:
    return tuple(_end_key(e) for e in edge)


def make_edge(ends: Iterable[End]) -> Edge:
    edge = tuple(sorted(ends, key=_end_key))
    if not edge:
        raise GraphError("edges must have at least one end")
    return edge


class MultiHyperGraph:
    """A vertex set plus a multiset of (possibly end-labelled) edges."""

    __slots__ = ("vertices", "edges", "_key", "_hash")

    def __init__(self, vertices: Iterable[Label], edges: Iterable[Iterable[End]] = ()):
        verts = tuple(sorted(set(vertices), key=label_key))
        vset = set(verts)
        norm = []
        for e in edges:
            e = make_edge(tuple(end) for end in e)
            for v, s in e:
                if v not in vset:
                    raise GraphError(f"edge end {v!r} is not a vertex")
                if not isinstance(s, str):
                    raise GraphError(f"end symbol must be a string, got {s!r}")
            norm.append(e)
        norm.sort(key=_edge_key)
        self.vertices = verts
        self.edges = tuple(norm)
        self._key = None
        self._hash = None

    @classmethod
    def _trusted(cls, vertices: tuple, edges: list) -> "MultiHyperGraph":
        # vertices sorted, each edge already normalised; edge list unsorted
        obj = cls.__new__(cls)
        obj.vertices = vertices
        edges.sort(key=_edge_key)
        obj.edges = tuple(edges)
        obj._key = None
        obj._hash = None
        return obj

    @classmethod
    def from_pairs(cls, vertices: Iterable[Label], pairs: Iterable[Sequence[Label]]) -> "MultiHyperGraph":
        """Plain multigraph from vertex pairs; ``(a, a)`` is a loop."""
        return cls(vertices, [[(v, PLAIN) for v in p] for p in pairs])

    @classmethod
    def from_monomials(cls, vertices: Iterable[Label], monomials: Iterable[Mapping[Label, int]]) -> "MultiHyperGraph":
        edges = []
        for m in monomials:
            ends = []
            for v, k in m.items():
                if k < 1:
                    raise GraphError("monomial exponents must be positive")
                ends.extend([(v, PLAIN)] * k)
            edges.append(ends)
        return cls(vertices, edges)

    @property
    def key(self) -> tuple:
        if self._key is None:
            self._key = (tuple(label_key(v) for v in self.vertices),
                         tuple(_edge_key(e) for e in self.edges))
        return self._key

    def canonical_key(self) -> bytes:
        return repr(self.key).encode()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MultiHyperGraph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.vertices, self.edges))
        return self._hash

    def __repr__(self) -> str:
        return f"Graph({to_polynomial(self)} on {list(self.vertices)})"

    @property
    def n(self) -> int:
        return len(self.vertices)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    def symbols(self) -> set:
        return {s for e in self.edges for _, s in e}


class RootedGraph:
    """A graph with a distinguished root vertex."""

    __slots__ = ("graph", "root", "_hash")

    def __init__(self, graph: MultiHyperGraph, root: Label):
        if root not in graph.vertices:
            raise GraphError(f"root {root!r} is not a vertex")
        self.graph = graph
        self.root = root
        self._hash = None

    @property
    def vertices(self) -> tuple:
        return self.graph.vertices

    @property
    def edges(self) -> tuple:
        return self.graph.edges

    @property
    def edge_count(self) -> int:
        return len(self.graph.edges)

    @property
    def key(self) -> tuple:
        return (self.graph.key, label_key(self.root))

    def canonical_key(self) -> bytes:
        return repr(self.key).encode()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RootedGraph):
            return NotImplemented
        return self.root == other.root and self.graph == other.graph

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.graph, self.root))
        return self._hash

    def __repr__(self) -> str:
        return f"Rooted({to_polynomial(self.graph)} on {list(self.graph.vertices)}, root={self.root!r})"


# ---------------------------------------------------------------------------
# predicates

def is_multigraph(g: MultiHyperGraph) -> bool:
    return all(len(e) == 2 for e in g.edges)


def underlying(g: MultiHyperGraph) -> MultiHyperGraph:
    if all(s == PLAIN for e in g.edges for _, s in e):
        return g
    return forget_orientation(g)


def is_graph(g: MultiHyperGraph) -> bool:
    """Multigraph without loops or repeated edges (end symbols ignored)."""
    if not is_multigraph(g):
        return False
    seen = set()
    for e in g.edges:
        a, b = e[0][0], e[1][0]
        if a == b:
            return False
        pair = frozenset((a, b))
        if pair in seen:
            return False
        seen.add(pair)
    return True


def components(g: MultiHyperGraph) -> list[set]:
    parent = {v: v for v in g.vertices}

    def find(v):
        while parent[v] != v:
            parent[v] = parent[parent[v]]
            v = parent[v]
        return v

    for e in g.edges:
        first = find(e[0][0])
        for v, _ in e[1:]:
            r = find(v)
            if r != first:
                parent[r] = first
    groups = defaultdict(set)
    for v in g.vertices:
        groups[find(v)].add(v)
    return sorted(groups.values(), key=lambda s: min(label_key(v) for v in s))


def is_connected(g: MultiHyperGraph) -> bool:
    return len(g.vertices) > 0 and len(components(g)) == 1


def is_forest(g: MultiHyperGraph) -> bool:
    # simple graph whose edge count equals n minus number of components
    return is_graph(g) and len(g.edges) == len(g.vertices) - len(components(g))


def is_tree(g: MultiHyperGraph) -> bool:
    return is_forest(g) and is_connected(g)


def is_plain(g: MultiHyperGraph) -> bool:
    return all(s == PLAIN for e in g.edges for _, s in e)


def is_oriented(g: MultiHyperGraph) -> bool:
    return all(s in (UNLABELLED, ARROW) for e in g.edges for _, s in e)


# ---------------------------------------------------------------------------
# species structure

def relabel(g, sigma: Mapping[Label, Label]):
    """Transport ``g`` (graph or rooted graph) along the bijection ``sigma``."""
    if isinstance(g, RootedGraph):
        return RootedGraph(relabel(g.graph, sigma), sigma[g.root])
    missing = [v for v in g.vertices if v not in sigma]
    if missing:
        raise GraphError(f"relabelling is not total: missing {missing!r}")
    image = [sigma[v] for v in g.vertices]
    if len(set(image)) != len(image):
        raise GraphError("relabelling is not injective")
    verts = tuple(sorted(image, key=label_key))
    edges = [make_edge((sigma[v], s) for v, s in e) for e in g.edges]
    return MultiHyperGraph._trusted(verts, edges)


def relabel_lincomb(w: LinComb, sigma: Mapping[Label, Label]) -> LinComb:
    return w.map_basis(lambda x: relabel(x, sigma))


def shape_key(g, bound: int = SHAPE_BOUND) -> tuple:
    """Isomorphism invariant: the least canonical key over relabellings onto 1..n."""
    verts = g.vertices
    n = len(verts)
    if n > bound:
        raise GraphError(f"shape_key supports at most {bound} vertices, got {n}")
    best = None
    for perm in itertools.permutations(range(1, n + 1)):
        k = relabel(g, dict(zip(verts, perm))).key
        if best is None or k < best:
            best = k
    return best


def neighbors(g: MultiHyperGraph, v: Label) -> list:
    """Multiset (sorted list) of the other ends of non-loop edges at ``v``."""
    if v not in g.vertices:
        raise GraphError(f"{v!r} is not a vertex")
    out = []
    for e in g.edges:
        labels = [u for u, _ in e]
        if labels.count(v) == 1 and len(labels) == 2:
            out.extend(u for u in labels if u != v)
    return sorted(out, key=label_key)


def loop_count(g: MultiHyperGraph, v: Label) -> int:
    if v not in g.vertices:
        raise GraphError(f"{v!r} is not a vertex")
    return sum(1 for e in g.edges if len(e) == 2 and e[0][0] == v and e[1][0] == v)


def spanning_trees(g: MultiHyperGraph) -> list[tuple[int, ...]]:
    """All spanning trees as tuples of edge indices into ``g.edges``.

    Parallel copies of an edge count as distinct choices; loops are never used.
    """
    if not is_multigraph(g):
        raise GraphError("spanning trees need a multigraph")
    if not is_connected(g):
        raise GraphError("graph is not connected")
    n = len(g.vertices)
    candidates = [i for i, e in enumerate(g.edges) if e[0][0] != e[1][0]]
    out = []
    for combo in itertools.combinations(candidates, n - 1):
        if is_tree(edge_subgraph(forget_orientation(g), combo)):
            out.append(combo)
    return out


def edge_subgraph(g: MultiHyperGraph, indices: Iterable[int]) -> MultiHyperGraph:
    return MultiHyperGraph._trusted(g.vertices, [g.edges[i] for i in indices])


def _tree_parents(t: MultiHyperGraph, root: Label) -> dict:
    adj = defaultdict(list)
    for e in t.edges:
        a, b = e[0][0], e[1][0]
        adj[a].append(b)
        adj[b].append(a)
    parent = {root: None}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if w not in parent:
                parent[w] = u
                queue.append(w)
    return parent


def _multiset_minus(big: Sequence, small: Sequence) -> list:
    rest = Counter(small)
    out = []
    for x in big:
        if rest[x]:
            rest[x] -= 1
        else:
            out.append(x)
    if +rest:
        raise GraphError("tree edges are not a sub-multiset of the graph's edges")
    return out


def orient_tree(t: MultiHyperGraph, root: Label) -> MultiHyperGraph:
    """``t_r``: parent ends labelled ``>``, child ends unlabelled."""
    if not is_tree(forget_orientation(t)):
        raise GraphError("not a tree")
    if root not in t.vertices:
        raise GraphError(f"root {root!r} is not a vertex")
    parent = _tree_parents(t, root)
    edges = []
    for e in t.edges:
        a, b = e[0][0], e[1][0]
        p, c = (a, b) if parent.get(b) == a else (b, a)
        edges.append(make_edge([(p, ARROW), (c, UNLABELLED)]))
    return MultiHyperGraph._trusted(t.vertices, edges)


def iota(g: MultiHyperGraph) -> MultiHyperGraph:
    """Label every end of every edge with ``>``."""
    return MultiHyperGraph._trusted(g.vertices, [make_edge((v, ARROW) for v, _ in e) for e in g.edges])


def orient_by_tree(g: MultiHyperGraph, t: MultiHyperGraph, r: Label) -> MultiHyperGraph:
    """``t_r`` on the tree edges plus both-ends-labelled copies of the others."""
    g = forget_orientation(g)
    t = forget_orientation(t)
    if set(t.vertices) != set(g.vertices) or not is_tree(t):
        raise GraphError("t is not a spanning tree of g")
    if r not in g.vertices:
        raise GraphError(f"root {r!r} is not a vertex")
    rest = _multiset_minus(g.edges, t.edges)
    tr = orient_tree(t, r)
    extra = iota(MultiHyperGraph._trusted(g.vertices, rest))
    return MultiHyperGraph._trusted(g.vertices, list(tr.edges) + list(extra.edges))


def forget_orientation(g):
    """The forgetful map U: drop all end symbols (roots are kept)."""
    if isinstance(g, RootedGraph):
        return RootedGraph(forget_orientation(g.graph), g.root)
    return MultiHyperGraph._trusted(g.vertices, [make_edge((v, PLAIN) for v, _ in e) for e in g.edges])


def disjoint_union(g: MultiHyperGraph, h: MultiHyperGraph) -> MultiHyperGraph:
    if set(g.vertices) & set(h.vertices):
        raise GraphError("vertex sets overlap")
    verts = tuple(sorted(g.vertices + h.vertices, key=label_key))
    return MultiHyperGraph._trusted(verts, list(g.edges) + list(h.edges))


def substitute(g: MultiHyperGraph, star: Label, replacement: Mapping[str, Any],
               tail: MultiHyperGraph) -> LinComb:
    """``g|_{star_a <- f(a)_a} (+) tail`` expanded distributively.

    ``replacement`` maps each end symbol occurring at ``star`` to a linear
    combination of vertices of ``tail`` (a LinComb, a mapping vertex -> coefficient,
    or a single vertex).  Every end at ``star`` is replaced independently; an end
    keeps its symbol.
    """
    if star not in g.vertices:
        raise GraphError(f"{star!r} is not a vertex of the outer graph")
    rest = [v for v in g.vertices if v != star]
    if set(rest) & set(tail.vertices) or star in tail.vertices:
        raise GraphError("vertex sets overlap")
    tail_set = set(tail.vertices)
    options: dict = {}
    for sym, rep in replacement.items():
        if isinstance(rep, LinComb):
            opts = list(rep.items())
        elif isinstance(rep, Mapping):
            opts = [(v, c) for v, c in rep.items() if c]
        else:
            opts = [(rep, 1)]
        for v, _ in opts:
            if v not in tail_set:
                raise GraphError(f"replacement vertex {v!r} is not in the inner graph")
        options[sym] = opts

    kept = []
    touched = []
    for e in g.edges:
        if any(v == star for v, _ in e):
            touched.append(e)
        else:
            kept.append(e)

    verts = tuple(sorted(rest + list(tail.vertices), key=label_key))
    base = kept + list(tail.edges)
    # partial states: tuple of new edges (sorted) -> coefficient
    states: dict = {(): 1}
    for e in touched:
        fixed = [end for end in e if end[0] != star]
        loose = [end[1] for end in e if end[0] == star]
        choices: dict = {}
        for combo in itertools.product(*(_opts(options, s) for s in loose)):
            coef = 1
            ends = list(fixed)
            for (v, c), s in zip(combo, loose):
                coef *= c
                ends.append((v, s))
            edge = make_edge(ends)
            choices[edge] = choices.get(edge, 0) + coef
        nxt: dict = {}
        for st, c0 in states.items():
            for edge, c1 in choices.items():
                key = tuple(sorted(st + (edge,), key=_edge_key))
                nxt[key] = nxt.get(key, 0) + c0 * c1
        states = nxt
    out = {}
    for new_edges, c in states.items():
        if c:
            h = MultiHyperGraph._trusted(verts, base + list(new_edges))
            out[h] = out.get(h, 0) + c
    return LinComb(out)


def _opts(options: Mapping, sym: str):
    try:
        return options[sym]
    except KeyError:
        raise GraphError(f"no replacement for end symbol {sym!r}") from None


# ---------------------------------------------------------------------------
# enumeration

def pair_types(labels: Sequence[Label], loops: bool = True) -> list[Edge]:
    out = []
    for i, a in enumerate(labels):
        for b in labels[i if loops else i + 1:]:
            out.append(make_edge([(a, PLAIN), (b, PLAIN)]))
    return out


def oriented_edge_types(labels: Sequence[Label], loops: bool = True) -> list[Edge]:
    out = set()
    syms = (UNLABELLED, ARROW)
    for i, a in enumerate(labels):
        for b in labels[i if loops else i + 1:]:
            for s, t in itertools.product(syms, syms):
                out.add(make_edge([(a, s), (b, t)]))
    return sorted(out, key=_edge_key)


def all_graphs(labels: Sequence[Label]) -> Iterator[MultiHyperGraph]:
    """Every simple graph on the given vertex set."""
    verts = tuple(sorted(labels, key=label_key))
    pairs = pair_types(verts, loops=False)
    for mask in range(1 << len(pairs)):
        yield MultiHyperGraph._trusted(verts, [pairs[i] for i in range(len(pairs)) if mask >> i & 1])


def edge_multisets(types: Sequence[Edge], max_edges: int) -> Iterator[tuple]:
    for k in range(max_edges + 1):
        yield from itertools.combinations_with_replacement(types, k)


def all_multigraphs(labels: Sequence[Label], max_edges: int, oriented: bool = False) -> Iterator[MultiHyperGraph]:
    verts = tuple(sorted(labels, key=label_key))
    types = oriented_edge_types(verts) if oriented else pair_types(verts)
    for combo in edge_multisets(types, max_edges):
        yield MultiHyperGraph._trusted(verts, list(combo))


def all_trees(labels: Sequence[Label]) -> Iterator[MultiHyperGraph]:
    """Labelled trees via Pruefer sequences."""
    verts = tuple(sorted(labels, key=label_key))
    n = len(verts)
    if n == 1:
        yield MultiHyperGraph._trusted(verts, [])
        return
    if n == 2:
        yield MultiHyperGraph.from_pairs(verts, [verts])
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        yield MultiHyperGraph.from_pairs(verts, [(verts[a], verts[b]) for a, b in prufer_edges(seq, n)])


def prufer_edges(seq: Sequence[int], n: int) -> list[tuple[int, int]]:
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(i for i in range(n) if degree[i] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, w = [i for i in range(n) if degree[i] == 1]
    edges.append((u, w))
    return edges


# ---------------------------------------------------------------------------
# text and JSON

def to_polynomial(g: MultiHyperGraph) -> str:
    if not g.edges:
        return "0"
    parts = []
    for e in g.edges:
        counts = Counter(e)
        mono = []
        for (v, s) in sorted(counts, key=_end_key):
            k = counts[(v, s)]
            name = f"{v}{'_' + s if s not in (PLAIN,) else ''}"
            mono.append(name if k == 1 else f"{name}^{k}")
        parts.append("".join(mono) if all(len(str(v)) == 1 for v, _ in e) else "*".join(mono))
    return " + ".join(parts)


def graph_to_json(g) -> dict:
    root = None
    if isinstance(g, RootedGraph):
        root, g = g.root, g.graph
    out: dict = {"vertices": list(g.vertices)}
    if is_plain(g):
        edges = []
        for e in g.edges:
            counts = Counter(v for v, _ in e)
            edges.append([[v, counts[v]] for v in sorted(counts, key=label_key)])
        out["edges"] = edges
    else:
        grouped = Counter(g.edges)
        out["edges"] = [{"ends": [[v, s] for v, s in e], "mult": grouped[e]}
                        for e in sorted(grouped, key=_edge_key)]
    if root is not None:
        out["root"] = root
    return out


def graph_from_json(data: Mapping[str, Any]):
    try:
        verts = data["vertices"]
        raw = data.get("edges", [])
    except (KeyError, TypeError, AttributeError) as exc:
        raise GraphError(f"malformed graph JSON: {exc}") from None
    edges = []
    for item in raw:
        if isinstance(item, Mapping):
            ends = [tuple(x) for x in item["ends"]]
            mult = item.get("mult", 1)
            if not isinstance(mult, int) or mult < 1:
                raise GraphError("mult must be a positive integer")
            edges.extend([ends] * mult)
        else:
            ends = []
            for pair in item:
                v, k = pair
                if not isinstance(k, int) or isinstance(k, bool) or k < 1:
                    raise GraphError("exponents must be positive integers")
                ends.extend([(v, PLAIN)] * k)
            edges.append(ends)
    for e in edges:
        for end in e:
            if len(end) != 2:
                raise GraphError("each end must be a [vertex, symbol] pair")
    g = MultiHyperGraph(verts, edges)
    if "root" in data:
        return RootedGraph(g, data["root"])
    return g


def dumps(obj) -> str:
    return json.dumps(graph_to_json(obj), sort_keys=True, separators=(",", ":"))


def loads(text: str):
    return graph_from_json(json.loads(text))
