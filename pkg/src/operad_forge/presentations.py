"""Free operad on two binary generators, the quadratic presentation of the
points/segment suboperad, its dual relations and the pairing between them.

Generators: ``p`` (two points) and ``s`` (segment); the dual generators are
``pv`` and ``sv``.  Every generator is symmetric as a tree node, so children
are stored sorted and a tree is a canonical basis element.

Sign convention for the dual side.  Relabelling a tree that carries dual
generators multiplies it by the sign of the induced leaf permutation (leaves
compared in sorted order).  A dual corolla is therefore unchanged by how its
two children are written, and a transposition of its leaves acts by -1.  The
pairing between dual and primal two-node trees is the delta pairing: 1 when
the trees agree after dualising the generators, 0 otherwise.  This is the
choice that reproduces both hand computations of dual against primal
relations; a global sign flip on the pairing would do equally well.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Iterator, Mapping, Sequence

from .exact import LinComb, RowSpace, nullspace, span
from .graphs import label_key

PRIMAL = ("p", "s")
DUAL = ("pv", "sv")
SYMMETRIC = frozenset(PRIMAL)
DUAL_OF = {"p": "pv", "s": "sv", "pv": "p", "sv": "s"}


class PresentationError(ValueError):
    pass


@dataclass(frozen=True)
class Leaf:
    label: Any

    @property
    def key(self) -> tuple:
        return (0, label_key(self.label))

    def leaves(self) -> tuple:
        return (self.label,)

    def canonical_key(self) -> bytes:
        return repr(self.key).encode()

    def __repr__(self) -> str:
        return str(self.label)


@dataclass(frozen=True)
class Node:
    gen: str
    children: tuple

    @property
    def key(self) -> tuple:
        return (1, self.gen, tuple(c.key for c in self.children))

    def leaves(self) -> tuple:
        out = []
        for c in self.children:
            out.extend(c.leaves())
        return tuple(sorted(out, key=label_key))

    def canonical_key(self) -> bytes:
        return repr(self.key).encode()

    def __repr__(self) -> str:
        return f"{self.gen}({', '.join(map(repr, self.children))})"


EnrichedTree = Leaf | Node


def _leaf(x) -> EnrichedTree:
    return x if isinstance(x, (Leaf, Node)) else Leaf(x)


def make_node(gen: str, children: Sequence) -> tuple[Node, int]:
    """Canonical node and the sign picked up while normalizing it."""
    if gen not in SYMMETRIC and gen not in DUAL:
        raise PresentationError(f"unknown generator {gen!r}")
    kids = tuple(_leaf(c) for c in children)
    if len(kids) != 2:
        raise PresentationError("generators are binary")
    if kids[0].key == kids[1].key:
        raise PresentationError("children must be distinct")
    if kids[0].key > kids[1].key:
        kids = (kids[1], kids[0])
    return Node(gen, kids), 1


def corolla(gen: str, a, b) -> LinComb:
    t, sign = make_node(gen, (a, b))
    return LinComb.of(t, sign)


def canonicalize(t: EnrichedTree) -> tuple[EnrichedTree, int]:
    if isinstance(t, Leaf):
        return t, 1
    sign = 1
    kids = []
    for c in t.children:
        c2, s = canonicalize(c)
        kids.append(c2)
        sign *= s
    node, s = make_node(t.gen, kids)
    return node, sign * s


def _substitute(t: EnrichedTree, mapping: Mapping) -> EnrichedTree:
    if isinstance(t, Leaf):
        return mapping.get(t.label, t)
    return Node(t.gen, tuple(_substitute(c, mapping) for c in t.children))


def _as_lincomb(x) -> LinComb:
    return x if isinstance(x, LinComb) else LinComb.of(_leaf(x))


def free_compose(t1, star, t2) -> LinComb:
    """Grafting of ``t2`` on the leaf ``star`` of ``t1`` (bilinear)."""
    acc: dict = {}
    for a, ca in _as_lincomb(t1).items():
        la = a.leaves()
        if star not in la:
            raise PresentationError(f"{star!r} is not a leaf")
        for b, cb in _as_lincomb(t2).items():
            lb = b.leaves()
            if set(lb) & (set(la) - {star}) or star in lb:
                raise PresentationError("leaf sets overlap")
            t, s = canonicalize(_substitute(a, {star: b}))
            acc[t] = acc.get(t, 0) + s * ca * cb
    return LinComb(acc)


def has_dual(t: EnrichedTree) -> bool:
    if isinstance(t, Leaf):
        return False
    return t.gen in DUAL or any(has_dual(c) for c in t.children)


def relabel(v, sigma: Mapping) -> LinComb:
    """Transport along a bijection of leaves; dual trees pick up its sign."""
    out: dict = {}
    for t, c in _as_lincomb(v).items():
        u, s = canonicalize(_substitute(t, {k: Leaf(w) for k, w in sigma.items()}))
        if has_dual(t):
            s *= perm_sign([sigma.get(x, x) for x in t.leaves()])
        out[u] = out.get(u, 0) + s * c
    return LinComb(out)


def act(v, perm: Sequence, labels: Sequence) -> LinComb:
    """Relabel by the permutation sending ``labels[i]`` to ``perm[i]``."""
    return relabel(v, dict(zip(labels, perm)))


def cycle_action(v, cycle: Sequence) -> LinComb:
    """Relabel along a cycle, e.g. ``("a", "b", "c")`` sends a->b->c->a."""
    sigma = {cycle[i]: cycle[(i + 1) % len(cycle)] for i in range(len(cycle))}
    return relabel(v, sigma)


def perm_sign(word: Sequence) -> int:
    """Sign of ``word`` relative to its sorted order."""
    keys = [label_key(x) for x in word]
    sign = 1
    for i in range(len(keys)):
        for j in range(i + 1, len(keys)):
            if keys[i] > keys[j]:
                sign = -sign
    return sign


# ---------------------------------------------------------------------------
# enumeration

def free_trees(labels: Sequence, gens: Sequence[str] = PRIMAL) -> list[EnrichedTree]:
    """Basis of the free operad on binary generators ``gens`` at the label set."""
    labels = tuple(sorted(labels, key=label_key))
    if len(labels) == 1:
        return [Leaf(labels[0])]
    out = []
    first, rest = labels[0], labels[1:]
    for k in range(0, len(rest)):
        for other in itertools.combinations(rest, k):
            left = (first,) + other
            right = tuple(x for x in rest if x not in other)
            for lt in free_trees(left, gens):
                for rt in free_trees(right, gens):
                    for g in gens:
                        node, _ = make_node(g, (lt, rt))
                        out.append(node)
    return sorted(out, key=lambda t: t.key)


def two_node_basis(labels: Sequence = ("a", "b", "c"), gens: Sequence[str] = PRIMAL) -> list[Node]:
    return free_trees(labels, gens)


# ---------------------------------------------------------------------------
# relations

def sp_relations(a="a", b="b", c="c", star="*") -> list[LinComb]:
    p, s = (lambda x, y: corolla("p", x, y)), (lambda x, y: corolla("s", x, y))
    r1 = free_compose(p(c, star), star, p(a, b)) - free_compose(p(a, star), star, p(b, c))
    r2 = (free_compose(s(a, star), star, p(b, c))
          - free_compose(p(c, star), star, s(a, b))
          - free_compose(p(b, star), star, s(a, c)))
    return [r1, r2]


def dual_relations(a="a", b="b", c="c", star="*") -> list[LinComb]:
    pv, sv = (lambda x, y: corolla("pv", x, y)), (lambda x, y: corolla("sv", x, y))
    r1 = free_compose(sv(a, star), star, sv(b, c))
    r2 = (free_compose(pv(a, star), star, sv(b, c))
          + free_compose(sv(c, star), star, pv(a, b))
          + free_compose(sv(b, star), star, pv(a, c)))
    r3 = (free_compose(pv(a, star), star, pv(b, c))
          + free_compose(pv(c, star), star, pv(a, b))
          + free_compose(pv(b, star), star, pv(c, a)))
    return [r1, r2, r3]


def relation_space(rels: Iterable[LinComb], labels: Sequence = ("a", "b", "c")) -> RowSpace:
    """Span of every relabelling of the given arity-3 relations onto ``labels``."""
    labels = tuple(labels)
    rs = RowSpace()
    for r in rels:
        source = _leaf_set(r)
        for perm in itertools.permutations(labels):
            rs.insert(relabel(r, dict(zip(source, perm))))
    return rs


def _leaf_set(v: LinComb) -> tuple:
    sets = {t.leaves() for t in v}
    if len(sets) != 1:
        raise PresentationError("terms of a relation must share their leaves")
    return sets.pop()


# ---------------------------------------------------------------------------
# pairing

def dualize(t: EnrichedTree) -> EnrichedTree:
    """Swap every generator with its dual."""
    if isinstance(t, Leaf):
        return t
    return Node(DUAL_OF[t.gen], tuple(dualize(c) for c in t.children))


def pair_basis(f: Node, x: Node) -> int:
    if set(f.leaves()) != set(x.leaves()):
        raise PresentationError("pairing needs equal leaf sets")
    if not (has_dual(f) and not has_dual(x)):
        raise PresentationError("pair a dual tree with a primal tree")
    return 1 if dualize(f) == x else 0


def koszul_pairing(f, x) -> Fraction:
    total = Fraction(0)
    for a, ca in _as_lincomb(f).items():
        for b, cb in _as_lincomb(x).items():
            val = pair_basis(a, b)
            if val:
                total += ca * cb * val
    return total


def orthogonal(R: RowSpace | Iterable[LinComb], labels: Sequence = ("a", "b", "c")) -> RowSpace:
    """Annihilator in the dual two-node space of the given primal subspace."""
    rows = R.rows() if isinstance(R, RowSpace) else list(R)
    dual_basis = two_node_basis(labels, DUAL)
    constraints = [LinComb({d: koszul_pairing(LinComb.of(d), r) for d in dual_basis}) for r in rows]
    return span(nullspace(constraints, dual_basis))


def same_space(a: RowSpace, b: RowSpace) -> bool:
    return a.rank == b.rank and all(b.contains(r) for r in a.rows())


# ---------------------------------------------------------------------------
# quotient by the ideal generated by arity-3 relations

def _internal_edges(t: EnrichedTree, path=()) -> Iterator[tuple]:
    """Paths to internal nodes whose child at index ``i`` is internal: (path, i)."""
    if isinstance(t, Leaf):
        return
    for i, c in enumerate(t.children):
        if isinstance(c, Node):
            yield path, i
            yield from _internal_edges(c, path + (i,))


def _get(t, path):
    for i in path:
        t = t.children[i]
    return t


def _replace(t, path, new):
    if not path:
        return new
    i = path[0]
    kids = list(t.children)
    kids[i] = _replace(kids[i], path[1:], new)
    return Node(t.gen, tuple(kids))


_SLOTS = ("\x00x", "\x00y", "\x00z")
_HOLE = "\x00ctx"


def ideal_space(rels: Iterable[LinComb], labels: Sequence, gens: Sequence[str] = PRIMAL) -> RowSpace:
    """Arity-``len(labels)`` component of the operad ideal generated by ``rels``."""
    local = relation_space(rels, _SLOTS).rows()
    rs = RowSpace()
    seen = set()
    for t in free_trees(labels, gens):
        for path, i in _internal_edges(t):
            top = _get(t, path)
            inner = top.children[i]
            subtrees = (top.children[1 - i],) + inner.children
            key = (_replace(t, path, Leaf(_HOLE)), frozenset(subtrees))
            if key in seen:
                continue
            seen.add(key)
            ctx = LinComb.of(key[0])
            sigma = dict(zip(_SLOTS, subtrees))
            for r in local:
                filled: dict = {}
                for tree, c in r.items():
                    u, s = canonicalize(_substitute(tree, sigma))
                    filled[u] = filled.get(u, 0) + s * c
                rs.insert(free_compose(ctx, _HOLE, LinComb(filled)))
    return rs


def quotient_dims(rels: Sequence[LinComb], n_max: int, gens: Sequence[str] = PRIMAL) -> list[int]:
    out = []
    for n in range(1, n_max + 1):
        labels = list(range(1, n + 1))
        total = len(free_trees(labels, gens))
        out.append(total - (ideal_space(rels, labels, gens).rank if n >= 3 else 0))
    return out


# ---------------------------------------------------------------------------
# JSON

def tree_to_json(t: EnrichedTree) -> dict:
    if isinstance(t, Leaf):
        return {"leaf": t.label}
    return {"gen": t.gen, "children": [tree_to_json(c) for c in t.children]}


def tree_from_json(data: Mapping) -> LinComb:
    """Inverse of :func:`tree_to_json`; an optional ``"sign"`` scales dual nodes."""
    t, s = _from_json(data)
    return LinComb.of(t, s)


def _from_json(data):
    if "leaf" in data:
        return Leaf(data["leaf"]), 1
    kids, sign = [], int(data.get("sign", 1))
    for c in data["children"]:
        k, s = _from_json(c)
        kids.append(k)
        sign *= s
    node, s = make_node(data["gen"], kids)
    return node, sign * s


def lincomb_to_json(v: LinComb) -> list:
    return [{"coef": str(c), "tree": tree_to_json(t)} for t, c in v.sorted_items()]


def lincomb_from_json(data: Iterable[Mapping]) -> LinComb:
    """Inverse of :func:`lincomb_to_json`."""
    acc = LinComb()
    try:
        for item in data:
            acc = acc + tree_from_json(item["tree"]).scale(Fraction(item.get("coef", 1)))
    except (KeyError, TypeError, ValueError) as exc:
        raise PresentationError(f"malformed tree combination: {exc}") from None
    return acc
