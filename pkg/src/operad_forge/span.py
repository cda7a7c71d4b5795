"""Suboperad closure, membership, dimension tables and generator search.

Spans live on the vertex sets ``{1..n}`` and are kept closed under relabelling,
so one canonical placement per vertex subset is enough when composing.

When every generator is homogeneous in the number of edges, each arity is
split further by edge count.  Edge counts add under composition, so the
bucket ``(n, e)`` only receives compositions from buckets that come earlier
in the lexicographic order, and a single ordered sweep reaches the fixpoint.
"""
from __future__ import annotations

import itertools
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Any, Callable, Iterable, Sequence

from . import graphs as gm
from .exact import LinComb, RowSpace
from .graphs import label_key
from .operads import GraphOperad, compose

DEFAULT_MAX_ARITY = 6
THREADS_ENV = "OPERAD_FORGE_THREADS"


class ArityBoundError(ValueError):
    """Requested arity is above the configured bound or the table depth."""


class ClosureError(ValueError):
    pass


def _threads() -> int:
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def ordered_map(f: Callable, items: Sequence) -> list:
    """``map`` that fans out over threads when configured; order is preserved."""
    k = _threads()
    if k == 1 or len(items) < 2:
        return [f(x) for x in items]
    with ThreadPoolExecutor(max_workers=k) as pool:
        return list(pool.map(f, items))


def _as_lincomb(x) -> LinComb:
    return x if isinstance(x, LinComb) else LinComb.of(x)


def vertex_set(op: GraphOperad, v: LinComb) -> tuple:
    sets = {op.vertices(x) for x in v}
    if len(sets) != 1:
        raise ClosureError("all terms of a vector must share one vertex set")
    return sets.pop()


def edge_degree(v: LinComb) -> int | None:
    """Common edge count of the support, or None when mixed."""
    counts = {x.edge_count for x in v}
    return counts.pop() if len(counts) == 1 else None


def standardize(op: GraphOperad, v: LinComb) -> LinComb:
    """Relabel a vector onto ``1..n`` preserving the order of its labels."""
    verts = vertex_set(op, v)
    sigma = {u: i for i, u in enumerate(sorted(verts, key=label_key), start=1)}
    return v.map_basis(lambda x: op.relabel(x, sigma))


def orbit(op: GraphOperad, v: LinComb) -> list[LinComb]:
    """All images of a standardized vector under permutations of ``1..n``."""
    n = len(vertex_set(op, v))
    out = []
    for perm in itertools.permutations(range(1, n + 1)):
        sigma = dict(zip(range(1, n + 1), perm))
        out.append(v.map_basis(lambda x: op.relabel(x, sigma)))
    return out


def placements(p: int, q: int):
    """Yield ``(hole, sigma_x, sigma_y)`` for composing arity ``p`` with arity ``q``.

    ``sigma_x`` sends the hole to ``"*"`` and the other labels of ``1..p`` onto
    the complement of a ``q``-subset ``W`` of ``1..n``; ``sigma_y`` sends ``1..q``
    onto ``W``; both are order preserving.
    """
    n = p + q - 1
    for w in itertools.combinations(range(1, n + 1), q):
        rest = [i for i in range(1, n + 1) if i not in w]
        sigma_y = dict(zip(range(1, q + 1), w))
        for hole in range(1, p + 1):
            others = [i for i in range(1, p + 1) if i != hole]
            sigma_x = dict(zip(others, rest))
            sigma_x[hole] = "*"
            yield hole, sigma_x, sigma_y


def _place(op, v, sigma):
    return v.map_basis(lambda x: op.relabel(x, sigma))


@dataclass
class ClosureTable:
    """Per-arity spans of a suboperad, bucketed by edge count when possible."""

    op: GraphOperad
    n_max: int
    graded: bool = True
    max_edges: int | None = None
    spaces: dict = field(default_factory=dict)   # (n, e) -> RowSpace
    reps: dict = field(default_factory=dict)     # (n, e) -> list[LinComb]
    complete_through: int = 0

    def buckets(self, n: int) -> list:
        return sorted((k for k in self.spaces if k[0] == n), key=lambda k: (k[1] is not None, k[1] or 0))

    def dim(self, n: int) -> int:
        return sum(self.spaces[k].rank for k in self.buckets(n))

    def dims(self) -> list[int]:
        return [self.dim(n) for n in range(1, self.complete_through + 1)]

    def dims_by_edges(self, n: int) -> dict:
        return {k[1]: self.spaces[k].rank for k in self.buckets(n) if self.spaces[k].rank}

    def _space(self, key) -> RowSpace:
        if key not in self.spaces:
            self.spaces[key] = RowSpace()
            self.reps[key] = []
        return self.spaces[key]

    def _bucket_key(self, n: int, v: LinComb):
        if not self.graded:
            return (n, None)
        e = edge_degree(v)
        if e is None:
            raise ClosureError("mixed edge counts in a graded table")
        return (n, e)

    def insert(self, n: int, v: LinComb) -> bool:
        if not v:
            return False
        key = self._bucket_key(n, v)
        if self.max_edges is not None and key[1] is not None and key[1] > self.max_edges:
            return False
        rs = self._space(key)
        if rs.insert(v):
            self.reps[key].append(v)
            return True
        return False

    def insert_orbit(self, v: LinComb) -> bool:
        v = standardize(self.op, v)
        n = len(vertex_set(self.op, v))
        grew = False
        for w in orbit(self.op, v):
            grew = self.insert(n, w) or grew
        return grew

    def contains(self, v: LinComb) -> bool:
        v = _as_lincomb(v)
        if not v:
            return True
        v = standardize(self.op, v)
        n = len(vertex_set(self.op, v))
        if n > self.complete_through:
            raise ArityBoundError(f"arity {n} exceeds table depth {self.complete_through}")
        if not self.graded:
            rs = self.spaces.get((n, None))
            return rs is not None and rs.contains(v)
        parts: dict = {}
        for x, c in v.items():
            parts.setdefault(x.edge_count, {})[x] = c
        for e, terms in parts.items():
            rs = self.spaces.get((n, e))
            if rs is None or not rs.contains(LinComb(terms)):
                return False
        return True

    def basis(self, n: int) -> list[LinComb]:
        out = []
        for k in self.buckets(n):
            out.extend(self.spaces[k].rows())
        return out

    def to_dict(self) -> dict:
        return {
            "operad": self.op.name,
            "dims": self.dims(),
            "dims_by_edges": {str(n): {str(e): d for e, d in self.dims_by_edges(n).items()}
                              for n in range(1, self.complete_through + 1) if self.graded},
        }

    # ------------------------------------------------------------------
    def _is_unit_bucket(self, key) -> bool:
        n, e = key
        return n == 1 and e == 0

    def _sources(self, n: int, e):
        """Pairs of buckets whose compositions land in bucket ``(n, e)``."""
        keys = [k for k in self.spaces if self.reps[k]]
        for kx in keys:
            p, ex = kx
            if p > n:
                continue
            q = n - p + 1
            for ky in keys:
                if ky[0] != q:
                    continue
                if self.graded and ex + ky[1] != e:
                    continue
                if self.graded and (self._is_unit_bucket(kx) or self._is_unit_bucket(ky)):
                    continue
                if not self.graded and (p == 1 or q == 1):
                    continue
                if kx == (n, e) or ky == (n, e):
                    continue
                yield kx, ky

    def compositions(self, n: int, e) -> list[LinComb]:
        """Every canonical composition landing in bucket ``(n, e)``."""
        tasks = []
        for kx, ky in self._sources(n, e):
            p, q = kx[0], ky[0]
            for x in self.reps[kx]:
                for hole, sx, sy in placements(p, q):
                    tasks.append((x, sx, sy, ky))
        op = self.op

        def run(task):
            x, sx, sy, ky = task
            px = _place(op, x, sx)
            out = []
            for y in self.reps[ky]:
                out.append(compose(op, px, "*", _place(op, y, sy)))
            return out

        results = ordered_map(run, tasks)
        return [v for chunk in results for v in chunk]

    def sweep(self, n: int, edge_range: Iterable | None = None) -> None:
        """Insert all compositions landing at arity ``n`` (bucket order)."""
        if self.graded:
            if edge_range is None:
                edge_range = range(0, self._edge_cap(n) + 1)
            for e in edge_range:
                seen = set()
                for v in self.compositions(n, e):
                    if v and v not in seen:
                        seen.add(v)
                        self.insert(n, v)
        else:
            seen = set()
            for v in self.compositions(n, None):
                if v and v not in seen:
                    seen.add(v)
                    self.insert(n, v)

    def _edge_cap(self, n: int) -> int:
        if self.max_edges is not None:
            return self.max_edges
        # without edges at arity 1 the edge count at arity n is bounded by
        # what lower arities can contribute
        best = 0
        lower = [k for k in self.spaces if self.reps[k] and k[0] < n]
        here = max((k[1] for k in self.spaces if k[0] == n and self.reps[k]), default=0)
        for (p, ex) in lower:
            for (q, ey) in lower:
                if p + q - 1 == n:
                    best = max(best, ex + ey)
        return max(best, here)


def _prepare(op: GraphOperad, generators) -> list[LinComb]:
    gens = []
    for g in generators:
        v = _as_lincomb(g)
        if not v:
            continue
        for x in v:
            if not op.contains(x):
                raise ClosureError(f"generator term {x!r} is outside the carrier of {op.name}")
        gens.append(standardize(op, v))
    return gens


def new_table(op: GraphOperad, generators, n_max: int = DEFAULT_MAX_ARITY,
              max_edges: int | None = None, arity_bound: int = DEFAULT_MAX_ARITY) -> tuple[ClosureTable, list]:
    if n_max > arity_bound:
        raise ArityBoundError(f"arity {n_max} exceeds the bound {arity_bound}")
    gens = _prepare(op, generators)
    graded = all(edge_degree(g) is not None for g in gens)
    arity_one_edges = [g for g in gens if len(vertex_set(op, g)) == 1 and any(x.edge_count for x in g)]
    if arity_one_edges and not graded:
        raise ClosureError("arity-one generators with edges need edge-homogeneous generators")
    if arity_one_edges and max_edges is None:
        raise ClosureError("arity-one generators with edges produce infinitely many edges; give max_edges")
    table = ClosureTable(op, n_max, graded=graded, max_edges=max_edges)
    table.insert(1, LinComb.of(op.unit(1)))
    return table, gens


def closure(op: GraphOperad, generators, n_max: int = DEFAULT_MAX_ARITY, max_edges: int | None = None,
            arity_bound: int = DEFAULT_MAX_ARITY) -> ClosureTable:
    """Smallest relabelling- and composition-closed family of spans containing
    the generators, computed for arities ``1..n_max``."""
    table, gens = new_table(op, generators, n_max, max_edges, arity_bound)
    for n in range(1, n_max + 1):
        extend_arity(table, n, [g for g in gens if len(vertex_set(op, g)) == n])
    return table


def extend_arity(table: ClosureTable, n: int, generators: Sequence[LinComb]) -> None:
    """Seed arity ``n`` with generator orbits and sweep compositions into it."""
    if table.complete_through != n - 1:
        raise ClosureError(f"table is complete through {table.complete_through}, cannot build arity {n}")
    for g in generators:
        table.insert_orbit(g)
    if table.graded:
        cap = table._edge_cap(n)
        for e in range(0, cap + 1):
            # generators of this arity and edge count are already in; sweep the bucket
            table.sweep(n, [e])
    else:
        table.sweep(n)
    table.complete_through = n


def membership(op: GraphOperad, table: ClosureTable, v) -> bool:
    if table.op is not op:
        raise ClosureError("table was built for a different operad")
    return table.contains(_as_lincomb(v))


def dimension_table(table: ClosureTable) -> list[int]:
    return table.dims()


# ---------------------------------------------------------------------------
# generator search

@dataclass
class ShapeClass:
    edges: int
    shape: tuple
    representative: Any
    orbit_size: int


@dataclass
class GeneratorReport:
    operad: str
    arity: int
    ambient_dim: int
    composable_rank: int
    representatives: list = field(default_factory=list)   # ShapeClass, greedy order
    final_rank: int = 0

    @property
    def deficit(self) -> int:
        return self.ambient_dim - self.composable_rank

    @property
    def shape_count(self) -> int:
        return len(self.representatives)

    def to_dict(self) -> dict:
        return {
            "arity": self.arity,
            "ambient_dim": self.ambient_dim,
            "composable_rank": self.composable_rank,
            "generator_space_dim": self.deficit,
            "shape_count": self.shape_count,
            "shapes": [{"edges": s.edges, "graph": gm.to_polynomial(_graph_of(s.representative)),
                        "orbit_size": s.orbit_size} for s in self.representatives],
        }


def _graph_of(x):
    return x.graph if hasattr(x, "graph") else x


def shape_classes(op: GraphOperad, n: int) -> list[ShapeClass]:
    """Ambient basis at arity ``n`` grouped into isomorphism classes, sorted by
    (edge count, shape key)."""
    groups: dict = {}
    for x in op.elements(range(1, n + 1)):
        groups.setdefault(gm.shape_key(x), []).append(x)
    out = []
    for key, members in groups.items():
        members.sort(key=lambda g: g.key)
        out.append(ShapeClass(members[0].edge_count, key, members[0], len(members)))
    out.sort(key=lambda s: (s.edges, s.shape))
    return out


def _ambient(op: GraphOperad, n: int) -> list:
    if not op.simple:
        raise ClosureError(f"{op.name} has infinitely many elements per arity; generator search needs a finite carrier")
    return list(op.elements(range(1, n + 1)))


def composable_table(table: ClosureTable, n: int) -> ClosureTable:
    """Copy of ``table`` with arity ``n`` filled by compositions only."""
    other = ClosureTable(table.op, table.n_max, table.graded, table.max_edges)
    for k, rs in table.spaces.items():
        if k[0] < n:
            other.spaces[k] = rs.copy()
            other.reps[k] = list(table.reps[k])
    other.complete_through = n - 1
    extend_arity(other, n, [])
    return other


def generator_search(op: GraphOperad, table: ClosureTable, n: int) -> tuple[GeneratorReport, ClosureTable]:
    """Greedy generators at arity ``n`` on top of a table complete through ``n - 1``.

    Returns the report and the table extended to arity ``n`` by the chosen
    representatives' orbits.
    """
    if table.complete_through < n - 1:
        raise ClosureError(f"table must be complete through arity {n - 1}")
    if any(k[0] == 1 and k[1] not in (0, None) for k in table.spaces if table.reps[k]):
        raise ClosureError("generator search assumes arity one holds only the unit")
    ambient = _ambient(op, n)
    work = composable_table(table, n)
    report = GeneratorReport(op.name, n, len(ambient), work.dim(n))
    for cls in shape_classes(op, n):
        if work.dim(n) == len(ambient):
            break
        if all(work.contains(LinComb.of(x)) for x in _orbit_members(op, cls.representative)):
            continue
        work.insert_orbit(LinComb.of(cls.representative))
        report.representatives.append(cls)
    report.final_rank = work.dim(n)
    return report, work


def _orbit_members(op: GraphOperad, x) -> list:
    seen = {}
    n = len(op.vertices(x))
    for perm in itertools.permutations(range(1, n + 1)):
        y = op.relabel(x, dict(zip(range(1, n + 1), perm)))
        seen[y] = None
    return list(seen)


def find_generators(op: GraphOperad, n_max: int, arity_bound: int = DEFAULT_MAX_ARITY) -> tuple[list[GeneratorReport], ClosureTable]:
    """Reports for arities ``1..n_max``, each built on the previous arities."""
    if n_max > arity_bound:
        raise ArityBoundError(f"arity {n_max} exceeds the bound {arity_bound}")
    table, _ = new_table(op, [], n_max)
    table.complete_through = 1
    reports = []
    for n in range(2, n_max + 1):
        report, table = generator_search(op, table, n)
        reports.append(report)
    return reports, table


def removal_test(op: GraphOperad, table: ClosureTable, report: GeneratorReport) -> dict:
    """For each representative, does the span at its arity shrink without it?

    ``table`` must be complete through ``report.arity - 1``.
    """
    n = report.arity
    out = {}
    for i, cls in enumerate(report.representatives):
        work = composable_table(table, n)
        for j, other in enumerate(report.representatives):
            if j != i:
                work.insert_orbit(LinComb.of(other.representative))
        out[gm.to_polynomial(_graph_of(cls.representative))] = work.dim(n) < report.ambient_dim
    return out


def truncate(table: ClosureTable, n: int) -> ClosureTable:
    other = ClosureTable(table.op, table.n_max, table.graded, table.max_edges)
    for k, rs in table.spaces.items():
        if k[0] <= n:
            other.spaces[k] = rs
            other.reps[k] = table.reps[k]
    other.complete_through = min(n, table.complete_through)
    return other


def threshold_edges(n: int) -> int:
    """Least edge count that no composition in the simple graph operad reaches at arity ``n``."""
    return comb(n - 1, 2) + 1
