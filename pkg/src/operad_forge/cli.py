"""Command-line front end.  All output is canonically sorted JSON (or a plain
table) so that identical inputs give byte-identical output."""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import graphs as gm
from . import operads as ops
from . import presentations as pr
from . import series as se
from . import span as sp
from . import suites
from .exact import LinComb
from .graphs import GraphError, MultiHyperGraph, RootedGraph

EXIT_OK, EXIT_FAIL, EXIT_PARSE, EXIT_CARRIER, EXIT_BOUND = 0, 1, 2, 3, 4
CLI_OPERADS = ("mg", "g", "gc", "mgc", "t", "gpointed", "mgor", "plie")
SUITE_NAMES = tuple(suites.SUITES) + ("all",)


class ParseError(ValueError):
    pass


# ---------------------------------------------------------------------------
# input

def _read_json(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON ({exc.msg} at line {exc.lineno})") from None


def _element(op: ops.GraphOperad, data: Any):
    g = gm.graph_from_json(data)
    if op is ops.PLIE:
        if not isinstance(g, RootedGraph):
            raise ops.CarrierError("pre-Lie operands need a root")
        return ops.RootedTree.from_tree(g.graph, g.root)
    return g


def _lincomb_from(op: ops.GraphOperad, data: Any) -> LinComb:
    """A single graph object, or a list of ``{"coef", "graph"}`` terms."""
    if isinstance(data, dict) and "vertices" in data:
        return LinComb.of(_element(op, data))
    if isinstance(data, dict) and "terms" in data:
        data = data["terms"]
    if not isinstance(data, list):
        raise ParseError("expected a graph object or a list of terms")
    acc = LinComb()
    for item in data:
        if not isinstance(item, dict) or "graph" not in item:
            raise ParseError("each term needs a 'graph' entry")
        try:
            coef = Fraction(str(item.get("coef", 1)))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"bad coefficient {item.get('coef')!r}") from None
        acc = acc + LinComb.of(_element(op, item["graph"]), coef)
    return acc


def load_lincomb(op: ops.GraphOperad, path: str) -> LinComb:
    try:
        v = _lincomb_from(op, _read_json(path))
    except GraphError as exc:
        raise ParseError(f"{path}: {exc}") from None
    for x in v.terms:
        if not op.contains(x):
            raise ops.CarrierError(f"{path}: {_show(x)} is outside the carrier of {op.name}")
    return v


def load_generators(op: ops.GraphOperad, path: str) -> list[LinComb]:
    """A list whose entries are graphs or term lists, or a single such entry."""
    data = _read_json(path)
    if isinstance(data, dict) and "generators" in data:
        data = data["generators"]
    items = data if isinstance(data, list) and (not data or not _is_term(data[0])) else [data]
    out = []
    for item in items:
        try:
            v = _lincomb_from(op, item)
        except GraphError as exc:
            raise ParseError(f"{path}: {exc}") from None
        for x in v.terms:
            if not op.contains(x):
                raise ops.CarrierError(f"{path}: {_show(x)} is outside the carrier of {op.name}")
        out.append(v)
    return out


def _is_term(item) -> bool:
    return isinstance(item, dict) and "graph" in item


def load_tree_lincombs(path: str) -> list[LinComb]:
    data = _read_json(path)
    if not isinstance(data, list):
        raise ParseError(f"{path}: expected a list of tree combinations")
    if data and isinstance(data[0], dict):
        data = [data]
    try:
        return [pr.lincomb_from_json(v) for v in data]
    except (pr.PresentationError, GraphError) as exc:
        raise ParseError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# output

def _show(x) -> str:
    if isinstance(x, ops.RootedTree):
        return repr(x)
    if isinstance(x, RootedGraph):
        return f"{gm.to_polynomial(x.graph)} @{x.root}"
    return gm.to_polynomial(x)


def _term_json(x) -> dict:
    if isinstance(x, ops.RootedTree):
        return gm.graph_to_json(RootedGraph(x.tree(), x.root))
    return gm.graph_to_json(x)


def lincomb_json(v: LinComb) -> list:
    return [{"coef": str(c), "graph": _term_json(x)} for x, c in v.sorted_items()]


def emit(payload: dict, fmt: str, table_rows: Sequence[str], out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        out.write(json.dumps(payload, sort_keys=True, indent=2, ensure_ascii=False) + "\n")
    else:
        for row in table_rows:
            out.write(row + "\n")


def notice(msg: str) -> None:
    sys.stderr.write(f"notice: {msg}\n")


def _fresh(label, taken: set):
    base = str(label)
    k = 1
    while f"{base}_{k}" in taken:
        k += 1
    return f"{base}_{k}"


def rename_apart(op: ops.GraphOperad, x: LinComb, star, y: LinComb) -> tuple[LinComb, list]:
    """Rename vertices of ``y`` that collide with ``x`` (or with the star)."""
    vx = set()
    for t in x.terms:
        vx |= set(op.vertices(t))
    vy = set()
    for t in y.terms:
        vy |= set(op.vertices(t))
    clash = sorted(vy & vx, key=gm.label_key)
    if not clash:
        return y, []
    taken = {str(v) for v in vx | vy}
    sigma = {}
    for v in clash:
        new = _fresh(v, taken)
        taken.add(new)
        sigma[v] = new
    full = {v: sigma.get(v, v) for v in vy}
    return y.map_basis(lambda t: op.relabel(t, full)), sorted(sigma.items(), key=lambda kv: gm.label_key(kv[0]))


# ---------------------------------------------------------------------------
# commands

def _check_arity(args, n: int) -> None:
    if n > sp.DEFAULT_MAX_ARITY and not args.unsafe_arity:
        raise sp.ArityBoundError(f"arity {n} exceeds {sp.DEFAULT_MAX_ARITY}; pass --unsafe-arity to allow it")


def _bound(args) -> int:
    return args.max_arity if args.unsafe_arity else sp.DEFAULT_MAX_ARITY


def cmd_compose(args) -> int:
    op = ops.get_operad(args.operad)
    x = load_lincomb(op, args.x)
    y = load_lincomb(op, args.y)
    star = args.star
    for t in x.terms:
        if star not in op.vertices(t):
            raise ParseError(f"{star!r} is not a vertex of the outer operand")
    y, renamed = rename_apart(op, x, star, y)
    for old, new in renamed:
        notice(f"renamed vertex {old} of the inner operand to {new}")
    v = ops.compose(op, x, star, y)
    payload = {"operad": op.name, "star": star, "terms": lincomb_json(v)}
    rows = [f"{c}\t{_show(t)}" for t, c in v.sorted_items()] or ["0"]
    emit(payload, args.format, rows)
    return EXIT_OK


def cmd_verify(args) -> int:
    report = suites.run_suite(args.suite, seed=args.seed)
    ok = all(c["passed"] for c in report)
    payload = {"suite": args.suite, "seed": args.seed, "passed": ok, "checks": report}
    rows = [f"{'PASS' if c['passed'] else 'FAIL'}  {c['check']}" for c in report]
    rows.append(f"{sum(c['passed'] for c in report)}/{len(report)} checks passed")
    emit(payload, args.format, rows)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_closure(args) -> int:
    op = ops.get_operad(args.operad)
    _check_arity(args, args.max_arity)
    gens = load_generators(op, args.gens)
    table = sp.closure(op, gens, args.max_arity, max_edges=args.max_edges, arity_bound=_bound(args))
    dims = table.dims()
    payload = {"operad": op.name, "max_arity": args.max_arity, "dims": dims}
    if args.max_edges is not None:
        payload["max_edges"] = args.max_edges
    rows = [f"{n}\t{d}" for n, d in enumerate(dims, start=1)]
    emit(payload, args.format, rows)
    return EXIT_OK


def cmd_generators(args) -> int:
    op = ops.get_operad(args.operad)
    n = args.arity if args.arity is not None else args.max_arity
    _check_arity(args, n)
    reports, _ = sp.find_generators(op, n, arity_bound=_bound(args))
    if args.arity is not None:
        reports = [r for r in reports if r.arity == args.arity]
    payload = {"operad": op.name, "reports": [r.to_dict() for r in reports]}
    rows = []
    for r in reports:
        rows.append(f"arity {r.arity}: ambient {r.ambient_dim}, composable rank {r.composable_rank}, "
                    f"{r.shape_count} generator shape(s)")
        for s in r.representatives:
            rows.append(f"  {s.edges}\t{gm.to_polynomial(s.representative)}\torbit {s.orbit_size}")
    emit(payload, args.format, rows)
    return EXIT_OK


def cmd_membership(args) -> int:
    op = ops.get_operad(args.operad)
    gens = load_generators(op, args.gens)
    v = load_lincomb(op, args.element)
    n = len(sp.vertex_set(op, v)) if v else 1
    _check_arity(args, n)
    max_edges = args.max_edges
    if max_edges is None and op.simple is False:
        max_edges = max((sp.edge_degree(v) or 0), 0)
    table = sp.closure(op, gens, max(n, 1), max_edges=max_edges, arity_bound=_bound(args))
    member = sp.membership(op, table, v)
    payload = {"operad": op.name, "arity": n, "member": member}
    emit(payload, args.format, [f"member\t{str(member).lower()}"])
    return EXIT_OK


def cmd_pairing(args) -> int:
    left = load_tree_lincombs(args.left)
    right = load_tree_lincombs(args.right)
    matrix = [[str(pr.koszul_pairing(f, x)) for x in right] for f in left]
    zero = all(c == "0" for row in matrix for c in row)
    payload = {"rows": len(left), "columns": len(right), "matrix": matrix, "all_zero": zero}
    rows = ["\t".join(r) for r in matrix] + [f"all zero: {str(zero).lower()}"]
    emit(payload, args.format, rows)
    return EXIT_OK


def cmd_hilbert(args) -> int:
    order = args.order
    if order < 1:
        raise ParseError("order must be positive")
    h = se.hilbert_sp(order)
    hd = se.hilbert_sp_dual(order)
    residual = se.koszul_residual(h, hd)
    payload = {
        "order": order,
        "sp": [str(d) for d in h.dims()],
        "sp_dual": [str(d) for d in hd.dims()],
        "residual_zero": residual.is_zero(),
    }
    rows = [f"{n}\t{a}\t{b}" for n, (a, b) in enumerate(zip(h.dims(), hd.dims()), start=1)]
    rows.append(f"residual zero: {str(residual.is_zero()).lower()}")
    emit(payload, args.format, rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--operad", choices=CLI_OPERADS, default="mg", type=str.lower)
    common.add_argument("--max-arity", "--max", dest="max_arity", type=int, default=sp.DEFAULT_MAX_ARITY)
    common.add_argument("--unsafe-arity", action="store_true", help="allow arities above 6")
    common.add_argument("--format", choices=("json", "table"), default="json")
    common.add_argument("--seed", type=int, default=0)

    p = argparse.ArgumentParser(prog="operad-forge",
                                description="Exact computations in graph insertion operads.")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compose", parents=[common], help="partial composition of two operands")
    c.add_argument("x", help="JSON file with the outer operand")
    c.add_argument("star", help="vertex of the outer operand to substitute")
    c.add_argument("y", help="JSON file with the inner operand")
    c.set_defaults(func=cmd_compose)

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=SUITE_NAMES)
    v.set_defaults(func=cmd_verify)

    cl = sub.add_parser("closure", parents=[common], help="dimensions of a generated suboperad")
    cl.add_argument("--gens", required=True, help="JSON file with generators")
    cl.add_argument("--max-edges", type=int, default=None)
    cl.set_defaults(func=cmd_closure)

    g = sub.add_parser("generators", parents=[common], help="minimal generators arity by arity")
    g.add_argument("--arity", type=int, default=None, help="report only this arity")
    g.set_defaults(func=cmd_generators)

    m = sub.add_parser("membership", parents=[common], help="test membership in a generated suboperad")
    m.add_argument("--gens", required=True)
    m.add_argument("--element", required=True)
    m.add_argument("--max-edges", type=int, default=None)
    m.set_defaults(func=cmd_membership)

    pa = sub.add_parser("pairing", parents=[common], help="pairing matrix of two lists of tree combinations")
    pa.add_argument("--left", required=True)
    pa.add_argument("--right", required=True)
    pa.set_defaults(func=cmd_pairing)

    h = sub.add_parser("hilbert", parents=[common], help="Hilbert series dimensions and functional equation")
    h.add_argument("--order", type=int, default=9)
    h.set_defaults(func=cmd_hilbert)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.max_arity < 1:
        parser.error("--max-arity must be positive")
    try:
        return args.func(args)
    except (ParseError, GraphError, pr.PresentationError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_PARSE
    except (ops.CarrierError, sp.ClosureError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_CARRIER
    except sp.ArityBoundError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_BOUND


if __name__ == "__main__":
    sys.exit(main())
