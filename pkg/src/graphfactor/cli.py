"""Command-line interface.

Subcommands: factor, check, spectral, construct, census, verify.
Exit status: 0 success, 1 violation or verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import census as census_mod
from .conditions import screen, validate_factorization
from .errors import (
    CatalogSchemaError,
    Graph6Error,
    GraphFactorError,
    ParameterError,
    PreconditionError,
    TheoremViolationError,
    UnsupportedSizeError,
)
from .exact import adjacency
from .graphs import Graph, decode_edge_list, decode_graph6, encode_graph6, is_bipartite, is_connected
from .search import (
    DEFAULT_NODE_LIMIT,
    SearchConfig,
    construct,
    dedup_pairs,
    factor_search,
)
from .spectral import DEFAULT_SEED, DEFAULT_TOL, eigen_sym, lambda_max, perron, spectrum_is_symmetric

_USAGE_ERRORS = (ParameterError, Graph6Error, UnsupportedSizeError, PreconditionError)


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _load_graph(args: argparse.Namespace) -> Graph:
    if getattr(args, "graph6", None) is not None:
        try:
            return decode_graph6(args.graph6)
        except GraphFactorError as exc:
            raise ParameterError(f"--graph6: {exc}") from None
    if getattr(args, "edges", None) is not None:
        try:
            with open(args.edges, "r", encoding="utf-8") as fh:
                return decode_edge_list(fh.read())
        except OSError as exc:
            raise ParameterError(f"--edges: {exc}") from None
        except GraphFactorError as exc:
            raise ParameterError(f"--edges: {exc}") from None
    raise ParameterError("provide a graph via --graph6 or --edges")


def _add_graph_input(p: argparse.ArgumentParser) -> None:
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--graph6", help="graph6 record")
    src.add_argument("--edges", help="path to an edge-list file (one 'u v' per line)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="graphfactor",
        description="Matrix-product factorizations of graphs: search, screening, census.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_factor = sub.add_parser("factor", help="decide factorizability and list witnesses")
    _add_graph_input(p_factor)
    p_factor.add_argument("--all", action="store_true", help="enumerate every witness")
    p_factor.add_argument("--node-limit", type=int, default=DEFAULT_NODE_LIMIT)
    p_factor.add_argument("--include-trivial", action="store_true")
    p_factor.add_argument("--json", action="store_true")

    p_check = sub.add_parser("check", help="screen against the necessary conditions")
    _add_graph_input(p_check)
    p_check.add_argument("--json", action="store_true")

    p_spec = sub.add_parser("spectral", help="spectrum, largest eigenvalue, Perron data")
    _add_graph_input(p_spec)
    p_spec.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p_spec.add_argument("--json", action="store_true")

    p_con = sub.add_parser("construct", help="build an explicit witness family member")
    p_con.add_argument(
        "--kind", required=True, choices=("cycle", "double", "counterexample")
    )
    p_con.add_argument("--n", type=int, help="size parameter for cycle/counterexample")
    p_con.add_argument("--graph6", help="input graph for --kind double")
    p_con.add_argument("--edges", help="edge-list input for --kind double")
    p_con.add_argument("--json", action="store_true")

    p_census = sub.add_parser("census", help="run the isomorphism-class census")
    p_census.add_argument("--order", type=int, required=True)
    p_census.add_argument("--out", required=True, help="catalog output path (JSON lines)")
    p_census.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    p_census.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p_census.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p_census.add_argument("--node-limit", type=int, default=DEFAULT_NODE_LIMIT)
    p_census.add_argument("--keep-going", action="store_true",
                          help="report violations instead of aborting")
    p_census.add_argument("--allow-order-8", action="store_true",
                          help="permit order 8 (12346 classes; expect a long run)")

    p_verify = sub.add_parser("verify", help="re-verify a stored catalog from scratch")
    p_verify.add_argument("--catalog", required=True)
    p_verify.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p_verify.add_argument("--json", action="store_true")

    return parser


def _cmd_factor(args) -> int:
    g = _load_graph(args)
    report = screen(g)
    cfg = SearchConfig(
        mode="all" if args.all else "first",
        node_limit=args.node_limit,
        include_trivial=args.include_trivial,
        order_cap=max(7, g.order),
    )
    if report.overall == "ruled_out":
        verdict = "no"
        witnesses: list = []
        stats = None
    else:
        witnesses, stats = factor_search(g, cfg)
        verdict = "yes" if witnesses else ("no" if stats.exhausted else "unknown")
    pairs = sorted(dedup_pairs(witnesses))
    pair_g6 = [
        [
            encode_graph6(census_mod.graph_from_key(g.order, hk)),
            encode_graph6(census_mod.graph_from_key(g.order, kk)),
        ]
        for hk, kk in pairs
    ]
    if args.json:
        payload = {
            "graph6": encode_graph6(g),
            "verdict": verdict,
            "screen": report.to_json(),
            "factor_pairs": [{"h_graph6": h, "k_graph6": k} for h, k in pair_g6],
            "witnesses": [f.to_json() for f in witnesses],
            "stats": None
            if stats is None
            else {
                "nodes_expanded": stats.nodes_expanded,
                "prunes_by_rule": stats.prunes_by_rule,
                "witnesses_found": stats.witnesses_found,
                "exhausted": stats.exhausted,
            },
        }
        print(json.dumps(payload, indent=2))
        return 0
    print(f"graph: {encode_graph6(g)} (order {g.order}, {g.edge_count} edges)")
    print(f"verdict: {verdict}")
    if report.overall == "ruled_out":
        for rule in report.rules:
            if rule.status == "ruled_out":
                print(f"  ruled out by {rule.rule_id}: {rule.detail}")
    if witnesses:
        print(f"witnesses: {len(witnesses)}")
        for h, k in pair_g6:
            print(f"  factor pair: {h} * {k}")
    if stats is not None:
        print(
            f"search: nodes={stats.nodes_expanded} exhausted={stats.exhausted} "
            f"prunes={stats.prunes_by_rule}"
        )
    return 0


def _cmd_check(args) -> int:
    g = _load_graph(args)
    report = screen(g)
    if args.json:
        print(json.dumps(report.to_json(), indent=2))
        return 0
    print(f"graph: {encode_graph6(g)} (order {g.order}, {g.edge_count} edges)")
    print(f"overall: {report.overall}" + (" (trivially factorizable)" if report.trivial else ""))
    for rule in report.rules:
        print(f"  {rule.rule_id} [{rule.status}] {rule.detail}")
    return 0


def _cmd_spectral(args) -> int:
    g = _load_graph(args)
    spectrum = eigen_sym(adjacency(g), args.tol)
    connected = is_connected(g)
    perron_data = perron(g, args.tol) if connected else None
    if args.json:
        payload = {
            "graph6": encode_graph6(g),
            "spectrum": list(spectrum.values),
            "lambda_max": spectrum.values[0],
            "spectrum_symmetric": spectrum_is_symmetric(spectrum),
            "bipartite": is_bipartite(g),
            "connected": connected,
            "perron": None
            if perron_data is None
            else {"value": perron_data.value, "vector": list(perron_data.vector)},
        }
        print(json.dumps(payload, indent=2))
        return 0
    print(f"graph: {encode_graph6(g)} (order {g.order}, {g.edge_count} edges)")
    print("spectrum: " + " ".join(_fmt(v) for v in spectrum.values))
    print(f"lambda_max: {_fmt(spectrum.values[0])}")
    print(f"bipartite: {is_bipartite(g)}")
    print(f"connected: {connected}")
    if perron_data is not None:
        print(f"perron value: {_fmt(perron_data.value)}")
        print("perron vector: " + " ".join(_fmt(x) for x in perron_data.vector))
    else:
        print("perron: not defined (graph disconnected)")
    return 0


def _cmd_construct(args) -> int:
    if args.kind == "cycle":
        if args.n is None:
            raise ParameterError("--kind cycle needs --n")
        f = construct("cycle_product", n=args.n)
    elif args.kind == "counterexample":
        if args.n is None:
            raise ParameterError("--kind counterexample needs --n")
        f = construct("disconnected_counterexample", n=args.n)
    else:
        if args.graph6 is None and args.edges is None:
            raise ParameterError("--kind double needs --graph6 or --edges")
        f = construct("doubled_graph", graph=_load_graph(args))
    violations = validate_factorization(f)
    lam_g = lambda_max(f.g)
    lam_h = lambda_max(f.h)
    lam_k = lambda_max(f.k)
    if args.json:
        payload = {
            "kind": args.kind,
            "witness": f.to_json(),
            "g_graph6": encode_graph6(f.g),
            "lambda_max_g": lam_g,
            "lambda_max_h": lam_h,
            "lambda_max_k": lam_k,
            "lambda_product": lam_h * lam_k,
            "violations": violations.to_json(),
        }
        print(json.dumps(payload, indent=2))
        return 0
    print(f"G = {encode_graph6(f.g)} (order {f.g.order}, {f.g.edge_count} edges)")
    print(f"H = {encode_graph6(f.h)}, K = {encode_graph6(f.k)}")
    print("A =")
    print(f.a.format_rows())
    print("B =")
    print(f.b.format_rows())
    print("C =")
    print(f.c.format_rows())
    print(
        f"lambda_max(G) = {_fmt(lam_g)} vs "
        f"lambda_max(H)*lambda_max(K) = {_fmt(lam_h)}*{_fmt(lam_k)} = {_fmt(lam_h * lam_k)}"
    )
    print(f"validation: {'ok' if violations.empty else 'VIOLATIONS'}")
    return 0 if violations.empty else 1


def _cmd_census(args) -> int:
    if args.order > census_mod.LARGE_ORDER_CAP:
        raise ParameterError(f"--order: maximum supported order is {census_mod.LARGE_ORDER_CAP}")
    if args.order == 8 and not args.allow_order_8:
        raise ParameterError(
            "--order 8 enumerates 12346 classes and can run very long; "
            "pass --allow-order-8 to confirm"
        )
    if args.order == 8:
        print("warning: order 8 census is expensive (12346 classes)", file=sys.stderr)
    cfg = SearchConfig(
        mode="all", node_limit=args.node_limit, order_cap=max(7, args.order)
    )

    def progress(done: int, total: int) -> None:
        if done % 200 == 0 or done == total:
            print(f"  {done}/{total} classes", file=sys.stderr)

    try:
        records = census_mod.run_census(
            args.order,
            cfg,
            tol=args.tol,
            jobs=max(1, args.jobs),
            keep_going=args.keep_going,
            allow_large=args.order == 8,
            progress=progress,
        )
    except TheoremViolationError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    census_mod.write_catalog(records, args.out)
    verdicts = {"yes": 0, "no": 0, "unknown": 0}
    for rec in records:
        verdicts[rec.verdict] += 1
    bad = sum(1 for rec in records if not rec.violations.empty)
    print(f"catalog written: {args.out}")
    print(
        f"classes: {len(records)}  yes: {verdicts['yes']}  no: {verdicts['no']}  "
        f"unknown: {verdicts['unknown']}  records with violations: {bad}"
    )
    if bad and not args.keep_going:
        return 1
    return 0


def _cmd_verify(args) -> int:
    records = census_mod.read_catalog(args.catalog)
    report = census_mod.verify_catalog(records, args.tol)
    if args.json:
        print(json.dumps(report.to_json(), indent=2))
    else:
        print(report.format_text())
    return 1 if report.total_violations else 0


_COMMANDS = {
    "factor": _cmd_factor,
    "check": _cmd_check,
    "spectral": _cmd_spectral,
    "construct": _cmd_construct,
    "census": _cmd_census,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except _USAGE_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CatalogSchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except TheoremViolationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
