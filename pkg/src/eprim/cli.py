"""Command line: info, search, verify, graph, reproduce.

Exit codes: 0 all checks passed, 1 some check failed, 2 usage or data error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from pathlib import Path
from typing import Any

from . import catalog, group
from .catalog import CatalogError
from .cosetgraph import Graph, GraphBuildError, build_from_lattice
from .graphprops import (
    basic_invariants,
    edge_action,
    is_vertex_biprimitive,
    isomorphic,
    local_action,
    s_arc_transitivity,
)
from .group import DEFAULT_INDEX_CAP, IndexCapExceeded, is_primitive
from .lattice import DEFAULT_ORDER_CAP, distinct_up_to_isomorphism, find_lattices, verify_lattice
from .perm import CycleSyntaxError
from .reproduce import PASS, SKIPPED, TARGETS, reproduce

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("eprim")


class UsageError(Exception):
    pass


def _emit(args: argparse.Namespace, payload: dict[str, Any], text: str, stem: str,
          timing: dict[str, Any] | None = None) -> None:
    """Print JSON or text; with --out also write <stem>.json (+ <stem>.timing.json)."""
    body = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    print(body if args.json else text, end="" if args.json else "\n")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / f"{stem}.json").write_text(body)
        if timing is not None:
            (out / f"{stem}.timing.json").write_text(json.dumps(timing, indent=2, sort_keys=True) + "\n")


# -- info ----------------------------------------------------------------------

def cmd_info(args: argparse.Namespace) -> int:
    if args.group in catalog.list_nonconstructible():
        nc = catalog.nonconstructible(args.group)
        payload = {"name": nc.name, "label": nc.label, "constructible": False,
                   "order": str(nc.order), "index": str(nc.index), "arithmetic": nc.arithmetic()}
        _emit(args, payload, f"{nc.label}: metadata only\n  {nc.arithmetic()}", f"info_{nc.name}")
        return EXIT_OK
    G, entry = catalog.load_group(args.group)
    lg = catalog.load_group_full(args.group)
    subs = [{"name": s.name, "role": s.role, "order": str(lg.subgroup(s.name).order),
             "structure_label": s.structure_label} for s in entry.subgroups]
    payload = {"name": entry.name, "label": entry.label, "degree": G.degree, "order": str(G.order),
               "base": list(G.base), "metadata": entry.metadata, "subgroups": subs}
    lines = [f"{entry.name} ({entry.label}): degree {G.degree}, order {G.order}",
             f"  socle {entry.metadata.get('socle')}, almost simple {entry.metadata.get('almost_simple')}"]
    lines += [f"  {s['name']}: role {s['role']}, order {s['order']}, {s['structure_label']}" for s in subs]
    _emit(args, payload, "\n".join(lines), f"info_{entry.name}")
    return EXIT_OK


# -- search -------------------------------------------------------------------

def cmd_search(args: argparse.Namespace) -> int:
    G, entry = catalog.load_group(args.group)
    over_name = args.overgroup if args.overgroup is not None else entry.metadata.get("overgroup")
    X = catalog.load_group(over_name)[0] if over_name and over_name != "none" else None
    if G.order > args.order_cap:
        raise UsageError(f"order cap exceeded: |{entry.name}| = {G.order} > {args.order_cap}; "
                         f"subgroup search is for small groups, use 'verify' on a lattice file")
    t0 = time.perf_counter()
    lats = find_lattices(G, X, order_cap=args.order_cap)
    rows = [L.summary() for L in lats]
    distinct = len(distinct_up_to_isomorphism(lats))
    payload = {"group": entry.name, "order": str(G.order),
               "conjugacy": f"under {over_name}" if X is not None else f"under {entry.name}",
               "lattices": rows, "count": len(rows), "count_up_to_isomorphism": distinct}
    lines = [f"{entry.name}: {len(rows)} lattice(s) up to conjugacy "
             f"{'in ' + over_name if X is not None else 'in G'}"]
    for r in rows:
        flag = ""
        if r.get("possible_aut_conjugates"):
            flag = f"  [isomorphic graph to {', '.join(r['possible_aut_conjugates'])}]"
        lines.append(f"  {r['name']}: |E|={r['E_order']} |A|={r['A_order']} |H|={r['H_order']}"
                     f"  vertices {r['vertices']}, valency {r['valency']}{flag}")
    _emit(args, payload, "\n".join(lines), f"search_{entry.name}",
          {"seconds": round(time.perf_counter() - t0, 3)})
    return EXIT_OK


# -- verify -------------------------------------------------------------------

def _load_graph_file(path: str) -> Graph:
    p = Path(path)
    text = p.read_text()
    if p.suffix == ".json":
        data = json.loads(text)
        if "adjacency" in data:
            return Graph.from_json(text)
        return build_from_lattice(catalog.lattice_from_data(catalog.load_lattice_data(p)))
    return Graph.from_text(text)


def cmd_verify(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    data = catalog.load_lattice_data(args.lattice)
    L = catalog.lattice_from_data(data, strict=False)
    rep = verify_lattice(L, args.cap)
    want_graph = args.graph or args.s_arc or args.edge_primitive or args.biprimitive or args.isomorphic_to
    if want_graph and rep.passed:
        g = build_from_lattice(L, cap=args.cap)
        inv = basic_invariants(g)
        rep.values["graph"] = inv.to_dict()
        exp = L.expected
        for key in ("order", "size", "valency", "girth", "bipartite"):
            if exp.get(key) is not None:
                rep.add(f"graph {key}", exp[key] == rep.values["graph"][key],
                        f"expected {exp[key]}, got {rep.values['graph'][key]}")
        if args.s_arc:
            sa = s_arc_transitivity(g)
            la = local_action(g)
            rep.values["s_arc"] = sa.to_dict()
            rep.values["local_action"] = la.to_dict()
            if "max_s" in exp:
                rep.add("max_s", sa.max_s == exp["max_s"], f"expected {exp['max_s']}, got {sa.max_s}")
            if "max_s_min" in exp:
                rep.add("max_s lower bound", sa.max_s >= exp["max_s_min"],
                        f"expected >= {exp['max_s_min']}, got {sa.max_s}")
            if "two_arc_stabilizer" in exp:
                rep.add("2-arc stabilizer order", sa.stabilizer_order(2) == exp["two_arc_stabilizer"],
                        f"got {sa.stabilizer_order(2)}")
            rep.add("local 2-transitivity matches s >= 2", la.two_transitive == (sa.max_s >= 2))
            if "local_two_transitive" in exp:
                rep.add("local action 2-transitive", la.two_transitive == exp["local_two_transitive"])
        if args.edge_primitive:
            ea = edge_action(g)
            prim = is_primitive(ea.group)
            rep.values["edge_primitive"] = prim
            rep.add("edge-primitive", prim == exp.get("edge_primitive", True),
                    f"edge action of degree {ea.degree}, order {ea.group.order}")
        if args.biprimitive:
            bp = is_vertex_biprimitive(g)
            rep.values["biprimitive"] = bp
            if "biprimitive" in exp:
                rep.add("vertex-biprimitive", bp == exp["biprimitive"])
        if args.isomorphic_to:
            other = _load_graph_file(args.isomorphic_to)
            ok, _ = isomorphic(g, other)
            rep.add(f"isomorphic to {Path(args.isomorphic_to).name}", ok)
    rep.seconds = time.perf_counter() - t0
    payload = rep.to_dict()
    lines = [f"{payload['verdict']} {rep.subject}"]
    for r in rep.records:
        mark = "ok  " if r.passed else ("FAIL" if r.mandatory else "no  ")
        lines.append(f"  {mark} {r.name}{': ' + r.detail if r.detail else ''}")
    for k, v in rep.values.items():
        lines.append(f"  {k} = {v}")
    _emit(args, payload, "\n".join(lines), f"verify_{rep.subject}", {"seconds": round(rep.seconds, 3)})
    return EXIT_OK if rep.passed else EXIT_FAIL


# -- graph ----------------------------------------------------------------------

def cmd_graph(args: argparse.Namespace) -> int:
    L = catalog.load_lattice(args.lattice)
    g = build_from_lattice(L, cap=args.cap)
    text = g.to_json() if args.format == "json" else g.to_text()
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        path = out / f"{L.name}.{'json' if args.format == 'json' else 'txt'}"
        path.write_text(text)
        print(f"wrote {path} ({g.vertex_count} vertices, {g.size} edges)")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- reproduce --------------------------------------------------------------------

def cmd_reproduce(args: argparse.Namespace) -> int:
    budgets = {"j3": args.j3_budget} if args.j3_budget is not None else None
    manifests = reproduce([args.target], jobs=args.jobs, cap=args.cap, budgets=budgets)
    payload = {"target": args.target, "manifests": [m.to_dict() for m in manifests],
               "verdict": "FAIL" if any(m.status not in (PASS, SKIPPED) for m in manifests) else "PASS"}
    timing = {m.target: round(m.seconds, 3) for m in manifests}
    lines = []
    for m in manifests:
        lines.append(f"{m.status:<8} {m.target}" + (f"  ({m.note})" if m.note else ""))
        for c in m.checks:
            if c.status != PASS or args.verbose:
                lines.append(f"    {c.status:<8} {c.name}: expected {c.expected}, got {c.actual}")
    passed = sum(m.status == PASS for m in manifests)
    skipped = sum(m.status == SKIPPED for m in manifests)
    lines.append(f"{passed} passed, {len(manifests) - passed - skipped} failed, {skipped} skipped")
    _emit(args, payload, "\n".join(lines), f"reproduce_{args.target}", timing)
    return EXIT_OK if payload["verdict"] == "PASS" else EXIT_FAIL


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print the JSON report")
    common.add_argument("--out", metavar="DIR", help="also write reports into DIR")
    common.add_argument("--cap", type=int, default=DEFAULT_INDEX_CAP,
                        help="coset index cap (default %(default)s)")
    common.add_argument("--seed", type=int, default=0,
                        help="seed for randomized Schreier-Sims; never changes results")
    common.add_argument("-v", "--verbose", action="store_true")

    p = argparse.ArgumentParser(prog="eprim", description="Edge-primitive coset graph toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("info", parents=[common], help="show a catalog group")
    s.add_argument("group")
    s.set_defaults(func=cmd_info)

    s = sub.add_parser("search", parents=[common], help="find all lattices of a small group")
    s.add_argument("group")
    s.add_argument("--overgroup", help="catalog group normalizing G, or 'none' (default: from metadata)")
    s.add_argument("--order-cap", type=int, default=DEFAULT_ORDER_CAP)
    s.set_defaults(func=cmd_search)

    s = sub.add_parser("verify", parents=[common], help="verify a lattice file")
    s.add_argument("lattice", help="lattice name or JSON path")
    s.add_argument("--graph", action="store_true", help="build the coset graph and compare invariants")
    s.add_argument("--s-arc", action="store_true", help="s-arc transitivity and local action")
    s.add_argument("--edge-primitive", action="store_true")
    s.add_argument("--biprimitive", action="store_true")
    s.add_argument("--isomorphic-to", metavar="FILE",
                   help="graph file (.txt/.json) or lattice JSON to compare with")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("graph", parents=[common], help="export the coset graph of a lattice")
    s.add_argument("lattice")
    s.add_argument("--format", choices=["text", "json"], default="text")
    s.set_defaults(func=cmd_graph)

    s = sub.add_parser("reproduce", parents=[common], help="run a reproduction target")
    s.add_argument("target", choices=list(TARGETS) + ["all"])
    s.add_argument("--jobs", type=int, default=os.cpu_count() or 1)
    s.add_argument("--j3-budget", type=float, default=None, help="seconds allowed for the j3 target")
    s.set_defaults(func=cmd_reproduce)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    group.DEFAULT_SEED = args.seed
    try:
        return args.func(args)
    except (CatalogError, UsageError, CycleSyntaxError, IndexCapExceeded, GraphBuildError,
            FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
