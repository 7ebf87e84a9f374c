"""Command-line front end: ``flagforge catalog | analyze | verify-table | export``."""

from __future__ import annotations

import argparse
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import closedform
from .catalog import CatalogError, entry_names, get_entry, read_manifest
from .export import ExportFormatError, edge_list, graph6, report_json, vertex_table
from .pipeline import analyze

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2

# stats-only rows in the fast scope
HEAVY = ("M23", "M24")


def cmd_catalog(args) -> int:
    rows = read_manifest()
    print(f"{'name':<16}{'degree':>7}{'order':>14}  {'design':<14}provenance")
    for name in rows:
        e = get_entry(name)
        print(f"{name:<16}{e.degree:>7}{e.group.order():>14}  {e.design.name:<14}{e.provenance}")
    print(f"{len(rows)} entries")
    return EXIT_OK


def _summary(rep: dict) -> str:
    if not rep["feasible"]:
        return "no feasible flag orbit"
    sp = [g for g in rep["graphs"]]
    vals = ",".join(str(g["valency"]) for g in sp)
    return (f"{len(rep['classes'])} classes, {len(sp)} self-paired; "
            f"order {sp[0]['order'] if sp else '-'}; valencies {vals or '-'}")


def cmd_analyze(args) -> int:
    a = analyze(args.name, args.mode)
    text = report_json(a.report)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    print(f"{args.name}: {a.report['status']} ({_summary(a.report)})", file=sys.stderr)
    return EXIT_OK if a.ok else EXIT_MISMATCH


def table_rows() -> list[str]:
    names = list(closedform.load_expectations())
    planes = [n for n, r in read_manifest().items() if r.source == "plane"]
    return names + [n for n in planes if n not in names]


def _verify_one(job: tuple[str, str]) -> dict:
    name, mode = job
    t0 = time.perf_counter()
    a = analyze(name, mode)
    rep = a.report
    msgs = []
    if rep.get("expectation"):
        msgs += rep["expectation"]["failures"]
    if rep.get("closed_form") and not rep["closed_form"]["ok"]:
        msgs.append(f"{name}: closed-form cross-check failed {rep['closed_form']['mismatches']}")
    if rep["status"] == "check-failed":
        msgs.append(f"{name}: structural certificate failed")
    warns = rep["expectation"]["warnings"] if rep.get("expectation") else []
    return {"name": name, "mode": mode, "status": rep["status"], "messages": msgs,
            "warnings": warns, "summary": _summary(rep),
            "seconds": round(time.perf_counter() - t0, 2)}


def cmd_verify_table(args) -> int:
    jobs = []
    for name in table_rows():
        mode = "stats" if (args.scope == "fast" and name in HEAVY) else "full"
        jobs.append((name, mode))
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as pool:
            results = list(pool.map(_verify_one, jobs))
    else:
        results = [_verify_one(j) for j in jobs]
    failed = 0
    for r in results:
        tag = "PASS" if r["status"] == "ok" else "FAIL"
        failed += tag == "FAIL"
        print(f"{tag} {r['name']:<16} [{r['mode']}] {r['summary']} ({r['seconds']}s)")
        for m in r["messages"]:
            print(f"    {m}")
        for w in r["warnings"]:
            print(f"    warning: {w}")
    print(f"{len(results) - failed}/{len(results)} rows pass")
    return EXIT_OK if failed == 0 else EXIT_MISMATCH


def cmd_export(args) -> int:
    a = analyze(args.name, "full", keep_graphs=True)
    key = (args.orbit_index, args.class_index)
    if key not in a.graphs:
        sp = sorted(a.graphs)
        print(f"error: no self-paired class {key}; available (orbit, class): {sp}",
              file=sys.stderr)
        return EXIT_USAGE
    graph = a.graphs[key]
    out = Path(args.out)
    try:
        if args.format == "graph6":
            out.write_bytes(graph6(graph))
        else:
            out.write_text(edge_list(graph))
            Path(str(out) + ".vertices").write_text(vertex_table(graph))
    except ExportFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(f"wrote {out} ({graph.order} vertices, {graph.edge_count()} edges)", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="flagforge", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    sub.add_parser("catalog", help="list catalog entries")

    pa = sub.add_parser("analyze", help="run one entry end to end")
    pa.add_argument("name")
    pa.add_argument("--mode", choices=("stats", "full"), default="stats")
    pa.add_argument("--out", help="write the JSON report here instead of stdout")
    pa.add_argument("--workers", type=int, default=1)

    pv = sub.add_parser("verify-table", help="check every expectation row")
    pv.add_argument("--scope", choices=("fast", "all"), default="fast")
    pv.add_argument("--workers", type=int, default=1, help="parallel entries")

    pe = sub.add_parser("export", help="write one flag graph")
    pe.add_argument("name")
    pe.add_argument("--class-index", type=int, required=True)
    pe.add_argument("--orbit-index", type=int, default=0)
    pe.add_argument("--format", choices=("edge-list", "graph6"), default="edge-list")
    pe.add_argument("--out", required=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    name = getattr(args, "name", None)
    if name is not None and name not in entry_names():
        print(f"error: unknown catalog entry {name!r}", file=sys.stderr)
        return EXIT_USAGE
    if getattr(args, "workers", 1) < 1:
        print("error: --workers must be positive", file=sys.stderr)
        return EXIT_USAGE
    handlers = {"catalog": cmd_catalog, "analyze": cmd_analyze,
                "verify-table": cmd_verify_table, "export": cmd_export}
    try:
        return handlers[args.command](args)
    except CatalogError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_MISMATCH


if __name__ == "__main__":
    sys.exit(main())
