"""End-to-end analysis of one catalog entry."""

from __future__ import annotations

import dataclasses
import time
from dataclasses import dataclass, field

from . import closedform, flagcalc
from .catalog import CatalogEntry, get_entry
from .export import SCHEMA, flag_label


@dataclass
class Analysis:
    entry: CatalogEntry
    report: dict
    graphs: dict = field(default_factory=dict)   # (orbit index, class index) -> FlagGraph

    @property
    def ok(self) -> bool:
        return self.report["status"] == "ok"


def _class_record(i: int, oi: int, c: flagcalc.PairClass) -> dict:
    return {
        "orbit_index": oi,
        "index": i,
        "representative": [flag_label(c.rep[0]), flag_label(c.rep[1])],
        "ell": c.ell,
        "class_size": c.class_size,
        "orbit_size": c.orbit_size,
        "self_paired": bool(c.self_paired),
        "witness": c.witness.to_cycle_string() if c.witness is not None else None,
    }


def _graph_record(oi: int, rep: flagcalc.FlagGraphReport) -> dict:
    d = dataclasses.asdict(rep)
    d["orbit_index"] = oi
    d["representative"] = [flag_label(rep.representative[0]), flag_label(rep.representative[1])]
    return d


def analyze(name: str, mode: str = "stats", keep_graphs: bool = False) -> Analysis:
    if mode not in ("stats", "full"):
        raise ValueError(f"unknown mode {mode!r}")
    entry = get_entry(name)
    D = entry.design
    rep: dict = {
        "schema": SCHEMA,
        "entry": entry.name,
        "mode": mode,
        "degree": entry.degree,
        "group_order": entry.group.order(),
        "provenance": entry.provenance,
        "design": {"name": D.name, "points": D.point_count, "lines": len(D.lines),
                   "line_size": len(D.lines[0]), "proper": D.proper},
        "prefilter": flagcalc.prefilter(entry),
    }
    if "lambda" in entry.info:
        lam = entry.info["lambda"]
        rep["standard_parameters"] = {"t": lam.t, "e": lam.e, "s": lam.s}
        rep["field"] = entry.info["field"]
    orbits = flagcalc.flag_orbits(entry)
    rep["flag_orbits"] = []
    classes, graphs = [], []
    kept = {}
    checks_ok = True
    for oi, orb in enumerate(orbits):
        ok, why = flagcalc.check_feasible(entry, orb)
        rep["flag_orbits"].append({
            "index": oi, "representative": flag_label(orb.representative),
            "size": orb.size, "per_point_count": orb.per_point_count,
            "feasible": ok, "reason": why,
        })
        if not ok:
            continue
        cls = flagcalc.pair_classes(entry, orb)
        for i, c in enumerate(cls):
            classes.append(_class_record(i, oi, c))
            if not c.self_paired:
                continue
            g_rep, graph = flagcalc.build_graph(entry, orb, c, i, mode)
            if graph is not None:
                checks_ok = checks_ok and g_rep.checks["passed"]
                checks_ok = checks_ok and g_rep.edges * 2 == c.orbit_size
                if keep_graphs:
                    kept[(oi, i)] = graph
            graphs.append(_graph_record(oi, g_rep))
    rep["feasible"] = any(o["feasible"] for o in rep["flag_orbits"])
    rep["classes"] = classes
    rep["graphs"] = graphs
    exp = closedform.find_expectation(entry.name)
    status = "ok" if checks_ok else "check-failed"
    if exp is not None:
        sp = [flagcalc.FlagGraphReport(**{k: v for k, v in g.items() if k != "orbit_index"})
              for g in graphs]
        diff = closedform.compare(exp, sp, D.point_count)
        rep["expectation"] = {"row": exp.row, "cite": exp.cite, **diff}
        if diff["failures"] and status == "ok":
            status = "mismatch"
    else:
        rep["expectation"] = None
    if "lambda" in entry.info and rep["feasible"]:
        cc = closedform.psl3_cross_check(entry)
        rep["closed_form"] = {k: cc[k] for k in ("tes", "lines_checked", "mismatches",
                                                 "ell_multiset", "predicted_multiset",
                                                 "order", "cross_block", "ok")}
        if not cc["ok"] and status == "ok":
            status = "mismatch"
    rep["status"] = status
    rep["generated_at"] = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    return Analysis(entry, rep, kept)
