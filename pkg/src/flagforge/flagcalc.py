"""Flag orbits of complement designs, feasibility, pair classes and flag graphs.

A flag (sigma, L) of the complement design is stored with its co-line L, the
line of the underlying linear space that its block omits.  For a flag orbit
Omega and a G-orbit Psi of compatible flag pairs, the flag graph has vertex
set Omega and joins (sigma, L), (tau, N) when the pair lies in Psi.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .catalog import CatalogEntry
from .designs import Flag, extended_group
from .perm import (ActionKind, GeneratedGroup, Permutation, orbit, orbit_partition,
                   orbit_with_transversal, pointwise_stabilizer, setwise_stabilizer_2,
                   transporter)

FLAGS = ActionKind.ON_FLAGS
LINES = ActionKind.ON_LINES


class ContractError(ValueError):
    """An operation was called outside its precondition."""


@dataclass
class FlagOrbit:
    representative: Flag
    size: int
    per_point_count: int
    line_orbit: list = field(repr=False)
    feasible: Optional[bool] = None
    reason: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)


@dataclass
class PairClass:
    rep: tuple[Flag, Flag]
    class_size: int           # second flags paired with the fixed first flag
    orbit_size: int           # |Psi|
    ell: int
    self_paired: Optional[bool] = None
    witness: Optional[Permutation] = field(default=None, repr=False)
    members: list = field(default_factory=list, repr=False)


@dataclass
class FlagGraph:
    """Vertices are the flags of Omega in sorted order; ``adj`` holds sorted
    neighbour indices row by row, -1 marking a removed slot."""

    vertices: list
    adj: np.ndarray
    sigma: np.ndarray
    line: np.ndarray

    @property
    def order(self) -> int:
        return len(self.vertices)

    def edge_count(self) -> int:
        return int((self.adj >= 0).sum()) // 2

    def edges(self):
        rows, cols = np.nonzero(self.adj >= 0)
        nbr = self.adj[rows, cols]
        keep = rows < nbr
        return np.stack([rows[keep], nbr[keep]], axis=1)

    def remove_edge(self, i: int, j: int) -> None:
        for a, b in ((i, j), (j, i)):
            row = self.adj[a]
            pos = np.nonzero(row == b)[0]
            if len(pos) == 0:
                raise ValueError("no such edge")
            row[pos[0]] = -1
            row.sort()


@dataclass
class FlagGraphReport:
    entry: str
    class_index: int
    representative: tuple
    order: int
    per_point: int
    cross_block_vertex_count: int
    ell: int
    valency: int
    self_paired: bool
    arc_count: int
    predicted_order: int
    predicted_valency: int
    v: int
    r: int
    b: int
    k: int
    edges: Optional[int] = None
    quotient_complete: Optional[bool] = None
    blocks_independent: Optional[bool] = None
    dual_design_repeated_blocks: Optional[bool] = None
    checks: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# stabilizers of flags


def _entry_cache(entry: CatalogEntry) -> dict:
    return entry.info.setdefault("_flagcalc", {})


def point_stabilizer(entry: CatalogEntry, sigma: int) -> GeneratedGroup:
    cache = _entry_cache(entry).setdefault("point_stab", {})
    if sigma not in cache:
        cache[sigma] = pointwise_stabilizer(entry.group, [sigma])
    return cache[sigma]


def line_stabilizer_with_point(entry: CatalogEntry, sigma: int, line: tuple) -> GeneratedGroup:
    """G_{sigma, L} for a point sigma and a line L of the design."""
    G, D = entry.group, entry.design
    if len(line) == 2:
        return pointwise_stabilizer(setwise_stabilizer_2(G, line), [sigma])
    cache = _entry_cache(entry)
    if "extended" not in cache:
        cache["extended"] = extended_group(D, G)
    E = cache["extended"]
    u = D.point_count
    S = pointwise_stabilizer(E, [sigma, u + D.line_index[line]])
    gens = [Permutation._raw(g.images[:u]) for g in S.generators]
    return GeneratedGroup(gens, u, order=S.order())


def flag_stabilizer(entry: CatalogEntry, flag: Flag) -> GeneratedGroup:
    return line_stabilizer_with_point(entry, flag.sigma, flag.coblock)


# ---------------------------------------------------------------------------
# flag orbits


def flag_orbits(entry: CatalogEntry) -> list[FlagOrbit]:
    """G-orbits on the flags of the complement design.

    G is point-transitive, so each orbit meets the flags at point 0 in one
    orbit of G_0 on the lines avoiding 0.
    """
    cache = _entry_cache(entry)
    if "orbits" in cache:
        return cache["orbits"]
    D = entry.design
    u = D.point_count
    G0 = point_stabilizer(entry, 0)
    avoiding = [l for l in D.lines if 0 not in l]
    label = orbit_partition(G0, avoiding, LINES)
    groups: dict[int, list] = {}
    for l in avoiding:
        groups.setdefault(label[l], []).append(l)
    out = []
    for idx in sorted(groups):
        lines = sorted(groups[idx])
        out.append(FlagOrbit(Flag(0, lines[0]), u * len(lines), len(lines), lines))
    out.sort(key=lambda o: o.representative)
    cache["orbits"] = out
    return out


def orbit_flags(entry: CatalogEntry, orb: FlagOrbit) -> list[Flag]:
    """The flags of Omega in sorted order."""
    if "flags" not in orb._cache:
        G = entry.group
        _, trans = orbit_with_transversal(G, 0)
        flags = []
        for tau, g in trans.items():
            im = g.images
            for l in orb.line_orbit:
                flags.append(Flag(tau, tuple(sorted(im[a] for a in l))))
        flags.sort()
        if len(flags) != orb.size or len(set(flags)) != orb.size:
            raise AssertionError("flag orbit enumeration inconsistent")
        orb._cache["flags"] = flags
        orb._cache["index"] = {f: i for i, f in enumerate(flags)}
    return orb._cache["flags"]


def flag_index(entry: CatalogEntry, orb: FlagOrbit) -> dict:
    orbit_flags(entry, orb)
    return orb._cache["index"]


def check_feasible(entry: CatalogEntry, orb: FlagOrbit) -> tuple[bool, str]:
    """Both feasibility conditions; the message names the failed one."""
    if orb.feasible is not None:
        return orb.feasible, orb.reason
    sigma, L = orb.representative
    u = entry.design.point_count
    if orb.per_point_count < 2:
        ok, why = False, f"(a) fails: |Omega(sigma)| = {orb.per_point_count} < 2"
    else:
        H = flag_stabilizer(entry, orb.representative)
        rest = [x for x in range(u) if x != sigma and x not in L]
        reach = len(orbit(H, rest[0])) if rest else 0
        if rest and reach == len(rest):
            ok, why = True, (f"feasible: |Omega(sigma)| = {orb.per_point_count}, "
                             f"G_(sigma,L) transitive on {len(rest)} points")
        else:
            ok, why = False, (f"(b) fails: G_(sigma,L) has an orbit of length {reach} "
                              f"on the {len(rest)} points off L and sigma")
    orb.feasible, orb.reason = ok, why
    return ok, why


def feasible_orbits(entry: CatalogEntry) -> list[FlagOrbit]:
    return [o for o in flag_orbits(entry) if check_feasible(entry, o)[0]]


def prefilter(entry: CatalogEntry) -> dict:
    """Arithmetic necessary conditions of the two cases for a line L.

    Advisory only: ``line_pair_divides`` tests |L|(|L|-1) | |P|-1 and
    ``complement_pairs_divide`` tests (|P|-|L|)(|P|-|L|-1) | |G_L|.
    """
    D = entry.design
    u = D.point_count
    k = len(D.lines[0])
    if any(len(l) != k for l in D.lines):
        raise ContractError("lines of unequal size")
    g_line = entry.group.order() // len(D.lines)
    return {
        "points": u,
        "line_size": k,
        "line_stabilizer_order": g_line,
        "line_pair_divides": (u - 1) % (k * (k - 1)) == 0,
        "complement_pairs_divide": g_line % ((u - k) * (u - k - 1)) == 0,
    }


# ---------------------------------------------------------------------------
# pair classes


def compatible_second_flags(entry: CatalogEntry, orb: FlagOrbit, F1: Flag) -> list[Flag]:
    sigma, L = F1
    Ls = set(L)
    return [f for f in orbit_flags(entry, orb)
            if f.sigma != sigma and f.sigma not in Ls and sigma not in f.coblock]


def pair_classes(entry: CatalogEntry, orb: FlagOrbit, F1: Optional[Flag] = None) -> list[PairClass]:
    """G-orbits on compatible flag pairs, as G_{F1}-orbits on second flags.

    Sorted by (ell, representative pair).
    """
    if F1 is None and "classes" in orb._cache:
        return orb._cache["classes"]
    ok, why = check_feasible(entry, orb)
    if not ok:
        raise ContractError(f"flag orbit not feasible: {why}")
    F1 = orb.representative if F1 is None else Flag(*F1)
    if F1 not in flag_index(entry, orb):
        raise ContractError("first flag does not lie in the flag orbit")
    u = entry.design.point_count
    H = flag_stabilizer(entry, F1)
    domain = compatible_second_flags(entry, orb, F1)
    label = orbit_partition(H, domain, FLAGS)
    parts: dict[int, list] = {}
    for f in domain:
        parts.setdefault(label[f], []).append(f)
    blocks = u - len(F1.coblock) - 1
    classes = []
    for members in parts.values():
        members.sort()
        rep = members[0]
        ell = sum(1 for f in members if f.sigma == rep.sigma)
        if ell * blocks != len(members):
            raise AssertionError("class does not spread evenly over the blocks")
        classes.append(PairClass((F1, rep), len(members), orb.size * len(members), ell,
                                 members=members))
    classes.sort(key=lambda c: (c.ell, c.rep))
    for c in classes:
        is_self_paired(entry, orb, c)
    if F1 == orb.representative:
        orb._cache["classes"] = classes
    return classes


def flag_transporter(entry: CatalogEntry, src: Flag, dst: Flag) -> Optional[Permutation]:
    """Some g in G with src^g = dst: move the point, then the line inside G_dst.sigma."""
    G = entry.group
    t = transporter(G, src.sigma, dst.sigma)
    if t is None:
        return None
    moved = Flag(dst.sigma, tuple(sorted(t.images[a] for a in src.coblock)))
    k = transporter(point_stabilizer(entry, dst.sigma), moved.coblock, dst.coblock, LINES)
    if k is None:
        return None
    return t * k


def is_self_paired(entry: CatalogEntry, orb: FlagOrbit, cls: PairClass) -> bool:
    """Decide whether the reversed pair lies in the same orbit; store a swapping witness."""
    if cls.self_paired is not None:
        return cls.self_paired
    F1, F2 = cls.rep
    h = flag_transporter(entry, F2, F1)
    back = FLAGS.apply(F1, h)
    members = set(cls.members)
    if back not in members:
        cls.self_paired = False
        return False
    H = flag_stabilizer(entry, F1)
    k = transporter(H, F2, back, FLAGS)
    w = h * k.inverse()
    if FLAGS.apply(F1, w) != F2 or FLAGS.apply(F2, w) != F1:
        raise AssertionError("swap witness is wrong")
    cls.self_paired = True
    cls.witness = w
    return True


# ---------------------------------------------------------------------------
# graphs


def orbit_counts(entry: CatalogEntry, orb: FlagOrbit, cls: PairClass) -> dict:
    """Order, valency and cross-block count from stabilizer orbits alone."""
    G = entry.group
    u = entry.design.point_count
    (sigma, L), (tau, N) = cls.rep
    G_sigma = point_stabilizer(entry, sigma)
    line_orbit_at_sigma = len(orbit(G_sigma, L, LINES))
    G_st = pointwise_stabilizer(G_sigma, [tau])
    cross = len(orbit(G_st, L, LINES))
    H = flag_stabilizer(entry, Flag(sigma, L))
    J = pointwise_stabilizer(H, [tau])
    ell = len(orbit(J, N, LINES))
    return {
        "order": u * line_orbit_at_sigma,
        "valency": (u - len(L) - 1) * ell,
        "ell": ell,
        "cross_block": cross,
    }


def stats_report(entry: CatalogEntry, orb: FlagOrbit, cls: PairClass, index: int) -> FlagGraphReport:
    u = entry.design.point_count
    lem = orbit_counts(entry, orb, cls)
    L = cls.rep[0].coblock
    valency = cls.class_size
    if lem["ell"] != cls.ell or lem["valency"] != valency or lem["order"] != orb.size:
        raise AssertionError("stabilizer counts disagree with the class enumeration")
    r = u - len(L) - 1
    return FlagGraphReport(
        entry=entry.name, class_index=index,
        representative=cls.rep, order=orb.size, per_point=orb.per_point_count,
        cross_block_vertex_count=lem["cross_block"], ell=cls.ell, valency=valency,
        self_paired=bool(cls.self_paired), arc_count=orb.size * valency,
        predicted_order=lem["order"], predicted_valency=lem["valency"],
        v=orb.per_point_count, r=r, b=u - 1, k=lem["cross_block"],
    )


def _arrays(entry: CatalogEntry, orb: FlagOrbit):
    """Lookup tables: line through two points, and the vertex of (tau, line index)."""
    if "arrays" in orb._cache:
        return orb._cache["arrays"]
    D = entry.design
    u = D.point_count
    lop = np.array(D.line_of_pair, dtype=np.int32)
    flags = orbit_flags(entry, orb)
    fidx = np.full((u, len(D.lines)), -1, dtype=np.int32)
    sig = np.empty(len(flags), dtype=np.int32)
    lin = np.empty(len(flags), dtype=np.int32)
    for i, (s, l) in enumerate(flags):
        li = D.line_index[l]
        fidx[s, li] = i
        sig[i] = s
        lin[i] = li
    orb._cache["arrays"] = (lop, fidx, sig, lin)
    return orb._cache["arrays"]


def vertex_permutation(entry: CatalogEntry, orb: FlagOrbit, g: Permutation) -> np.ndarray:
    """The permutation of vertex indices induced by a point permutation."""
    lop, fidx, sig, lin = _arrays(entry, orb)
    D = entry.design
    gi = np.asarray(g.images, dtype=np.int32)
    first = np.array([l[0] for l in D.lines], dtype=np.int32)
    second = np.array([l[1] for l in D.lines], dtype=np.int32)
    line_map = lop[gi[first], gi[second]]
    return fidx[gi[sig], line_map[lin]]


def build_graph(entry: CatalogEntry, orb: FlagOrbit, cls: PairClass, index: int = 0,
                mode: str = "stats"):
    """Report for one self-paired class; in full mode also the graph and its certificate."""
    if not cls.self_paired:
        raise ContractError("flag graphs need a self-paired class")
    report = stats_report(entry, orb, cls, index)
    if mode == "stats":
        return report, None
    if mode != "full":
        raise ContractError(f"unknown mode {mode!r}")
    graph = materialize(entry, orb, cls)
    cert = verify_symmetric(entry, orb, graph, cls)
    report.edges = graph.edge_count()
    report.quotient_complete = cert["quotient_complete"]
    report.blocks_independent = cert["blocks_independent"]
    report.dual_design_repeated_blocks = not cert["dual_blocks_distinct"]
    report.checks = cert
    return report, graph


def materialize(entry: CatalogEntry, orb: FlagOrbit, cls: PairClass) -> FlagGraph:
    """Neighbours of F1^g are the class members translated by g."""
    lop, fidx, sig, lin = _arrays(entry, orb)
    flags = orbit_flags(entry, orb)
    G = entry.group
    F1 = cls.rep[0]
    _, trans = orbit_with_transversal(G, F1, FLAGS)
    T = np.array([f.sigma for f in cls.members], dtype=np.int32)
    A = np.array([f.coblock[0] for f in cls.members], dtype=np.int32)
    B = np.array([f.coblock[1] for f in cls.members], dtype=np.int32)
    n, val = len(flags), len(cls.members)
    adj = np.empty((n, val), dtype=np.int32)
    for i, f in enumerate(flags):
        gi = np.asarray(trans[f].images, dtype=np.int32)
        row = fidx[gi[T], lop[gi[A], gi[B]]]
        row.sort()
        adj[i] = row
    if (adj < 0).any():
        raise AssertionError("translated neighbour left the flag orbit")
    return FlagGraph(flags, adj, sig.copy(), lin.copy())


def _arc_orbit_size(perms: list[np.ndarray], adj: np.ndarray, start: tuple[int, int]) -> int:
    """Size of the orbit of one arc under the vertex permutations (vectorized BFS)."""
    n = adj.shape[0]
    seen = np.zeros(n * n, dtype=bool)
    key = start[0] * n + start[1]
    seen[key] = True
    frontier = np.array([key], dtype=np.int64)
    total = 1
    while len(frontier):
        a, b = np.divmod(frontier, n)
        nxt = []
        for p in perms:
            k = p[a].astype(np.int64) * n + p[b]
            k = np.unique(k[~seen[k]])
            seen[k] = True
            nxt.append(k)
        frontier = np.unique(np.concatenate(nxt)) if nxt else np.empty(0, np.int64)
        total += len(frontier)
    return total


def verify_symmetric(entry: CatalogEntry, orb: FlagOrbit, graph: FlagGraph,
                     cls: Optional[PairClass] = None, arc_bfs: bool = True) -> dict:
    """The six structural checks; each key maps to a boolean."""
    D = entry.design
    u = D.point_count
    adj = graph.adj
    n = graph.order
    sig, lin = graph.sigma, graph.line
    present = adj >= 0
    cert: dict = {}

    perms = [vertex_permutation(entry, orb, g) for g in entry.group.generators]
    ext = [np.append(p, -1).astype(np.int32) for p in perms]
    ok = True
    for p, pe in zip(perms, ext):
        # the neighbours of i^g must be the images of the neighbours of i
        moved = np.sort(pe[adj % (n + 1)], axis=1)
        if not np.array_equal(moved, adj[p]):
            ok = False
            break
    cert["generators_preserve_adjacency"] = ok

    arcs = int(present.sum())
    if arc_bfs:
        i0 = 0
        j0 = int(adj[0][present[0]][0]) if present[0].any() else None
        size = _arc_orbit_size(perms, adj, (i0, j0)) if j0 is not None else 0
        cert["arc_orbit_size"] = size
        cert["arc_transitive"] = ok and size == arcs
    else:
        cert["arc_orbit_size"] = None
        cert["arc_transitive"] = ok and cls is not None and orb.size * cls.class_size == arcs
    cert["arcs"] = arcs

    nsig = np.where(present, sig[np.where(present, adj, 0)], -1)
    cert["blocks_independent"] = bool(not ((nsig == sig[:, None]) & present).any())

    pairs = np.unique(sig[:, None].repeat(adj.shape[1], 1)[present] * u + nsig[present])
    cert["quotient_complete"] = len(pairs) == u * (u - 1)

    inc = np.zeros((len(D.lines), u), dtype=bool)
    for i, l in enumerate(D.lines):
        inc[i, list(l)] = True
    nb = np.zeros((n, u), dtype=bool)
    rows = np.nonzero(present)[0]
    nb[rows, nsig[present]] = True
    expected = ~inc[lin]
    expected[np.arange(n), sig] = False
    cert["block_neighbourhoods"] = bool(np.array_equal(nb, expected))

    distinct = True
    for s in range(u):
        blk = nb[sig == s]
        if len(np.unique(blk, axis=0)) != len(blk):
            distinct = False
            break
    cert["dual_blocks_distinct"] = distinct

    cert["passed"] = all(cert[k] for k in ("generators_preserve_adjacency", "arc_transitive",
                                           "blocks_independent", "quotient_complete",
                                           "block_neighbourhoods", "dual_blocks_distinct"))
    return cert


def naive_graph(entry: CatalogEntry, orb: FlagOrbit, cls: PairClass, limit: int = 2000) -> set:
    """Edge set from every group element applied to the representative pair."""
    G = entry.group
    if G.order() > limit:
        raise ContractError("group too large for the naive construction")
    index = flag_index(entry, orb)
    F1, F2 = cls.rep
    edges = set()
    for g in G.elements(limit):
        a = index[FLAGS.apply(F1, g)]
        b = index[FLAGS.apply(F2, g)]
        edges.add((min(a, b), max(a, b)))
    return edges


def cross_block_components(graph: FlagGraph, s: int, t: int) -> list[tuple[int, int]]:
    """(size, count) of the connected pieces of the bipartite graph between two blocks."""
    import networkx as nx
    present = graph.adj >= 0
    H = nx.Graph()
    for i in np.nonzero(graph.sigma == s)[0]:
        for j in graph.adj[i][present[i]]:
            if graph.sigma[j] == t:
                H.add_edge(int(i), int(j))
    sizes: dict[tuple, int] = {}
    for comp in nx.connected_components(H):
        sub = H.subgraph(comp)
        key = (sub.number_of_nodes(), sub.number_of_edges())
        sizes[key] = sizes.get(key, 0) + 1
    return sorted((k, v) for k, v in sizes.items())
