"""Group/design pairs: every 2-transitive action the classification touches.

Entries are listed in ``data/manifest.txt``.  Each line names an entry, the
design it acts on, where its generators come from (a shipped generator file
or a builder function below), the order used as a validation oracle, and a
provenance note.  Entries are built lazily and validated on first use.
"""

from __future__ import annotations

import itertools
import math
import os
import random
import shlex
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Callable

from . import designs
from .designs import LinearSpace, complete_space, projective_points, projective_space
from .field import (FieldTable, SemilinearMap1D, StandardParameters, build_field,
                    field_of_order, standard_form)
from .perm import (ActionKind, DomainError, GeneratedGroup, Permutation, build_chain,
                   is_k_transitive, orbit, pointwise_stabilizer, read_generators,
                   restrict, stabilizer)


class CatalogError(RuntimeError):
    """An entry failed validation or is unknown."""


@dataclass
class CatalogEntry:
    name: str
    group: GeneratedGroup
    design: LinearSpace
    provenance: str
    order_oracle: int
    transitivity: int = 2
    info: dict = field(default_factory=dict)

    @property
    def degree(self) -> int:
        return self.group.degree

    @property
    def expected(self):
        from .closedform import find_expectation
        return find_expectation(self.name)

    def validate(self) -> None:
        G, D = self.group, self.design
        if G.degree != D.point_count:
            raise CatalogError(f"{self.name}: degree {G.degree} != {D.point_count} points")
        if G.order() != self.order_oracle:
            raise CatalogError(f"{self.name}: order {G.order()} != oracle {self.order_oracle}")
        if not is_k_transitive(G, self.transitivity):
            raise CatalogError(f"{self.name}: not {self.transitivity}-transitive")
        if self.transitivity < 2 and not is_k_transitive(G, 2):
            raise CatalogError(f"{self.name}: not 2-transitive")
        if not designs.preserves_lines(D, G):
            raise CatalogError(f"{self.name}: group does not preserve the lines of the design")


# ---------------------------------------------------------------------------
# data files


def data_dir() -> Path:
    env = os.environ.get("FLAGFORGE_DATA")
    if env:
        return Path(env)
    return Path(str(resources.files("flagforge").joinpath("data")))


def read_data(name: str) -> str:
    return (data_dir() / name).read_text()


@dataclass(frozen=True)
class ManifestRow:
    name: str
    design: str
    source: str
    order: int
    transitivity: int
    provenance: str
    params: dict


def read_manifest() -> dict[str, ManifestRow]:
    rows = {}
    for raw in read_data("manifest.txt").splitlines():
        tokens = shlex.split(raw, comments=True)
        if not tokens:
            continue
        name, kv = tokens[0], dict(t.split("=", 1) for t in tokens[1:])
        try:
            row = ManifestRow(
                name=name,
                design=kv.pop("design"),
                source=kv.pop("source"),
                order=int(kv.pop("order")),
                transitivity=int(kv.pop("k", "2")),
                provenance=kv.pop("provenance", ""),
                params=kv,
            )
        except KeyError as exc:
            raise CatalogError(f"manifest row {name} lacks {exc}") from None
        if name in rows:
            raise CatalogError(f"duplicate manifest entry {name}")
        rows[name] = row
    return rows


def entry_names() -> list[str]:
    return list(read_manifest())


def build_design(spec: str) -> LinearSpace:
    kind, *args = spec.split(":")
    if kind == "complete":
        return complete_space(int(args[0]))
    if kind == "pg":
        return projective_space(int(args[0]), int(args[1]))
    raise CatalogError(f"unknown design constructor {spec!r}")


# ---------------------------------------------------------------------------
# semilinear actions


def _vec_mat(F: FieldTable, v, A) -> tuple[int, ...]:
    d = len(v)
    out = []
    for k in range(d):
        acc = 0
        for i in range(d):
            if v[i] and A[i][k]:
                acc = F.add(acc, F.mul(v[i], A[i][k]))
        out.append(acc)
    return tuple(out)


def projective_map(F: FieldTable, pts, index, A, j: int = 0) -> Permutation:
    """<x> -> <x^(zeta^j) A> on normalized projective points."""
    im = []
    for v in pts:
        w = _vec_mat(F, tuple(F.frobenius(x, j) for x in v), A)
        im.append(index[designs.normalize(F, w)])
    return Permutation(im)


def affine_map(F: FieldTable, pts, index, A=None, j: int = 0, b=None) -> Permutation:
    """x -> x^(zeta^j) A + b on the vectors of F_q^n."""
    im = []
    for v in pts:
        w = tuple(F.frobenius(x, j) for x in v)
        if A is not None:
            w = _vec_mat(F, w, A)
        if b is not None:
            w = tuple(F.add(x, y) for x, y in zip(w, b))
        im.append(index[w])
    return Permutation(im)


def identity_matrix(d: int):
    return [[1 if i == k else 0 for k in range(d)] for i in range(d)]


def elementary(d: int, i: int, k: int, lam: int):
    A = identity_matrix(d)
    A[i][k] = lam
    return A


def diagonal(entries):
    d = len(entries)
    return [[entries[i] if i == k else 0 for k in range(d)] for i in range(d)]


def additive_basis(F: FieldTable) -> list[int]:
    """The elements x^0, ..., x^(n-1): an F_p-basis of F_q."""
    return [F.p ** i for i in range(F.n)]


def sl_generators(F: FieldTable, d: int):
    """Root elements I + lam E_ik over an additive basis; they generate SL(d, q)."""
    return [elementary(d, i, k, lam) for i in range(d) for k in range(d) if i != k
            for lam in additive_basis(F)]


def affine_group(F: FieldTable, d: int, linear: list, frobenius: bool = False) -> GeneratedGroup:
    pts = list(itertools.product(range(F.q), repeat=d))
    index = {v: i for i, v in enumerate(pts)}
    gens = []
    for i in range(d):
        for beta in additive_basis(F):
            b = tuple(beta if k == i else 0 for k in range(d))
            gens.append(affine_map(F, pts, index, b=b))
    for A in linear:
        gens.append(affine_map(F, pts, index, A=A))
    if frobenius and F.n > 1:
        gens.append(affine_map(F, pts, index, j=1))
    return GeneratedGroup(gens, len(pts))


# ---------------------------------------------------------------------------
# builders


def _b_symmetric(row: ManifestRow) -> GeneratedGroup:
    u = int(row.params["u"])
    return GeneratedGroup([Permutation.from_cycles([(0, 1)], u),
                           Permutation.from_cycles([tuple(range(u))], u)], u)


def _b_alternating(row: ManifestRow) -> GeneratedGroup:
    u = int(row.params["u"])
    long = tuple(range(u)) if u % 2 else tuple(range(1, u))
    return GeneratedGroup([Permutation.from_cycles([(0, 1, 2)], u),
                           Permutation.from_cycles([long], u)], u)


def _b_file(row: ManifestRow) -> GeneratedGroup:
    degree, gens = read_generators(read_data(row.params["file"]))
    G = GeneratedGroup(gens, degree)
    if "restrict" in row.params:
        G = restrict(G, range(int(row.params["restrict"])))
    return G


@lru_cache(maxsize=None)
def _m24() -> GeneratedGroup:
    degree, gens = read_generators(read_data("m24.gens"))
    return GeneratedGroup(gens, degree)


def _b_m24_stabilizer(row: ManifestRow) -> GeneratedGroup:
    """Pointwise stabilizer of the last points of M24, on the remaining ones."""
    fixed = int(row.params["fix"])
    M = _m24()
    S = pointwise_stabilizer(M, list(range(24 - fixed, 24)))
    return restrict(S, range(24 - fixed))


def octads(M: GeneratedGroup) -> list[tuple[int, ...]]:
    """The 759 octads: each 5-set extended by the 3-point orbit of its pointwise stabilizer."""
    found = set()
    first = (0, 1, 2, 3, 4)
    H = pointwise_stabilizer(M, list(first))
    extra = [x for x in range(M.degree) if x not in first and len(orbit(H, x)) == 3]
    base = tuple(sorted(first + tuple(extra)))
    for blk in orbit(M, base, ActionKind.ON_LINES):
        found.add(blk)
    return sorted(found)


def golay_words(blocks) -> list[int]:
    """All words of the binary span of the given blocks, as bitmasks."""
    basis: list[int] = []
    for blk in blocks:
        v = sum(1 << x for x in blk)
        for b in basis:
            v = min(v, v ^ b)
        if v:
            basis.append(v)
    words = [0]
    for b in basis:
        words += [w ^ b for w in words]
    return words


@lru_cache(maxsize=None)
def _dodecad_groups():
    M = _m24()
    words = golay_words(octads(M))
    if len(words) != 4096:
        raise CatalogError("octads do not span a [24,12] code")
    dodecads = sorted(tuple(i for i in range(24) if w >> i & 1)
                      for w in words if bin(w).count("1") == 12)
    D = dodecads[0]
    comp = [x for x in range(24) if x not in D]
    S = stabilizer(M, D, ActionKind.ON_LINES)
    M11 = pointwise_stabilizer(S, [comp[0]])
    return D, comp, S, M11


def _b_dodecad(row: ManifestRow) -> GeneratedGroup:
    D, comp, S, M11 = _dodecad_groups()
    which = row.params["part"]
    if which == "m12":
        return restrict(S, D)
    if which == "m11_12":
        return restrict(M11, D)
    if which == "psl2_11":
        H = pointwise_stabilizer(M11, [D[0]])
        return restrict(H, D[1:])
    raise CatalogError(f"unknown dodecad part {which}")


def read_matrices(text: str, d: int) -> list[list[list[int]]]:
    rows = [list(map(int, r.split())) for r in text.splitlines()
            if r.split("#", 1)[0].strip()]
    if len(rows) % d:
        raise CatalogError("matrix file rows not a multiple of the dimension")
    return [rows[i:i + d] for i in range(0, len(rows), d)]


def gl42_group(mats) -> GeneratedGroup:
    """Matrices of GL(4,2) acting on the 15 points of PG(3,2)."""
    F = build_field(2, 1)
    pts = projective_points(F, 4)
    index = {v: i for i, v in enumerate(pts)}
    return GeneratedGroup([projective_map(F, pts, index, A) for A in mats], len(pts))


def search_a7_generators(seed: int = 2024, tries: int = 10_000):
    """Random pairs in GL(4,2) until one generates a 2-transitive group of order 2520."""
    rng = random.Random(seed)
    F = build_field(2, 1)
    pts = projective_points(F, 4)
    index = {v: i for i, v in enumerate(pts)}

    def rand_gl():
        while True:
            A = [[rng.randrange(2) for _ in range(4)] for _ in range(4)]
            try:
                projective_map(F, pts, index, A)
                return A
            except (DomainError, KeyError):
                continue

    for _ in range(tries):
        mats = [rand_gl(), rand_gl()]
        G = gl42_group(mats)
        if G.order() == 2520 and is_k_transitive(G, 2):
            return mats
    raise CatalogError("no A7 found")


def _b_matrices(row: ManifestRow) -> GeneratedGroup:
    return gl42_group(read_matrices(read_data(row.params["file"]), 4))


def _b_gl42(row: ManifestRow) -> GeneratedGroup:
    F = build_field(2, 1)
    return gl42_group(sl_generators(F, 4))


def _b_projective_line(row: ManifestRow) -> GeneratedGroup:
    """PGammaL(2,q) on the q+1 points of PG(1,q)."""
    F = field_of_order(int(row.params["q"]))
    pts = projective_points(F, 2)
    index = {v: i for i, v in enumerate(pts)}
    mats = [
        [[1, 1], [0, 1]],            # x -> x + 1
        [[F.omega, 0], [0, 1]],      # scaling
        [[0, 1], [1, 0]],            # x -> 1/x
    ]
    gens = [projective_map(F, pts, index, A) for A in mats]
    if row.params.get("level", "gammal") == "gammal" and F.n > 1:
        gens.append(projective_map(F, pts, index, identity_matrix(2), 1))
    return GeneratedGroup(gens, len(pts))


def plane_level_generators(F: FieldTable, level: str, tes: StandardParameters | None = None):
    """(matrix, frobenius power) generators of PSL(3,q) extended to the given level."""
    cyc = [[0, 1, 0], [0, 0, 1], [1, 0, 0]]
    gens = [(elementary(3, 0, 1, lam), 0) for lam in additive_basis(F)] + [(cyc, 0)]
    if level in ("pgl", "pgammal"):
        gens.append((diagonal([1, F.omega, 1]), 0))
    if level == "pgammal":
        gens.append((identity_matrix(3), 1))
    if level == "custom":
        tes.check(F.p, F.n)
        gens.append((diagonal([1, F.omega_power(tes.t), 1]), 0))
        gens.append((diagonal([1, F.omega_power(tes.e), 1]), tes.s % F.n))
    return gens


def plane_group(F: FieldTable, level: str, tes=None) -> GeneratedGroup:
    pts = projective_points(F, 3)
    index = {v: i for i, v in enumerate(pts)}
    gens = [projective_map(F, pts, index, A, j) for A, j in plane_level_generators(F, level, tes)]
    return GeneratedGroup(gens, len(pts))


def lambda_parameters(F: FieldTable, G: GeneratedGroup) -> StandardParameters:
    """Standard form of the image of H = {t(D_c, j) in G} in GammaL(1,q)."""
    pts = projective_points(F, 3)
    index = {v: i for i, v in enumerate(pts)}
    members = []
    for c in range(1, F.q):
        for j in range(F.n):
            g = projective_map(F, pts, index, diagonal([1, c, 1]), j)
            if G.contains(g):
                members.append(SemilinearMap1D(F, c, j))
    return standard_form(members)


def _b_plane(row: ManifestRow) -> GeneratedGroup:
    F = field_of_order(int(row.params["q"]))
    level = row.params["level"]
    tes = None
    if level == "custom":
        tes = StandardParameters(*map(int, row.params["tes"].split(",")))
    return plane_group(F, level, tes)


def _affine_linear(row: ManifestRow):
    F = field_of_order(int(row.params["q"]))
    d = int(row.params["d"])
    kind = row.params["linear"]
    if kind == "gl1":
        return F, d, [[[F.omega]]], False
    if kind == "gammal1":
        return F, d, [[[F.omega]]], True
    if kind in ("sl", "gl"):
        mats = sl_generators(F, d)
        if kind == "gl":
            mats.append(diagonal([F.omega] + [1] * (d - 1)))
        return F, d, mats, False
    if kind == "matrix":
        vals = list(map(int, row.params["matrix"].split(",")))
        return F, d, [[vals[i * d:(i + 1) * d] for i in range(d)]], False
    if kind == "sp":
        return F, d, symplectic_transvections(F, d), False
    raise CatalogError(f"unknown linear part {kind}")


def symplectic_form(F: FieldTable, x, y) -> int:
    acc = 0
    for i in range(0, len(x), 2):
        acc = F.add(acc, F.sub(F.mul(x[i], y[i + 1]), F.mul(x[i + 1], y[i])))
    return acc


def symplectic_transvections(F: FieldTable, d: int):
    """Matrices of x -> x + B(x, v) v for v over the normalized nonzero vectors."""
    out = []
    basis = [tuple(1 if k == i else 0 for k in range(d)) for i in range(d)]
    for v in projective_points(F, d):
        rows = []
        for e in basis:
            c = symplectic_form(F, e, v)
            rows.append([F.add(e[k], F.mul(c, v[k])) for k in range(d)])
        out.append(rows)
    return out


def _b_affine(row: ManifestRow) -> GeneratedGroup:
    F, d, mats, frob = _affine_linear(row)
    return affine_group(F, d, mats, frob)


BUILDERS: dict[str, Callable[[ManifestRow], GeneratedGroup]] = {
    "symmetric": _b_symmetric,
    "alternating": _b_alternating,
    "file": _b_file,
    "m24-stabilizer": _b_m24_stabilizer,
    "dodecad": _b_dodecad,
    "gl42-matrices": _b_matrices,
    "gl42": _b_gl42,
    "projective-line": _b_projective_line,
    "plane": _b_plane,
    "affine": _b_affine,
}


@lru_cache(maxsize=None)
def get_entry(name: str) -> CatalogEntry:
    rows = read_manifest()
    if name not in rows:
        raise CatalogError(f"unknown catalog entry {name!r}")
    row = rows[name]
    builder = BUILDERS.get(row.source)
    if builder is None:
        raise CatalogError(f"{name}: unknown source {row.source!r}")
    group = builder(row)
    design = build_design(row.design)
    info = dict(row.params)
    entry = CatalogEntry(name, group, design, row.provenance, row.order,
                         row.transitivity, info)
    entry.validate()
    if row.source == "plane":
        F = field_of_order(int(row.params["q"]))
        entry.info["lambda"] = lambda_parameters(F, group)
        entry.info["field"] = F.describe()
    return entry


def all_entries() -> list[CatalogEntry]:
    return [get_entry(n) for n in entry_names()]
