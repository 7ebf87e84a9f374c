"""Point-line incidence structures: complete graphs viewed as improper linear
spaces, projective spaces PG(d-1, q), and flags of complement designs.

A block of the complement design is never materialized; it is represented by
the line it omits (its co-line).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, NamedTuple

from .field import FieldTable, field_of_order
from .perm import DomainError, GeneratedGroup, Permutation


class Flag(NamedTuple):
    """The flag (sigma, P minus coblock) of the complement design."""

    sigma: int
    coblock: tuple[int, ...]


@dataclass(frozen=True)
class IncidenceStructure:
    point_count: int
    lines: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        canon = tuple(sorted(tuple(sorted(set(l))) for l in self.lines))
        object.__setattr__(self, "lines", canon)
        if len(set(canon)) != len(canon):
            raise DomainError("repeated line")
        for l in canon:
            if len(l) < 2:
                raise DomainError("a line needs at least two points")
            if l[0] < 0 or l[-1] >= self.point_count:
                raise DomainError(f"line {l} outside the point set")

    @cached_property
    def line_index(self) -> dict[tuple[int, ...], int]:
        return {l: i for i, l in enumerate(self.lines)}

    def export(self) -> str:
        """``points u`` header then one 1-based line per row."""
        rows = [f"points {self.point_count}"]
        rows.extend(" ".join(str(x + 1) for x in l) for l in self.lines)
        return "\n".join(rows) + "\n"

    @classmethod
    def parse(cls, text: str) -> IncidenceStructure:
        rows = [r.split("#", 1)[0].split() for r in text.splitlines()]
        rows = [r for r in rows if r]
        if not rows or rows[0][0] != "points":
            raise DomainError("design text lacks a 'points u' header")
        u = int(rows[0][1])
        return cls(u, tuple(tuple(int(x) - 1 for x in r) for r in rows[1:]))


class LinearSpace(IncidenceStructure):
    """Every pair of distinct points on exactly one line."""

    def __post_init__(self):
        super().__post_init__()
        if not is_linear_space(self):
            raise DomainError("not a linear space")

    @property
    def proper(self) -> bool:
        return all(len(l) >= 3 for l in self.lines)

    @cached_property
    def line_of_pair(self) -> list[list[int]]:
        """line_of_pair[a][b] = index of the line through a and b (-1 on the diagonal)."""
        u = self.point_count
        table = [[-1] * u for _ in range(u)]
        for i, l in enumerate(self.lines):
            for a, b in itertools.permutations(l, 2):
                table[a][b] = i
        return table

    def line_through(self, a: int, b: int) -> tuple[int, ...]:
        return self.lines[self.line_of_pair[a][b]]

    @property
    def name(self) -> str:
        return getattr(self, "_name", f"linear space on {self.point_count} points")


def _named(space: LinearSpace, name: str) -> LinearSpace:
    object.__setattr__(space, "_name", name)
    return space


def is_linear_space(D: IncidenceStructure) -> bool:
    u = D.point_count
    cover = [[0] * u for _ in range(u)]
    for l in D.lines:
        if len(l) < 2:
            return False
        for a, b in itertools.combinations(l, 2):
            cover[a][b] += 1
    return all(cover[a][b] == 1 for a in range(u) for b in range(a + 1, u))


def complete_space(u: int) -> LinearSpace:
    """K_u as the improper linear space whose lines are all 2-subsets."""
    if u < 4:
        raise DomainError("need at least four points")
    return _named(LinearSpace(u, tuple(itertools.combinations(range(u), 2))), f"K{u}")


def projective_points(F: FieldTable, d: int) -> list[tuple[int, ...]]:
    """Normalized vectors of F_q^d (first nonzero coordinate 1), lexicographic."""
    pts = []
    for v in itertools.product(range(F.q), repeat=d):
        nz = [x for x in v if x]
        if nz and nz[0] == 1:
            pts.append(v)
    return pts


def normalize(F: FieldTable, v: Iterable[int]) -> tuple[int, ...]:
    v = tuple(v)
    for x in v:
        if x:
            inv = F.inverse(x)
            return tuple(F.mul(inv, y) for y in v)
    raise DomainError("zero vector has no projective point")


def projective_space(d: int, q: int) -> LinearSpace:
    """PG(d-1, q) for d in {3, 4}: points and lines of F_q^d."""
    if d not in (3, 4):
        raise DomainError("only PG(2,q) and PG(3,q) are supported")
    F = field_of_order(q)
    if q > 16:
        raise DomainError("field too large for the desk range")
    pts = projective_points(F, d)
    index = {v: i for i, v in enumerate(pts)}
    lines = set()
    for i, a in enumerate(pts):
        for b in pts[i + 1:]:
            span = set()
            for la, lb in itertools.product(range(q), repeat=2):
                if la == 0 and lb == 0:
                    continue
                w = tuple(F.add(F.mul(la, x), F.mul(lb, y)) for x, y in zip(a, b))
                span.add(index[normalize(F, w)])
            lines.add(tuple(sorted(span)))
    return _named(LinearSpace(len(pts), tuple(lines)), f"PG({d - 1},{q})")


def complement_flags(D: IncidenceStructure) -> list[Flag]:
    """All flags of the complement design, in sorted order."""
    out = []
    for l in D.lines:
        members = set(l)
        out.extend(Flag(s, l) for s in range(D.point_count) if s not in members)
    out.sort()
    return out


def extended_domain(D: IncidenceStructure) -> list:
    """Points 0..u-1 followed by the line objects."""
    return list(range(D.point_count)) + list(D.lines)


def line_permutation(D: IncidenceStructure, g: Permutation) -> Permutation:
    """The permutation of line indices induced by a point permutation."""
    idx = D.line_index
    im = g.images
    try:
        return Permutation._raw(tuple(idx[tuple(sorted(im[a] for a in l))] for l in D.lines))
    except KeyError:
        raise DomainError("permutation does not preserve the line set") from None


def extended_group(D: IncidenceStructure, G: GeneratedGroup) -> GeneratedGroup:
    """G acting on points and lines at once: degree u + b, line i is point u + i.

    Line stabilizers become point stabilizers of this group.
    """
    u = D.point_count
    gens = []
    for g in G.generators:
        lp = line_permutation(D, g)
        gens.append(Permutation._raw(g.images + tuple(u + x for x in lp.images)))
    return GeneratedGroup(gens, u + len(D.lines), order=G.order())


def preserves_lines(D: IncidenceStructure, G: GeneratedGroup) -> bool:
    try:
        for g in G.generators:
            line_permutation(D, g)
    except DomainError:
        return False
    return True
