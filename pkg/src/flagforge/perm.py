"""Permutation groups on {0, ..., n-1}.

Permutations act on the right: ``x ^ (p * q) == (x ^ p) ^ q``, the convention
used by GAP.  A group is a list of generators plus a lazily built
stabilizer chain (base and strong generating set) computed with the
deterministic incremental Schreier-Sims algorithm.
"""

from __future__ import annotations

import enum
import math
import re
from collections import deque
from typing import Callable, Hashable, Iterable, Sequence


class DomainError(ValueError):
    """An object does not belong to the domain of an action."""


def _mul(p: tuple, q: tuple) -> tuple:
    return tuple(map(q.__getitem__, p))


def _inv(p: tuple) -> tuple:
    out = [0] * len(p)
    for i, x in enumerate(p):
        out[x] = i
    return tuple(out)


def _first_moved(p: tuple) -> int:
    for i, x in enumerate(p):
        if i != x:
            return i
    return -1


class Permutation:
    """A bijection of {0, ..., n-1} stored as its image table."""

    __slots__ = ("images",)

    def __init__(self, images: Iterable[int]):
        im = tuple(images)
        if sorted(im) != list(range(len(im))):
            raise DomainError(f"not a permutation: {im}")
        self.images = im

    @classmethod
    def _raw(cls, images: tuple) -> Permutation:
        p = object.__new__(cls)
        p.images = images
        return p

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls._raw(tuple(range(n)))

    @classmethod
    def from_cycles(cls, cycles: Iterable[Sequence[int]], degree: int,
                    one_based: bool = False) -> Permutation:
        im = list(range(degree))
        shift = 1 if one_based else 0
        seen = set()
        for cyc in cycles:
            pts = [c - shift for c in cyc]
            for x in pts:
                if not 0 <= x < degree or x in seen:
                    raise DomainError(f"bad cycle {cyc} for degree {degree}")
                seen.add(x)
            for a, b in zip(pts, pts[1:] + pts[:1]):
                im[a] = b
        return cls._raw(tuple(im))

    @classmethod
    def parse(cls, text: str, degree: int) -> Permutation:
        """Parse 1-based disjoint-cycle notation such as ``(1,2,3)(4,5)``."""
        text = text.strip()
        if text in ("", "()"):
            return cls.identity(degree)
        if re.fullmatch(r"(\([0-9,\s]*\)\s*)+", text) is None:
            raise DomainError(f"cannot parse permutation {text!r}")
        cycles = []
        for body in re.findall(r"\(([^)]*)\)", text):
            pts = [int(t) for t in re.split(r"[,\s]+", body.strip()) if t]
            if pts:
                cycles.append(pts)
        return cls.from_cycles(cycles, degree, one_based=True)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __getitem__(self, x: int) -> int:
        return self.images[x]

    def __mul__(self, other: Permutation) -> Permutation:
        if len(other.images) != len(self.images):
            raise DomainError("degree mismatch")
        return Permutation._raw(_mul(self.images, other.images))

    def inverse(self) -> Permutation:
        return Permutation._raw(_inv(self.images))

    __invert__ = inverse

    def __pow__(self, k: int) -> Permutation:
        if k < 0:
            return self.inverse() ** (-k)
        result = tuple(range(len(self.images)))
        base = self.images
        while k:
            if k & 1:
                result = _mul(result, base)
            base = _mul(base, base)
            k >>= 1
        return Permutation._raw(result)

    def __eq__(self, other) -> bool:
        return isinstance(other, Permutation) and self.images == other.images

    def __lt__(self, other: Permutation) -> bool:
        return self.images < other.images

    def __hash__(self) -> int:
        return hash(self.images)

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.images))

    def cycles(self) -> list[tuple[int, ...]]:
        seen = set()
        out = []
        for i in range(len(self.images)):
            if i in seen or self.images[i] == i:
                continue
            cyc = [i]
            seen.add(i)
            j = self.images[i]
            while j != i:
                cyc.append(j)
                seen.add(j)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        return math.lcm(*(len(c) for c in self.cycles())) if self.cycles() else 1

    def is_even(self) -> bool:
        return sum(len(c) - 1 for c in self.cycles()) % 2 == 0

    def to_cycle_string(self, one_based: bool = True) -> str:
        shift = 1 if one_based else 0
        cyc = self.cycles()
        if not cyc:
            return "()"
        return "".join("(" + ",".join(str(x + shift) for x in c) + ")" for c in cyc)

    def __repr__(self) -> str:
        return f"Permutation({self.to_cycle_string()}, degree={self.degree})"


# ---------------------------------------------------------------------------
# actions


def _act_point(x, im):
    return im[x]


def _act_ordered_pair(x, im):
    return (im[x[0]], im[x[1]])


def _act_two_set(x, im):
    a = im[x[0]]
    b = im[x[1]]
    return (a, b) if a < b else (b, a)


def _act_set(x, im):
    return tuple(sorted([im[a] for a in x]))


def _act_flag(x, im):
    return (im[x[0]], tuple(sorted([im[a] for a in x[1]])))


def _act_flag_pair(x, im):
    return (_act_flag(x[0], im), _act_flag(x[1], im))


def _points_of(kind, x):
    if kind is ActionKind.ON_POINTS:
        return [x]
    if kind in (ActionKind.ON_POINT_PAIRS_ORDERED, ActionKind.ON_2_SETS,
                ActionKind.ON_LINES):
        return list(x)
    if kind is ActionKind.ON_FLAGS:
        return [x[0], *x[1]]
    return [x[0][0], *x[0][1], x[1][0], *x[1][1]]


class ActionKind(enum.Enum):
    """How a point permutation acts on derived objects.

    Sets (2-sets, lines, co-lines of flags) are canonical sorted tuples; a
    flag is ``(sigma, coline)`` and a flag pair is ``(flag, flag)``.
    """

    ON_POINTS = "on-points"
    ON_POINT_PAIRS_ORDERED = "on-point-pairs-ordered"
    ON_2_SETS = "on-2-sets"
    ON_LINES = "on-lines"
    ON_FLAGS = "on-flags"
    ON_FLAG_PAIRS = "on-flag-pairs"

    @property
    def fn(self) -> Callable:
        return _ACTION_FNS[self]

    def apply(self, x, g: Permutation):
        return _ACTION_FNS[self](x, g.images)

    def check(self, x, degree: int) -> None:
        try:
            pts = _points_of(self, x)
            ok = all(isinstance(p, int) and 0 <= p < degree for p in pts)
            if self is ActionKind.ON_2_SETS:
                ok = ok and len(x) == 2 and x[0] < x[1]
            elif self is ActionKind.ON_POINT_PAIRS_ORDERED:
                ok = ok and len(x) == 2 and x[0] != x[1]
            elif self is ActionKind.ON_LINES:
                ok = ok and list(x) == sorted(set(x))
        except (TypeError, IndexError):
            ok = False
        if not ok:
            raise DomainError(f"{x!r} is not an object of {self.value} for degree {degree}")


_ACTION_FNS = {
    ActionKind.ON_POINTS: _act_point,
    ActionKind.ON_POINT_PAIRS_ORDERED: _act_ordered_pair,
    ActionKind.ON_2_SETS: _act_two_set,
    ActionKind.ON_LINES: _act_set,
    ActionKind.ON_FLAGS: _act_flag,
    ActionKind.ON_FLAG_PAIRS: _act_flag_pair,
}


# ---------------------------------------------------------------------------
# stabilizer chains


class _Level:
    __slots__ = ("point", "gens", "orbit", "trans", "inv", "done")

    def __init__(self, point: int, n: int):
        ident = tuple(range(n))
        self.point = point
        self.gens: list[tuple] = []
        self.orbit = [point]
        self.trans = {point: ident}
        self.inv = {point: ident}
        # done[i] = number of gens whose Schreier generator at orbit[i] is verified
        self.done = [0]

    def add_gens(self, new: list[tuple]) -> None:
        self.gens.extend(new)
        trans, inv, orbit = self.trans, self.inv, self.orbit
        frontier = []
        for p in list(orbit):
            up = trans[p]
            for g in new:
                x = g[p]
                if x not in trans:
                    u = _mul(up, g)
                    trans[x] = u
                    inv[x] = _inv(u)
                    orbit.append(x)
                    self.done.append(0)
                    frontier.append(x)
        k = 0
        while k < len(frontier):
            p = frontier[k]
            k += 1
            up = trans[p]
            for g in self.gens:
                x = g[p]
                if x not in trans:
                    u = _mul(up, g)
                    trans[x] = u
                    inv[x] = _inv(u)
                    orbit.append(x)
                    self.done.append(0)
                    frontier.append(x)


class BaseChain:
    """Base, per-level transversals and strong generators of a group."""

    def __init__(self, degree: int, levels: list[_Level]):
        self.degree = degree
        self._levels = levels

    @property
    def base(self) -> list[int]:
        return [lvl.point for lvl in self._levels]

    @property
    def order(self) -> int:
        return math.prod(len(lvl.orbit) for lvl in self._levels)

    def orbit_sizes(self) -> list[int]:
        return [len(lvl.orbit) for lvl in self._levels]

    def level_orbit(self, i: int) -> list[int]:
        return list(self._levels[i].orbit)

    def level_transversal(self, i: int) -> dict[int, Permutation]:
        return {x: Permutation._raw(u) for x, u in self._levels[i].trans.items()}

    def strong_generators(self, level: int = 0) -> list[Permutation]:
        if level >= len(self._levels):
            return []
        return [Permutation._raw(g) for g in self._levels[level].gens]

    def strip(self, g: tuple, start: int = 0) -> tuple[tuple, int]:
        for i in range(start, len(self._levels)):
            lvl = self._levels[i]
            x = g[lvl.point]
            if x not in lvl.trans:
                return g, i
            if x != lvl.point:
                g = _mul(g, lvl.inv[x])
        return g, len(self._levels)

    def contains(self, g: Permutation) -> bool:
        h, j = self.strip(g.images)
        return j == len(self._levels) and _first_moved(h) < 0

    def subchain(self, start: int) -> BaseChain:
        return BaseChain(self.degree, self._levels[start:])


class _SchreierSims:
    """Incremental deterministic Schreier-Sims on raw image tuples."""

    def __init__(self, degree: int, base_prefix: Sequence[int] = ()):
        self.n = degree
        self.identity = tuple(range(degree))
        self.levels: list[_Level] = [_Level(b, degree) for b in base_prefix]
        self.chain = BaseChain(degree, self.levels)

    def order(self) -> int:
        return self.chain.order

    def add_generators(self, gens: Iterable[tuple], target: int | None = None) -> None:
        new = []
        for g in gens:
            if g == self.identity:
                continue
            h, j = self.chain.strip(g)
            if j == len(self.levels) and h == self.identity:
                continue
            new.append(g)
            moved = [lvl.point for lvl in self.levels if g[lvl.point] != lvl.point]
            if not moved:
                self.levels.append(_Level(_first_moved(g), self.n))
        if not new:
            return
        for i, lvl in enumerate(self.levels):
            fixed = [g for g in new if all(g[self.levels[k].point] == self.levels[k].point
                                           for k in range(i))]
            if fixed:
                lvl.add_gens(fixed)
        self._complete(target)

    def _check_level(self, i: int):
        lvl = self.levels[i]
        ident = self.identity
        idx = 0
        while idx < len(lvl.orbit):
            p = lvl.orbit[idx]
            up = lvl.trans[p]
            k = lvl.done[idx]
            while k < len(lvl.gens):
                s = lvl.gens[k]
                k += 1
                x = s[p]
                sch = _mul(_mul(up, s), lvl.inv[x])
                if sch == ident:
                    continue
                h, j = self.chain.strip(sch, i + 1)
                if j < len(self.levels) or h != ident:
                    lvl.done[idx] = k
                    return h, j
            lvl.done[idx] = k
            idx += 1
        return None

    def _complete(self, target: int | None) -> None:
        i = len(self.levels) - 1
        while i >= 0:
            if target is not None and self.chain.order == target:
                return
            res = self._check_level(i)
            if res is None:
                i -= 1
                continue
            h, j = res
            if j == len(self.levels):
                self.levels.append(_Level(_first_moved(h), self.n))
            for lvl in self.levels[i + 1:j + 1]:
                lvl.add_gens([h])
            i = j


# ---------------------------------------------------------------------------
# groups


class GeneratedGroup:
    """A permutation group given by generators.

    ``order`` may be supplied when it is already known (for instance for a
    stabilizer computed from a parent chain); it is then used as a stopping
    certificate by Schreier-Sims rather than trusted blindly: a chain whose
    basic orbit lengths multiply to the order of a group containing it is
    provably complete.
    """

    def __init__(self, generators: Iterable[Permutation], degree: int | None = None,
                 order: int | None = None, chain: BaseChain | None = None):
        gens = list(generators)
        if degree is None:
            if not gens:
                raise DomainError("degree required for a group with no generators")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise DomainError("generators of unequal degree")
        self.degree = degree
        self.generators = gens
        self._order = order
        self._chain = chain

    def __repr__(self) -> str:
        return f"GeneratedGroup(degree={self.degree}, ngens={len(self.generators)})"

    def chain(self) -> BaseChain:
        if self._chain is None:
            self._chain = build_chain(self)
        return self._chain

    def order(self) -> int:
        if self._chain is None and self._order == 1:
            return 1
        return self.chain().order

    def contains(self, g: Permutation) -> bool:
        if g.degree != self.degree:
            raise DomainError("degree mismatch")
        return self.chain().contains(g)

    __contains__ = contains

    def strong_generators(self) -> list[Permutation]:
        return self.chain().strong_generators(0)

    def elements(self, limit: int = 100_000) -> list[Permutation]:
        """Every element, by closure under the generators (small groups only)."""
        ident = tuple(range(self.degree))
        seen = {ident}
        queue = deque([ident])
        gens = [g.images for g in self.generators]
        while queue:
            x = queue.popleft()
            for g in gens:
                y = _mul(x, g)
                if y not in seen:
                    seen.add(y)
                    if len(seen) > limit:
                        raise ValueError(f"group has more than {limit} elements")
                    queue.append(y)
        return sorted(Permutation._raw(x) for x in seen)


def build_chain(G: GeneratedGroup, base_prefix: Sequence[int] = ()) -> BaseChain:
    """Stabilizer chain of G, with base starting ``base_prefix``.

    New base points are the smallest points moved by the generator that needs
    them.  When G's order is already known it serves as the stopping
    certificate.
    """
    for b in base_prefix:
        if not 0 <= b < G.degree:
            raise DomainError(f"base point {b} outside degree {G.degree}")
    ss = _SchreierSims(G.degree, base_prefix)
    target = G._order if G._order is not None else (
        G._chain.order if G._chain is not None else None)
    gens = [g.images for g in G.generators]
    if G._chain is not None:
        gens = [g.images for g in G._chain.strong_generators(0)] or gens
    ss.add_generators(gens, target)
    chain = ss.chain
    if target is not None and chain.order != target:
        raise RuntimeError(f"chain order {chain.order} disagrees with known order {target}")
    return chain


def is_member(G: GeneratedGroup, g: Permutation) -> bool:
    return G.contains(g)


def pointwise_stabilizer(G: GeneratedGroup, pts: Sequence[int]) -> GeneratedGroup:
    """The subgroup fixing every point of ``pts``."""
    pts = list(pts)
    if len(set(pts)) != len(pts):
        raise DomainError("points must be distinct")
    if not pts:
        return G
    chain = build_chain(GeneratedGroup(G.generators, G.degree, order=G.order(),
                                       chain=G._chain), pts)
    sub = chain.subchain(len(pts))
    return GeneratedGroup(sub.strong_generators(0), G.degree, order=sub.order, chain=sub)


def orbit_with_transversal(G: GeneratedGroup, x: Hashable,
                           act: ActionKind = ActionKind.ON_POINTS
                           ) -> tuple[list, dict[Hashable, Permutation]]:
    """Breadth-first orbit of x; ``transversal[y]`` maps x to y.

    The orbit list is in discovery order, starting with x.
    """
    act.check(x, G.degree)
    f = act.fn
    gens = [g.images for g in G.generators]
    ident = tuple(range(G.degree))
    trans = {x: ident}
    orbit = [x]
    k = 0
    while k < len(orbit):
        y = orbit[k]
        k += 1
        uy = trans[y]
        for g in gens:
            z = f(y, g)
            if z not in trans:
                trans[z] = _mul(uy, g)
                orbit.append(z)
    return orbit, {y: Permutation._raw(u) for y, u in trans.items()}


def orbit(G: GeneratedGroup, x: Hashable, act: ActionKind = ActionKind.ON_POINTS) -> list:
    """Orbit of x in discovery order, without a transversal."""
    f = act.fn
    gens = [g.images for g in G.generators]
    seen = {x}
    out = [x]
    k = 0
    while k < len(out):
        y = out[k]
        k += 1
        for g in gens:
            z = f(y, g)
            if z not in seen:
                seen.add(z)
                out.append(z)
    return out


def transporter(G: GeneratedGroup, x: Hashable, y: Hashable,
                act: ActionKind = ActionKind.ON_POINTS) -> Permutation | None:
    """First element found (breadth first from x) carrying x to y, or None."""
    act.check(x, G.degree)
    act.check(y, G.degree)
    f = act.fn
    gens = [g.images for g in G.generators]
    ident = tuple(range(G.degree))
    if x == y:
        return Permutation._raw(ident)
    trans = {x: ident}
    queue = deque([x])
    while queue:
        z = queue.popleft()
        uz = trans[z]
        for g in gens:
            w = f(z, g)
            if w not in trans:
                u = _mul(uz, g)
                if w == y:
                    return Permutation._raw(u)
                trans[w] = u
                queue.append(w)
    return None


def stabilizer(G: GeneratedGroup, x: Hashable,
               act: ActionKind = ActionKind.ON_POINTS) -> GeneratedGroup:
    """Stabilizer of an arbitrary object via Schreier generators.

    Schreier generators are added until the subgroup reaches the order
    |G| / |x^G| given by the orbit-stabilizer theorem.
    """
    if act is ActionKind.ON_POINTS:
        return pointwise_stabilizer(G, [x])
    orb, trans = orbit_with_transversal(G, x, act)
    target = G.order() // len(orb)
    ss = _SchreierSims(G.degree)
    if target > 1:
        f = act.fn
        gens = [g.images for g in G.generators]
        raw = {y: u.images for y, u in trans.items()}
        inv_cache: dict = {}
        done = False
        for y in orb:
            uy = raw[y]
            for g in gens:
                z = f(y, g)
                if z not in inv_cache:
                    inv_cache[z] = _inv(raw[z])
                sch = _mul(_mul(uy, g), inv_cache[z])
                ss.add_generators([sch], target)
                if ss.order() == target:
                    done = True
                    break
            if done:
                break
    if ss.order() != target:
        raise RuntimeError("stabilizer order mismatch")
    chain = ss.chain
    return GeneratedGroup(chain.strong_generators(0), G.degree, order=target, chain=chain)


def setwise_stabilizer_2(G: GeneratedGroup, pair: Sequence[int]) -> GeneratedGroup:
    """Stabilizer of the 2-set {a, b}: G_{a,b} extended by a swap if one exists."""
    a, b = pair
    if a == b:
        raise DomainError("need two distinct points")
    H = pointwise_stabilizer(G, [a, b])
    t = transporter(G, (a, b), (b, a), ActionKind.ON_POINT_PAIRS_ORDERED)
    if t is None:
        return H
    gens = list(H.generators) + [t]
    chain = build_chain(GeneratedGroup(gens, G.degree, order=2 * H.order()))
    return GeneratedGroup(chain.strong_generators(0), G.degree, order=chain.order, chain=chain)


def is_k_transitive(G: GeneratedGroup, k: int) -> bool:
    """True iff G is transitive on ordered k-tuples of distinct points.

    Equivalent to the orbit of (0, ..., k-1) having size n!/(n-k)!; decided
    from the basic orbit lengths of a chain with base prefix 0..k-1.
    """
    n = G.degree
    if k < 1 or k > n:
        raise DomainError("need 1 <= k <= degree")
    if k <= 2:
        tup = 0 if k == 1 else (0, 1)
        act = ActionKind.ON_POINTS if k == 1 else ActionKind.ON_POINT_PAIRS_ORDERED
        return len(orbit(G, tup, act)) == math.perm(n, k)
    chain = build_chain(GeneratedGroup(G.generators, n, order=G.order(), chain=G._chain),
                        list(range(k)))
    return chain.orbit_sizes()[:k] == [n - i for i in range(k)]


def orbits_on(G: GeneratedGroup, domain: Iterable[Hashable],
              act: ActionKind = ActionKind.ON_POINTS) -> list[tuple[Hashable, int]]:
    """Orbits of G on a closed domain as (minimal element, size), sorted."""
    dom = set(domain)
    f = act.fn
    gens = [g.images for g in G.generators]
    seen = set()
    out = []
    for x in sorted(dom):
        if x in seen:
            continue
        seen.add(x)
        comp = [x]
        k = 0
        while k < len(comp):
            y = comp[k]
            k += 1
            for g in gens:
                z = f(y, g)
                if z not in dom:
                    raise DomainError(f"domain not closed: {y!r} maps to {z!r}")
                if z not in seen:
                    seen.add(z)
                    comp.append(z)
        out.append((x, len(comp)))
    return out


def orbit_partition(G: GeneratedGroup, domain: Iterable[Hashable],
                    act: ActionKind = ActionKind.ON_POINTS) -> dict[Hashable, int]:
    """Map each element of a closed domain to the index of its orbit.

    Orbits are numbered in increasing order of their minimal elements.
    """
    reps = orbits_on(G, domain, act)
    f = act.fn
    gens = [g.images for g in G.generators]
    label = {}
    for idx, (x, _) in enumerate(reps):
        label[x] = idx
        comp = [x]
        k = 0
        while k < len(comp):
            y = comp[k]
            k += 1
            for g in gens:
                z = f(y, g)
                if z not in label:
                    label[z] = idx
                    comp.append(z)
    return label


# ---------------------------------------------------------------------------
# generator files


def read_generators(text: str) -> tuple[int, list[Permutation]]:
    """Parse the generator file format.

    A ``degree N`` header, then one permutation per line in 1-based cycle
    notation.  Blank lines and ``#`` comments are ignored.
    """
    degree = None
    gens = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = re.fullmatch(r"degree\s+(\d+)", line)
        if m:
            degree = int(m.group(1))
            continue
        if degree is None:
            raise DomainError("generator file lacks a 'degree N' header")
        gens.append(Permutation.parse(line, degree))
    if degree is None:
        raise DomainError("generator file lacks a 'degree N' header")
    return degree, gens


def write_generators(degree: int, gens: Iterable[Permutation]) -> str:
    lines = [f"degree {degree}"]
    lines.extend(g.to_cycle_string() for g in gens)
    return "\n".join(lines) + "\n"


def restrict(G: GeneratedGroup, pts: Sequence[int]) -> GeneratedGroup:
    """Action of G on an invariant subset, relabelled 0..len(pts)-1 in the given order."""
    pts = list(pts)
    index = {x: i for i, x in enumerate(pts)}
    gens = []
    for g in G.generators:
        try:
            im = tuple(index[g.images[x]] for x in pts)
        except KeyError:
            raise DomainError("point set is not invariant under the group") from None
        gens.append(Permutation._raw(im))
    return GeneratedGroup(gens, len(pts))
