"""Finite fields F_{p^n} by log tables, semilinear maps of F_q, and the
standard form (t, e, s) of subgroups of GammaL(1, q).

Elements are integers 0..q-1: the base-p digits of an element are the
coefficients of its polynomial representative, constant term first.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from importlib import resources
from typing import Iterable

from .perm import DomainError

MAX_ORDER = 1 << 16


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


def _load_polynomials() -> dict[tuple[int, int], tuple[int, ...]]:
    text = resources.files("flagforge").joinpath("data/fields.txt").read_text()
    table = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0].split()
        if line:
            p, n, *coeffs = map(int, line)
            table[(p, n)] = tuple(coeffs)
    return table


class FieldTable:
    """The field F_q, q = p^n, with log/antilog tables for a primitive element."""

    def __init__(self, p: int, n: int):
        if not is_prime(p):
            raise DomainError(f"{p} is not prime")
        if n < 1 or p ** n > MAX_ORDER:
            raise DomainError(f"field order {p}^{n} out of range")
        self.p = p
        self.n = n
        self.q = q = p ** n
        known = _load_polynomials().get((p, n))
        if known is not None:
            self.polynomial = known
            exp = self._powers_of_x(known)
            if exp is None:
                raise DomainError(f"shipped polynomial for ({p},{n}) is not primitive")
        else:
            self.polynomial, exp = self._search_primitive()
        self.exp = exp + exp  # doubled so exp[i + j] needs no reduction
        self.log = [0] * q
        for i, x in enumerate(exp):
            self.log[x] = i
        self.omega = exp[1 % (q - 1)] if q > 2 else 1
        if q <= 256:
            self._add = [[self._add_digits(a, b) for b in range(q)] for a in range(q)]
        else:
            self._add = None

    def _powers_of_x(self, coeffs: tuple[int, ...]) -> list[int] | None:
        """Powers of x modulo a monic polynomial, or None if x is not primitive."""
        p, n, q = self.p, self.n, self.q
        if len(coeffs) != n + 1 or coeffs[-1] != 1:
            raise DomainError("polynomial must be monic of degree n")
        low = coeffs[:-1]
        digits = [1] + [0] * (n - 1)
        out = []
        for _ in range(q - 1):
            val = 0
            for d in reversed(digits):
                val = val * p + d
            out.append(val)
            # multiply by x and reduce with x^n = -sum c_i x^i
            top = digits[-1]
            digits = [0] + digits[:-1]
            if top:
                digits = [(d - top * c) % p for d, c in zip(digits, low)]
        if len(set(out)) != q - 1:
            return None
        return out

    def _search_primitive(self):
        p, n = self.p, self.n
        for tail in itertools.product(range(p), repeat=n):
            coeffs = tuple(reversed(tail)) + (1,)
            if coeffs[0] == 0:
                continue
            exp = self._powers_of_x(coeffs)
            if exp is not None:
                return coeffs, exp
        raise DomainError("no primitive polynomial found")  # unreachable for prime p

    def __repr__(self) -> str:
        return f"FieldTable(p={self.p}, n={self.n})"

    def __eq__(self, other) -> bool:
        return isinstance(other, FieldTable) and (self.p, self.n) == (other.p, other.n)

    def __hash__(self) -> int:
        return hash((self.p, self.n))

    def elements(self) -> range:
        return range(self.q)

    def digits(self, a: int) -> list[int]:
        out = []
        for _ in range(self.n):
            a, d = divmod(a, self.p)
            out.append(d)
        return out

    def _add_digits(self, a: int, b: int) -> int:
        if self.p == 2:
            return a ^ b
        out, place = 0, 1
        for _ in range(self.n):
            a, da = divmod(a, self.p)
            b, db = divmod(b, self.p)
            out += ((da + db) % self.p) * place
            place *= self.p
        return out

    def add(self, a: int, b: int) -> int:
        if self._add is not None:
            return self._add[a][b]
        return self._add_digits(a, b)

    def neg(self, a: int) -> int:
        if self.p == 2:
            return a
        return self.mul(self.exp[(self.q - 1) // 2], a) if self.q > 2 else a

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.exp[self.log[a] + self.log[b]]

    def inverse(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("zero has no inverse")
        return self.exp[(self.q - 1 - self.log[a]) % (self.q - 1)]

    def power(self, a: int, k: int) -> int:
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("zero has no inverse")
            return 1 if k == 0 else 0
        return self.exp[(self.log[a] * k) % (self.q - 1)]

    def omega_power(self, k: int) -> int:
        return self.exp[k % (self.q - 1)]

    def frobenius(self, a: int, j: int = 1) -> int:
        """a^(p^j)."""
        return self.power(a, self.p ** (j % self.n))

    def describe(self) -> str:
        terms = " ".join(str(c) for c in self.polynomial)
        return f"F_{self.q}: primitive element x mod [{terms}] (constant term first)"


@lru_cache(maxsize=None)
def build_field(p: int, n: int) -> FieldTable:
    return FieldTable(p, n)


def field_of_order(q: int) -> FieldTable:
    for p in range(2, q + 1):
        if q % p == 0:
            n = 0
            r = q
            while r % p == 0:
                r //= p
                n += 1
            if r != 1:
                break
            return build_field(p, n)
    raise DomainError(f"{q} is not a prime power")


@dataclass(frozen=True)
class SemilinearMap1D:
    """The map y -> c * y^(p^j) of F_q.  Products compose left to right."""

    field: FieldTable = dc_field(compare=False, repr=False)
    c: int
    j: int

    def __post_init__(self):
        if not 0 < self.c < self.field.q:
            raise DomainError("c must be a nonzero field element")
        object.__setattr__(self, "j", self.j % self.field.n)

    def __call__(self, y: int) -> int:
        return self.field.mul(self.c, self.field.frobenius(y, self.j))

    def __mul__(self, other: SemilinearMap1D) -> SemilinearMap1D:
        if other.field != self.field:
            raise DomainError("maps over different fields")
        F = self.field
        return SemilinearMap1D(F, F.mul(other.c, F.frobenius(self.c, other.j)),
                               self.j + other.j)

    @property
    def key(self) -> tuple[int, int]:
        """(log c, j)."""
        return (self.field.log[self.c], self.j)


@dataclass(frozen=True)
class StandardParameters:
    t: int
    e: int
    s: int

    def valid_for(self, p: int, n: int) -> bool:
        q = p ** n
        return (self.t > 0 and (q - 1) % self.t == 0
                and self.s > 0 and n % self.s == 0
                and 0 <= self.e < self.t
                and (self.e * ((q - 1) // (p ** self.s - 1))) % self.t == 0)

    def check(self, p: int, n: int) -> None:
        if not self.valid_for(p, n):
            raise DomainError(f"{self} violates the standard-form conditions for q={p}^{n}")


def _compose_keys(a, b, p, n, q1):
    return ((b[0] + a[0] * p ** b[1]) % q1, (a[1] + b[1]) % n)


def gammal_closure(F: FieldTable, keys: Iterable[tuple[int, int]]) -> frozenset:
    """Subgroup of GammaL(1,q) generated by maps given as (log c, j)."""
    p, n, q1 = F.p, F.n, F.q - 1
    gens = [(k % q1, j % n) for k, j in keys]
    seen = {(0, 0)}
    frontier = [(0, 0)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _compose_keys(x, g, p, n, q1)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(seen)


def standard_generators(F: FieldTable, par: StandardParameters) -> list[tuple[int, int]]:
    """(log c, j) keys of omega-hat^t and zeta^s omega-hat^e."""
    return [(par.t, 0), (par.e, par.s)]


def _standard_form_of_set(F: FieldTable, M: frozenset) -> StandardParameters:
    q1 = F.q - 1
    linear = [k for k, j in M if j == 0]
    t = q1 // len(linear)
    js = sorted({j for _, j in M if j})
    s = js[0] if js else F.n
    if js:
        e = next(k for k, j in sorted(M) if j == s) % t
    else:
        e = 0
    par = StandardParameters(t, e, s)
    par.check(F.p, F.n)
    if gammal_closure(F, standard_generators(F, par)) != M:
        raise AssertionError("standard form does not regenerate the subgroup")
    return par


def standard_form(gens: Iterable[SemilinearMap1D]) -> StandardParameters:
    """Parameters (t, e, s) with <gens> = <omega-hat^t, zeta^s omega-hat^e>."""
    gens = list(gens)
    if not gens:
        raise DomainError("need at least one generator")
    F = gens[0].field
    if any(g.field != F for g in gens):
        raise DomainError("generators over different fields")
    return _standard_form_of_set(F, gammal_closure(F, [g.key for g in gens]))


def all_standard_parameters(p: int, n: int) -> list[StandardParameters]:
    q = p ** n
    out = []
    for t in range(1, q):
        if (q - 1) % t:
            continue
        for s in range(1, n + 1):
            if n % s:
                continue
            for e in range(t):
                par = StandardParameters(t, e, s)
                if par.valid_for(p, n):
                    out.append(par)
    return out


def rho_of(f: int, F: FieldTable) -> int:
    """Least i > 0 with f^(p^i) = f."""
    for i in range(1, F.n + 1):
        if F.frobenius(f, i) == f:
            return i
    raise AssertionError("unreachable: f^(p^n) = f")
