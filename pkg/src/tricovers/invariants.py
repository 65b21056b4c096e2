"""The J-invariant and the holonomy field of a triangular billiards surface.

J lives in the exterior square over Q of the plane with coordinates in a
cyclotomic field.  Writing each planar vector as its 2d rational
coordinates (x then y, each over the power basis of Q(zeta_n)), a wedge
u ^ v is the antisymmetric matrix u v^T - v u^T.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

from .core import TriangleSignature
from .cyclotomic import (
    CyclotomicNumber,
    _reduce,
    normalize_conductor,
    prime_divisors,
    totient,
)
from .errors import DomainError
from .unfold import unfold

_INT64_SAFE = 2**62


def _compact(a: np.ndarray) -> np.ndarray:
    """int64 when every entry fits with room to spare, Python ints otherwise."""
    if int(np.abs(a.astype(object)).max(initial=0)) < _INT64_SAFE:
        return a.astype(np.int64)
    return a.astype(object)


def _matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    amax = int(np.abs(a).max(initial=0))
    bmax = int(np.abs(b).max(initial=0))
    if amax * bmax * max(a.shape[1], 1) < _INT64_SAFE:
        return a.astype(np.int64) @ b.astype(np.int64)
    return a.astype(object) @ b.astype(object)


@dataclass(frozen=True, eq=False)
class JInvariant:
    """Antisymmetric matrix ``num / den`` over the 2d coordinates of Q(zeta_n)^2."""

    conductor: int
    num: np.ndarray  # integer (int64 or object), shape (2d, 2d)
    den: int

    @property
    def dimension(self) -> int:
        return self.num.shape[0] // 2

    @property
    def matrix(self) -> list[list[Fraction]]:
        return [[Fraction(int(x), self.den) for x in row] for row in self.num]

    def is_antisymmetric(self) -> bool:
        return bool(np.all(self.num + self.num.T == 0))

    @classmethod
    def make(cls, conductor: int, num: np.ndarray, den: int) -> "JInvariant":
        g = reduce(gcd, (int(x) for x in num.flat), den)
        if den < 0:
            g = -g
        num = num.astype(object)
        if g not in (0, 1):
            num = num // g
            den //= g
        return cls(conductor, _compact(num), den)

    def lift(self, m: int) -> "JInvariant":
        m = normalize_conductor(m)
        if m == self.conductor:
            return self
        L = _lift_matrix(self.conductor, m)
        d = L.shape[1]
        big = np.zeros((2 * L.shape[0], 2 * d), dtype=np.int64)
        big[: L.shape[0], :d] = L
        big[L.shape[0]:, d:] = L
        return JInvariant.make(m, _matmul(_matmul(big, self.num), big.T), self.den)

    def scaled(self, c) -> "JInvariant":
        c = Fraction(c)
        return JInvariant.make(self.conductor, self.num.astype(object) * c.numerator, self.den * c.denominator)

    def __add__(self, other: "JInvariant") -> "JInvariant":
        m = lcm(self.conductor, other.conductor)
        a, b = self.lift(m), other.lift(m)
        den = lcm(a.den, b.den)
        total = a.num.astype(object) * (den // a.den) + b.num.astype(object) * (den // b.den)
        return JInvariant.make(a.conductor, total, den)

    def __eq__(self, other):
        if not isinstance(other, JInvariant):
            return NotImplemented
        m = lcm(self.conductor, other.conductor)
        a, b = self.lift(m), other.lift(m)
        return a.den == b.den and bool(np.all(a.num == b.num))

    __hash__ = None


@lru_cache(maxsize=None)
def _lift_matrix(n: int, m: int) -> np.ndarray:
    """Columns are the basis elements z_n^j written over conductor m."""
    if m % n:
        raise DomainError(f"cannot lift conductor {n} to {m}")
    step = m // n
    cols = []
    for j in range(totient(n)):
        vec = [0] * m
        vec[(j * step) % m] = 1
        cols.append(_reduce(m, vec))
    return np.array(cols, dtype=np.int64).T.reshape(totient(m), totient(n))


def _coordinates(points: Sequence[tuple], n: int) -> tuple[np.ndarray, int]:
    """Integer coordinate rows for (x, y) points over conductor n, with the
    common denominator."""
    lifted = [(CyclotomicNumber.lift(x, n), CyclotomicNumber.lift(y, n)) for x, y in points]
    den = lcm(*(v.den for p in lifted for v in p)) if lifted else 1
    rows = [[c * (den // x.den) for c in x.num] + [c * (den // y.den) for c in y.num] for x, y in lifted]
    return np.array(rows, dtype=object).reshape(len(rows), 2 * totient(n)), den


def j_of_polygons(polygons: Iterable[Sequence[tuple]], conductor: int | None = None) -> JInvariant:
    """J of a union of counterclockwise polygons given by (x, y) vertices."""
    polygons = [list(p) for p in polygons]
    n = conductor or 1
    for p in polygons:
        for x, y in p:
            n = lcm(n, x.n, y.n)
    n = normalize_conductor(n)
    us, vs = [], []
    for p in polygons:
        us.extend(p)
        vs.extend(p[1:] + p[:1])
    U, du = _coordinates(us, n)
    V, dv = _coordinates(vs, n)
    A = _matmul(U.T, V)
    return JInvariant.make(n, A - A.T, du * dv)


def j_invariant(sig: TriangleSignature, scale=1, rotation=0) -> JInvariant:
    s = unfold(sig, scale, rotation)
    return j_of_polygons(s.polygons(), 4 * sig.Q)


def j_compare(jx: JInvariant, jy: JInvariant, n) -> bool:
    """True iff J(X) = n J(Y) exactly."""
    return jx == jy.scaled(n)


# ---------------------------------------------------------------------------
# holonomy field


@dataclass(frozen=True)
class HolonomyFieldId:
    """The real cyclotomic field Q(zeta_m + zeta_m^-1), identified by m."""

    normalized_conductor: int
    degree: int


def holonomy_field(sig: TriangleSignature) -> HolonomyFieldId:
    m = normalize_conductor(sig.Q)
    return HolonomyFieldId(m, max(1, totient(m) // 2))


def same_holonomy(qx: int, qy: int) -> bool:
    return normalize_conductor(qx) == normalize_conductor(qy)


def q_compatible(qx: int, qy: int) -> bool:
    lo, hi = sorted((qx, qy))
    return lo == hi or (lo % 2 == 1 and hi == 2 * lo)


def real_subfield_oracle(m: int, n: int) -> bool:
    """Decide Q(zeta_m)^+ = Q(zeta_n)^+ by ramification data and degree:
    the same odd primes ramify, 2 ramifies in both or neither (4 | m), and
    the degrees agree."""
    if m < 3 or n < 3:
        raise DomainError("conductors must be at least 3")
    odd_m = {p for p in prime_divisors(m) if p != 2}
    odd_n = {p for p in prime_divisors(n) if p != 2}
    if odd_m != odd_n:
        return False
    if (m % 4 == 0) != (n % 4 == 0):
        return False
    return totient(m) == totient(n)


def real_subfield_equal(m: int, n: int) -> bool:
    """Galois-theoretic ground truth: compare the subgroups of (Z/lcm)^*
    fixing each real subfield.  Unlike the conductor test this sees that
    Q(zeta_m)^+ = Q whenever phi(m) = 2."""
    if m < 1 or n < 1:
        raise DomainError("conductors must be positive")
    N = lcm(m, n)
    units = [t for t in range(1, N + 1) if gcd(t, N) == 1]

    def fixer(k):
        return {t for t in units if t % k in (1 % k, (-1) % k)}

    return fixer(m) == fixer(n)
