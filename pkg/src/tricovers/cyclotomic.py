"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Elements are stored as an integer numerator vector over the power basis
``1, z, ..., z^(phi(n)-1)`` modulo the n-th cyclotomic polynomial, plus a
positive common denominator.  Conductors are kept ``n != 2 (mod 4)``: since
``Q(zeta_2m) = Q(zeta_m)`` for odd m, such n are rewritten to n/2 on entry.

Real numbers (lengths, coordinates) live inside the same fields; the
``RealCyclotomic`` subclass marks values known to be fixed by complex
conjugation and adds a certified ``sign``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from numbers import Rational

import numpy as np
from mpmath.ctx_iv import MPIntervalContext

from .errors import DivisionByZero, DomainError

AngleRat = Fraction  # an angle r * pi, stored as the rational r

_INT64_SAFE = 1 << 62


# ---------------------------------------------------------------------------
# elementary number theory


def prime_divisors(n: int) -> tuple[int, ...]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return tuple(out)


def totient(n: int) -> int:
    result = n
    for p in prime_divisors(n):
        result = result // p * (p - 1)
    return result


def mobius(n: int) -> int:
    k = 0
    for p in prime_divisors(n):
        if n % (p * p) == 0:
            return 0
        k += 1
    return -1 if k % 2 else 1


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # coefficients low -> high; den is monic
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise DomainError("n must be positive")
    poly = [-1] + [0] * (n - 1) + [1]  # x^n - 1
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


@dataclass(frozen=True)
class NumberTheory:
    n: int
    phi: int
    cyclotomic_poly: tuple[int, ...]
    prime_divisors: frozenset[int]


def number_theory(n: int) -> NumberTheory:
    if n < 1:
        raise DomainError("n must be positive")
    return NumberTheory(n, totient(n), cyclotomic_poly(n), frozenset(prime_divisors(n)))


def normalize_conductor(n: int) -> int:
    if n < 1:
        raise DomainError("conductor must be positive")
    return n // 2 if n % 4 == 2 else n


# ---------------------------------------------------------------------------
# reduction tables


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Rows j = 0..n-1 hold z^j reduced mod Phi_n (int64 and object copies)."""
    phi_poly = cyclotomic_poly(n)
    d = len(phi_poly) - 1
    rows = []
    cur = [1] + [0] * (d - 1)
    for _ in range(n):
        rows.append(cur)
        lead = cur[-1]
        nxt = [0] + cur[:-1]
        if lead:
            nxt = [c - lead * p for c, p in zip(nxt, phi_poly[:-1])]
        cur = nxt
    obj = np.array(rows, dtype=object).reshape(n, d)
    bound = max(abs(int(x)) for x in obj.flat) if obj.size else 0
    return obj.astype(np.int64), obj, bound


def _reduce(n: int, vec) -> tuple[int, ...]:
    """Reduce an exponent vector (length n, index = power of z) to the basis."""
    t64, tobj, tbound = _power_table(n)
    vmax = max((abs(int(x)) for x in vec), default=0)
    if vmax * tbound * n < _INT64_SAFE:
        res = np.asarray(vec, dtype=np.int64) @ t64
    else:
        res = np.asarray([int(x) for x in vec], dtype=object) @ tobj
    return tuple(int(x) for x in res)


def _fold(n: int, seq) -> list[int]:
    out = [0] * n
    for j, c in enumerate(seq):
        if c:
            out[j % n] += int(c)
    return out


def _convolve(a: tuple[int, ...], b: tuple[int, ...]):
    amax = max((abs(x) for x in a), default=0)
    bmax = max((abs(x) for x in b), default=0)
    if amax * bmax * min(len(a), len(b)) < _INT64_SAFE:
        return np.convolve(np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64))
    return np.convolve(np.asarray(a, dtype=object), np.asarray(b, dtype=object))


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as a rational")


# ---------------------------------------------------------------------------


class CyclotomicNumber:
    """An element of Q(zeta_n); immutable."""

    __slots__ = ("n", "num", "den")

    def __init__(self, n: int, coeffs):
        """Element with the given rational coefficients in the power basis of
        ``zeta_n`` (length ``phi(n)``).  ``n = 2 (mod 4)`` is accepted and
        rewritten over ``zeta_{n/2}``."""
        coeffs = [_frac(c) for c in coeffs]
        if len(coeffs) != totient(n):
            raise DomainError(f"expected {totient(n)} coefficients for n={n}")
        den = 1
        for c in coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in coeffs]
        if n % 4 == 2:
            m = n // 2
            h = (m + 1) // 2  # zeta_n = -zeta_m^h
            vec = [0] * m
            for j, c in enumerate(ints):
                vec[(j * h) % m] += -c if j % 2 else c
            n, ints = m, _reduce(m, vec)
        self._set(n, tuple(ints), den)

    def _set(self, n, num, den):
        g = den
        for c in num:
            g = gcd(g, c)
            if g == 1:
                break
        if g > 1:
            num = tuple(c // g for c in num)
            den //= g
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, key, value):
        raise AttributeError("CyclotomicNumber is immutable")

    @classmethod
    def _raw(cls, n, num, den=1):
        obj = object.__new__(cls)
        if den < 0:
            num, den = tuple(-c for c in num), -den
        obj._set(n, tuple(num), den)
        return obj

    # -- constructors -------------------------------------------------------

    @classmethod
    def rational(cls, q, n: int = 1):
        q = _frac(q)
        n = normalize_conductor(n)
        num = [0] * totient(n)
        num[0] = q.numerator
        return cls._raw(n, num, q.denominator)

    @classmethod
    def root_of_unity(cls, k: int, n: int) -> "CyclotomicNumber":
        """zeta_n ** k with zeta_n = exp(2 pi i / n)."""
        if n % 4 == 2:
            m = n // 2
            h = (m + 1) // 2
            e, sgn = (k * h) % m, (-1 if k % 2 else 1)
        else:
            m, e, sgn = n, k % n, 1
        vec = [0] * m
        vec[e] = sgn
        return cls._raw(m, _reduce(m, vec), 1)

    @classmethod
    def from_exponents(cls, n: int, vec) -> "CyclotomicNumber":
        """Sum of ``vec[j] * zeta_n**j``; ``vec`` holds rationals."""
        fr = [_frac(c) for c in vec]
        den = 1
        for c in fr:
            den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in fr]
        if n % 4 == 2:
            m = n // 2
            h = (m + 1) // 2
            folded = [0] * m
            for j, c in enumerate(ints):
                if c:
                    folded[(j * h) % m] += -c if j % 2 else c
            n, ints = m, folded
        return cls._raw(n, _reduce(n, _fold(n, ints)), den)

    # -- basic structure ----------------------------------------------------

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.den) for c in self.num)

    @property
    def degree(self) -> int:
        return len(self.num)

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise DomainError("element is not rational")
        return Fraction(self.num[0], self.den)

    def lift(self, m: int) -> "CyclotomicNumber":
        """The same value written over conductor ``m`` (a multiple of n)."""
        m = normalize_conductor(m)
        if m == self.n:
            return self
        if m % self.n:
            raise DomainError(f"cannot lift conductor {self.n} to {m}")
        step = m // self.n
        vec = [0] * m
        for j, c in enumerate(self.num):
            vec[j * step] = c
        return self._raw(m, _reduce(m, vec), self.den)

    def _coerce(self, other):
        if isinstance(other, CyclotomicNumber):
            return other
        if isinstance(other, (int, Rational)):
            return RealCyclotomic.rational(other, self.n)
        return None

    def _pair(self, other):
        L = self.n * other.n // gcd(self.n, other.n)
        return self.lift(L), other.lift(L), L

    def _result_cls(self, other):
        return RealCyclotomic if isinstance(self, RealCyclotomic) and isinstance(other, RealCyclotomic) else CyclotomicNumber

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        a, b, L = self._pair(o)
        num = tuple(x * b.den + y * a.den for x, y in zip(a.num, b.num))
        return self._result_cls(o)._raw(L, num, a.den * b.den)

    __radd__ = __add__

    def __neg__(self):
        return type(self)._raw(self.n, tuple(-c for c in self.num), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        cls = self._result_cls(o)
        if o.is_rational() or self.is_rational():
            a, b = (self, o) if o.is_rational() else (o, self)
            c = b.num[0]
            return cls._raw(a.n, tuple(x * c for x in a.num), a.den * b.den)
        a, b, L = self._pair(o)
        prod = _convolve(a.num, b.num)
        return cls._raw(L, _reduce(L, _fold(L, prod)), a.den * b.den)

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        if self.is_rational():
            return type(self)._raw(self.n, (self.den,) + (0,) * (self.degree - 1), self.num[0])
        # x times the product of its other conjugates is the rational norm
        n = self.n
        x = CyclotomicNumber._raw(n, self.num, 1)
        rest = CyclotomicNumber.rational(1, n)
        for t in range(2, n):
            if gcd(t, n) == 1:
                rest = rest * x.galois(t)
        norm = (x * rest).to_fraction()
        if norm == 0:
            raise DivisionByZero("element is not invertible")
        return type(self)._raw(n, rest.num, 1) * Fraction(self.den * norm.denominator, norm.numerator)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = type(self).rational(1, self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self) -> "CyclotomicNumber":
        if isinstance(self, RealCyclotomic):
            return self
        return self.galois(-1)

    def galois(self, t: int) -> "CyclotomicNumber":
        """Image under zeta_n -> zeta_n^t (t coprime to n)."""
        n = self.n
        if gcd(t, n) != 1:
            raise DomainError(f"{t} is not a unit mod {n}")
        vec = [0] * n
        for j, c in enumerate(self.num):
            if c:
                vec[(j * t) % n] += c
        return CyclotomicNumber._raw(n, _reduce(n, vec), self.den)

    def is_real(self) -> bool:
        return isinstance(self, RealCyclotomic) or self.galois(-1) == self

    def real_part(self) -> "RealCyclotomic":
        return RealCyclotomic._raw_checked((self + self.galois(-1)) * Fraction(1, 2))

    def imag_part(self) -> "RealCyclotomic":
        # (x - conj x) / (2i), 1/i = -zeta_4
        L = self.n * 4 // gcd(self.n, 4)
        diff = self.lift(L) - self.lift(L).galois(-1)
        return RealCyclotomic._raw_checked(diff * CyclotomicNumber.root_of_unity(3, 4) * Fraction(1, 2))

    # -- comparison ---------------------------------------------------------

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.n == o.n:
            return self.den == o.den and self.num == o.num
        a, b, _ = self._pair(o)
        return a.den == b.den and a.num == b.num

    def __hash__(self):
        # conductor-independent: normalized trace Tr(x) / phi(n)
        n = self.n
        t = Fraction(0)
        for j, c in enumerate(self.num):
            if c:
                m = n // gcd(j, n)
                t += Fraction(c * mobius(m), totient(m))
        return hash(t / self.den)

    def key(self, m: int | None = None) -> tuple:
        """Hashable exact key; pass a common conductor ``m`` to compare keys."""
        x = self if m is None else self.lift(m)
        return (x.n, x.num, x.den)

    # -- numeric evaluation -------------------------------------------------

    def __complex__(self):
        n = self.n
        z = sum(c * complex(math.cos(2 * math.pi * j / n), math.sin(2 * math.pi * j / n))
                for j, c in enumerate(self.num) if c)
        return complex(z) / self.den

    def approx(self, digits: int = 12) -> complex:
        return complex(self)

    def __repr__(self):
        return f"{type(self).__name__}({self.to_string()})"

    def to_string(self) -> str:
        if self.is_rational():
            return _fmt_frac(Fraction(self.num[0], self.den))
        body = ", ".join(_fmt_frac(c) for c in self.coeffs)
        return f"z{self.n}[{body}]"


class RealCyclotomic(CyclotomicNumber):
    """A cyclotomic number fixed by complex conjugation."""

    __slots__ = ()

    def __init__(self, value, coeffs=None):
        if coeffs is not None:
            value = CyclotomicNumber(value, coeffs)
        elif not isinstance(value, CyclotomicNumber):
            value = CyclotomicNumber.rational(value)
        if not value.is_real():
            raise DomainError(f"{value.to_string()} is not real")
        self._set(value.n, value.num, value.den)

    @classmethod
    def _raw_checked(cls, value: CyclotomicNumber) -> "RealCyclotomic":
        return cls._raw(value.n, value.num, value.den)

    def __float__(self):
        n = self.n
        s = math.fsum(c * math.cos(2 * math.pi * j / n) for j, c in enumerate(self.num) if c)
        return s / self.den

    def approx(self, digits: int = 12) -> float:
        return float(self)

    def sign(self) -> int:
        """Certified sign: exact zero test, then interval refinement."""
        if self.is_zero():
            return 0
        terms = [(j, c) for j, c in enumerate(self.num) if c]
        prec = 64
        while True:
            ctx = MPIntervalContext()
            ctx.prec = prec
            s = ctx.mpf(0)
            for j, c in terms:
                s += c * ctx.cos(2 * ctx.pi * j / self.n)
            if s.a > 0:
                return 1
            if s.b < 0:
                return -1
            prec *= 2

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def _cmp(self, other) -> int:
        o = self._coerce(other)
        if o is None or not isinstance(o, RealCyclotomic):
            raise TypeError("ordering needs real operands")
        return (self - o).sign()

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    __hash__ = CyclotomicNumber.__hash__


# ---------------------------------------------------------------------------
# trigonometric constructors


def exp_pi_i(r) -> CyclotomicNumber:
    """exp(i pi r) for rational r."""
    r = _frac(r)
    return CyclotomicNumber.root_of_unity(r.numerator, 2 * r.denominator)


def cos_pi(r) -> RealCyclotomic:
    z = exp_pi_i(r)
    return RealCyclotomic._raw_checked((z + z.galois(-1)) * Fraction(1, 2))


def sin_pi(r) -> RealCyclotomic:
    return cos_pi(Fraction(1, 2) - _frac(r))


def as_real(x) -> RealCyclotomic:
    if isinstance(x, RealCyclotomic):
        return x
    return RealCyclotomic(x)


# ---------------------------------------------------------------------------
# text form


def _fmt_frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


_CYC_RE = re.compile(r"^\s*z(\d+)\[(.*)\]\s*$")


def parse(text: str) -> CyclotomicNumber:
    """Inverse of ``to_string``; returns a RealCyclotomic when the value is real."""
    m = _CYC_RE.match(text)
    if m is None:
        value = CyclotomicNumber.rational(Fraction(text.strip()))
    else:
        coeffs = [Fraction(c.strip()) for c in m.group(2).split(",")]
        value = CyclotomicNumber(int(m.group(1)), coeffs)
    return RealCyclotomic._raw_checked(value) if value.is_real() else value


def fmt_angle(r: Fraction) -> str:
    """Angle ``r * pi`` as text, e.g. ``1/3·pi``."""
    return f"{_fmt_frac(r)}·pi"


def parse_angle(text: str) -> Fraction:
    body = text.strip()
    if not body.endswith("·pi"):
        raise DomainError(f"not an angle: {text!r}")
    return Fraction(body[: -len("·pi")])
