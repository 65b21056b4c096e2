"""Integer-level model of rational triangles and their unfolded surfaces.

A triangle ``T(a1, a2, a3)`` has angles ``a_i * pi / Q`` with ``Q = a1 + a2 + a3``.
Vertex indices are 1-based and always follow the caller's input order; the
sorted triple (``key``) identifies the triangle up to relabeling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Iterator, Optional

from .errors import DomainError, NonPositiveEntry


@dataclass(frozen=True)
class TriangleSignature:
    a1: int
    a2: int
    a3: int
    Q: int = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        a = (self.a1, self.a2, self.a3)
        if any(not isinstance(x, int) or x < 1 for x in a):
            raise NonPositiveEntry(f"entries must be positive integers, got {a}")
        if gcd(gcd(*a[:2]), a[2]) != 1:
            raise DomainError(f"{a} is not reduced; use normalize()")
        object.__setattr__(self, "Q", sum(a))

    @property
    def a(self) -> tuple[int, int, int]:
        return (self.a1, self.a2, self.a3)

    def __getitem__(self, i: int) -> int:
        """Entry for 1-based vertex index ``i``."""
        return self.a[i - 1]

    @property
    def key(self) -> tuple[int, int, int]:
        return tuple(sorted(self.a))

    def angle(self, i: int) -> Fraction:
        """Angle at vertex ``i`` as a multiple of pi."""
        return Fraction(self[i], self.Q)

    @property
    def angles(self) -> tuple[Fraction, Fraction, Fraction]:
        return tuple(self.angle(i) for i in (1, 2, 3))

    def canonical(self) -> "TriangleSignature":
        return TriangleSignature(*self.key)

    def same_triangle(self, other: "TriangleSignature") -> bool:
        return self.key == other.key

    def __str__(self):
        return f"X({self.a1},{self.a2},{self.a3})"


def normalize(a1: int, a2: int, a3: int) -> TriangleSignature:
    """Build a signature, dividing out any common factor of the entries."""
    a = (a1, a2, a3)
    if any(int(x) != x or x < 1 for x in a):
        raise NonPositiveEntry(f"entries must be positive integers, got {a}")
    a = tuple(int(x) for x in a)
    g = gcd(gcd(a[0], a[1]), a[2])
    return TriangleSignature(*(x // g for x in a))


@dataclass(frozen=True)
class VertexClassSummary:
    vertex_index: int
    angle: Fraction  # multiple of pi
    class_size: int
    cone_turns: int  # cone angle is cone_turns * 2 pi

    @property
    def singular(self) -> bool:
        return self.cone_turns > 1

    @property
    def cone_angle(self) -> Fraction:
        """Cone angle of each point, as a multiple of pi."""
        return Fraction(2 * self.cone_turns)


def vertex_classes(sig: TriangleSignature) -> list[VertexClassSummary]:
    out = []
    for i in (1, 2, 3):
        g = gcd(sig[i], sig.Q)
        out.append(VertexClassSummary(i, sig.angle(i), g, sig[i] // g))
    return out


def singular_indices(sig: TriangleSignature) -> list[int]:
    return [c.vertex_index for c in vertex_classes(sig) if c.singular]


def genus(sig: TriangleSignature) -> int:
    # V - E + F = sum gcd(a_i, Q) - 3Q + 2Q
    excess = sig.Q - sum(gcd(x, sig.Q) for x in sig.a)
    return 1 + excess // 2


def singular_mass(sig: TriangleSignature) -> int:
    """Sum of a_i over singular classes: total singular cone angle over 2 pi."""
    return sum(sig[c.vertex_index] for c in vertex_classes(sig) if c.singular)


@dataclass(frozen=True)
class Shape:
    is_isosceles: bool
    apex_index: Optional[int]
    is_right: bool
    right_index: Optional[int]


def shape(sig: TriangleSignature) -> Shape:
    a = sig.a
    apex = None
    iso = len(set(a)) < 3
    if iso and len(set(a)) == 2:
        apex = next(i for i in (1, 2, 3) if a.count(sig[i]) == 1)
    right = next((i for i in (1, 2, 3) if 2 * sig[i] == sig.Q), None)
    return Shape(iso, apex, right is not None, right)


def is_apex(sig: TriangleSignature, i: int) -> bool:
    return shape(sig).apex_index == i


def signatures(qmax: int, qmin: int = 3) -> Iterator[TriangleSignature]:
    """All canonical (sorted, reduced) signatures with qmin <= Q <= qmax."""
    for q in range(max(qmin, 3), qmax + 1):
        yield from signatures_with_q(q)


def signatures_with_q(q: int) -> Iterator[TriangleSignature]:
    for a1 in range(1, q // 3 + 1):
        for a2 in range(a1, (q - a1) // 2 + 1):
            a3 = q - a1 - a2
            if gcd(gcd(a1, a2), a3) == 1:
                yield TriangleSignature(a1, a2, a3)
