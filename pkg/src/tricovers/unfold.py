"""Dihedral unfolding of a rational triangle into a translation surface.

The 2Q copies of the triangle are indexed by elements of the dihedral group
D_2Q acting linearly on the plane, so every copy has its first vertex at the
origin.  Planar points are carried as complex cyclotomic numbers with
conductor dividing 4Q.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from fractions import Fraction

from .core import TriangleSignature
from .cyclotomic import (
    CyclotomicNumber,
    RealCyclotomic,
    as_real,
    exp_pi_i,
    sin_pi,
)
from .errors import DomainError, InconsistentGluing

Point = tuple[RealCyclotomic, RealCyclotomic]


@dataclass(frozen=True, order=True)
class DihedralElement:
    """Rotation by ``2 k pi / Q``, preceded by the reflection in the base
    line when ``reflected``."""

    k: int
    reflected: bool
    Q: int

    def __post_init__(self):
        object.__setattr__(self, "k", self.k % self.Q)

    def __mul__(self, other: "DihedralElement") -> "DihedralElement":
        if self.Q != other.Q:
            raise DomainError("elements of different dihedral groups")
        k = self.k - other.k if self.reflected else self.k + other.k
        return DihedralElement(k, self.reflected != other.reflected, self.Q)

    def inverse(self) -> "DihedralElement":
        if self.reflected:
            return self
        return DihedralElement(-self.k, False, self.Q)

    @property
    def index(self) -> int:
        return self.k + self.Q * self.reflected

    def act(self, z: CyclotomicNumber) -> CyclotomicNumber:
        w = z.galois(-1) if self.reflected else z
        return CyclotomicNumber.root_of_unity(self.k, self.Q) * w


def dihedral_group(Q: int) -> list[DihedralElement]:
    return [DihedralElement(k, r, Q) for r in (False, True) for k in range(Q)]


def side_reflection(sig: TriangleSignature, side: int) -> DihedralElement:
    """Linear part of the reflection in side ``side`` (opposite vertex ``side``)
    of the base triangle placed with v1 at 0 and v2 on the positive axis."""
    Q = sig.Q
    k = {3: 0, 2: sig[1], 1: Q - sig[2]}[side]
    return DihedralElement(k, True, Q)


@dataclass(frozen=True, eq=False)
class TriangleCopy:
    label: DihedralElement
    points: tuple[CyclotomicNumber, CyclotomicNumber, CyclotomicNumber]  # complex, by vertex index
    vertices: tuple[Point, Point, Point]
    ccw: bool

    def vertex(self, i: int) -> Point:
        return self.vertices[i - 1]

    def polygon(self) -> list[Point]:
        """Vertices in counterclockwise order."""
        v = list(self.vertices)
        return v if self.ccw else v[::-1]

    def area(self) -> RealCyclotomic:
        p = self.polygon()
        total = RealCyclotomic.rational(0)
        for (x1, y1), (x2, y2) in zip(p, p[1:] + p[:1]):
            total = total + (x1 * y2 - x2 * y1)
        return total * Fraction(1, 2)


@dataclass(frozen=True, eq=False)
class UnfoldedSurface:
    """The unfolded surface; copies and gluing are built on first use."""

    signature: TriangleSignature
    scale: RealCyclotomic
    rotation: Fraction

    @property
    def Q(self) -> int:
        return self.signature.Q

    @cached_property
    def gluing(self) -> dict:
        """(copy index, side) -> (copy index, side); side i is opposite v_i."""
        table = {}
        for g in dihedral_group(self.Q):
            for side in (1, 2, 3):
                h = g * side_reflection(self.signature, side)
                table[(g.index, side)] = (h.index, side)
        return table

    @cached_property
    def copies(self) -> tuple[TriangleCopy, ...]:
        sig, Q = self.signature, self.Q
        c = self.scale * sin_pi(sig.angle(3))
        b = self.scale * sin_pi(sig.angle(2))
        base = (CyclotomicNumber.rational(0), CyclotomicNumber.rational(1) * c, b * exp_pi_i(sig.angle(1)))
        mirrored = tuple(p.galois(-1) for p in base)
        out = []
        for g in dihedral_group(Q):
            rot = exp_pi_i(self.rotation + Fraction(2 * g.k, Q))
            src = mirrored if g.reflected else base
            pts = tuple(rot * p for p in src)
            verts = tuple((p.real_part(), p.imag_part()) for p in pts)
            out.append(TriangleCopy(g, pts, verts, not g.reflected))
        return tuple(out)

    @property
    def n_copies(self) -> int:
        return 2 * self.Q

    def index(self, label: DihedralElement) -> int:
        return label.index

    def side_length(self, side: int) -> RealCyclotomic:
        return self.scale * sin_pi(self.signature.angle(side))

    def polygons(self) -> list[list[Point]]:
        return [c.polygon() for c in self.copies]


def unfold(sig: TriangleSignature, scale=1, rotation=0) -> UnfoldedSurface:
    """Unfold ``sig`` into its 2Q copies.

    The base copy has v1 at the origin and v2 in direction ``rotation * pi``;
    ``scale`` is the circumdiameter, so the side opposite v_i has length
    ``scale * sin(angle_i)``.
    """
    scale = as_real(scale)
    if scale.sign() <= 0:
        raise DomainError("scale must be positive")
    return UnfoldedSurface(sig, scale, Fraction(rotation) % 2)


@dataclass(frozen=True)
class VertexCycle:
    vertex_index: int
    points: int
    cone_turns: tuple[int, ...]
    corners: tuple[tuple[int, ...], ...]  # copy indices around each point


def corner_walk(gluing: dict, n_copies: int, vertex: int, corner_angle: Fraction):
    """Group the corners at ``vertex`` into surface points by walking the
    gluing.  Returns (list of corner tuples, list of cone turns)."""
    sides = [s for s in (1, 2, 3) if s != vertex]
    seen = set()
    cycles, turns = [], []
    for start in range(n_copies):
        if start in seen:
            continue
        cur, side = start, sides[0]
        cycle = []
        while True:
            if cur in seen:
                raise InconsistentGluing(f"corner walk at vertex {vertex} revisits copy {cur}")
            seen.add(cur)
            cycle.append(cur)
            nxt, s2 = gluing[(cur, side)]
            if s2 != side:
                raise InconsistentGluing(f"side {side} glued to side {s2}")
            side = sides[1] if side == sides[0] else sides[0]
            cur = nxt
            if cur == start and side == sides[0]:
                break
            if len(cycle) > n_copies:
                raise InconsistentGluing(f"corner walk at vertex {vertex} does not close")
        total = corner_angle * len(cycle)  # multiple of pi
        if total.denominator != 1 or total.numerator % 2:
            raise InconsistentGluing(f"cone angle {total}pi is not a multiple of 2pi")
        cycles.append(tuple(cycle))
        turns.append(total.numerator // 2)
    return cycles, turns


def traverse_vertex_classes(s: UnfoldedSurface) -> list[VertexCycle]:
    out = []
    for i in (1, 2, 3):
        cycles, turns = corner_walk(s.gluing, s.n_copies, i, s.signature.angle(i))
        out.append(VertexCycle(i, len(cycles), tuple(turns), tuple(cycles)))
    return out


@dataclass(frozen=True)
class EulerArea:
    V: int
    E: int
    F: int
    chi: int
    genus: int
    area: RealCyclotomic


def euler_characteristic(s: UnfoldedSurface) -> tuple[int, int, int]:
    V = sum(c.points for c in traverse_vertex_classes(s))
    return V, len(s.gluing) // 2, s.n_copies


def euler_and_area(s: UnfoldedSurface) -> EulerArea:
    V, E, F = euler_characteristic(s)
    chi = V - E + F
    area = RealCyclotomic.rational(0)
    for c in s.copies:
        area = area + c.area()
    return EulerArea(V, E, F, chi, (2 - chi) // 2, area)


def check_gluing(s: UnfoldedSurface) -> None:
    """Raise InconsistentGluing unless the gluing is a fixed-point-free
    involution pairing parallel sides of equal length."""
    for (c, side), (d, side2) in s.gluing.items():
        if (c, side) == (d, side2) or s.gluing[(d, side2)] != (c, side):
            raise InconsistentGluing(f"gluing at {(c, side)} is not an involution")
        p, q = [x for x in (1, 2, 3) if x != side]
        u = s.copies[c].points[q - 1] - s.copies[c].points[p - 1]
        v = s.copies[d].points[q - 1] - s.copies[d].points[p - 1]
        if u != v:
            raise InconsistentGluing(f"sides {(c, side)} and {(d, side2)} are not translates")
