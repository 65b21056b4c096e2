"""Fingerprints of vertex points: the configuration of shortest geodesics
from a point to the singularities.

Around a point of vertex class i the directions repeat with period
``2 * angle_i`` (one copy of the triangle and its mirror image).  Within one
copy the candidate shortest geodesics are the two edges at v_i and, when the
class of v_i is itself singular, the path reflecting once off the opposite
side at a right angle.  Angles are rationals r meaning r * pi.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable

from .core import TriangleSignature, is_apex, normalize, vertex_classes
from .cyclotomic import RealCyclotomic, as_real, sin_pi
from .errors import InternalTrichotomyViolation, InvalidAngles, InvalidPuncture, NoSingularTarget

HALF = Fraction(1, 2)


class FingerprintType(enum.Enum):
    I = "I"
    II = "II"


@dataclass(frozen=True)
class Fingerprint:
    vertex_index: int
    angle_set: frozenset[Fraction]
    cone_angle: Fraction  # multiple of pi
    length: RealCyclotomic
    shortest_targets: frozenset[int]
    directions: tuple[Fraction, ...]  # within one period, sorted
    period: Fraction

    @property
    def fp_type(self) -> FingerprintType:
        return FingerprintType.I if len(self.angle_set) == 1 else FingerprintType.II

    def sorted_angles(self) -> list[Fraction]:
        return sorted(self.angle_set)


def _others(i: int) -> tuple[int, int]:
    # (j, k): v_j lies along direction 0 from v_i, v_k along direction angle_i
    return i % 3 + 1, (i + 1) % 3 + 1


def check_punctures(sig: TriangleSignature, i: int, punctured: Iterable[int]) -> frozenset[int]:
    punctured = frozenset(punctured)
    if not punctured:
        return punctured
    classes = {c.vertex_index: c for c in vertex_classes(sig)}
    if not punctured <= {1, 2, 3}:
        raise InvalidPuncture(f"unknown vertex classes {sorted(punctured - {1, 2, 3})}")
    if i in punctured:
        raise InvalidPuncture(f"cannot puncture the class of the base point v{i}")
    for p in punctured:
        if not classes[p].singular:
            raise InvalidPuncture(f"class v{p} is nonsingular")
        if 2 * sig[p] > sig.Q:
            raise InvalidPuncture(f"class v{p} has an obtuse angle")
    if not any(c.singular and c.vertex_index not in punctured for c in classes.values()):
        raise InvalidPuncture("no singular class would remain")
    return punctured


def saddle_distances(sig: TriangleSignature, i: int, punctured: Iterable[int] = (), scale=1) -> dict[int, RealCyclotomic]:
    """Length of the shortest geodesic from a point of class ``i`` to each
    unpunctured singular class.

    Other classes are reached along a triangle edge.  The own class is reached
    by the doubled altitude; when another angle is obtuse that path does not
    exist and the obtuse (always singular) corner is strictly closer, so the
    own class is left out.
    """
    if i not in (1, 2, 3):
        raise InvalidPuncture(f"vertex index must be 1, 2 or 3, got {i}")
    punctured = check_punctures(sig, i, punctured)
    scale = as_real(scale)
    singular = [c.vertex_index for c in vertex_classes(sig) if c.singular and c.vertex_index not in punctured]
    if not singular:
        raise NoSingularTarget("surface has no singularities" if not punctured else "no unpunctured singularity")
    out = {}
    j, k = _others(i)
    for t in singular:
        if t != i:
            third = ({1, 2, 3} - {i, t}).pop()
            out[t] = scale * sin_pi(sig.angle(third))
        elif sig.angle(j) <= HALF and sig.angle(k) <= HALF:
            out[t] = scale * 2 * sin_pi(sig.angle(j)) * sin_pi(sig.angle(k))
    return out


def fingerprint(sig: TriangleSignature, i: int, punctured: Iterable[int] = (), scale=1) -> Fingerprint:
    dist = saddle_distances(sig, i, punctured, scale)
    L = min(dist.values())
    hits = frozenset(t for t, d in dist.items() if d == L)
    j, k = _others(i)
    angle = sig.angle(i)
    period = 2 * angle
    dirs = set()
    if j in hits:
        dirs.add(Fraction(0))
    if k in hits:
        dirs.add(angle)
    if i in hits:
        dirs.add(HALF - sig.angle(j))
    dirs |= {period - d for d in dirs}
    dirs = sorted({d % period for d in dirs})
    gaps = [b - a for a, b in zip(dirs, dirs[1:])] + [period - dirs[-1] + dirs[0]]
    angle_set = frozenset(gaps)
    if len(angle_set) > 2:
        raise InternalTrichotomyViolation(f"{sig} v{i}: gaps {sorted(angle_set)}")
    turns = vertex_classes(sig)[i - 1].cone_turns
    return Fingerprint(i, angle_set, Fraction(2 * turns), L, hits, tuple(dirs), period)


def trichotomy_case(sig: TriangleSignature, fp: Fingerprint) -> int:
    """Which of the three angle relations the fingerprint satisfies.

    1: one gap equal to the vertex angle (the apex of an isosceles triangle);
    2: one gap equal to twice the angle; 3: two gaps summing to twice it.
    """
    angle = sig.angle(fp.vertex_index)
    if fp.fp_type is FingerprintType.I:
        (theta,) = fp.angle_set
        if theta == angle and is_apex(sig, fp.vertex_index):
            return 1
        if theta == 2 * angle:
            return 2
    elif sum(fp.angle_set) == 2 * angle:
        return 3
    raise InternalTrichotomyViolation(f"{sig} v{fp.vertex_index}: angle set {sorted(fp.angle_set)}")


def reconstruct_from_type2(theta1, theta2) -> TriangleSignature:
    """The triangle whose vertex fingerprint has angle set {theta1, theta2}."""
    t1, t2 = Fraction(theta1), Fraction(theta2)
    if t1 == t2:
        raise InvalidAngles("a Type II angle set needs two distinct angles")
    if not (0 < t1 < 1 and 0 < t2 < 1):
        raise InvalidAngles(f"angles must lie strictly between 0 and pi, got {t1}, {t2}")
    angles = [(t1 + t2) / 2, (1 - t1) / 2, (1 - t2) / 2]
    if any(a <= 0 for a in angles):
        raise InvalidAngles(f"degenerate triangle {angles}")
    d = lcm(*(a.denominator for a in angles))
    return normalize(*(int(a * d) for a in angles))


class CoverCompatibility(enum.Enum):
    COMPATIBLE = "Compatible"
    COMPATIBLE_WITH_DOUBLING = "CompatibleWithDoubling"
    INCOMPATIBLE = "Incompatible"


def check_cover_fingerprints(fp_x: Fingerprint, fp_y: Fingerprint, x_isosceles_apex: bool,
                             compare_lengths: bool = True) -> CoverCompatibility:
    """Can a balanced cover send the point with ``fp_x`` to the one with ``fp_y``?

    Lengths are only meaningful when both surfaces were built at
    construction-consistent scales; pass ``compare_lengths=False`` otherwise.
    """
    if fp_x.angle_set != fp_y.angle_set:
        return CoverCompatibility.INCOMPATIBLE
    if compare_lengths and fp_x.length != fp_y.length:
        return CoverCompatibility.INCOMPATIBLE
    if fp_x.cone_angle == fp_y.cone_angle:
        return CoverCompatibility.COMPATIBLE
    if fp_x.cone_angle == 2 * fp_y.cone_angle and x_isosceles_apex:
        return CoverCompatibility.COMPATIBLE_WITH_DOUBLING
    return CoverCompatibility.INCOMPATIBLE
