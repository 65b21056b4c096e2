"""Translation covers between triangular billiards surfaces.

Three parts: the explicit family of covers coming from right triangles
(built copy by copy and checked), the necessary conditions any cover must
satisfy, and an exhaustive search that runs those conditions on every pair
of signatures up to a bound on Q.
"""

from __future__ import annotations

import enum
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Optional

from .core import (
    TriangleSignature,
    genus,
    is_apex,
    normalize,
    shape,
    signatures,
    vertex_classes,
)
from .cyclotomic import RealCyclotomic, normalize_conductor, sin_pi
from .errors import DomainError, InvalidPuncture, InvariantViolation, MapInconsistent, NotCoprime
from .fingerprint import (
    CoverCompatibility,
    Fingerprint,
    FingerprintType,
    check_cover_fingerprints,
    fingerprint,
)
from .invariants import q_compatible
from .unfold import corner_walk, unfold

HALF = Fraction(1, 2)
DEFAULT_MAX_DEGREE = 8


class CoverKind(enum.Enum):
    F1 = "F1"
    F2 = "F2"
    COMPOSITION = "Composition"
    EQUIVALENCE = "Equivalence"


@dataclass(frozen=True)
class ProfileEntry:
    source_class: int
    target_class: Optional[int]  # None: nonsingular image
    m: int
    count: int


@dataclass(frozen=True)
class CoverDescriptor:
    source: TriangleSignature
    target: TriangleSignature
    degree: int
    kind: CoverKind
    balanced: bool = True
    ramification_profile: tuple[ProfileEntry, ...] = ()
    family: tuple[int, int] = (0, 0)  # the (a1, a2) that produced it

    @property
    def total_ramification(self) -> int:
        return sum((e.m - 1) * e.count for e in self.ramification_profile)


class VerdictKind(enum.Enum):
    IMPOSSIBLE = "Impossible"
    IN_FAMILY = "InFamily"
    UNDECIDED = "Undecided"


@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    source: TriangleSignature
    target: TriangleSignature
    reasons: tuple[str, ...] = ()
    descriptors: tuple[CoverDescriptor, ...] = ()
    notes: tuple[str, ...] = ()

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(sorted({d.degree for d in self.descriptors}))


# ---------------------------------------------------------------------------
# the family of covers over a right triangle


@dataclass(frozen=True)
class Placement:
    """A signature together with the scale and rotation that put its
    triangulation on top of the right triangle's."""

    signature: TriangleSignature
    scale: RealCyclotomic
    rotation: Fraction
    degree: int  # degree of the map to Y
    apex_at: int  # vertex of Y at the apex; 0 for Y itself

    def unfold(self):
        return unfold(self.signature, self.scale, self.rotation)


@dataclass(frozen=True)
class Lemma7Record:
    a1: int
    a2: int
    Y: TriangleSignature
    X1: TriangleSignature
    f1_degree: int
    X2: TriangleSignature
    f2_degree: int
    composition: Optional[tuple[TriangleSignature, TriangleSignature]]  # (source, target), degree 2
    degenerate: bool = False


def lemma7_family(a1: int, a2: int) -> Lemma7Record:
    """Y is the right triangle with acute angles a1 pi/Q, a2 pi/Q; X_i is the
    isosceles triangle made of Y and its mirror image in the leg at the
    vertex of angle a_i."""
    if a1 < 1 or a2 < 1:
        raise DomainError("a1 and a2 must be positive")
    if gcd(a1, a2) != 1:
        raise NotCoprime(f"gcd({a1}, {a2}) != 1")
    Y = normalize(a1 + a2, a1, a2)
    if a1 == a2 == 1:
        return Lemma7Record(1, 1, Y, Y, 2, Y, 2, None, degenerate=True)
    x1, d1 = (normalize(2 * a2, a1, a1), 2) if a1 % 2 else (normalize(a2, a1 // 2, a1 // 2), 1)
    x2, d2 = (normalize(2 * a1, a2, a2), 2) if a2 % 2 else (normalize(a1, a2 // 2, a2 // 2), 1)
    comp = None
    if d1 == 1:
        comp = (x2, x1)
    elif d2 == 1:
        comp = (x1, x2)
    return Lemma7Record(a1, a2, Y, x1, d1, x2, d2, comp)


def lemma7_placements(a1: int, a2: int) -> tuple[Placement, Placement, Placement]:
    """Y at circumdiameter 1 with its right angle at the origin, v2 on the
    positive x-axis and v3 on the positive y-axis; X1 and X2 with their apex
    at v1 and placed so each copy is a union of two copies of Y."""
    rec = lemma7_family(a1, a2)
    QY = 2 * (a1 + a2)
    Y = Placement(rec.Y, RealCyclotomic.rational(1), Fraction(0), 1, 0)
    # apex of X1 at v3 = (0, sin a1), base running from (-sin a2, 0) to (sin a2, 0)
    X1 = Placement(rec.X1, 1 / sin_pi(Fraction(a1, QY)), 1 + Fraction(a1, QY), rec.f1_degree, 3)
    # apex of X2 at v2 = (sin a2, 0), base from (0, sin a1) to (0, -sin a1)
    X2 = Placement(rec.X2, 1 / sin_pi(Fraction(a2, QY)), HALF + Fraction(a2, QY), rec.f2_degree, 2)
    return Y, X1, X2


def coprime_pairs(limit: int):
    """Coprime (a1, a2) with a1 < a2 and a1 + a2 <= limit."""
    for s in range(3, limit + 1):
        for a1 in range(1, (s + 1) // 2):
            a2 = s - a1
            if gcd(a1, a2) == 1:
                yield a1, a2


# ---------------------------------------------------------------------------
# explicit maps


@dataclass(frozen=True, eq=False)
class Refinement:
    """A surface cut into copies of the right triangle T.

    ``labels[c]`` is the copy of Y that refined copy c translates to;
    ``offsets[c]`` the translation; ``vertex_class[c][v-1]`` the vertex index
    of the original surface at T-vertex v (0 for a cut point)."""

    signature: TriangleSignature
    base: TriangleSignature  # the right triangle T
    gluing: dict
    labels: tuple[int, ...]
    offsets: tuple
    vertex_class: tuple[tuple[int, int, int], ...]

    @property
    def n_copies(self) -> int:
        return len(self.labels)


@dataclass(frozen=True, eq=False)
class CoverMap:
    source: Refinement
    target: Refinement
    corr: tuple[int, ...]  # refined source copy -> refined target copy
    degree: int


def _common_conductor(*qs: int) -> int:
    return normalize_conductor(lcm(*(4 * q for q in qs)))


def _y_index(placement_y: Placement, m: int) -> dict:
    ys = placement_y.unfold()
    out = {}
    for c in ys.copies:
        p = c.points
        out[((p[1] - p[0]).key(m), (p[2] - p[0]).key(m))] = c.label.index
    return out


def _lookup(index: dict, pts, m: int) -> int:
    key = ((pts[1] - pts[0]).key(m), (pts[2] - pts[0]).key(m))
    if key not in index:
        raise MapInconsistent("a half copy is not a translate of any copy of Y")
    return index[key]


@lru_cache(maxsize=None)
def refine(a1: int, a2: int, which: int) -> Refinement:
    """Refinement of Y (which=0), X1 (1) or X2 (2) over Y's triangle."""
    places = lemma7_placements(a1, a2)
    py, p = places[0], places[which]
    m = _common_conductor(py.signature.Q, p.signature.Q)
    yidx = _y_index(py, m)
    s = p.unfold()
    ycopies = py.unfold().copies
    if which == 0:
        labels = tuple(c.label.index for c in s.copies)
        return Refinement(p.signature, py.signature, dict(s.gluing), labels, tuple(0 for _ in labels),
                          tuple((1, 2, 3) for _ in labels))
    # split each isosceles copy at the base midpoint; half (c, b) holds base vertex b
    idx = {}
    for c in range(s.n_copies):
        for b in (2, 3):
            idx[(c, b)] = len(idx)
    cut, apex_side = (2, 3) if which == 1 else (3, 2)
    labels, offsets, vclass = [], [], []
    for c, copy in enumerate(s.copies):
        P = copy.points
        M = (P[1] + P[2]) * HALF
        for b in (2, 3):
            pts = (M, P[b - 1], P[0]) if which == 1 else (M, P[0], P[b - 1])
            lab = _lookup(yidx, pts, m)
            labels.append(lab)
            offsets.append(pts[0] - ycopies[lab].points[0])
            vclass.append((0, b, 1) if which == 1 else (0, 1, b))
    gl = {}
    for c in range(s.n_copies):
        for b in (2, 3):
            me = idx[(c, b)]
            other = 5 - b
            gl[(me, cut)] = (idx[(c, other)], cut)
            d, _ = s.gluing[(c, 1)]
            gl[(me, apex_side)] = (idx[(d, b)], apex_side)
            # the equal side of X opposite vertex `other` holds the base vertex b
            d, _ = s.gluing[(c, other)]
            gl[(me, 1)] = (idx[(d, b)], 1)
    return Refinement(p.signature, py.signature, gl, tuple(labels), tuple(offsets), tuple(vclass))


def _compose(src: Refinement, tgt: Refinement) -> tuple[int, ...]:
    inv = {}
    for c, lab in enumerate(tgt.labels):
        if lab in inv:
            raise MapInconsistent("target refinement is not a bijection onto Y")
        inv[lab] = c
    return tuple(inv[lab] for lab in src.labels)


def _descriptor_parts(desc: CoverDescriptor) -> tuple[int, int]:
    a1, a2 = desc.family
    which = {CoverKind.F1: (1, 0), CoverKind.F2: (2, 0)}.get(desc.kind)
    if which:
        return which
    rec = lemma7_family(a1, a2)
    parts = {0: rec.Y.key, 1: rec.X1.key, 2: rec.X2.key}
    src = [k for k, v in parts.items() if v == desc.source.key]
    tgt = [k for k, v in parts.items() if v == desc.target.key]
    if not src or not tgt:
        raise DomainError(f"{desc.source} -> {desc.target} is not part of the family for {(a1, a2)}")
    return src[-1], tgt[0]


def _isomorphism(src: Refinement, tgt: Refinement) -> tuple[int, ...]:
    """A bijection of refined copies preserving Y-labels and gluings, found
    by propagating from copy 0; MapInconsistent if there is none."""
    if src.n_copies != tgt.n_copies:
        raise MapInconsistent("refinements have different sizes")
    for start in range(tgt.n_copies):
        if tgt.labels[start] != src.labels[0]:
            continue
        psi = {0: start}
        stack = [0]
        ok = True
        while stack and ok:
            c = stack.pop()
            for side in (1, 2, 3):
                d, _ = src.gluing[(c, side)]
                e, _ = tgt.gluing[(psi[c], side)]
                if d in psi:
                    ok = psi[d] == e
                elif tgt.labels[e] == src.labels[d]:
                    psi[d] = e
                    stack.append(d)
                else:
                    ok = False
                if not ok:
                    break
        if ok and len(psi) == src.n_copies and len(set(psi.values())) == len(psi):
            return tuple(psi[c] for c in range(src.n_copies))
    raise MapInconsistent(f"no label-preserving isomorphism {src.signature} -> {tgt.signature}")


def construct_lemma7_map(desc: CoverDescriptor) -> CoverMap:
    """Copy-by-copy correspondence between the refinements of source and
    target over the common right triangle."""
    a1, a2 = desc.family
    w_src, w_tgt = _descriptor_parts(desc)
    src, tgt = refine(a1, a2, w_src), refine(a1, a2, w_tgt)
    if len(set(tgt.labels)) == tgt.n_copies:
        corr = _compose(src, tgt)
    else:
        corr = _isomorphism(src, tgt)
    return CoverMap(src, tgt, corr, desc.degree)


def verify_map(cmap: CoverMap, strict: bool = False) -> bool:
    """Check that the correspondence commutes with every gluing, that each
    source copy sits over its image by a translation, and that all fibres
    have ``degree`` elements.  With ``strict`` a failure raises
    MapInconsistent naming the first bad gluing pair."""
    try:
        _verify(cmap)
    except MapInconsistent:
        if strict:
            raise
        return False
    return True


def _verify(cmap: CoverMap) -> None:
    src, tgt, corr = cmap.source, cmap.target, cmap.corr
    if len(corr) != src.n_copies:
        raise MapInconsistent("correspondence has the wrong length")
    for (c, side), (d, side2) in sorted(src.gluing.items()):
        want = tgt.gluing.get((corr[c], side))
        if want != (corr[d], side2):
            raise MapInconsistent(f"gluing {(c, side)} ~ {(d, side2)} is not respected", pair=((c, side), (d, side2)))
    for c, t in enumerate(corr):
        # both copies translate onto the same copy of Y
        if src.labels[c] != tgt.labels[t]:
            raise MapInconsistent(f"copy {c} is not a translate of copy {t}", pair=(c, t))
    fibres = [0] * tgt.n_copies
    for t in corr:
        fibres[t] += 1
    if set(fibres) != {cmap.degree}:
        raise MapInconsistent(f"fibre sizes {sorted(set(fibres))} differ from degree {cmap.degree}")


def ramification_profile(cmap: CoverMap) -> tuple[ProfileEntry, ...]:
    """Read the branching of the map off the corner cycles of both
    refinements.  Only points of the source's own vertex classes appear."""
    src, tgt = cmap.source, cmap.target
    tgt_point = {}
    for v in (1, 2, 3):
        cycles, _ = corner_walk(tgt.gluing, tgt.n_copies, v, tgt.base.angle(v))
        for cyc in cycles:
            for c in cyc:
                tgt_point[(c, v)] = (len(cyc), tgt.vertex_class[cyc[0]][v - 1])
    tgt_classes = {c.vertex_index: c for c in vertex_classes(tgt.signature)}
    out: dict[tuple, int] = {}
    for v in (1, 2, 3):
        cycles, _ = corner_walk(src.gluing, src.n_copies, v, src.base.angle(v))
        for cyc in cycles:
            scls = src.vertex_class[cyc[0]][v - 1]
            if scls == 0:
                continue
            size, tcls = tgt_point[(cmap.corr[cyc[0]], v)]
            if len(cyc) % size:
                raise MapInconsistent("corner cycle lengths are not multiples")
            singular_target = tcls != 0 and tgt_classes[tcls].singular
            key = (scls, tcls if singular_target else 0, len(cyc) // size)
            out[key] = out.get(key, 0) + 1
    return tuple(ProfileEntry(s, t or None, m, n) for (s, t, m), n in sorted(out.items()))


# ---------------------------------------------------------------------------
# translation equivalence and the family closure


def translation_equivalent(A: TriangleSignature, B: TriangleSignature) -> bool:
    """T(a,a,b) ~ T(2a,b,2a+b) for odd b, plus identity."""
    if A.key == B.key:
        return True
    return _equivalent_partner(A) == B.key or _equivalent_partner(B) == A.key


def _equivalent_partner(s: TriangleSignature):
    info = shape(s)
    if not info.is_isosceles or info.apex_index is None:
        return None
    b = s[info.apex_index]
    a = (s.Q - b) // 2
    if b % 2 == 0:
        return None
    return normalize(2 * a, b, 2 * a + b).key


@lru_cache(maxsize=None)
def family_descriptors(a1: int, a2: int) -> tuple[CoverDescriptor, ...]:
    """Every cover the family gives for (a1, a2): F1, F2, the inverse of a
    degree-one F_i, and the composition through Y.  Torus sources are kept
    here; the search drops them."""
    rec = lemma7_family(a1, a2)
    raw = [(rec.X1, rec.Y, rec.f1_degree, CoverKind.F1), (rec.X2, rec.Y, rec.f2_degree, CoverKind.F2)]
    for X, d in ((rec.X1, rec.f1_degree), (rec.X2, rec.f2_degree)):
        if d == 1:
            raw.append((rec.Y, X, 1, CoverKind.EQUIVALENCE))
    if rec.composition:
        raw.append((*rec.composition, 2, CoverKind.COMPOSITION))
    elif not rec.degenerate:
        # both a_i odd: the two double covers of Y have the same monodromy
        raw.append((rec.X1, rec.X2, 1, CoverKind.EQUIVALENCE))
        raw.append((rec.X2, rec.X1, 1, CoverKind.EQUIVALENCE))
    out = []
    seen = set()
    for src, tgt, d, kind in raw:
        if rec.degenerate and kind is CoverKind.F2:
            continue
        if (src.key, tgt.key, d) in seen:
            continue
        seen.add((src.key, tgt.key, d))
        desc = CoverDescriptor(src, tgt, d, kind, family=(a1, a2))
        cmap = construct_lemma7_map(desc)
        verify_map(cmap, strict=True)
        prof = ramification_profile(cmap)
        balanced = all(e.target_class is not None for e in prof if vertex_classes(src)[e.source_class - 1].singular)
        out.append(CoverDescriptor(src, tgt, d, kind, balanced, prof, (a1, a2)))
    return tuple(out)


@lru_cache(maxsize=None)
def family_closure(qmax: int) -> dict[tuple, tuple[CoverDescriptor, ...]]:
    """Family covers with both endpoints of Q <= qmax and a source of genus
    at least 2, keyed by canonical (source, target) keys."""
    table: dict[tuple, list] = {}
    for a1, a2 in coprime_pairs(qmax // 2):
        for d in family_descriptors(a1, a2):
            if d.source.Q > qmax or d.target.Q > qmax or genus(d.source) < 2:
                continue
            table.setdefault((d.source.key, d.target.key), []).append(d)
    return {k: tuple(v) for k, v in sorted(table.items())}


# ---------------------------------------------------------------------------
# necessary conditions


def _singular_mass(s: TriangleSignature) -> int:
    return sum(c.angle.numerator * s.Q // c.angle.denominator for c in vertex_classes(s) if c.singular)


def feasible_degrees(A: TriangleSignature, B: TriangleSignature, max_degree: int = DEFAULT_MAX_DEGREE) -> set[int]:
    """Degrees allowed by Riemann-Hurwitz and by comparing total cone angle
    at singular points.  A torus target bounds neither, so degrees are then
    cut off at ``max_degree``."""
    gA, gB = genus(A), genus(B)
    if gA < 1:
        raise DomainError("source must have genus at least 1")
    mA, mB = _singular_mass(A), _singular_mass(B)
    out = set()
    n = 1
    while n <= max_degree:
        R = (2 * gA - 2) - n * (2 * gB - 2)
        if R < 0:
            break
        if mA >= n * mB and (n > 1 or (R == 0 and mA == mB)):
            out.add(n)
        n += 1
    return out


def class_matching(A: TriangleSignature, B: TriangleSignature, n: int) -> list[tuple[ProfileEntry, ...]]:
    """All class-level ramification profiles of a degree n cover.

    Each singular point of A lands on a singular point of B with cone turns
    dividing its own (ramification m = ratio) or on a regular point
    (m = its cone turns); m never exceeds n, and over every singular point
    of B the multiplicities add up to n.
    """
    ca = [c for c in vertex_classes(A) if c.singular]
    cb = {c.vertex_index: c for c in vertex_classes(B) if c.singular}
    options = []
    for c in ca:
        opts = []
        for j, t in cb.items():
            if c.cone_turns % t.cone_turns == 0 and c.cone_turns // t.cone_turns <= n:
                opts.append((j, c.cone_turns // t.cone_turns))
        if c.cone_turns <= n:
            opts.append((None, c.cone_turns))
        options.append(opts)
    need = {j: n * t.class_size for j, t in cb.items()}
    results = []

    def split(k, used, acc):
        if k == len(ca):
            if all(used.get(j, 0) == need[j] for j in cb):
                results.append(tuple(sorted(acc, key=lambda e: (e.source_class, e.target_class or 0))))
            return
        c, opts = ca[k], options[k]

        def place(o, left, used, acc):
            if o == len(opts):
                if left == 0:
                    split(k + 1, used, acc)
                return
            j, m = opts[o]
            hi = left if j is None else min(left, (need[j] - used.get(j, 0)) // m)
            for cnt in range(hi, -1, -1):
                u = dict(used)
                if j is not None:
                    u[j] = u.get(j, 0) + cnt * m
                e = [ProfileEntry(c.vertex_index, j, m, cnt)] if cnt else []
                place(o + 1, left - cnt, u, acc + e)

        place(0, c.class_size, used, acc)

    split(0, {}, [])
    return results


def _is_balanced(profile) -> bool:
    return all(e.target_class is not None for e in profile)


def _fp(sig, i, punctured=()):
    return fingerprint(sig, i, punctured)


def surface_area(sig: TriangleSignature) -> RealCyclotomic:
    """Area of the unfolding at circumdiameter 1: 2Q triangles of area
    sin(a1) sin(a2) sin(a3) / 2."""
    out = RealCyclotomic.rational(sig.Q)
    for i in (1, 2, 3):
        out = out * sin_pi(sig.angle(i))
    return out


def fingerprint_filter(A: TriangleSignature, B: TriangleSignature, profile, n: int = 1) -> Optional[str]:
    """Reason the profile cannot come from a degree ``n`` cover, or None.

    Matched classes must have compatible fingerprints; for an unbalanced
    profile the classes sent to regular points are punctured first.  A cover
    is a local isometry once B is rescaled by some factor s, so the ratio of
    shortest lengths is s for every matched pair and areas satisfy
    area(A) = n s^2 area(B)."""
    to_regular = {e.source_class for e in profile if e.target_class is None}
    to_singular = {e.source_class for e in profile if e.target_class is not None}
    if to_regular & to_singular:
        return None  # a class split between regular and singular images
    pairs = sorted({(e.source_class, e.target_class, e.m) for e in profile if e.target_class is not None})
    if not pairs:
        return None
    punct = frozenset(to_regular)
    try:
        fa = {i: _fp(A, i, punct) for i, _, _ in pairs}
    except InvalidPuncture:
        return None
    fb = {j: _fp(B, j) for _, j, _ in pairs}
    ratio = None
    for i, j, m in pairs:
        x, y = fa[i], fb[j]
        if not punct:
            if x.fp_type is FingerprintType.II:
                return f"corollary4_type2(class={i})"
            if y.fp_type is FingerprintType.II:
                return f"corollary4_type2(target_class={j})"
        verdict = check_cover_fingerprints(x, y, is_apex(A, i), compare_lengths=False)
        if verdict is CoverCompatibility.INCOMPATIBLE or x.cone_angle != m * y.cone_angle:
            tag = "lemma6_punctured_fingerprint" if punct else "lemma4_fingerprint"
            return f"{tag}({i}->{j}: {_fmt_set(x)} vs {_fmt_set(y)}, cone {x.cone_angle}pi vs {y.cone_angle}pi)"
        r = x.length / y.length
        if ratio is None:
            ratio = r
        elif r != ratio:
            return f"length_ratio({i}->{j})"
    if surface_area(A) != n * ratio * ratio * surface_area(B):
        return "area_ratio"
    return None


def _fmt_set(fp: Fingerprint) -> str:
    return "{" + ", ".join(f"{t}pi" for t in fp.sorted_angles()) + "}"


@dataclass
class _DegreeCheck:
    degree: int
    survivors: list = field(default_factory=list)
    reasons: list = field(default_factory=list)


def _check_degree(A, B, n) -> _DegreeCheck:
    out = _DegreeCheck(n)
    profiles = class_matching(A, B, n)
    if not profiles:
        # below the smallest singular cone turns of B every singular point
        # of A must land on a singular point
        sing_b = [c.cone_turns for c in vertex_classes(B) if c.singular]
        lemma = "lemma13" if sing_b and n < min(sing_b) else "lemma2"
        out.reasons.append(f"class_matching(n={n}, {lemma})")
        return out
    for p in profiles:
        why = fingerprint_filter(A, B, p, n)
        if why is None:
            out.survivors.append(p)
        else:
            name, _, rest = why.partition("(")
            out.reasons.append(f"{name}(n={n}, {rest}" if rest else f"{name}(n={n})")
    return out


def filter_chain(A: TriangleSignature, B: TriangleSignature, max_degree: int = DEFAULT_MAX_DEGREE,
                 closure: Optional[dict] = None) -> Verdict:
    """Decide whether a translation cover A -> B of degree at least 2 exists.

    Degree one (a translation equivalence) is reported only through family
    members; a degree-one candidate outside the family that survives the
    filters is mentioned in the notes.  ``closure`` defaults to the family
    closure covering both Q values."""
    if genus(A) < 2:
        raise DomainError(f"source {A} has genus {genus(A)}; need at least 2")
    if A.key == B.key:
        return Verdict(VerdictKind.IMPOSSIBLE, A, B, ("lemma5_self_cover",))
    if not q_compatible(A.Q, B.Q):
        return Verdict(VerdictKind.IMPOSSIBLE, A, B, (f"q_incompatible({A.Q},{B.Q})",))
    degrees = feasible_degrees(A, B, max_degree)
    reasons, alive, notes = [], {}, []
    if not any(n > 1 for n in degrees):
        reasons.append("feasible_degrees(no degree > 1)")
    for n in sorted(degrees):
        chk = _check_degree(A, B, n)
        if chk.survivors:
            alive[n] = chk.survivors
        elif n > 1:
            reasons.extend(dict.fromkeys(chk.reasons))
    if closure is None:
        closure = family_closure(max(A.Q, B.Q))
    known = closure.get((A.key, B.key), ())
    if genus(B) == 1:
        notes.append("torus target: composes with torus self-covers of other degrees")
    if known:
        missing = [d.degree for d in known if d.degree not in alive]
        if missing:
            raise InvariantViolation(f"{A} -> {B}: filters reject family degree {missing}")
        return Verdict(VerdictKind.IN_FAMILY, A, B, tuple(reasons), known, tuple(notes))
    if 1 in alive:
        notes.append("degree 1 not excluded by the filters")
    big = {n: ps for n, ps in alive.items() if n > 1}
    if not big:
        return Verdict(VerdictKind.IMPOSSIBLE, A, B, tuple(reasons), (), tuple(notes))
    diag = tuple(f"degree {n}: {len(ps)} profile(s) survive" for n, ps in sorted(big.items()))
    return Verdict(VerdictKind.UNDECIDED, A, B, tuple(reasons) + diag, (), tuple(notes))


# ---------------------------------------------------------------------------
# search


@dataclass(frozen=True)
class SearchReport:
    qmax: int
    verdicts: tuple[Verdict, ...]

    def by_kind(self, kind: VerdictKind) -> list[Verdict]:
        return [v for v in self.verdicts if v.kind is kind]

    @property
    def in_family(self) -> list[Verdict]:
        return self.by_kind(VerdictKind.IN_FAMILY)

    @property
    def undecided(self) -> list[Verdict]:
        return self.by_kind(VerdictKind.UNDECIDED)

    def impossible_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for v in self.by_kind(VerdictKind.IMPOSSIBLE):
            for r in v.reasons:
                name = r.split("(", 1)[0]
                counts[name] = counts.get(name, 0) + 1
        return dict(sorted(counts.items()))


def search_pairs(qmax: int) -> list[tuple[TriangleSignature, TriangleSignature]]:
    sigs = list(signatures(qmax))
    by_q: dict[int, list] = {}
    for s in sigs:
        by_q.setdefault(s.Q, []).append(s)
    pairs = []
    for A in sigs:
        if genus(A) < 2:
            continue
        for qb in sorted({A.Q, 2 * A.Q, A.Q // 2 if A.Q % 2 == 0 else A.Q}):
            if qb > qmax or not q_compatible(A.Q, qb):
                continue
            for B in by_q.get(qb, []):
                pairs.append((A, B))
    return pairs


def _run_chunk(args):
    qmax, chunk, max_degree = args
    closure = family_closure(qmax)
    return [filter_chain(A, B, max_degree, closure) for A, B in chunk]


def search(qmax: int, workers: int = 1, max_degree: int = DEFAULT_MAX_DEGREE) -> SearchReport:
    if qmax < 3:
        raise DomainError("qmax must be at least 3")
    pairs = search_pairs(qmax)
    if workers <= 1 or len(pairs) < 2:
        verdicts = _run_chunk((qmax, pairs, max_degree))
    else:
        chunks = [pairs[k::workers] for k in range(workers)]
        with ProcessPoolExecutor(workers) as ex:
            parts = list(ex.map(_run_chunk, [(qmax, c, max_degree) for c in chunks]))
        verdicts = [None] * len(pairs)
        for k, part in enumerate(parts):
            verdicts[k::workers] = part
    verdicts.sort(key=lambda v: (v.source.Q, v.source.key, v.target.Q, v.target.key))
    return SearchReport(qmax, tuple(verdicts))
