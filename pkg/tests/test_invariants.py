import cmath
import math
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tricovers.core import TriangleSignature, signatures
from tricovers.covers import coprime_pairs, lemma7_placements, surface_area
from tricovers.cyclotomic import CyclotomicNumber, RealCyclotomic, cos_pi, normalize_conductor, sin_pi
from tricovers.errors import DomainError
from tricovers.invariants import (
    holonomy_field,
    j_compare,
    j_invariant,
    j_of_polygons,
    q_compatible,
    real_subfield_equal,
    real_subfield_oracle,
    same_holonomy,
)
from tricovers.unfold import euler_and_area, unfold

F = Fraction


def embedded_area(J):
    """Pair J with the complex embedding of both coordinates: the result is
    twice the total signed area."""
    d = J.dimension
    z = [cmath.exp(2j * math.pi * k / J.conductor) for k in range(d)]
    ex = np.array(z + [0] * d, dtype=complex)
    ey = np.array([0] * d + z, dtype=complex)
    M = np.array(J.num, dtype=float) / J.den
    return (ex @ M @ ey).real / 2


def test_antisymmetric():
    for sig in list(signatures(14)):
        assert j_invariant(sig).is_antisymmetric()


def test_embedding_recovers_area():
    for key in [(1, 1, 4), (3, 4, 5), (2, 3, 4), (1, 5, 9)]:
        sig = TriangleSignature(*key)
        exact = euler_and_area(unfold(sig)).area
        assert exact == surface_area(sig)
        area = float(exact)
        assert abs(embedded_area(j_invariant(sig)) - area) < 1e-9


def _random_vector(rng, n):
    x = CyclotomicNumber.rational(F(rng.randint(-9, 9), rng.randint(1, 5)))
    if rng.random() < 0.5:
        x = x + CyclotomicNumber.root_of_unity(rng.randrange(n), n) * rng.randint(-3, 3)
    y = RealCyclotomic.rational(F(rng.randint(-9, 9), rng.randint(1, 5))) + cos_pi(F(2 * rng.randrange(n), n))
    return x.real_part(), y


def test_translation_invariance():
    rng = random.Random(20240521)
    for sig in signatures(20):
        polys = unfold(sig).polygons()
        J = j_of_polygons(polys, 4 * sig.Q)
        pool = [_random_vector(rng, 4 * sig.Q) for _ in range(12)]
        for _ in range(20):
            moved = []
            for p in polys:
                tx, ty = rng.choice(pool)
                moved.append([(x + tx, y + ty) for x, y in p])
            assert j_of_polygons(moved, 4 * sig.Q) == J, sig


def test_cutting_preserves_j():
    # split every copy at the midpoint of one side
    sig = TriangleSignature(2, 3, 4)
    polys = unfold(sig).polygons()
    pieces = []
    for a, b, c in polys:
        m = tuple((u + v) * F(1, 2) for u, v in zip(b, c))
        pieces += [[a, b, m], [a, m, c]]
    assert j_of_polygons(pieces, 4 * sig.Q) == j_invariant(sig)


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(list(signatures(12))), st.fractions(min_value=F(1, 20), max_value=20))
def test_quadratic_scaling(sig, c):
    assert j_invariant(sig, RealCyclotomic.rational(c)) == j_invariant(sig).scaled(c * c)


def test_irrational_scaling():
    sig = TriangleSignature(1, 2, 5)
    r2 = 2 * cos_pi(F(1, 4))
    assert j_invariant(sig, r2) == j_invariant(sig).scaled(2)


def test_rotation_invariance():
    sig = TriangleSignature(2, 3, 4)
    assert j_invariant(sig, rotation=F(2, 9)) == j_invariant(sig)


def test_j_compare_trivial():
    J = j_invariant(TriangleSignature(3, 4, 5))
    assert j_compare(J, J, 1)
    assert j_compare(J.scaled(2), J, 2)
    assert not j_compare(J, J, 2)
    assert J + J == J.scaled(2)


def _placed(a1, a2):
    return {p.signature.key: p for p in lemma7_placements(a1, a2)}


def test_lemma8_examples():
    p = _placed(1, 2)
    jx = j_invariant(p[(1, 1, 4)].signature, p[(1, 1, 4)].scale, p[(1, 1, 4)].rotation)
    jy = j_invariant(p[(1, 2, 3)].signature, p[(1, 2, 3)].scale, p[(1, 2, 3)].rotation)
    assert j_compare(jx, jy, 2)
    p = _placed(2, 3)
    jx = j_invariant(p[(3, 3, 4)].signature, p[(3, 3, 4)].scale, p[(3, 3, 4)].rotation)
    jy = j_invariant(p[(2, 3, 5)].signature, p[(2, 3, 5)].scale, p[(2, 3, 5)].rotation)
    assert j_compare(jx, jy, 2)
    assert not j_compare(jx, jy, 1)


def test_lemma8_family():
    for a1, a2 in coprime_pairs(12):
        Y, X1, X2 = lemma7_placements(a1, a2)
        jy = j_invariant(Y.signature, Y.scale, Y.rotation)
        for X in (X1, X2):
            jx = j_invariant(X.signature, X.scale, X.rotation)
            assert j_compare(jx, jy, X.degree), (a1, a2, X.signature)


def test_distinct_tori_have_distinct_j():
    # X(1,1,2) and X(1,2,3) at circumdiameter 1 and any common rational rescaling
    a = j_invariant(TriangleSignature(1, 1, 2))
    b = j_invariant(TriangleSignature(1, 2, 3))
    ratio = float(euler_and_area(unfold(TriangleSignature(1, 1, 2))).area) / float(
        euler_and_area(unfold(TriangleSignature(1, 2, 3))).area)
    assert not any(a == b.scaled(F(ratio).limit_denominator(k)) for k in (10, 100, 1000))


# -- holonomy field ----------------------------------------------------------


def test_holonomy_examples():
    h = holonomy_field(TriangleSignature(3, 4, 5))
    assert (h.normalized_conductor, h.degree) == (12, 2)
    assert (2 * cos_pi(F(1, 6))) ** 2 == 3
    assert holonomy_field(TriangleSignature(1, 1, 1)).degree == 1
    assert holonomy_field(TriangleSignature(1, 1, 3)) == holonomy_field(TriangleSignature(2, 3, 5))


@pytest.mark.parametrize("m,n,same,compatible", [
    (5, 10, True, True),
    (12, 24, False, False),
    (7, 7, True, True),
    (8, 16, False, False),
    (3, 6, True, True),
    (6, 12, False, False),
])
def test_holonomy_predicates(m, n, same, compatible):
    assert same_holonomy(m, n) is same
    assert q_compatible(m, n) is compatible
    assert real_subfield_oracle(m, n) is same


def test_oracle_agrees_on_square():
    for m in range(3, 201):
        for n in range(3, 201):
            assert same_holonomy(m, n) == real_subfield_oracle(m, n), (m, n)


def test_galois_ground_truth():
    # the conductor test misses only the fields equal to Q: phi(m) = 2
    disagree = set()
    for m in range(3, 61):
        for n in range(3, 61):
            if real_subfield_equal(m, n) != same_holonomy(m, n):
                disagree.add((m, n))
    assert disagree == {(3, 4), (4, 3), (4, 6), (6, 4)}
    assert all(normalize_conductor(m) != normalize_conductor(n) for m, n in disagree)


def test_oracle_domain():
    with pytest.raises(DomainError):
        real_subfield_oracle(2, 5)


def test_sin_identity_used_for_area():
    # 2Q copies of area sin a1 sin a2 sin a3 / 2
    sig = TriangleSignature(3, 4, 5)
    assert surface_area(sig) == 12 * sin_pi(F(1, 4)) * sin_pi(F(1, 3)) * sin_pi(F(5, 12))
