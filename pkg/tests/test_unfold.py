import re
from fractions import Fraction
from itertools import product

import pytest

from tricovers.core import TriangleSignature, genus, signatures, vertex_classes
from tricovers.cyclotomic import RealCyclotomic, cos_pi, sin_pi
from tricovers.errors import DomainError, InconsistentGluing
from tricovers.svg import panel_count, to_svg
from tricovers.unfold import (
    UnfoldedSurface,
    check_gluing,
    dihedral_group,
    euler_and_area,
    euler_characteristic,
    traverse_vertex_classes,
    unfold,
)

SQRT2 = 2 * cos_pi(Fraction(1, 4))


def triangle_area(sig, scale=1):
    # half of b * c * sin(angle at v1), sides at circumdiameter ``scale``
    return sin_pi(sig.angle(1)) * sin_pi(sig.angle(2)) * sin_pi(sig.angle(3)) * scale * scale * Fraction(1, 2)


def test_torus_sizes():
    s = unfold(TriangleSignature(1, 1, 2))
    assert s.n_copies == 8
    assert len(s.gluing) // 2 == 12
    assert len(unfold(TriangleSignature(1, 1, 1)).copies) == 6


def test_345_area():
    sig = TriangleSignature(3, 4, 5)
    s = unfold(sig)
    assert len(s.copies) == 24
    assert euler_and_area(s).area == 24 * triangle_area(sig)


def test_base_placement():
    sig = TriangleSignature(3, 4, 5)
    c = unfold(sig).copies[0]
    (x1, y1), (x2, y2), _ = c.vertices
    assert x1 == 0 and y1 == 0 and y2 == 0 and x2 > 0
    for i in (1, 2, 3):
        p, q = [c.points[j - 1] for j in (1, 2, 3) if j != i]
        d = p - q
        assert d * d.conjugate() == sin_pi(sig.angle(i)) ** 2


def test_traversal_examples():
    cyc = traverse_vertex_classes(unfold(TriangleSignature(3, 4, 5)))
    assert cyc[2].points == 1 and cyc[2].cone_turns == (5,)
    cyc = traverse_vertex_classes(unfold(TriangleSignature(1, 2, 3)))
    assert all(t == 1 for c in cyc for t in c.cone_turns)
    assert sum(c.points for c in cyc) == 6
    cyc = traverse_vertex_classes(unfold(TriangleSignature(1, 1, 4)))
    assert cyc[2].points == 2 and cyc[2].cone_turns == (2, 2)


def test_euler_examples():
    e = euler_and_area(unfold(TriangleSignature(3, 4, 5)))
    assert (e.V, e.E, e.F, e.genus) == (8, 36, 24, 3)
    e = euler_and_area(unfold(TriangleSignature(1, 1, 2)))
    assert e.chi == 0 and e.genus == 1


def test_area_scales_quadratically():
    sig = TriangleSignature(2, 3, 4)
    a1 = euler_and_area(unfold(sig)).area
    a2 = euler_and_area(unfold(sig, SQRT2)).area
    assert a2 == 2 * a1


def test_dihedral_group_law():
    for Q in (3, 5, 12):
        G = dihedral_group(Q)
        assert len(G) == 2 * Q and len({g.index for g in G}) == 2 * Q
        for g, h, k in product(G[:: max(1, Q // 3)], repeat=3):
            assert (g * h) * k == g * (h * k)
            assert g * g.inverse() == G[0]


def test_gluing_involution_all_small():
    for sig in signatures(30):
        s = unfold(sig)
        g = s.gluing
        assert len(g) == 3 * s.n_copies
        for key, val in g.items():
            assert val != key and g[val] == key


def test_gluing_sides_are_translates():
    for sig in signatures(16):
        check_gluing(unfold(sig))


def test_check_gluing_catches_damage():
    s = unfold(TriangleSignature(2, 3, 4))
    bad = dict(s.gluing)
    a, b = (0, 1), (1, 1)
    bad[a], bad[b] = bad[b], bad[a]

    class Broken(UnfoldedSurface):
        @property
        def gluing(self):
            return bad

    with pytest.raises(InconsistentGluing):
        check_gluing(Broken(s.signature, s.scale, s.rotation))


def test_traversal_matches_formulas():
    for sig in signatures(30):
        s = unfold(sig)
        cyc = traverse_vertex_classes(s)
        for c, v in zip(cyc, vertex_classes(sig)):
            assert c.points == v.class_size
            assert set(c.cone_turns) == {v.cone_turns}
        V, E, F = euler_characteristic(s)
        assert 2 - (V - E + F) == 2 * genus(sig)


def test_copies_are_counterclockwise():
    for c in unfold(TriangleSignature(1, 2, 4)).copies:
        assert c.area().sign() == 1


def test_nonpositive_scale():
    with pytest.raises(DomainError):
        unfold(TriangleSignature(1, 2, 4), RealCyclotomic.rational(0))


# -- svg -------------------------------------------------------------------


def test_svg_polygon_count_and_determinism():
    sig = TriangleSignature(3, 4, 5)
    text = to_svg(sig)
    assert text.count("<polygon") == 24
    assert text == to_svg(sig)
    assert panel_count(sig) == 3


def test_svg_glued_edges_share_colour():
    sig = TriangleSignature(1, 1, 4)
    lines = re.findall(r'<line [^>]*stroke="(#[0-9a-f]{6})"', to_svg(sig))
    assert len(lines) == 3 * 2 * sig.Q
    counts = {}
    for colour in lines:
        counts[colour] = counts.get(colour, 0) + 1
    assert set(counts.values()) == {2}


def test_svg_overlay_is_thicker():
    text = to_svg(TriangleSignature(1, 1, 4), fingerprint_vertex=3)
    widths = dict(re.findall(r'<g id="(\w+)"[^>]*stroke-width="([\d.]+)"', text))
    assert float(widths["fingerprint"]) > float(widths["edges"])
    overlay = text.split('<g id="fingerprint"')[1]
    assert overlay.count("<line") > 0
