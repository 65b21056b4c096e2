"""SVG drawings of unfolded surfaces.

Copies are grouped into panels, one per point of the first vertex class and
per 2pi sheet of its cone, so that copies drawn in the same panel never
overlap.  Sides that are glued together share a stroke colour.
"""

from __future__ import annotations

import colorsys
import math
from xml.sax.saxutils import quoteattr

from .core import TriangleSignature
from .fingerprint import fingerprint
from .unfold import UnfoldedSurface, traverse_vertex_classes, unfold

GOLDEN = (math.sqrt(5) - 1) / 2
PANEL = 240.0
MARGIN = 12.0


def _num(x: float) -> str:
    s = format(x, ".12g")
    return "0" if s == "-0" else s


def _colour(k: int) -> str:
    r, g, b = colorsys.hsv_to_rgb((k * GOLDEN) % 1.0, 0.65, 0.8)
    return "#{:02x}{:02x}{:02x}".format(round(r * 255), round(g * 255), round(b * 255))


def _panels(s: UnfoldedSurface) -> list[list[int]]:
    """Copies around each point of class 1, cut into sheets of total angle 2pi."""
    angle = s.signature.angle(1)
    out = []
    for cycle in traverse_vertex_classes(s)[0].corners:
        sheets: dict[int, list[int]] = {}
        for pos, c in enumerate(cycle):
            sheets.setdefault(int(pos * angle / 2), []).append(c)
        out.extend(sheets[k] for k in sorted(sheets))
    return out


def _edge_colours(s: UnfoldedSurface) -> dict:
    colours, k = {}, 0
    for key in sorted(s.gluing):
        if key in colours:
            continue
        colours[key] = colours[s.gluing[key]] = _colour(k)
        k += 1
    return colours


def _overlay(s: UnfoldedSurface, vertex: int) -> list[tuple[int, tuple, tuple]]:
    """Within each copy, the pieces of the shortest geodesics leaving the
    corner at ``vertex``: whole edges, or the altitude to the opposite side
    (half of a geodesic that reflects back to the same class)."""
    fp = fingerprint(s.signature, vertex, scale=s.scale)
    segs = []
    for c, copy in enumerate(s.copies):
        p = [complex(z) for z in copy.points]
        a = p[vertex - 1]
        for t in sorted(fp.shortest_targets):
            if t != vertex:
                segs.append((c, a, p[t - 1]))
            else:
                u, w = [p[j - 1] for j in (1, 2, 3) if j != vertex]
                d = w - u
                foot = u + d * ((a - u) * d.conjugate()).real / abs(d) ** 2
                segs.append((c, a, foot))
    return segs


def to_svg(sig: TriangleSignature, fingerprint_vertex: int | None = None, scale=1, rotation=0) -> str:
    s = unfold(sig, scale, rotation)
    panels = _panels(s)
    colours = _edge_colours(s)
    pts = [[complex(z) for z in c.points] for c in s.copies]
    radius = max(abs(z) for p in pts for z in p) or 1.0
    unit = (PANEL / 2 - MARGIN) / radius
    cols = math.ceil(math.sqrt(len(panels)))
    rows = math.ceil(len(panels) / cols)
    where = {}
    for k, panel in enumerate(panels):
        cx = PANEL * (k % cols) + PANEL / 2
        cy = PANEL * (k // cols) + PANEL / 2
        for c in panel:
            where[c] = (cx, cy)

    def xy(c, z):
        cx, cy = where[c]
        return _num(cx + unit * z.real), _num(cy - unit * z.imag)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{_num(cols * PANEL)}" '
        f'height="{_num(rows * PANEL)}" viewBox="0 0 {_num(cols * PANEL)} {_num(rows * PANEL)}">',
        f"<title>{sig}</title>",
        '<g id="copies" fill="#f4f4f4" stroke="none">',
    ]
    for c, copy in enumerate(s.copies):
        coords = " ".join(",".join(xy(c, pts[c][i - 1])) for i in _ccw(copy.ccw))
        label = f"k={copy.label.k} r={int(copy.label.reflected)}"
        out.append(f"<polygon points={quoteattr(coords)} data-copy={quoteattr(label)}/>")
    out.append("</g>")
    out.append('<g id="edges" stroke-width="1.5" stroke-linecap="round">')
    for (c, side) in sorted(colours):
        i, j = [v for v in (1, 2, 3) if v != side]
        (x1, y1), (x2, y2) = xy(c, pts[c][i - 1]), xy(c, pts[c][j - 1])
        out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{colours[(c, side)]}"/>')
    out.append("</g>")
    if fingerprint_vertex is not None:
        out.append('<g id="fingerprint" stroke="#000000" stroke-width="3.5" stroke-linecap="round">')
        for c, a, b in _overlay(s, fingerprint_vertex):
            (x1, y1), (x2, y2) = xy(c, a), xy(c, b)
            out.append(f'<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _ccw(ccw: bool) -> tuple[int, int, int]:
    return (1, 2, 3) if ccw else (3, 2, 1)


def panel_count(sig: TriangleSignature) -> int:
    return len(_panels(unfold(sig)))

