"""Command line interface.

Every command prints one JSON document (or CSV for ``search --format csv``)
on stdout.  Exact values are strings: rationals as ``p/q``, angles as
``p/q·pi``, cyclotomic numbers as ``z<n>[c0, c1, ...]``; floats appear only
under ``approx``.

Exit codes: 0 ok, 1 usage, 2 domain error, 3 internal invariant violation or
an undecided pair in a search.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from . import __version__
from .core import TriangleSignature, genus, normalize, shape, vertex_classes
from .covers import (
    CoverDescriptor,
    Verdict,
    VerdictKind,
    construct_lemma7_map,
    family_descriptors,
    filter_chain,
    lemma7_family,
    search,
    verify_map,
)
from .cyclotomic import RealCyclotomic, fmt_angle
from .errors import DomainError, InvariantViolation
from .fingerprint import fingerprint
from .invariants import holonomy_field
from .svg import to_svg


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _approx(x: RealCyclotomic) -> float:
    return float(format(float(x), ".12g"))


def _exact(x: RealCyclotomic) -> dict:
    return {"exact": x.to_string(), "approx": _approx(x)}


def _sig(s: TriangleSignature) -> list[int]:
    return list(s.a)


def _envelope(argv: list[str], signatures, payload) -> dict:
    return {
        "tool": "tricovers",
        "version": __version__,
        "command": argv,
        "signatures": [_sig(s) for s in signatures],
        "payload": payload,
    }


def _info(sig: TriangleSignature) -> dict:
    sh = shape(sig)
    hol = holonomy_field(sig)
    return {
        "Q": sig.Q,
        "genus": genus(sig),
        "classes": [
            {
                "vertex": c.vertex_index,
                "angle": fmt_angle(c.angle),
                "points": c.class_size,
                "cone_turns": c.cone_turns,
                "cone_angle": fmt_angle(Fraction(2 * c.cone_turns)),
                "singular": c.singular,
            }
            for c in vertex_classes(sig)
        ],
        "singular_classes": sum(c.singular for c in vertex_classes(sig)),
        "shape": {
            "isosceles": sh.is_isosceles,
            "apex": sh.apex_index,
            "right": sh.is_right,
            "right_vertex": sh.right_index,
        },
        "holonomy_field": {"normalized_conductor": hol.normalized_conductor, "degree": hol.degree},
    }


def _fingerprint(sig, vertex, punctured, scale) -> dict:
    fp = fingerprint(sig, vertex, punctured, scale)
    return {
        "vertex": vertex,
        "punctured": sorted(punctured),
        "type": fp.fp_type.value,
        "angle_set": [fmt_angle(t) for t in fp.sorted_angles()],
        "cone_angle": fmt_angle(fp.cone_angle),
        "length": _exact(fp.length),
        "shortest_targets": sorted(fp.shortest_targets),
        "directions": [fmt_angle(d) for d in fp.directions],
    }


def _descriptor(d: CoverDescriptor) -> dict:
    return {
        "source": _sig(d.source),
        "target": _sig(d.target),
        "degree": d.degree,
        "kind": d.kind.value,
        "balanced": d.balanced,
        "family": list(d.family),
        "ramification_profile": [
            {"source_class": e.source_class, "target_class": e.target_class, "m": e.m, "count": e.count}
            for e in d.ramification_profile
        ],
    }


def _verdict(v: Verdict) -> dict:
    return {
        "source": _sig(v.source),
        "target": _sig(v.target),
        "verdict": v.kind.value,
        "degrees": list(v.degrees),
        "reasons": list(v.reasons),
        "descriptors": [_descriptor(d) for d in v.descriptors],
        "notes": list(v.notes),
    }


def _csv(verdicts) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["source", "target", "verdict", "degree", "kind", "reasons"])
    for v in verdicts:
        w.writerow([
            str(v.source),
            str(v.target),
            v.kind.value,
            " ".join(str(d) for d in v.degrees),
            " ".join(sorted({d.kind.value for d in v.descriptors})),
            "; ".join(v.reasons),
        ])
    return buf.getvalue()


def _triple(ns) -> TriangleSignature:
    return normalize(ns.a1, ns.a2, ns.a3)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="tricovers", description="Exact computations on triangular billiards surfaces.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def triple(sp):
        for name in ("a1", "a2", "a3"):
            sp.add_argument(name, type=int)

    triple(sub.add_parser("info", help="vertex classes, genus, shape and holonomy field"))

    sp = sub.add_parser("fingerprint", help="fingerprint of a vertex class")
    triple(sp)
    sp.add_argument("--vertex", type=int, required=True, choices=(1, 2, 3))
    sp.add_argument("--puncture", type=int, action="append", default=[], choices=(1, 2, 3))
    sp.add_argument("--scale", type=Fraction, default=Fraction(1))

    sp = sub.add_parser("svg", help="draw the unfolding")
    triple(sp)
    sp.add_argument("-o", "--output", required=True)
    sp.add_argument("--fingerprint-vertex", type=int, choices=(1, 2, 3))

    sp = sub.add_parser("family", help="the covers over the right triangle with acute angles a1, a2")
    sp.add_argument("a1", type=int)
    sp.add_argument("a2", type=int)

    sp = sub.add_parser("pair", help="run the filter chain on one ordered pair")
    for name in ("a1", "a2", "a3", "b1", "b2", "b3"):
        sp.add_argument(name, type=int)

    sp = sub.add_parser("search", help="classify all pairs with Q up to a bound")
    sp.add_argument("--qmax", type=int, required=True)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--workers", type=int, default=1)
    return p


def run(argv: list[str]) -> tuple[int, str]:
    ns = build_parser().parse_args(argv)
    if ns.command == "info":
        sig = _triple(ns)
        return 0, _dump(_envelope(argv, [sig], _info(sig)))
    if ns.command == "fingerprint":
        sig = _triple(ns)
        if ns.scale <= 0:
            raise DomainError("scale must be positive")
        payload = _fingerprint(sig, ns.vertex, frozenset(ns.puncture), RealCyclotomic.rational(ns.scale))
        return 0, _dump(_envelope(argv, [sig], payload))
    if ns.command == "svg":
        sig = _triple(ns)
        text = to_svg(sig, ns.fingerprint_vertex)
        with open(ns.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        payload = {"output": ns.output, "polygons": 2 * sig.Q}
        return 0, _dump(_envelope(argv, [sig], payload))
    if ns.command == "family":
        rec = lemma7_family(ns.a1, ns.a2)
        descs = family_descriptors(ns.a1, ns.a2)
        payload = {
            "Y": _sig(rec.Y),
            "X1": _sig(rec.X1),
            "f1_degree": rec.f1_degree,
            "X2": _sig(rec.X2),
            "f2_degree": rec.f2_degree,
            "composition": [_sig(s) for s in rec.composition] if rec.composition else None,
            "degenerate": rec.degenerate,
            "covers": [dict(_descriptor(d), verified=verify_map(construct_lemma7_map(d))) for d in descs],
        }
        return 0, _dump(_envelope(argv, [rec.Y, rec.X1, rec.X2], payload))
    if ns.command == "pair":
        A = normalize(ns.a1, ns.a2, ns.a3)
        B = normalize(ns.b1, ns.b2, ns.b3)
        v = filter_chain(A, B)
        code = 3 if v.kind is VerdictKind.UNDECIDED else 0
        return code, _dump(_envelope(argv, [A, B], _verdict(v)))
    if ns.command == "search":
        if ns.qmax < 3:
            raise UsageError("--qmax must be at least 3")
        report = search(ns.qmax, workers=max(1, ns.workers))
        code = 3 if report.undecided else 0
        if ns.format == "csv":
            return code, _csv(report.verdicts)
        payload = {
            "qmax": ns.qmax,
            "pairs": len(report.verdicts),
            "impossible_by_reason": report.impossible_counts(),
            "in_family": [_verdict(v) for v in report.in_family],
            "undecided": [_verdict(v) for v in report.undecided],
        }
        return code, _dump(_envelope(argv, [], payload))
    raise UsageError(f"unknown command {ns.command}")


def _dump(obj) -> str:
    return json.dumps(obj, ensure_ascii=False, indent=2) + "\n"


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        code, text = run(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return 3
    sys.stdout.write(text)
    return code

