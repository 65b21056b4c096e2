import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tricovers import __version__
from tricovers.cli import main
from tricovers.core import TriangleSignature
from tricovers.covers import family_closure
from tricovers.cyclotomic import fmt_angle, parse, parse_angle
from tricovers.fingerprint import fingerprint


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    doc = json.loads(out)
    assert doc["tool"] == "tricovers" and doc["version"] == __version__
    assert doc["command"] == list(argv)
    return doc


def exact_strings(obj):
    """Every exact value in a payload: angles and ``exact`` fields."""
    if isinstance(obj, dict):
        for k, v in obj.items():
            if k == "exact":
                yield "number", v
            elif isinstance(v, str) and v.endswith("·pi"):
                yield "angle", v
            else:
                yield from exact_strings(v)
    elif isinstance(obj, list):
        for v in obj:
            if isinstance(v, str) and v.endswith("·pi"):
                yield "angle", v
            else:
                yield from exact_strings(v)


def assert_round_trip(doc):
    for kind, text in exact_strings(doc):
        if kind == "angle":
            assert fmt_angle(parse_angle(text)) == text
        else:
            assert parse(text).to_string() == text


def test_info(capsys):
    doc = run_json(capsys, "info", "3", "4", "5")
    p = doc["payload"]
    assert p["genus"] == 3 and p["singular_classes"] == 1
    assert p["holonomy_field"] == {"normalized_conductor": 12, "degree": 2}
    assert [c["cone_angle"] for c in p["classes"]] == ["2·pi", "2·pi", "10·pi"]
    assert_round_trip(doc)
    p = run_json(capsys, "info", "1", "1", "2")["payload"]
    assert p["genus"] == 1 and p["singular_classes"] == 0


def test_info_domain_error(capsys):
    code, out, err = run(capsys, "info", "0", "1", "1")
    assert code == 2 and out == ""


def test_fingerprint(capsys):
    doc = run_json(capsys, "fingerprint", "3", "4", "5", "--vertex", "3")
    p = doc["payload"]
    assert p["type"] == "II"
    assert p["angle_set"] == ["1/3·pi", "1/2·pi"]
    assert p["cone_angle"] == "10·pi"
    assert parse(p["length"]["exact"]) == fingerprint(TriangleSignature(3, 4, 5), 3).length
    assert abs(p["length"]["approx"] - 1.22474487139) < 1e-11
    assert_round_trip(doc)


def test_fingerprint_scale(capsys):
    p = run_json(capsys, "fingerprint", "1", "2", "2", "--vertex", "2", "--scale", "3/2")["payload"]
    fp = fingerprint(TriangleSignature(1, 2, 2), 2, scale=Fraction(3, 2))
    assert parse(p["length"]["exact"]) == fp.length


def test_fingerprint_errors(capsys):
    code, _, err = run(capsys, "fingerprint", "1", "1", "2", "--vertex", "1")
    assert code == 2 and "surface has no singularities" in err
    code, _, err = run(capsys, "fingerprint", "2", "3", "4", "--vertex", "1", "--puncture", "1")
    assert code == 2
    code, _, _ = run(capsys, "fingerprint", "2", "3", "4", "--vertex", "7")
    assert code == 1


def test_svg(tmp_path, capsys):
    out = tmp_path / "out.svg"
    doc = run_json(capsys, "svg", "3", "4", "5", "-o", str(out))
    text = out.read_text(encoding="utf-8")
    assert text.count("<polygon") == 24 == doc["payload"]["polygons"]
    run_json(capsys, "svg", "3", "4", "5", "-o", str(out))
    assert out.read_text(encoding="utf-8") == text


def test_family(capsys):
    p = run_json(capsys, "family", "2", "3")["payload"]
    assert p["Y"] == [5, 2, 3] and p["f1_degree"] == 1 and p["f2_degree"] == 2
    assert p["covers"] and all(c["verified"] for c in p["covers"])
    code, _, _ = run(capsys, "family", "2", "4")
    assert code == 2


def test_pair(capsys):
    p = run_json(capsys, "pair", "1", "3", "6", "2", "3", "5")["payload"]
    assert p["verdict"] == "Impossible"
    assert any(r.startswith("lemma4_fingerprint") for r in p["reasons"])
    p = run_json(capsys, "pair", "4", "1", "1", "1", "2", "3")["payload"]
    assert p["verdict"] == "InFamily" and p["degrees"] == [2]


def test_usage_errors(capsys):
    assert run(capsys, "bogus")[0] == 1
    assert run(capsys)[0] == 1
    assert run(capsys, "info", "1", "2")[0] == 1
    assert run(capsys, "search", "--qmax", "12", "--format", "xml")[0] == 1
    assert run(capsys, "search", "--qmax", "2")[0] == 1


def test_search_empty_csv(capsys):
    code, out, _ = run(capsys, "search", "--qmax", "3", "--format", "csv")
    assert code == 0
    assert out == "source,target,verdict,degree,kind,reasons\n"


def test_search_json_in_family(capsys):
    p = run_json(capsys, "search", "--qmax", "12")["payload"]
    assert p["undecided"] == []
    keys = {(tuple(sorted(v["source"])), tuple(sorted(v["target"]))) for v in p["in_family"]}
    assert keys == set(family_closure(12))
    assert sum(p["impossible_by_reason"].values()) >= p["pairs"] - len(keys)


def test_search_csv_deterministic(capsys):
    _, first, _ = run(capsys, "search", "--qmax", "24", "--format", "csv")
    _, second, _ = run(capsys, "search", "--qmax", "24", "--format", "csv", "--workers", "2")
    assert first == second
    assert "\r" not in first
    rows = list(csv.DictReader(io.StringIO(first)))
    assert {r["verdict"] for r in rows} == {"Impossible", "InFamily"}


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "tricovers", "info", "1", "1", "4"],
                         capture_output=True, text=True, check=True)
    assert json.loads(res.stdout)["payload"]["genus"] == 2


@settings(max_examples=25, deadline=None)
@given(st.tuples(*(st.integers(1, 12),) * 3))
def test_info_round_trip_and_determinism(t):
    argv = ["info", *map(str, t)]
    out = []
    for _ in range(2):
        buf = io.StringIO()
        old, sys.stdout = sys.stdout, buf
        try:
            assert main(argv) == 0
        finally:
            sys.stdout = old
        out.append(buf.getvalue())
    assert out[0] == out[1]
    doc = json.loads(out[0])
    assert_round_trip(doc)
    assert json.dumps(doc, ensure_ascii=False, indent=2) + "\n" == out[0]


@pytest.mark.parametrize("sig,vertex", [((3, 4, 5), 3), ((1, 1, 4), 3), ((2, 3, 7), 1), ((1, 2, 2), 2)])
def test_fingerprint_json_round_trip(capsys, sig, vertex):
    doc = run_json(capsys, "fingerprint", *map(str, sig), "--vertex", str(vertex))
    assert_round_trip(doc)
    fp = fingerprint(TriangleSignature(*sig), vertex)
    assert {parse_angle(a) for a in doc["payload"]["angle_set"]} == fp.angle_set


def test_unreduced_input_is_normalized(capsys):
    doc = run_json(capsys, "info", "2", "2", "4")
    assert doc["signatures"] == [[1, 1, 2]]
