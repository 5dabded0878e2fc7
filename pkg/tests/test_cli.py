from __future__ import annotations

import json
import subprocess
import sys

import pytest

from hitchmono.cli import main
from hitchmono.serialize import SchemaError, graph_from_json, graph_to_json, to_jsonable
from hitchmono.spectral_graph import build


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


# -- graph -----------------------------------------------------------------------------


def test_graph_json(capsys):
    code, out, _ = run(capsys, "graph", "--genus", "3", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert doc["vertices"] == 8 and len(doc["edges"]) == 16
    assert set(doc) == {"genus", "vertices", "vertex_order", "edges", "faces"}


def test_graph_dot(capsys):
    code, out, _ = run(capsys, "graph", "--genus", "4", "--format", "dot")
    assert code == 0
    assert out.startswith("graph ") and "digraph" not in out and "->" not in out
    assert out.count(" -- ") == 22
    assert 'label="u6"' in out


def test_graph_text(capsys):
    code, out, _ = run(capsys, "graph", "--genus", "3", "--format", "text")
    assert code == 0 and out.startswith("genus 3: 8 vertices, 16 edges")


def test_graph_low_genus(capsys):
    code, out, err = run(capsys, "graph", "--genus", "2")
    assert code == 2 and out == ""
    assert "genus ≥ 3 required" in err


@pytest.mark.parametrize("genus", [3, 4, 7])
def test_json_round_trip(genus):
    g = build(genus)
    assert graph_from_json(graph_to_json(g)) == g


def test_import_relabels_by_vertex_order():
    g = build(4)
    doc = json.loads(graph_to_json(g))
    n = doc["vertices"]
    # rename vertex v to n + 1 - v and record that in vertex_order
    for e in doc["edges"]:
        e["ends"] = [n + 1 - v for v in e["ends"]]
    doc["vertex_order"] = [n + 1 - v for v in doc["vertex_order"]]
    assert graph_from_json(json.dumps(doc)) == g


@pytest.mark.parametrize("text", ["not json", "[]", '{"genus": 3}',
                                  '{"genus": 3, "vertices": 2, "edges": [{"id": 0, "kind": "x", '
                                  '"index": 1, "ends": [1, 2]}], "faces": []}'])
def test_schema_errors(text):
    with pytest.raises(SchemaError):
        graph_from_json(text)


def test_graph_file_round_trip(tmp_path, capsys):
    path = tmp_path / "g.json"
    assert main(["graph", "--genus", "5", "--out", str(path)]) == 0
    code, out, _ = run(capsys, "graph", "--graph-file", str(path))
    assert code == 0 and out == path.read_text()


# -- verify ----------------------------------------------------------------------------


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--genus", "4")
    rep = json.loads(out)
    assert code == 0 and rep["passed"]
    assert rep["data"]["group_order"] == str(479001600 * 2 ** 80)
    assert "timings" not in rep


def test_verify_genus_three_reports_special_edges(capsys):
    code, out, err = run(capsys, "verify", "--genus", "3")
    rep = json.loads(out)
    failed = [c for c in rep["checks"] if not c["passed"]]
    assert code == 1
    assert [c["name"] for c in failed] == ["graph: two special E0 edges"]
    assert failed[0]["witness"]
    assert "two special E0 edges" in err
    assert rep["data"]["group_order"] == str(40320 * 2 ** 36)


def test_verify_filter(capsys):
    code, out, _ = run(capsys, "verify", "--genus", "3", "--checks", "coxeter")
    rep = json.loads(out)
    assert code == 0
    assert rep["checks"] and all(c["name"].startswith("coxeter") for c in rep["checks"])


def test_verify_unknown_group(capsys):
    code, _, err = run(capsys, "verify", "--genus", "3", "--checks", "coxeter,typo")
    assert code == 2 and "typo" in err


def test_verify_corrupted_graph_file(tmp_path, capsys):
    doc = json.loads(graph_to_json(build(5)))
    doc["edges"][2]["ends"] = [1, 9]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc))
    code, out, err = run(capsys, "verify", "--graph-file", str(path))
    rep = json.loads(out)
    assert code == 1
    failed = [c["name"] for c in rep["checks"] if not c["passed"]]
    assert "graph: faces are cycles" in failed
    assert all(c["witness"] is not None for c in rep["checks"] if not c["passed"])


def test_verify_malformed_graph_file(tmp_path, capsys):
    path = tmp_path / "bad.json"
    path.write_text('{"genus": 4}')
    code, _, err = run(capsys, "verify", "--graph-file", str(path))
    assert code == 2 and "vertices" in err


def test_verify_missing_file(capsys):
    code, _, _ = run(capsys, "verify", "--graph-file", "/nonexistent/graph.json")
    assert code == 2


def test_verify_is_deterministic(capsys, monkeypatch):
    _, first, _ = run(capsys, "verify", "--genus", "5")
    monkeypatch.setenv("HITCHMONO_THREADS", "3")
    _, second, _ = run(capsys, "verify", "--genus", "5")
    assert first == second


def test_bad_thread_setting(capsys, monkeypatch):
    monkeypatch.setenv("HITCHMONO_THREADS", "0")
    code, _, _ = run(capsys, "verify", "--genus", "3")
    assert code == 2


def test_timings_flag(capsys):
    _, out, _ = run(capsys, "verify", "--genus", "3", "--checks", "coxeter", "--timings")
    assert "verify" in json.loads(out)["timings"]


def test_verify_text(capsys):
    code, out, _ = run(capsys, "verify", "--genus", "4", "--format", "text")
    assert code == 0
    assert "PASS  coxeter: braid relation" in out and "FAIL" not in out


# -- orbits and components -------------------------------------------------------------


def test_orbits_enumerate(capsys):
    code, out, _ = run(capsys, "orbits", "--genus", "3", "--enumerate")
    data = json.loads(out)["data"]
    assert code == 0
    assert data["orbit_count"] == 66 and len(data["orbits"]) == 66
    assert all("euler_class" in o for o in data["orbits"])


def test_orbits_enumerate_guard(capsys):
    code, _, err = run(capsys, "orbits", "--genus", "7", "--enumerate")
    assert code == 2 and "--classify" in err


def test_orbits_classify_large(capsys):
    code, out, _ = run(capsys, "orbits", "--genus", "7")
    data = json.loads(out)["data"]
    assert code == 0
    assert data["mode"] == "classify"
    assert data["enumeration"] == "skipped: state space too large"
    assert data["orbit_count"] == 2 ** 14 + 6


def test_enumerate_and_classify_are_exclusive():
    with pytest.raises(SystemExit) as info:
        main(["orbits", "--genus", "3", "--enumerate", "--classify"])
    assert info.value.code == 2


def test_components(capsys):
    code, out, _ = run(capsys, "components", "--genus", "3")
    data = json.loads(out)["data"]
    assert code == 0
    assert {"as_complex": data["as_complex"], "full_real": data["full_real"]} == \
        {"as_complex": 66, "full_real": 131}
    assert data["enumerated_orbits"] == 66


def test_components_genus_two(capsys):
    code, out, _ = run(capsys, "components", "--genus", "2")
    data = json.loads(out)["data"]
    assert code == 0
    assert (data["as_complex"], data["full_real"]) == (17, 33)
    assert data["enumerated_orbits"] is None and data["notes"]


def test_generators(capsys):
    code, out, _ = run(capsys, "generators", "--genus", "3")
    doc = json.loads(out)
    assert code == 0
    assert len(doc["generators"]) == 16 and len(doc["basis"]) == 12
    assert all(len(g["p2_matrix"]) == 12 for g in doc["generators"])


def test_report(capsys):
    code, out, _ = run(capsys, "report", "--genus", "4")
    rep = json.loads(out)
    assert code == 0
    assert set(rep["data"]) == {"verify", "orbits", "components"}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "hitchmono", "components", "--genus", "4"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["data"]["full_real"] == 517


def test_big_integers_become_strings():
    assert to_jsonable(2 ** 80) == str(2 ** 80)
    assert to_jsonable(12) == 12
