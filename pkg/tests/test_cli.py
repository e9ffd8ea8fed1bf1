import json
import math
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

from omatch.cli import run_cli

DOCS = Path(__file__).resolve().parents[1] / "docs"
_SCHEMAS = {p.name: json.loads(p.read_text()) for p in DOCS.glob("*.schema.json")}
_REGISTRY = Registry().with_resources(
    (name, Resource.from_contents(s)) for name, s in _SCHEMAS.items()
)


def conforms(doc, schema):
    Draft202012Validator(_SCHEMAS[schema], registry=_REGISTRY).validate(doc)


OMM2 = {"metric": {"kind": "line"}, "servers": [{"pos": -1, "cap": 1}, {"pos": 1, "cap": 1}], "variant": "omm2"}


@pytest.fixture
def files(tmp_path):
    def make(instance=OMM2, requests=(0, -1)):
        i, r = tmp_path / "inst.json", tmp_path / "reqs.json"
        i.write_text(json.dumps(instance) if not isinstance(instance, str) else instance)
        r.write_text(json.dumps({"requests": list(requests)}))
        return str(i), str(r)

    return make


def run(capsys, *argv):
    code = run_cli(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_schemas_are_valid():
    assert len(_SCHEMAS) == 7
    for s in _SCHEMAS.values():
        Draft202012Validator.check_schema(s)
    conforms(OMM2, "instance.schema.json")


def test_solve_adversary_input(capsys, files):
    i, r = files()
    code, out, _ = run(capsys, "solve", "--instance", i, "--requests", r)
    assert code == 0
    doc = json.loads(out)
    conforms(doc, "plan.schema.json")
    assert doc["cost"] == pytest.approx(1.0)
    assert doc["pairs"] == [[0, 1], [1, 0]]


def test_solve_writes_out_file(capsys, files, tmp_path):
    i, r = files()
    dest = tmp_path / "plan.json"
    assert run(capsys, "solve", "--instance", i, "--requests", r, "--out", str(dest))[0] == 0
    assert json.loads(dest.read_text())["cost"] == pytest.approx(1.0)


def test_solve_reports_scale(capsys, files):
    inst = {"metric": {"kind": "line"}, "servers": [{"pos": 0, "cap": 1}, {"pos": 2, "cap": 1}], "variant": "ofal"}
    i, r = files(inst, [1.5])
    doc = json.loads(run(capsys, "solve", "--instance", i, "--requests", r)[1])
    assert doc["scale"] == 2.0
    assert doc["cost"] == pytest.approx(0.25)


def test_malformed_json_exits_2(capsys, files):
    i, r = files("{not json")
    code, out, err = run(capsys, "solve", "--instance", i, "--requests", r)
    assert code == 2 and out == "" and err


def test_invalid_instance_exits_2(capsys, files):
    bad = dict(OMM2, servers=[{"pos": 0, "cap": 1}])
    i, r = files(bad, [0])
    code, _, err = run(capsys, "solve", "--instance", i, "--requests", r)
    assert code == 2 and "omm2" in err


def test_too_many_requests_exits_2(capsys, files):
    i, r = files(OMM2, [0, 0, 0])
    assert run(capsys, "solve", "--instance", i, "--requests", r)[0] == 2


def test_usage_errors_exit_2(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "stress", "--trials", "0")[0] == 2
    assert run(capsys, "play", "--scenario", "ofal9")[0] == 2
    assert run(capsys, "play", "--scenario", "ofal3", "--alg", "permutation")[0] == 2


@pytest.mark.parametrize("mode", ["anti-opt", "one-sided"])
def test_reduce(capsys, files, mode):
    i, r = files(OMM2, [0, -1])
    code, out, _ = run(capsys, "reduce", "--mode", mode, "--instance", i, "--requests", r)
    assert code == 0
    doc = json.loads(out)
    conforms(doc, "reduced.schema.json")
    assert doc["provenance"] == []


def test_reduce_one_sided_rejects_non_anti_opt(capsys, files):
    i, r = files(OMM2, [-1, 1])
    assert run(capsys, "reduce", "--mode", "one-sided", "--instance", i, "--requests", r)[0] == 2


def test_reduce_needs_two_servers(capsys, files):
    inst = {"metric": {"kind": "line"}, "servers": [{"pos": 0, "cap": 2}], "variant": "general"}
    i, r = files(inst, [0])
    assert run(capsys, "reduce", "--mode", "anti-opt", "--instance", i, "--requests", r)[0] == 2


def test_play_ofal3(capsys):
    code, out, _ = run(capsys, "play", "--scenario", "ofal3")
    doc = json.loads(out)
    conforms(doc, "ratio_report.schema.json")
    assert code == 0
    assert doc["ratio"] == pytest.approx(1 + math.sqrt(6), abs=1e-9)
    assert doc["branch"] == "case2-1"


def test_play_punish_ratio_is_inf_string(capsys):
    code, out, _ = run(capsys, "play", "--scenario", "ofal5", "--alg", "farthest")
    doc = json.loads(out)
    conforms(doc, "ratio_report.schema.json")
    assert doc["ratio"] == "inf" and doc["branch"] == "punish-infinite"


def test_verify_bounds_all_policies(capsys):
    code, out, _ = run(capsys, "verify-bounds", "--scenario", "ofal3", "--all-policies")
    assert code == 0
    doc = json.loads(out)
    conforms(doc, "bounds_report.schema.json")
    assert doc["pass"] is True


def test_verify_bounds_csv_and_failure(capsys):
    code, out, _ = run(capsys, "verify-bounds", "--scenario", "ofal5", "--alg", "greedy", "--alg", "right",
                       "--capacity", "3", "--format", "csv")
    assert code == 0
    assert len(out.splitlines()) == 3
    # a punish-only run passes: an unbounded ratio clears any bound
    code, out, _ = run(capsys, "verify-bounds", "--scenario", "ofal5", "--alg", "farthest")
    assert code == 0
    conforms(json.loads(out), "bounds_report.schema.json")


def test_verify_bounds_closed_form_mismatch_exits_1(capsys, monkeypatch):
    from omatch import harness
    from omatch.adversaries import Branch

    monkeypatch.setattr(harness, "closed_form", lambda *a, **k: Branch("case1", 99.0, 1.0))
    code, out, _ = run(capsys, "verify-bounds", "--scenario", "ofal3")
    assert code == 1
    doc = json.loads(out)
    assert doc["pass"] is False and doc["rows"][0]["closed_form"] is False


def test_stress_is_byte_identical(capsys, tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert run(capsys, "stress", "--trials", "100", "--seed", "7", "--out", str(a))[0] == 0
    assert run(capsys, "stress", "--trials", "100", "--seed", "7", "--out", str(b))[0] == 0
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    conforms(doc, "stress_report.schema.json")
    assert doc["violations"] == [] and len(doc["trials"]) == 101


def test_stress_csv(capsys):
    code, out, _ = run(capsys, "stress", "--trials", "5", "--no-plant", "--format", "csv")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "trial,seed,n,greedy_cost,opt_cost,ratio" and len(lines) == 6


def test_stdin_instance(capsys, files, monkeypatch):
    import io

    _, r = files()
    monkeypatch.setattr("sys.stdin", io.StringIO(json.dumps(OMM2)))
    code, out, _ = run(capsys, "solve", "--instance", "-", "--requests", r)
    assert code == 0 and json.loads(out)["cost"] == pytest.approx(1.0)
