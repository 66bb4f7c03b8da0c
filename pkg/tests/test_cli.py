import json

import pytest

from patproj.cli import main

from conftest import DATA, GOLDEN


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def test_lattice_dot(capsys):
    code, out, _ = run(capsys, "lattice", "--csv", DATA / "intervals.csv", "--format", "dot")
    assert code == 0
    assert out == (GOLDEN / "intervals_lattice.dot").read_text()


def test_lattice_json_threads_identical(capsys):
    outs = []
    for t in (1, 3):
        code, out, _ = run(capsys, "lattice", "--csv", DATA / "intervals.csv", "--threads", t)
        assert code == 0
        outs.append(out)
    assert outs[0] == outs[1] == (GOLDEN / "intervals_lattice.json").read_text()
    assert len(json.loads(outs[0])["concepts"]) == 7


def test_lattice_from_cxt_is_isomorphic(capsys):
    _, a, _ = run(capsys, "lattice", "--csv", DATA / "intervals.csv")
    _, b, _ = run(capsys, "lattice", "--cxt", DATA / "intervals_minimal.cxt")
    ext = lambda s: [c["extent"] for c in json.loads(s)["concepts"]]  # noqa: E731
    assert ext(a) == ext(b)
    assert json.loads(a)["covers"] == json.loads(b)["covers"]


def test_empty_context(capsys, tmp_path):
    p = tmp_path / "empty.cxt"
    p.write_text("B\n\n0\n0\n\n")
    code, out, _ = run(capsys, "lattice", "--cxt", p)
    assert code == 0
    assert json.loads(out) == {"concepts": [{"extent": [], "intent": "{}"}], "covers": []}


def test_project_aggregated_length(capsys):
    code, out, _ = run(capsys, "project", "--csv", DATA / "intervals.csv", "--aggregated-length", "2")
    assert code == 0
    intents = [c["intent"] for c in json.loads(out)["concepts"]]
    assert "<[1,2];[1,2]>" not in intents and "<[2,3];[2,2]>" in intents


def test_project_folds_thresholds(capsys):
    _, a, _ = run(capsys, "project", "--csv", DATA / "intervals.csv", "--aggregated-length", "2")
    _, b, _ = run(capsys, "project", "--csv", DATA / "intervals.csv", "--aggregated-length", "5",
                  "--kernel", '{"kind": "aggregated_length", "threshold": 2}')
    assert a == b


def test_project_identity_matches_lattice(capsys):
    _, a, _ = run(capsys, "lattice", "--cxt", DATA / "pairs.cxt")
    everything = json.dumps({"lattice": "powerset", "fixed_point": [[], ["a"], ["b"], ["c"], ["a", "b"],
                                                                     ["a", "c"], ["b", "c"], ["a", "b", "c"]]})
    _, b, _ = run(capsys, "project", "--cxt", DATA / "pairs.cxt", "--kernel", everything)
    assert a == b


def test_project_drop_a(capsys):
    code, out, _ = run(capsys, "project", "--cxt", DATA / "pairs.cxt", "--kernel", DATA / "drop_a_kernel.json")
    assert code == 0
    assert out == (GOLDEN / "pairs_projected_lattice.json").read_text()
    intents = [c["intent"] for c in json.loads(out)["concepts"]]
    assert "{a}" not in intents


def test_project_mixed_kernels(capsys):
    k = json.dumps({"lattice": "intents", "fixed_point": [
        "<[-inf,+inf];[-inf,+inf]>", "<[1,3];[1,2]>", "<[1,2];[1,2]>", "<[1,1];[1,1]>", "TOP"]})
    code, out, _ = run(capsys, "project", "--csv", DATA / "intervals.csv", "--kernel", k, "--aggregated-length", "2")
    assert code == 0
    intents = [c["intent"] for c in json.loads(out)["concepts"]]
    assert intents == ["TOP", "<[1,1];[1,1]>", "<[-inf,+inf];[-inf,+inf]>"]


def test_project_split(capsys):
    code, out, _ = run(capsys, "project", "--ps", DATA / "split_ps.json", "--kernel", DATA / "split_kernel.json")
    assert code == 0
    intents = [c["intent"] for c in json.loads(out)["concepts"]]
    assert "z" not in intents and intents[-1] == "bot"


def test_repctx_goldens(capsys):
    for builder, golden in (("interordinal", "intervals_interordinal.cxt"), ("minimal", "intervals_minimal.cxt")):
        code, out, _ = run(capsys, "repctx", "--csv", DATA / "intervals.csv", "--builder", builder)
        assert code == 0 and out == (GOLDEN / golden).read_text()


def test_repctx_explicit(capsys, tmp_path):
    p = tmp_path / "m.json"
    p.write_text(json.dumps(["<[1,1];[1,1]>"]))
    code, _, err = run(capsys, "repctx", "--csv", DATA / "intervals.csv", "--builder", "explicit", "--descriptions", p)
    assert code == 3 and "NotJoinDense" in err
    p.write_text(json.dumps(["<[1,1];[1,1]>", "<[3,3];[2,2]>", "<[1,2];[1,2]>", "<[2,3];[2,2]>", "<[1,3];[1,2]>"]))
    code, out, _ = run(capsys, "repctx", "--csv", DATA / "intervals.csv", "--builder", "explicit",
                       "--descriptions", p, "--format", "json")
    assert code == 0 and json.loads(out)["incidence"][0] == [1, 0, 1, 0, 1]


def test_reduce(capsys):
    code, out, _ = run(capsys, "reduce", "--cxt", DATA / "intervals_minimal.cxt")
    assert code == 0 and out == (GOLDEN / "intervals_minimal_reduced.cxt").read_text()


def test_verify_simpler(capsys):
    code, out, _ = run(capsys, "verify", "simpler", "--a", DATA / "pairs_projected.cxt", "--b", DATA / "pairs.cxt")
    rep = json.loads(out)
    assert code == 0 and rep["pass"] and rep["witness"]["ab"] == ["a", "b"]
    code, out, _ = run(capsys, "verify", "simpler", "--a", DATA / "pairs.cxt", "--b", DATA / "pairs_projected.cxt")
    rep = json.loads(out)
    assert code == 1 and not rep["pass"] and rep["counterexample"] == {"attribute": "a"}


def test_verify_representation(capsys):
    code, out, _ = run(capsys, "verify", "representation", "--csv", DATA / "intervals.csv", "--builder", "minimal")
    rep = json.loads(out)
    assert code == 0 and rep["pass"] and rep["size"] == 7


def test_verify_property(capsys):
    code, out, _ = run(capsys, "verify", "meet-image", "--budget", "5")
    lines = [json.loads(x) for x in out.splitlines()]
    assert code == 0 and lines[-1]["property"] == "meet-image" and lines[-1]["pass"]


@pytest.mark.parametrize("argv", [
    ["lattice", "--csv", "/nonexistent.csv"],
    ["lattice"],
    ["verify", "nope"],
    ["reduce", "--cxt", str(DATA / "intervals.csv")],
    ["project", "--csv", str(DATA / "intervals.csv")],
    ["project", "--csv", str(DATA / "intervals.csv"), "--kernel", "{not json"],
])
def test_input_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "input error" in err


def test_bad_csv(capsys, tmp_path):
    p = tmp_path / "bad.csv"
    p.write_text("object,m\ng1,3:1\n")
    assert run(capsys, "lattice", "--csv", p)[0] == 2


def test_validation_errors(capsys, tmp_path):
    k = tmp_path / "k.json"
    k.write_text(json.dumps({"lattice": "powerset", "fixed_point": [["a"], ["b"]]}))
    code, _, err = run(capsys, "project", "--cxt", DATA / "pairs.cxt", "--kernel", k)
    assert code == 3 and "MissingBottom" in err
    lat = tmp_path / "l.json"
    lat.write_text(json.dumps({"elements": ["a", "b"], "meet": [["a", "b", "a"], ["b", "a", "b"]]}))
    ps = tmp_path / "ps.json"
    ps.write_text(json.dumps({"lattice": "l.json", "objects": ["g"], "descriptions": ["a"]}))
    code, _, err = run(capsys, "lattice", "--ps", ps)
    assert code == 3 and "AxiomViolation" in err
