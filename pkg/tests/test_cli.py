import json

import pytest

from regraph.cli import main, to_dot
from regraph.graph import parse_graph

CHAIN = "component 1 response: 1\ncomponent 2 response: 2\ncomponent 3 response: 3\n" \
        "arrow 1 2\narrow 2 3\n"
CONC = "component 1 context: 1 2 3\nfull 1 2\nfull 2 3\n"
COV = "component 1 response: 1 2 3\ndashed 1 2\ndashed 2 3\n"
BAD = "component 1 response: 1\ncomponent 2 context: 2\narrow 2 1\n"


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, text in (("chain", CHAIN), ("conc", CONC), ("cov", COV), ("bad", BAD)):
        p = tmp_path / f"{name}.graph"
        p.write_text(text)
        out[name] = str(p)
    return out


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_query_independent(files, capsys):
    code, out, _ = run(capsys, "query", files["chain"], "--a", "1", "--b", "3", "--c", "2")
    assert code == 0 and out.splitlines()[0] == "Independent"


def test_query_dependent_witnesses(files, capsys):
    code, out, _ = run(capsys, "query", files["cov"], "--alpha", "1", "--beta", "3", "--c", "2")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "Dependent"
    assert "  paths: 1 -- 2 -- 3" in lines


@pytest.mark.parametrize("engine", ["paths", "matrix"])
def test_query_engines(files, capsys, engine):
    code, out, _ = run(capsys, "query", files["chain"], "--a", "1", "--b", "3",
                       "--engine", engine, "--json")
    d = json.loads(out)
    assert code == 0 and list(d["verdicts"]) == [engine]
    assert d["verdicts"][engine]["verdict"] == "Dependent"


def test_query_sets(files, capsys):
    code, out, _ = run(capsys, "query", files["conc"], "--a", "1", "--b", "2,3", "--json")
    d = json.loads(out)
    assert d["agree"] and d["b"] == ["2", "3"]


def test_equiv(files, capsys):
    assert run(capsys, "equiv", files["chain"], files["conc"])[0] == 0
    code, out, _ = run(capsys, "equiv", files["chain"], files["cov"])
    assert code == 1
    assert "collision Vs only in second: 1-3 at 2" in out


def test_tables(capsys):
    code, out, _ = run(capsys, "tables", "--family", "1", "--alpha", "2")
    assert code == 0
    assert "singleton_transitivity violated at i={A}, k={B}, h={C}, d={}" in out
    assert "NOT confirmed" not in out


def test_tables_json(capsys):
    code, out, _ = run(capsys, "tables", "--family", "2", "--alpha", "0.3", "--beta", "0.2",
                       "--json")
    d = json.loads(out)
    assert d["violated"] and d["property"] == "intersection"
    assert all(f["confirmed"] for f in d["facts"])


def test_tables_bad_parameters(capsys):
    assert run(capsys, "tables", "--family", "1", "--alpha", "0.5")[0] == 2
    assert run(capsys, "tables", "--family", "2", "--alpha", "0.3")[0] == 2


def test_transform(files, capsys):
    code, out, _ = run(capsys, "transform", files["chain"], "--alpha", "1", "--beta", "3")
    assert code == 0
    g = parse_graph(out)
    assert [(e.kind.value, g.labels[e.i], g.labels[e.k]) for e in g.edges] == \
        [("arrow", "1", "3")]


def test_paths(files, capsys):
    code, out, _ = run(capsys, "paths", files["chain"], "--a", "1", "--b", "3", "--c", "2")
    assert code == 0 and out.strip() == "no active paths"
    code, out, _ = run(capsys, "paths", files["chain"], "--a", "1", "--b", "3", "--json")
    assert json.loads(out)["paths"][0]["nodes"] == ["1", "2", "3"]


def test_oracle(files, capsys):
    code, out, _ = run(capsys, "oracle", files["chain"], "--draws", "4", "--seed", "3")
    assert code == 0 and out.strip().endswith("result: ok")


def test_validate(files, capsys):
    code, out, _ = run(capsys, "validate", files["cov"])
    assert code == 0 and out.startswith("valid: 3 nodes")
    code, _, err = run(capsys, "validate", files["bad"])
    assert code == 3 and "line 3" in err


def test_usage_errors(files, capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "query", files["chain"], "--a", "1")[0] == 2
    assert run(capsys, "query", files["chain"], "--a", "1", "--b", "9")[0] == 2
    assert run(capsys, "query", files["chain"], "--a", "1", "--b", "1")[0] == 2
    assert run(capsys, "validate", files["chain"] + ".missing")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2


def test_dot(files, capsys):
    code, out, _ = run(capsys, "dot", files["cov"])
    assert code == 0
    assert '"1" -> "2" [dir=none, style=dashed];' in out
    dot = to_dot(parse_graph(CHAIN))
    assert '"2" -> "1";' in dot
    assert "style=solid" in to_dot(parse_graph(CONC))
