import io
import json
import subprocess
import sys

import jsonschema
import pytest

from extrifact import fixtures as fx
from extrifact.cli import run
from extrifact.excat import load_schema

EXAMPLE = {"T": list(fx.T_LABELS), "F": list(fx.F_LABELS)}


def call(*argv):
    buf = io.StringIO()
    code = run([str(a) for a in argv], out=buf)
    text = buf.getvalue()
    return code, text


def call_json(*argv):
    code, text = call(*argv)
    rep = json.loads(text)
    jsonschema.validate(rep, load_schema("report.schema.json"))
    return code, rep


@pytest.fixture(scope="module")
def work(tmp_path_factory):
    d = tmp_path_factory.mktemp("cli")
    assert call("build", "--type", "a_n", "--n", 3, "--m", 2, "-o", d / "cat.json")[0] == 0
    assert call("build", "--type", "a_n", "--n", 2, "-o", d / "cat2.json")[0] == 0
    (d / "example.json").write_text(json.dumps(EXAMPLE))
    return d


def test_verify_example(work):
    code, rep = call_json("torsion", "verify", work / "cat.json", "--pair", work / "example.json")
    assert code == 0 and rep["status"] == "pass"
    assert [f["check"] for f in rep["findings"]] == ["cond1", "cond2", "cond3"]


def test_verify_with_triangles(work):
    code, rep = call_json("torsion", "verify", work / "cat.json", "--pair", work / "example.json", "--triangles")
    assert code == 0 and len(rep["result"]["triangles"]) == 12


def test_verify_failure_exit_1(work):
    code, rep = call_json("torsion", "verify", work / "cat.json", "--pair", '{"T": ["P1"], "F": ["I1"]}')
    assert code == 1 and rep["status"] == "fail"


def test_enumerate_mod_a2(work):
    code, rep = call_json("torsion", "enumerate", work / "cat2.json")
    assert code == 0 and rep["result"]["count"] == 5


def test_enumerate_jobs_deterministic(work):
    a = call("--jobs", 2, "torsion", "enumerate", work / "cat.json")
    b = call("torsion", "enumerate", work / "cat.json")
    ra, rb = json.loads(a[1]), json.loads(b[1])
    assert a[0] == b[0] == 0 and ra["result"] == rb["result"]
    assert ra["result"]["count"] == 55


def test_factorize_example(work):
    code, rep = call_json("factorize", work / "cat.json", "--pair", work / "example.json", "--from", "P1", "--to", "I1", "--map", "auto")
    assert code == 0
    res = rep["result"]
    assert (res["first"]["source"], res["first"]["target"]) == (["P1"], ["I2"])
    assert (res["second"]["source"], res["second"]["target"]) == (["I2"], ["I1"])


def test_fs_factorize_explicit_map(work):
    code, rep = call_json("fs", "factorize", work / "cat.json", "--pair", work / "example.json", "--from", "P1", "--to", "I1", "--map", "[[1]]")
    assert code == 0 and rep["result"]["K"] == ["I2"]
    code, rep = call_json("fs", "factorize", work / "cat.json", "--pair", work / "example.json", "--from", "P1", "--to", "I1", "--map", "[[1, 0]]")
    assert code == 2 and rep["status"] == "error"


def test_fs_commands(work):
    code, rep = call_json("fs", "from-torsion", work / "cat.json", "--pair", work / "example.json", "--side", "deflation")
    assert code == 0 and rep["result"]["system"]["side"] == "deflation"
    code, rep = call_json("fs", "verify", work / "cat.json", "--pair", work / "example.json")
    assert code == 0
    code, rep = call_json("fs", "orthogonal", work / "cat.json", "--f", "P1 -> I2", "--g", "I2 -> I1")
    assert code == 0 and rep["result"]["orthogonal"] is True
    code, rep = call_json("fs", "orthogonal", work / "cat.json", "--f", "0 -> S2[1]", "--g", "0 -> I2[1]")
    assert code == 1


def test_torsion_triangle(work):
    code, rep = call_json("torsion", "triangle", work / "cat.json", "--pair", work / "example.json", "--object", "P2[1]")
    assert code == 0 and rep["result"]["triangle"]["b"] == ["P2[1]"]


def test_dualize(work):
    code, rep = call_json("dualize", work / "cat.json", "-o", work / "dual.json")
    assert code == 0
    swapped = {"T": EXAMPLE["F"], "F": EXAMPLE["T"]}
    code, rep = call_json("torsion", "verify", work / "dual.json", "--pair", json.dumps(swapped))
    assert code == 0


def test_silting(work):
    code, rep = call_json("silting", "check", "--n", 3, "--m", 2, "--complex", fx.SILTING)
    assert code == 0
    code, rep = call_json("silting", "check", "--n", 3, "--m", 2, "--complex", "P1[1]+I1")
    assert code == 1 and rep["findings"][0]["witness"]
    code, rep = call_json("silting", "pair", "--n", 3, "--m", 2, "--complex", fx.SILTING, "-o", work / "silted.json")
    assert code == 0
    assert sorted(json.loads((work / "silted.json").read_text())["T"]) == sorted(fx.T_LABELS)


def test_recollement_commands(work):
    code, rep = call_json("recollement", "build", "product", "--a", work / "cat2.json", "--c", work / "cat2.json", "-o", work / "rec.json")
    assert code == 0
    assert call_json("recollement", "check", work / "rec.json")[0] == 0
    assert call_json("recollement", "hypotheses", work / "rec.json")[0] == 0
    assert call_json("recollement", "lemma-iso", work / "rec.json")[0] == 0
    code, rep = call_json("recollement", "glue", work / "rec.json", "--pair1", '{"T": ["S2"], "F": ["S1"]}', "--pair2", '{"T": ["S1", "P1"], "F": ["S2"]}', "--side", "inflation")
    assert code == 0
    assert rep["result"]["pair"]["T"] == ["A:P2", "C:I1", "C:P1"]


def test_triangular_rejected():
    code, rep = call_json("recollement", "hypotheses", "triangular")
    assert code == 1
    bad = [f for f in rep["findings"] if f["outcome"] == "fail"]
    assert bad[0]["check"] == "i_shriek exact"
    assert bad[0]["witness"]["conflation"] == "P2 -> P1 -> I1"


def test_usage_errors(work):
    assert call_json("frobnicate")[0] == 2
    assert call_json("torsion")[0] == 2
    assert call_json("torsion", "verify", work / "missing.json", "--pair", work / "example.json")[0] == 2
    assert call_json("torsion", "verify", work / "cat.json", "--pair", '{"T": ["Q7"], "F": []}')[0] == 2
    assert call_json("--jobs", 0, "selfcheck")[0] == 2


def test_markdown(work):
    code, text = call("--format", "markdown", "torsion", "enumerate", work / "cat2.json")
    assert code == 0
    assert "| check | outcome | witness |" in text
    assert "T = add{I1}; F = add{P1, P2}" in text


def test_reports_are_deterministic(work):
    argv = ("torsion", "verify", work / "cat.json", "--pair", work / "example.json", "--triangles")
    assert call(*argv) == call(*argv)
    assert "timing" not in json.loads(call(*argv)[1])
    assert "timing" in json.loads(call("--timing", *argv)[1])


def test_field_char_from_env(work, monkeypatch):
    monkeypatch.setenv("EXTRIFACT_FIELD_CHAR", "3")
    code, rep = call_json("build", "--type", "a_n", "--n", 2)
    assert rep["result"]["presentation"]["field_char"] == 3
    code, rep = call_json("--field-char", 5, "build", "--type", "a_n", "--n", 2)
    assert rep["result"]["presentation"]["field_char"] == 5
    monkeypatch.setenv("EXTRIFACT_FIELD_CHAR", "4")
    assert call_json("build", "--type", "a_n", "--n", 2)[0] == 2


def test_selfcheck():
    code, rep = call_json("selfcheck")
    assert code == 0 and len(rep["findings"]) == 9


def test_console_script(work):
    out = subprocess.run([sys.executable, "-m", "extrifact.cli", "torsion", "enumerate", str(work / "cat2.json")], capture_output=True, text=True)
    assert out.returncode == 0 and json.loads(out.stdout)["result"]["count"] == 5
