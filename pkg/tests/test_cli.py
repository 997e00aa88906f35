import io
import json
import subprocess
import sys

import jsonschema
import pytest

from shufflelab.cli import OUTPUT_DIR_ENV, eval_expression, run, schema_for
from shufflelab.qsym_algebra import F, M

# one quick invocation per report kind
INVOCATIONS = [
    ["stats", "4,1,3,9,6,8"],
    ["shuffles", "3,1", "2,6"],
    ["shuffles", "3,1", "2,6", "--left"],
    ["certify", "--notion", "shuffle", "--stat", "Epk", "--max-size", "4"],
    ["certify", "--notion", "head-graft", "--stat", "Pk", "--max-size", "4"],
    ["lacunar", "--n", "4"],
    ["qsym", "eval", "F[2]*F[1]", "--degree", "3"],
    ["qsym", "check", "--pairs", "5", "--max-size", "3"],
    ["kernel", "--stat", "Epk", "--n", "5"],
    ["kernel", "--stat", "maj", "--n", "4", "--generators", "m"],
    ["ideal-matrix", "--max-degree", "4", "--stats", "Des,maj"],
    ["implications", "--max-size", "4"],
    ["enriched", "gamma", "--n", "2"],
    ["enriched", "kpoly", "--n", "3", "--lam", "2"],
    ["enriched", "prodcheck", "--n", "3", "--pi", "2,1", "--sigma", "3"],
    ["enriched", "lindep", "--n", "4"],
    ["tables", "paper"],
]


def call(argv):
    buf = io.StringIO()
    code = run(argv, out=buf)
    return code, buf.getvalue()


@pytest.mark.parametrize("argv", INVOCATIONS, ids=lambda a: " ".join(a[:2]))
def test_json_reports_match_schema(argv):
    code, text = call(argv + ["--output", "json"])
    assert code in (0, 1)
    doc = json.loads(text)
    jsonschema.validate(doc, schema_for(doc["command"]))
    assert (code == 1) == (doc["verdict"] is False)


@pytest.mark.parametrize("argv", INVOCATIONS, ids=lambda a: " ".join(a[:2]))
def test_reports_are_deterministic(argv):
    for fmt in ("json", "tsv", "text"):
        assert call(argv + ["--output", fmt]) == call(argv + ["--output", fmt])


def test_exit_codes():
    assert call(["certify", "--notion", "shuffle", "--stat", "Des", "--max-size", "4"])[0] == 0
    assert call(["certify", "--notion", "LR", "--stat", "Pk", "--max-size", "4"])[0] == 1
    assert call(["stats", "1,1"])[0] == 2
    assert call(["shuffles", "1,2", "2,3"])[0] == 2
    assert call(["lacunar", "--n", "-1"])[0] == 2
    assert call(["certify", "--notion", "sideways", "--stat", "Des"])[0] == 2
    assert call(["qsym", "eval", "F[1] *", "--degree", "3"])[0] == 2
    assert call([])[0] == 2


def test_stats_and_lacunar_text():
    code, text = call(["stats", "4,1,3,9,6,8"])
    assert code == 0 and "Epk" in text
    code, text = call(["lacunar", "--n", "3", "--output", "json"])
    assert json.loads(text)["payload"]["sets"] == [[1, 3], [1], [2], [3]]


def test_certify_witness_is_rechecked():
    code, text = call(["certify", "--notion", "head-graft", "--stat", "Pk", "--max-size", "4", "--output", "json"])
    doc = json.loads(text)
    assert code == 1 and doc["verdict"] is False
    assert doc["witnesses"] and doc["payload"]["classes"]


def test_expression_language():
    assert eval_expression("F[2]*F[1]", 3) == F((3,), 3) + F((1, 2), 3) + F((2, 1), 3)
    assert eval_expression("F[1,2] bel F[2]", 6) == F((1, 4), 6)
    assert eval_expression("M[1] tvi M[2]", 6) == M((1, 2), 6)
    assert eval_expression("-2*F[1] + (F[1] - F[1])", 3) == F((1,), 3).scale(-2)
    assert eval_expression("F[]", 3) == F((), 3)
    # < and >= are the half-products and add up to the product
    lhs = eval_expression("F[1] < F[1,1] + F[1] >= F[1,1]", 4)
    assert lhs == eval_expression("F[1]*F[1,1]", 4)


def test_out_dir_from_environment(tmp_path, monkeypatch):
    monkeypatch.setenv(OUTPUT_DIR_ENV, str(tmp_path))
    code, text = call(["lacunar", "--n", "3", "--output", "json"])
    assert code == 0
    files = list(tmp_path.iterdir())
    assert len(files) == 1 and files[0].read_text() == text


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "shufflelab", "lacunar", "--n", "2", "--output", "json"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["payload"]["sets"] == [[1], [2]]
