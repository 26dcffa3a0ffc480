import io
import json
import subprocess
import sys

import pytest

from modeldomain import suite
from modeldomain.cli import run_command

EXAMPLE_P = "2*Re((z1^3*z2^2)*conj(z1*z2))"
EXAMPLE_Q = "(i*z1^2*z2*2*z1) d/dz1 + (-3*i*z1^2*z2*z2) d/dz2"


def run(argv, stdin=""):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(argv, stdin=io.StringIO(stdin), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def run_json(argv, stdin=""):
    code, out, _ = run(argv, stdin)
    return code, json.loads(out)


def test_check_tangent_example():
    code, doc = run_json(["check-tangent", "--p", EXAMPLE_P, "--field", EXAMPLE_Q, "--m", "4,3"])
    assert code == 0
    assert doc["result"]["residual"] == "0" and doc["status"] == "verified"
    assert set(doc) == {"command", "inputs", "result", "paper_ref", "status"}
    assert doc["inputs"]["m"] == [4, 3]


def test_check_tangent_refuted():
    code, doc = run_json(["check-tangent", "--p", "z1*zb1", "--field", "d/dz1", "--m", "1"])
    assert code == 1 and doc["status"] == "refuted"


def test_tangent_space_ball():
    code, doc = run_json(["tangent-space", "--p", "z1*zb1", "--m", "1", "--mu", "1"])
    assert code == 0
    assert doc["result"]["real_dimension"] == 1
    assert doc["result"]["basis"] == ["(w^2) d/dw + (w*z1) d/dz1"]
    assert doc["inputs"]["mu"] == "1"


@pytest.mark.parametrize("argv", [
    ["tangent-space", "--p", "z1*zb1", "--m", "0", "--mu", "1"],
    ["tangent-space", "--p", "z1*zb1", "--m", "m=0", "--mu", "1"],
    ["tangent-space", "--p", "z1*zb1", "--m", "a", "--mu", "1"],
    ["tangent-space", "--p", "z1^(1/2)", "--m", "1", "--mu", "1"],
    ["tangent-space", "--p", "z1*zb1", "--m", "1", "--mu", "x"],
    ["tangent-space", "--p", "z1*zb1", "--m", "1"],
    ["check-tangent", "--p", "z1*zb1", "--m", "1", "--field", "(zb1) d/dw"],
    ["straighten", "--p", "z1*zb1", "--m", "1", "--field", "(1) d/dw"],
    ["frobnicate"],
    [],
])
def test_usage_errors(argv):
    code, out, err = run(argv)
    assert code == 2 and out == ""
    assert err


def test_gaussian_serialization():
    code, doc = run_json(["straighten", "--p", "z1*zb1", "--m", "1", "--field", "(-2*z1) d/dw + (i) d/dz1"])
    assert code == 0
    assert doc["result"]["coordinate_scale"] == {"re": "0", "im": "1"}
    assert doc["result"]["c"] == "2"


def test_stdin():
    code, doc = run_json(["signature", "--p", "-", "--m", "4,3"], stdin=EXAMPLE_P)
    assert code == 0
    assert [part["signature"] for part in doc["result"]["parts"]] == ["-5/12", "5/12"]
    assert doc["result"]["balanced"] is False


def test_balanced_part_and_annihilator():
    code, doc = run_json(["balanced-part", "--p", "z1*zb1 + Re(z1^2)", "--m", "1"])
    assert code == 0 and doc["result"]["balanced_part"] == "z1*zb1"
    code, doc = run_json(["annihilator", "--p", "z1^2", "--m", "1"])
    assert code == 0 and doc["result"]["holds_up_to_bound"] is True
    code, doc = run_json(["annihilator", "--p", "z1^3*z2^2", "--m", "4,3", "--weight-bound", "1/2"])
    assert code == 1
    assert "5/12" in [s["weight"] for s in doc["result"]["spaces"]]


def test_weights_and_model_extract():
    code, doc = run_json(["weights", "--p", "z1*zb1 + z2^2*zb2^2 + z2^3*zb2^3"])
    assert code == 0 and doc["result"]["m"] == [1, 2]
    code, doc = run_json(["model-extract", "--p", "z1^2*zb1^2", "--m", "1"])
    assert code == 1 and doc["result"]["p"] == "0"


def test_numeric_commands():
    code, doc = run_json(["cayley-check", "--p", "z1*zb1 + z2^2*zb2^2", "--m", "1,2", "--samples", "50"])
    assert code == 0 and doc["result"]["unbounded_bound"] == "0"
    code, doc = run_json(["zero-set-check", "--p=-z1*zb1", "--m", "1", "--samples", "10"])
    assert code == 1 and doc["result"]["positivity"] == "refuted"


def test_reports_are_deterministic():
    argv = ["zero-set-check", "--p", "z1*zb1 + z2^2*zb2^2", "--m", "1,2", "--samples", "30", "--seed", "4"]
    assert run(argv)[1] == run(argv)[1]
    argv = ["tangent-space", "--p", "z1*zb1 + z2*zb2", "--m", "1,1", "--mu", "0"]
    assert run(argv)[1] == run(argv)[1]


def test_suite_filter_and_table():
    code, out, _ = run(["suite", "--filter", "weight-one"])
    assert code == 0
    assert "weight-one" in out and "cayley" not in out
    code, doc = run_json(["suite", "--filter", "straighten", "--json"])
    assert code == 0 and len(doc["result"]) == 2 and all(r["passed"] for r in doc["result"])


def test_suite_isolates_broken_fixture():
    def broken():
        raise RuntimeError("corrupted")

    fixtures = list(suite.FIXTURES[:3]) + [
        suite.Fixture("broken", "raises", broken),
        suite.Fixture("broken", "wrong answer", lambda: (False, "bad")),
    ]
    results = suite.run_suite(fixtures=fixtures)
    assert [r.passed for r in results] == [True, True, True, False, False]
    assert "corrupted" in results[3].detail


def test_full_suite_passes():
    results = suite.run_suite()
    assert all(r.passed for r in results), suite.format_table(results)


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "modeldomain", "tangent-space", "--p", "z1*zb1",
                           "--m", "1", "--mu", "-2"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["real_dimension"] == 0
