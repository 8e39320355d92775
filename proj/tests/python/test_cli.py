import json
import os
import subprocess

import pytest

CLI = os.environ.get("KTHETA_CLI")
pytestmark = pytest.mark.skipif(not CLI or not os.path.exists(CLI or ""),
                                reason="CLI binary not available")


def run(args, payload=None):
    return subprocess.run([CLI, *args], input=payload, capture_output=True, text=True)


def theta_json(zeros):
    return {"zeros": [[z.real, z.imag] for z in zeros], "constant": [1.0, 0.0]}


def test_kernel_command():
    config = json.dumps({"theta": theta_json([0j, 0j]), "lambda": [0.0, 0.0], "n": 0})
    r = run(["kernel"], config)
    assert r.returncode == 0
    out = json.loads(r.stdout)
    assert out["vector"]["coords"] == [[1.0, 0.0], [0.0, 0.0]]
    assert out["norm"] == pytest.approx(1.0)


def test_domain_error_exit_code():
    config = json.dumps({"theta": theta_json([0j, 0j]), "lambda": [2.0, 0.0]})
    r = run(["kernel"], config)
    assert r.returncode == 2
    assert json.loads(r.stdout)["error"]["kind"] == "DomainError"


def test_parse_error_exit_code():
    r = run(["kernel"], "this is not json")
    assert r.returncode == 4
    assert json.loads(r.stdout)["error"]["kind"] == "ParseError"


def test_clark_command_and_flag_override():
    config = json.dumps({"theta": theta_json([0j, 0j, 0j]), "alpha": [1.0, 0.0]})
    r = run(["clark", "--quadrature", "512"], config)
    assert r.returncode == 0
    out = json.loads(r.stdout)
    assert len(out["atoms"]) == 3
    assert all(abs(m - 1.0 / 3.0) < 1e-10 for m in out["masses"])


def test_decompose_pipeline_and_determinism(tmp_path):
    theta = theta_json([0.1 + 0.2j, -0.4 + 0j, 0.3 - 0.3j, 0j, 0.45 + 0.25j])
    build_config = json.dumps({
        "theta": theta,
        "symbol": {"terms": [{"kind": "theta_pole", "m": 2,
                              "lambda": [0.4, 0.1], "coeff": [1.0, 0.0]}]},
    })
    built = run(["build"], build_config)
    assert built.returncode == 0

    check_config = json.dumps({"theta": theta, "matrix": json.loads(built.stdout)})
    checked = run(["check"], check_config)
    assert checked.returncode == 0
    assert json.loads(checked.stdout)["is_tto"] is True

    decompose_config = json.dumps({"theta": theta, "matrix": json.loads(built.stdout),
                                   "seed": 3})
    first = run(["decompose"], decompose_config)
    second = run(["decompose"], decompose_config)
    assert first.returncode == 0
    assert first.stdout == second.stdout  # byte-identical with a fixed seed
    d = json.loads(first.stdout)
    assert d["residual"] <= 1e-8
    assert len(d["components"]) == 1
    assert d["components"][0]["order"] == 1

    in_path = tmp_path / "job.json"
    out_path = tmp_path / "result.json"
    in_path.write_text(decompose_config)
    r = run(["decompose", "--in", str(in_path), "--out", str(out_path)])
    assert r.returncode == 0
    assert out_path.read_text() == first.stdout
