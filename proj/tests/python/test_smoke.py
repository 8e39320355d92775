import json

import numpy as np
import pytest

kt = pytest.importorskip("_ktheta")


def square_basis():
    return kt.ModelBasis(kt.BlaschkeProduct([0j, 0j], 1.0 + 0j))


def test_blaschke_eval_and_deriv():
    b = kt.BlaschkeProduct([0j, 0j], 1.0 + 0j)
    assert b.degree == 2
    assert b.eval(0.5 + 0j) == pytest.approx(0.25 + 0j)
    assert b.deriv(0.3 + 0j, 1) == pytest.approx(0.6 + 0j)
    assert b.ahern_clark_sum(1.0 + 0j, 0) == pytest.approx(2.0)


def test_kernel_reproduces_point_evaluation():
    basis = square_basis()
    k = kt.kernel(basis, 0.3 + 0.1j, 0)
    f = np.array([0.7 - 0.2j, 1.1 + 0.4j])
    inner = np.vdot(k, f)  # <f, k>
    assert inner == pytest.approx(kt.eval_vector(basis, f, 0.3 + 0.1j, 0), abs=1e-10)


def test_clark_atoms_of_cube():
    basis = kt.ModelBasis(kt.BlaschkeProduct([0j, 0j, 0j], 1.0 + 0j))
    cm = kt.clark_measure(basis, 1.0 + 0j)
    roots = sorted(np.exp(2j * np.pi * np.arange(3) / 3), key=np.angle)
    got = sorted(np.asarray(cm.atoms), key=np.angle)
    assert np.allclose(got, roots, atol=1e-10)
    assert np.allclose(np.asarray(cm.masses), 1.0 / 3.0, atol=1e-10)


def test_decompose_round_trip():
    basis = kt.ModelBasis(kt.BlaschkeProduct([0.1 + 0.2j, -0.4 + 0j, 0.3 - 0.3j,
                                              0j, 0.45 + 0.25j], 1j))
    a = kt.derived_op(basis, 0.4 + 0.1j, 1, kt.Orientation.d) \
        + 2.0 * kt.derived_op(basis, -0.3 - 0.2j, 0, kt.Orientation.dbar)
    d = kt.decompose(basis, a, 1e-8, 0)
    assert d.residual <= 1e-8
    assert len(d.components) == 2
    rebuilt = kt.synthesize(basis, d)
    assert np.linalg.norm(rebuilt - a) <= 1e-7 * np.linalg.norm(a)


def test_sarason_rejects_noise():
    basis = square_basis()
    noise = np.array([[1.0, 2.0], [3.0, 4.0j]])
    assert not kt.sarason_test(basis, noise, 1e-8).is_tto
    assert kt.sarason_test(basis, np.eye(2, dtype=complex), 1e-8).is_tto


def test_errors_surface_as_exceptions():
    with pytest.raises(Exception):
        kt.BlaschkeProduct([1.0 + 0j], 1.0 + 0j)


def test_run_job_matches_cli_contract():
    config = {"theta": {"zeros": [[0.0, 0.0], [0.0, 0.0]], "constant": [1.0, 0.0]},
              "lambda": [0.0, 0.0], "n": 1}
    out, code = kt.run_job("kernel", json.dumps(config))
    assert code == 0
    payload = json.loads(out)
    assert payload["vector"]["coords"] == [[0.0, 0.0], [1.0, 0.0]]
