import math

import numpy as np
import pytest

import qrs


def test_cluster_distribution_normalized():
    p = qrs.cluster_distribution(2, 2, [0.0] * 4)
    assert len(p) == 16
    assert math.isclose(sum(p), 1.0, abs_tol=1e-12)


def test_random_circuit_anticoncentrates():
    p = np.array(qrs.random_circuit_distribution(8, 40, seed=3))
    assert abs(qrs.anticonc_fraction(p.tolist(), 1.0) - math.exp(-1)) < 0.1


def test_verification_fixtures():
    P = qrs.porter_thomas_vector(1 << 10)
    U = [1.0 / len(P)] * len(P)
    assert abs(qrs.xeb_exact(U, P)) < 1e-12
    assert round(qrs.hog_fidelity_exact(P, P), 2) == 1.0
    assert abs(qrs.ce_difference_exact(U, P) - 1) < 0.01
    s = qrs.sample(P, 20000, seed=5)
    assert abs(qrs.xeb_fidelity(s, P) - qrs.xeb_exact(P, P)) < 0.05


def test_certification_helpers():
    psi = np.array(qrs.cluster_state(2, 2, [0.0] * 4))
    rho = np.outer(psi, psi.conj())
    f_min, f_max = qrs.cluster_fidelity_bounds(2, 2, rho)
    assert f_min == pytest.approx(1) and f_max == pytest.approx(1)
    assert qrs.threshold_fidelity(0.2) == pytest.approx(0.96)


def test_sign_and_easing():
    H = np.array(qrs.example_10_1(3))
    assert qrs.average_sign(H, 1.0, 10) == pytest.approx(1.0)
    before, after = qrs.ease_hidden(3, seed=2)
    assert after < 1e-6 < before
    assert qrs.maxcut(3, [(0, 1), (1, 2), (0, 2)]) == 2


def test_errors_map_to_exceptions():
    with pytest.raises(qrs.ConfigError):
        qrs.run("sample", nope=1)
    with pytest.raises(ValueError):
        qrs.tv_distance([1.0, 0.0], [1.0, 0.0, 0.0])


def test_cli_run_deterministic():
    a = qrs.run("sample", circuit="iqp", n=4, samples=20, seed=9)
    b = qrs.run("sample", circuit="iqp", n=4, samples=20, seed=9)
    assert a == b
    tables, summary = a
    assert summary["qubits"] == 4
    assert len(tables["samples"]["rows"]) == 20
