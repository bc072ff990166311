import math

import pytest

qnec = pytest.importorskip("qnec")


def test_pre1_ideal_and_noisy():
    c = qnec.benchmark("pre1", depth=9)
    assert c.n_qubits == 1
    assert qnec.expectation(c, "Z") == pytest.approx(-1.0, abs=1e-12)
    assert qnec.expectation(c, "Z", 0.2) > -1.0


def test_group_size_matches_count_formula():
    c = qnec.benchmark("pre1", depth=9)
    assert qnec.group_size(c) == 3 * 9 + 1
    assert qnec.group_size(c, "ancilla") == 3 * 9 + 1


def test_qem_improves_pre1():
    r = qnec.qem(qnec.benchmark("pre1", depth=9), "Z", 0.2)
    assert abs(r["qem"] - r["ideal"]) < abs(r["noisy"] - r["ideal"])
    assert r["rt_qem"] > 1.0


def test_zero_noise_is_saturated():
    r = qnec.qem(qnec.benchmark("pre1", depth=9), "Z", 0.0)
    assert r["rt_qem"] == "saturated"


def test_recovery_gamma_norm():
    r = qnec.recovery(2 * math.asin(math.sqrt(0.5)))
    assert r["gamma_norm"] == pytest.approx(3.0, abs=1e-12)


def test_text_round_trip():
    c = qnec.benchmark("qaa3")
    assert qnec.circuit_from_text(c.to_text()).to_text() == c.to_text()


def test_tau_theta_inverse():
    assert qnec.theta_from_tau(qnec.tau_from_theta(0.3)) == pytest.approx(0.3, abs=1e-14)
