import math

import numpy as np
import pytest

import qleak


def test_bb84_leakage_is_one_bit():
    e = qleak.Ensemble.bb84()
    est = qleak.maximal_leakage(e)
    assert est["kind"] == "optimizer-lower"
    assert abs(est["bits"] - 1.0) < 1e-3
    completeness = sum(est["povm"])
    assert np.allclose(completeness, np.eye(2), atol=1e-9)
    assert qleak.grid_oracle(e)["bits"] >= 1 - 1e-6


def test_commuting_ensemble_is_exact():
    e = qleak.Ensemble([np.diag([1.0, 0.0]), np.diag([0.25, 0.75])])
    est = qleak.maximal_leakage(e)
    assert est["kind"] == "exact-commuting"
    assert est["bits"] == pytest.approx(math.log2(1.75), abs=1e-12)


def test_lower_bound_anchor():
    r = qleak.lower_bound(qleak.Ensemble.bb84(), 0.1, q_bits=1.0)
    assert r["p1_star"] == pytest.approx(0.2, abs=1e-9)
    assert r["p2_star"] == pytest.approx(0.305573, abs=1e-6)
    assert r["lower_bits"] == pytest.approx(0.7608, abs=5e-4)


def test_gentle_povm_certifies_at_epsilon_prime():
    e = qleak.Ensemble.bb84()
    plus = np.full((2, 2), 0.5)
    m = qleak.positive_part(np.diag([1.0, 0.0]) - plus)
    ep = qleak.epsilon_prime(m, e, alpha=0.1, delta=0.05)
    ops = qleak.gentle_povm(m, ep["epsilon"])
    assert np.allclose(sum(b.conj().T @ b for b in ops), np.eye(2), atol=1e-12)
    report = qleak.certify(e, ops, alpha=0.1, delta=0.05)
    assert report["certified"]


def test_simulation_matches_enumeration():
    exact = qleak.exact_round_statistics("w1")
    assert exact["qber"] == pytest.approx(0.25, abs=1e-12)
    run = qleak.simulate("w1", rounds=100000, seed=42)
    assert abs(run["qber"] - 0.25) < 3 * math.sqrt(0.25 * 0.75 / 1e5)
    assert run == qleak.simulate("w1", rounds=100000, seed=42)
    assert qleak.simulate("none", rounds=1000)["qber"] == 0.0


def test_depolarizing_closed_form():
    e = qleak.Ensemble.bb84()
    noisy = qleak.depolarize(e, 0.5)
    assert qleak.grid_oracle(noisy)["bits"] == pytest.approx(math.log2(1.5), abs=1e-6)
    assert qleak.depolarized_leakage(1.0, 0.5) == pytest.approx(math.log2(1.5))


def test_invalid_input_raises_value_error():
    with pytest.raises(qleak.InvalidInput):
        qleak.Ensemble([np.eye(2)])
    with pytest.raises(ValueError):
        qleak.lower_bound(qleak.Ensemble.bb84(), 1.5, q_bits=1.0)
    with pytest.raises(ValueError):
        qleak.gentle_povm(np.diag([0.5, 0.5]), 0.2)
