import json
import math

import numpy as np
import pytest

import qcap


def h2(p):
    return -p * math.log2(p) - (1 - p) * math.log2(1 - p)


def test_phase_flip_coherent_information():
    ch = qcap.phase_flip(0.25)
    pi = np.eye(2) / 2
    assert qcap.coherent_information(pi, ch) == pytest.approx(1 - h2(0.25), abs=1e-9)
    info = qcap.classify(ch)
    assert info["is_unital"] and not info["is_uniform"]


def test_apply_and_json_round_trip():
    ch = qcap.make_channel("haar_random", [2, 2, 2], seed=7)
    again = qcap.KrausChannel.from_json(ch.to_json())
    rho = np.array([[0.7, 0.1j], [-0.1j, 0.3]])
    assert np.allclose(qcap.apply(ch, rho), qcap.apply(again, rho), atol=0)


def test_identity_bounds_are_one():
    ch = qcap.identity_channel(4)
    basis = np.eye(4, 2, dtype=complex)
    r = qcap.fidelity_bounds(basis, ch)
    assert r["bound_kraus"] == pytest.approx(1.0, abs=1e-12)
    assert r["bound_states"] == pytest.approx(1.0, abs=1e-12)


def test_b_coefficients_via_exact_average():
    ch = qcap.phase_flip(0.25)
    assert qcap.exact_average_d2(ch, 2) <= qcap.upper_bound_d2(ch) + 1e-12


def test_ensemble_deterministic_across_threads():
    ch = qcap.depolarizing(0.3)
    a = qcap.run_ensemble(ch, 2, 200, 11, threads=1)
    b = qcap.run_ensemble(ch, 2, 200, 11, threads=4)
    assert a == b


def test_typical_sequences_uniform():
    r = qcap.typical_sequences([0.5, 0.5], 12, 0.05)
    assert r["typical_count"] == 2**12
    assert r["mass"] == pytest.approx(1.0, abs=1e-15)


def test_reduced_channel_relations():
    r = qcap.reduced_channel_report(qcap.phase_flip(0.25), 8, 0.1)
    assert r["length_ok"] and r["frobenius_ok"] and r["typical_length_ok"]


def test_errors_map_to_python_exceptions():
    with pytest.raises(qcap.InputError):
        qcap.make_channel("nonsense", [], seed=0)
    with pytest.raises(qcap.DomainError):
        qcap.kraus_distribution(qcap.KrausChannel([np.eye(2) * 0.5]))


def test_cli_exit_codes():
    code, out, _ = qcap.run_cli(["info", "--channel", "builtin:identity:2", "--seed", "1"])
    assert code == 0
    assert json.loads(out)["result"]["info"]["coherent_information"] == pytest.approx(1.0)
    code, _, _ = qcap.run_cli(["info", "--channel", "/nonexistent.json", "--seed", "1"])
    assert code == 2
