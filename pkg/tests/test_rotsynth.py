# tests/test_rotsynth.py
import math

import numpy as np
import pytest

# Must import AFTER sys.path manipulation in conftest
try:
    from diagsynth.diagsynth_circuit import Circuit, GateKind, cnot, dense_unitary, rotation_count, rz_gate
    from diagsynth import diagsynth_rotsynth as rotsynth
    from diagsynth.diagsynth_rotsynth import (
        SynthesizerConfig, brute_force, budget_split, clifford_words, cost_only, exact_rz, phase_matrix,
        replace_rotations, rotation_t_total, rz_replacement, synthesize_rotation,
    )
    from diagsynth.diagsynth_utils import KTooSmall, NonpositiveEpsilon, PrecisionUnreachable
except ImportError:
    pytest.skip("Skipping rotation synthesis tests, import failed.", allow_module_level=True)


def max_entry_distance(result, theta):
    return float(np.max(np.abs(dense_unitary(result.circuit) - phase_matrix(theta))))


# === Cliffords ===

def test_clifford_group_has_24_elements():
    words = clifford_words()
    assert len(words) == 24
    assert words[0] == ()
    assert len(set(words)) == 24


# === Modes ===

@pytest.mark.parametrize("theta", [0.0, 0.3, -2.5, math.pi])
def test_exact_rz_is_exact(theta):
    result = exact_rz(theta)
    assert result.error == 0.0 and result.t_count == 0
    assert max_entry_distance(result, theta) < 1e-14

def test_cost_only_estimate():
    result = cost_only(1e-3, 1.15)
    assert result.circuit is None
    assert result.t_count == pytest.approx(1.15 * math.log2(1e3))
    with pytest.raises(NonpositiveEpsilon):
        cost_only(0.0)

@pytest.mark.parametrize("theta, expected_t", [(0.0, 0), (math.pi / 2, 0), (math.pi, 0), (math.pi / 4, 1), (-math.pi / 4, 1)])
def test_brute_force_finds_exact_words(theta, expected_t):
    result = brute_force(theta, 1e-9)
    assert result.t_count == expected_t, f"P({theta}) needs {expected_t} T, got {result.t_count}"
    assert max_entry_distance(result, theta) < 1e-9

@pytest.mark.parametrize("theta", [0.3, 1.0, -2.2])
@pytest.mark.parametrize("eps", [0.3, 0.1])
def test_brute_force_respects_precision(theta, eps):
    result = brute_force(theta, eps)
    assert result.error <= eps
    distance = max_entry_distance(result, theta)
    assert distance <= eps + 1e-9, f"P({theta}) synthesized to {distance} > {eps}"
    kinds = {g.kind for g in result.circuit.gates}
    assert kinds <= {GateKind.H, GateKind.S, GateKind.T, GateKind.GPHASE}

def test_brute_force_t_count_grows_with_precision():
    coarse = brute_force(0.7, 0.3)
    fine = brute_force(0.7, 0.05)
    assert fine.t_count >= coarse.t_count

def test_brute_force_gives_up_beyond_cap():
    with pytest.raises(PrecisionUnreachable):
        brute_force(0.3, 1e-3, max_t=0)

@pytest.mark.parametrize("theta, eps", [(0.3, 0.05), (-1.2, 0.1), (2.5, 0.05)])
def test_brute_force_searches_layers_past_the_block_size(theta, eps, monkeypatch):
    whole = brute_force(theta, eps)
    assert whole.t_count >= 2, "angle should need more T gates than a one-syllable block holds"
    monkeypatch.setattr(rotsynth, "BRUTE_FORCE_MAX_LAYER", 1)
    chunked = brute_force(theta, eps)
    assert chunked.t_count == whole.t_count
    assert chunked.error == pytest.approx(whole.error, abs=1e-12)
    assert max_entry_distance(chunked, theta) <= eps + 1e-12

def test_brute_force_max_t_is_not_capped_by_the_block_size(monkeypatch):
    monkeypatch.setattr(rotsynth, "BRUTE_FORCE_MAX_LAYER", 0)
    with pytest.raises(PrecisionUnreachable, match="at most 2 T gates"):
        brute_force(0.3, 1e-3, max_t=2)
    assert brute_force(0.3, 0.05).t_count >= 2

def test_brute_force_rejects_nonpositive_eps():
    with pytest.raises(NonpositiveEpsilon):
        brute_force(0.3, 0.0)

def test_synthesize_rotation_dispatch():
    assert synthesize_rotation(0.4, None, SynthesizerConfig("exact_rz")).t_count == 0
    assert synthesize_rotation(0.4, 0.5, SynthesizerConfig("cost_only", c0=2.0)).t_count == pytest.approx(2.0)
    with pytest.raises(NonpositiveEpsilon):
        synthesize_rotation(0.4, None, SynthesizerConfig("brute_force"))

@pytest.mark.parametrize("kwargs", [{"mode": "gridsynth"}, {"c0": 0.0}, {"max_t": -1}])
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        SynthesizerConfig(**kwargs)


# === Budget ===

@pytest.mark.parametrize("eps, k, expected", [(1e-3, 2, 1e-3), (1e-3, 5, 2.5e-4), (0.3, 31, 0.01)])
def test_budget_split(eps, k, expected):
    assert budget_split(eps, k) == pytest.approx(expected)

def test_budget_split_errors():
    with pytest.raises(KTooSmall):
        budget_split(1e-3, 1)
    with pytest.raises(NonpositiveEpsilon):
        budget_split(-1.0, 3)


# === Substitution ===

def test_rz_replacement_matches_rotation():
    theta = 0.9
    gate = rz_gate(2, theta)
    gates = rz_replacement(gate, brute_force(theta, 0.1))
    replaced = dense_unitary(Circuit(3, tuple(gates)))
    reference = dense_unitary(Circuit(3, (gate,)))
    assert np.max(np.abs(replaced - reference)) <= 0.1 + 1e-9

def test_replace_rotations_per_mode():
    c = Circuit(2, (cnot(0, 1), rz_gate(1, 0.5), cnot(0, 1), rz_gate(0, -1.0)))

    kept, results = replace_rotations(c, None, SynthesizerConfig("exact_rz"))
    assert kept == c and len(results) == 2

    estimated, results = replace_rotations(c, 0.01, SynthesizerConfig("cost_only"))
    assert estimated == c
    assert rotation_t_total(results) == pytest.approx(2 * 1.15 * math.log2(100))

    replaced, results = replace_rotations(c, 0.2, SynthesizerConfig("brute_force"))
    assert rotation_count(replaced) == 0
    deviation = np.max(np.abs(dense_unitary(replaced) - dense_unitary(c)))
    assert deviation <= 4 * 0.2 + 1e-9
    assert rotation_t_total(results) == sum(r.t_count for r in results)
