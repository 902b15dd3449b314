# -*- coding: utf-8 -*-
"""
Single-qubit phase rotation synthesis behind one small contract.

Each mode turns P(theta) = diag(1, e^{i theta}) into a RotationResult:

    exact_rz     GlobalPhase(theta/2) Rz(theta), error 0, T-count 0
    brute_force  minimum-T Clifford+T word within eps, found layer by layer
    cost_only    no circuit, T-count estimate C0 * log2(1/eps)
"""

import math
from dataclasses import dataclass
from functools import lru_cache, partial
from typing import Callable, Iterator, List, Optional, Tuple

import numpy as np

try:
    from .diagsynth_circuit import Circuit, Gate, GateKind, gphase, h_gate, rz_gate, s_gate, t_gate
    from .diagsynth_config import BRUTE_FORCE_MAX_LAYER, DEFAULT_C0, DEFAULT_MAX_T, ROT_MODES
    from .diagsynth_utils import KTooSmall, NonpositiveEpsilon, PrecisionUnreachable
except ImportError:
    from diagsynth_circuit import Circuit, Gate, GateKind, gphase, h_gate, rz_gate, s_gate, t_gate
    from diagsynth_config import BRUTE_FORCE_MAX_LAYER, DEFAULT_C0, DEFAULT_MAX_T, ROT_MODES
    from diagsynth_utils import KTooSmall, NonpositiveEpsilon, PrecisionUnreachable


@dataclass(frozen=True)
class SynthesizerConfig:
    mode: str = "exact_rz"
    c0: float = DEFAULT_C0
    max_t: int = DEFAULT_MAX_T

    def __post_init__(self):
        if self.mode not in ROT_MODES.values():
            raise ValueError(f"Unknown rotation mode '{self.mode}', expected one of {sorted(ROT_MODES.values())}")
        if not self.c0 > 0:
            raise ValueError(f"C0 must be positive, got {self.c0}")
        if self.max_t < 0:
            raise ValueError(f"max_t must be nonnegative, got {self.max_t}")

    @property
    def emits_circuits(self) -> bool:
        return self.mode != "cost_only"


@dataclass(frozen=True)
class RotationResult:
    """circuit is a one-qubit circuit realising P(theta), or None for estimates."""
    circuit: Optional[Circuit]
    error: float
    t_count: float


# --- Matrices ---
_I2 = np.eye(2, dtype=complex)
_H2 = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)
_S2 = np.diag([1, 1j]).astype(complex)
_T2 = np.diag([1, np.exp(1j * math.pi / 4)]).astype(complex)
_TOKEN_MATRICES = {"H": _H2, "S": _S2, "T": _T2}
_TOKEN_GATES = {"H": h_gate, "S": s_gate, "T": t_gate}

# Syllables of the normal form, as operator products read left to right
_SYLLABLES: Tuple[Tuple[str, ...], ...] = (("H", "T"), ("S", "H", "T"))


def phase_matrix(theta: float) -> np.ndarray:
    return np.diag([1.0, np.exp(1j * theta)]).astype(complex)

def _operator(tokens) -> np.ndarray:
    out = _I2
    for token in tokens:
        out = out @ _TOKEN_MATRICES[token]
    return out

def _phase_key(u: np.ndarray) -> Tuple:
    flat = u.reshape(-1)
    lead = flat[np.argmax(np.abs(flat) > 1e-9)]
    normalised = flat * (abs(lead) / lead)
    return tuple(np.round(normalised, 8).tolist())


@lru_cache(maxsize=1)
def clifford_words() -> Tuple[Tuple[str, ...], ...]:
    """Shortest {H, S} operator word for each of the 24 single-qubit Cliffords mod phase."""
    words: List[Tuple[str, ...]] = [()]
    seen = {_phase_key(_I2)}
    frontier = [()]
    while frontier:
        next_frontier = []
        for word in frontier:
            for token in ("H", "S"):
                candidate = word + (token,)
                key = _phase_key(_operator(candidate))
                if key not in seen:
                    seen.add(key)
                    words.append(candidate)
                    next_frontier.append(candidate)
        frontier = next_frontier
    return tuple(words)

@lru_cache(maxsize=1)
def _clifford_stack() -> np.ndarray:
    return np.stack([_operator(w) for w in clifford_words()])


# --- Normal-form layers ---
@lru_cache(maxsize=None)
def _syllable_layer(t: int) -> np.ndarray:
    """Operators of all 2^t syllable strings; bit i of the index picks syllable i."""
    if t == 0:
        return _I2[None, :, :]
    previous = _syllable_layer(t - 1)
    return np.concatenate([previous @ _operator(s) for s in _SYLLABLES])

def _syllable_tokens(t: int, index: int) -> Tuple[str, ...]:
    tokens: Tuple[str, ...] = ()
    for position in range(t):
        choice = (index >> position) & 1
        tokens += _SYLLABLES[choice]
    return tokens

def _layer_prefixes(t: int) -> Tuple[np.ndarray, Callable[[int], Tuple[bool, int, int]]]:
    """Prefixes with exactly t T gates: t syllables, or a leading T plus t-1 syllables."""
    plain = _syllable_layer(t)
    if t == 0:
        return plain, lambda i: (False, 0, i)
    size = plain.shape[0]
    led = _T2 @ _syllable_layer(t - 1)
    return np.concatenate([plain, led]), lambda i: (False, t, i) if i < size else (True, t - 1, i - size)

def _syllable_chunks(s: int) -> Iterator[Tuple[int, np.ndarray]]:
    """All 2^s syllable strings in blocks of 2^BRUTE_FORCE_MAX_LAYER, with each block's first index."""
    low = min(s, BRUTE_FORCE_MAX_LAYER)
    base = _syllable_layer(low)
    for high in range(1 << (s - low)):
        yield high << low, base @ _operator(_syllable_tokens(s - low, high))

def _chunk_label(leading: bool, s: int, offset: int, i: int) -> Tuple[bool, int, int]:
    return leading, s, offset + i

def _layer_chunks(t: int) -> Iterator[Tuple[np.ndarray, Callable[[int], Tuple[bool, int, int]]]]:
    if t <= BRUTE_FORCE_MAX_LAYER:
        yield _layer_prefixes(t)
        return
    for leading, s in ((False, t), (True, t - 1)):
        for offset, block in _syllable_chunks(s):
            yield (_T2 @ block if leading else block), partial(_chunk_label, leading, s, offset)

def _aligned_distance(us: np.ndarray, target: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Max-entry distance after aligning the (0, 0) entry; target[0, 0] is 1."""
    corner = us[:, 0, 0]
    mags = np.abs(corner)
    lam = np.where(mags > 1e-15, corner / np.where(mags > 1e-15, mags, 1.0), 1.0)
    diff = np.abs(us - lam[:, None, None] * target[None, :, :])
    return diff.reshape(len(us), -1).max(axis=1), lam


def brute_force(theta: float, eps: float, max_t: int = DEFAULT_MAX_T) -> RotationResult:
    """
    Minimum-T Clifford+T circuit within eps of P(theta), up to an explicit
    global phase gate. Ties on T-count go to the smaller distance, then to the
    first word in enumeration order.
    """
    if not eps > 0:
        raise NonpositiveEpsilon(f"Precision must be positive, got {eps}")
    target = phase_matrix(theta)
    cliffords = _clifford_stack()

    for t in range(max_t + 1):
        best: Optional[Tuple[float, Tuple[bool, int, int], int, complex]] = None
        for prefixes, label_of in _layer_chunks(t):
            for c_index in range(len(cliffords)):
                distances, lams = _aligned_distance(prefixes @ cliffords[c_index], target)
                i = int(np.argmin(distances))
                if distances[i] <= eps and (best is None or distances[i] < best[0] - 1e-15):
                    best = (float(distances[i]), label_of(i), c_index, complex(lams[i]))
        if best is not None:
            distance, (leading, syllables, s_index), c_index, lam = best
            tokens = (("T",) if leading else ()) + _syllable_tokens(syllables, s_index) + clifford_words()[c_index]
            return RotationResult(_circuit_from_operator(tokens, -float(np.angle(lam))), distance, t)
    raise PrecisionUnreachable(f"No Clifford+T word with at most {max_t} T gates is within {eps} of P({theta})")

def _circuit_from_operator(tokens: Tuple[str, ...], phase: float) -> Circuit:
    # operators read left to right act last-first
    gates = [_TOKEN_GATES[token](0) for token in reversed(tokens)]
    if abs(phase) > 1e-15:
        gates.append(gphase(phase))
    return Circuit(1, tuple(gates))


def exact_rz(theta: float) -> RotationResult:
    return RotationResult(Circuit(1, (gphase(theta / 2.0), rz_gate(0, theta))), 0.0, 0)

def cost_only(eps: float, c0: float = DEFAULT_C0) -> RotationResult:
    if not eps > 0:
        raise NonpositiveEpsilon(f"Precision must be positive, got {eps}")
    return RotationResult(None, eps, c0 * math.log2(1.0 / eps))


def synthesize_rotation(theta: float, eps: Optional[float], cfg: SynthesizerConfig) -> RotationResult:
    """P(e^{i theta}) under the configured mode."""
    if cfg.mode == "exact_rz":
        return exact_rz(theta)
    if eps is None or not eps > 0:
        raise NonpositiveEpsilon(f"Precision must be positive, got {eps}")
    if cfg.mode == "cost_only":
        return cost_only(eps, cfg.c0)
    return _cached_brute_force(float(theta), float(eps), cfg.max_t)

@lru_cache(maxsize=4096)
def _cached_brute_force(theta: float, eps: float, max_t: int) -> RotationResult:
    return brute_force(theta, eps, max_t)

def budget_split(eps: float, k: int) -> float:
    """Per-factor precision eps/(k-1) for k-1 concatenated factors."""
    if not eps > 0:
        raise NonpositiveEpsilon(f"Precision must be positive, got {eps}")
    if k < 2:
        raise KTooSmall(f"Budget split needs k >= 2, got {k}")
    return eps / (k - 1)


# --- Substitution ---
def rz_replacement(gate: Gate, result: RotationResult) -> List[Gate]:
    """Gates replacing Rz(phi) on gate.target, using Rz(phi) = e^{-i phi/2} P(phi)."""
    relabel = {0: gate.target}
    return [gphase(-gate.angle / 2.0)] + [g.relabel(relabel) for g in result.circuit.gates]

def replace_rotations(circuit: Circuit, eps: Optional[float], cfg: SynthesizerConfig) -> Tuple[Circuit, List[RotationResult]]:
    """
    Synthesizes every Rz slot at precision eps.

    In cost_only mode the slots stay in place and only the estimates are
    returned.
    """
    results: List[RotationResult] = []
    gates: List[Gate] = []
    for gate in circuit.gates:
        if gate.kind is not GateKind.RZ:
            gates.append(gate)
            continue
        result = synthesize_rotation(gate.angle, eps, cfg)
        results.append(result)
        if result.circuit is None or cfg.mode == "exact_rz":
            gates.append(gate)
        else:
            gates.extend(rz_replacement(gate, result))
    return circuit.with_gates(gates), results

def rotation_t_total(results: List[RotationResult]) -> float:
    return float(sum(r.t_count for r in results))
