# -*- coding: utf-8 -*-
"""
Walsh series of diagonal phase functions and the Rz + CNOT circuits built from
them.

The kernel is (-1)^popcount(j & k), so the transform is its own inverse up to a
factor 2^n. Bit b of a Walsh index j refers to qubit n-1-b (qubit 0 is the most
significant bit of k).
"""

from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import numpy as np

try:
    from .diagsynth_circuit import Circuit, Gate, cnot, gphase, rz_gate
    from .diagsynth_config import ZERO_COEFF_TOL
    from .diagsynth_utils import LengthNotPowerOfTwo, format_float, is_power_of_two
except ImportError:
    from diagsynth_circuit import Circuit, Gate, cnot, gphase, rz_gate
    from diagsynth_config import ZERO_COEFF_TOL
    from diagsynth_utils import LengthNotPowerOfTwo, format_float, is_power_of_two


@dataclass(frozen=True)
class WalshCoefficients:
    n: int
    a: np.ndarray

    def __len__(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class SparseWalsh:
    """Kept coefficients of a (possibly truncated) Walsh series, keyed by j."""
    n: int
    terms: Dict[int, float] = field(default_factory=dict)

    @property
    def rotation_indices(self) -> List[int]:
        return sorted(j for j in self.terms if j != 0)

    def dense(self) -> WalshCoefficients:
        a = np.zeros(1 << self.n)
        for j, value in self.terms.items():
            a[j] = value
        return WalshCoefficients(self.n, a)


# --- Transform ---
def fwht(values: np.ndarray) -> np.ndarray:
    """Unnormalised fast Walsh-Hadamard butterfly, O(n 2^n)."""
    out = np.array(values, dtype=float)
    size = out.shape[0]
    if not is_power_of_two(size):
        raise LengthNotPowerOfTwo(f"Length {size} is not a power of two")
    h = 1
    while h < size:
        blocks = out.reshape(-1, 2, h)
        lo = blocks[:, 0, :].copy()
        hi = blocks[:, 1, :]
        blocks[:, 0, :] += hi
        blocks[:, 1, :] = lo - hi
        h *= 2
    return out

def walsh_transform(f) -> WalshCoefficients:
    """a_j = 2^-n * sum_k f_k (-1)^popcount(j & k)."""
    f = np.asarray(f, dtype=float)
    a = fwht(f) / f.shape[0]
    return WalshCoefficients(f.shape[0].bit_length() - 1, a)

def inverse_walsh(coeffs: WalshCoefficients) -> np.ndarray:
    return fwht(coeffs.a)


# --- Truncation ---
def truncate(coeffs: WalshCoefficients, eps: float) -> Tuple[SparseWalsh, float]:
    """
    Drops the smallest coefficients while their absolute sum stays within eps.

    Coefficients at or below ZERO_COEFF_TOL are transform round-off of exact
    zeros; they are dropped and left out of the bound, so the bound never exceeds
    eps. The constant term a_0 only contributes a global phase gate and is never
    dropped. Returns the kept terms and the dropped absolute sum, which bounds the
    per-entry phase error.
    """
    if eps < 0:
        raise ValueError(f"Truncation tolerance must be nonnegative, got {eps}")
    magnitudes = np.abs(coeffs.a)
    kept = {j: float(coeffs.a[j]) for j in range(len(coeffs)) if magnitudes[j] > ZERO_COEFF_TOL}
    bound = 0.0

    candidates = sorted((j for j in kept if j != 0), key=lambda j: (magnitudes[j], j))
    for j in candidates:
        if bound + magnitudes[j] > eps:
            break
        bound += float(magnitudes[j])
        del kept[j]
    return SparseWalsh(coeffs.n, kept), bound

def reconstruct_phases(sparse: SparseWalsh) -> np.ndarray:
    return inverse_walsh(sparse.dense())


# --- Circuit ---
def walsh_term_gates(n: int, j: int, coefficient: float) -> List[Gate]:
    """Parity fan-in onto the lowest set bit's qubit, Rz(-2 a_j), mirrored fan-out."""
    qubits = [n - 1 - b for b in range(n) if (j >> b) & 1]
    target, others = qubits[0], qubits[1:]
    fan_in = [cnot(q, target) for q in others]
    return fan_in + [rz_gate(target, -2.0 * coefficient)] + fan_in[::-1]

def walsh_circuit(sparse: SparseWalsh) -> Circuit:
    gates: List[Gate] = []
    a0 = sparse.terms.get(0, 0.0)
    if a0:
        gates.append(gphase(a0))
    for j in sparse.rotation_indices:
        gates.extend(walsh_term_gates(sparse.n, j, sparse.terms[j]))
    return Circuit(sparse.n, tuple(gates))


# --- Export ---
def walsh_spectrum_csv(coeffs: WalshCoefficients) -> str:
    rows = ["j,a_j"]
    rows.extend(f"{j},{format_float(value)}" for j, value in enumerate(coeffs.a))
    return "\n".join(rows) + "\n"
