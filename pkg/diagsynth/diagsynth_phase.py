# -*- coding: utf-8 -*-
"""
Phase contexts of diagonal operators and their phase-context decomposition.

A diagonal exp(i f_k) whose distinct phases occupy contiguous blocks is written
as a global phase times k-1 commuting factors V(phi, ell), each rotating the
last ell basis states. Diagonals whose equal phases are scattered get one
factor per distinct phase after the first, acting on a union of intervals.
"""

import math
from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

try:
    from .diagsynth_config import PHASE_TOL
    from .diagsynth_utils import (
        LengthNotPowerOfTwo, SpecSchemaError, is_power_of_two, phases_equal, principal_angle,
    )
except ImportError:
    from diagsynth_config import PHASE_TOL
    from diagsynth_utils import (
        LengthNotPowerOfTwo, SpecSchemaError, is_power_of_two, phases_equal, principal_angle,
    )

Interval = Tuple[int, int]


# --- Types ---

@dataclass(frozen=True)
class DiagonalSpec:
    """Target diagonal as n plus the full phase vector (radians)."""
    n: int
    thetas: Tuple[float, ...]
    eps: Optional[float] = None

    def __post_init__(self):
        thetas = tuple(float(t) for t in self.thetas)
        object.__setattr__(self, 'thetas', thetas)
        if self.n < 1:
            raise SpecSchemaError(f"Register size must be at least 1, got {self.n}")
        if len(thetas) != 1 << self.n:
            raise SpecSchemaError(f"Expected {1 << self.n} phases for n={self.n}, got {len(thetas)}")
        if not all(math.isfinite(t) for t in thetas):
            raise SpecSchemaError("Phases must be finite")

    @classmethod
    def from_blocks(cls, n: int, blocks: Iterable[Tuple[float, int]], eps: Optional[float] = None) -> "DiagonalSpec":
        thetas: List[float] = []
        for theta, length in blocks:
            if length < 1:
                raise SpecSchemaError(f"Block lengths must be positive, got {length}")
            thetas.extend([float(theta)] * int(length))
        if len(thetas) != 1 << n:
            raise SpecSchemaError(f"Block lengths sum to {len(thetas)}, expected 2^{n} = {1 << n}")
        return cls(n, tuple(thetas), eps)

    @classmethod
    def from_thetas(cls, thetas: Sequence[float], eps: Optional[float] = None) -> "DiagonalSpec":
        if not is_power_of_two(len(thetas)) or len(thetas) < 2:
            raise LengthNotPowerOfTwo(f"Phase vector length {len(thetas)} is not a power of two >= 2")
        return cls(len(thetas).bit_length() - 1, tuple(thetas), eps)

    @classmethod
    def from_unitary_diagonal(cls, values: Sequence[complex]) -> "DiagonalSpec":
        """Principal arguments of the diagonal entries; branch cuts are the caller's concern."""
        return cls.from_thetas([principal_angle(t) for t in np.angle(np.asarray(values))])

    def diagonal(self) -> np.ndarray:
        return np.exp(1j * np.asarray(self.thetas))

    def target_matrix(self) -> np.ndarray:
        return np.diag(self.diagonal())


@dataclass(frozen=True)
class PhaseContext:
    phases: Tuple[float, ...]
    lengths: Tuple[int, ...]

    @property
    def k(self) -> int:
        return len(self.phases)

    @property
    def cumulative(self) -> Tuple[int, ...]:
        return tuple(int(x) for x in np.cumsum(self.lengths))

    @property
    def n(self) -> int:
        return sum(self.lengths).bit_length() - 1

    def blocks(self) -> List[Tuple[float, int]]:
        return list(zip(self.phases, self.lengths))


@dataclass(frozen=True)
class PcdFactor:
    """V(e^{i phase}, ell): rotates the last ell of 2^n basis states."""
    phase: float
    ell: int


@dataclass(frozen=True)
class ActivationFactor:
    """Phase applied to every index inside the disjoint half-open intervals."""
    phase: float
    intervals: Tuple[Interval, ...]

    def indices(self) -> List[int]:
        return [k for p, q in self.intervals for k in range(p, q)]


# --- Extraction ---
def extract_context(d: DiagonalSpec, tol: float = PHASE_TOL) -> PhaseContext:
    """Run-length encodes the diagonal, merging runs whose phases agree within tol."""
    phases: List[float] = []
    lengths: List[int] = []
    for theta in d.thetas:
        if phases and phases_equal(theta, phases[-1], tol):
            lengths[-1] += 1
        else:
            phases.append(theta)
            lengths.append(1)
    return PhaseContext(tuple(phases), tuple(lengths))

def distinct_phases(d: DiagonalSpec, tol: float = PHASE_TOL) -> List[float]:
    """Distinct phases in first-occurrence order."""
    reps: List[float] = []
    for theta in d.thetas:
        if not any(phases_equal(theta, r, tol) for r in reps):
            reps.append(theta)
    return reps

def is_block_structured(d: DiagonalSpec, tol: float = PHASE_TOL) -> bool:
    return extract_context(d, tol).k == len(distinct_phases(d, tol))


# --- Decomposition ---
def pcd_factorize(ctx: PhaseContext) -> Tuple[float, List[PcdFactor]]:
    """Global phase theta_1 and V(theta_{m+1} - theta_m, 2^n - L_m) for m = 1..k-1."""
    total = sum(ctx.lengths)
    factors = [
        PcdFactor(principal_angle(ctx.phases[m + 1] - ctx.phases[m]), total - ctx.cumulative[m])
        for m in range(ctx.k - 1)
    ]
    return ctx.phases[0], factors

def indices_to_intervals(indices: Iterable[int]) -> Tuple[Interval, ...]:
    intervals: List[List[int]] = []
    for k in sorted(indices):
        if intervals and intervals[-1][1] == k:
            intervals[-1][1] = k + 1
        else:
            intervals.append([k, k + 1])
    return tuple((p, q) for p, q in intervals)

def general_activation_sets(d: DiagonalSpec, tol: float = PHASE_TOL) -> Tuple[float, List[ActivationFactor]]:
    """
    Factors for diagonals whose equal phases need not be contiguous.

    Distinct phases are ranked by first occurrence. Factor r carries the ratio
    theta_r - theta_{r-1} and is active on every index whose phase has rank >= r,
    so index k accumulates exactly theta_{rank(k)}.
    """
    reps = distinct_phases(d, tol)
    ranks = [next(i for i, r in enumerate(reps) if phases_equal(theta, r, tol)) for theta in d.thetas]
    factors = []
    for r in range(1, len(reps)):
        active = [k for k, rank in enumerate(ranks) if rank >= r]
        factors.append(ActivationFactor(principal_angle(reps[r] - reps[r - 1]), indices_to_intervals(active)))
    return reps[0], factors

def reconstruct_thetas(n: int, global_phase: float, factors: Sequence) -> np.ndarray:
    """Phase vector produced by a global phase and PcdFactor/ActivationFactor terms."""
    size = 1 << n
    thetas = np.full(size, float(global_phase))
    for factor in factors:
        if isinstance(factor, PcdFactor):
            thetas[size - factor.ell:] += factor.phase
        else:
            for p, q in factor.intervals:
                thetas[p:q] += factor.phase
    return thetas


# --- Targets ---
def random_block_spec(n: int, k: int, rng: np.random.Generator) -> DiagonalSpec:
    """Block diagonal with k distinct random phases and random cut points."""
    size = 1 << n
    if not 1 <= k <= size:
        raise SpecSchemaError(f"Need 1 <= k <= 2^{n}, got k={k}")
    cuts = sorted(rng.choice(np.arange(1, size), size=k - 1, replace=False).tolist()) if k > 1 else []
    bounds = [0] + cuts + [size]
    phases = rng.uniform(-math.pi, math.pi, size=k)
    blocks = [(float(phases[i]), bounds[i + 1] - bounds[i]) for i in range(k)]
    return DiagonalSpec.from_blocks(n, blocks)
