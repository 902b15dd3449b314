# -*- coding: utf-8 -*-
"""
T-count ledgers, the Walsh-versus-PCD decision boundaries, entanglement sweeps
and the fits derived from them.

The boundaries compare 2^n rotations (Walsh) against k-1 rotations plus k-1
paired entanglers (PCD):

    2^n C0 L = (k - 1) (C0 L + E(n)),   L = log2(1/eps)

with E(n) = kappa n^2 in the worst case and 72 (n - 3) in the best case.
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

try:
    from .diagsynth_circuit import TOFFOLI_T_COUNT
    from .diagsynth_config import (
        BEST_CASE_SLOPE, DEFAULT_C0, DEFAULT_KAPPA, DEFAULT_SWEEP_LIMIT, REFERENCE_BETA,
        REFERENCE_REL_TOL, WALSH_TRUNCATION_SHARE,
    )
    from .diagsynth_entangler import (
        activation_plan, ced2, choose_plan, entanglement_cost, plan_toffoli_count, plan_width,
    )
    from .diagsynth_phase import (
        ActivationFactor, DiagonalSpec, extract_context, general_activation_sets, is_block_structured,
        pcd_factorize,
    )
    from .diagsynth_rotsynth import budget_split
    from .diagsynth_utils import EpsilonOutOfRange, SweepLimitExceeded, format_float
    from .diagsynth_walsh import truncate, walsh_transform
except ImportError:
    from diagsynth_circuit import TOFFOLI_T_COUNT
    from diagsynth_config import (
        BEST_CASE_SLOPE, DEFAULT_C0, DEFAULT_KAPPA, DEFAULT_SWEEP_LIMIT, REFERENCE_BETA,
        REFERENCE_REL_TOL, WALSH_TRUNCATION_SHARE,
    )
    from diagsynth_entangler import (
        activation_plan, ced2, choose_plan, entanglement_cost, plan_toffoli_count, plan_width,
    )
    from diagsynth_phase import (
        ActivationFactor, DiagonalSpec, extract_context, general_activation_sets, is_block_structured,
        pcd_factorize,
    )
    from diagsynth_rotsynth import budget_split
    from diagsynth_utils import EpsilonOutOfRange, SweepLimitExceeded, format_float
    from diagsynth_walsh import truncate, walsh_transform


# --- Ledgers ---

@dataclass(frozen=True)
class CostReport:
    method: str
    rotation_count: int
    rotation_t_estimate: float
    entanglement_t: int
    width: int

    @property
    def total_t(self) -> float:
        return self.rotation_t_estimate + self.entanglement_t


@dataclass(frozen=True)
class DecisionPoint:
    n: int
    k: int
    eps: float
    boundary_k: float
    choice: str


def _log_inverse(eps: float) -> float:
    if not 0 < eps < 1:
        raise EpsilonOutOfRange(f"Precision must lie in (0, 1), got {eps}")
    return math.log2(1.0 / eps)


# --- Decision boundaries ---
def best_case_entanglement(n: int) -> float:
    """72 (n - 3), clamped at zero below three qubits."""
    return max(0.0, BEST_CASE_SLOPE * (n - 3))

def boundary_k(n: int, eps: float, c0: float, entanglement_term: float) -> float:
    """k solving 2^n C0 L = (k - 1)(C0 L + E)."""
    if n < 1:
        raise ValueError(f"n must be at least 1, got {n}")
    if not c0 > 0 or entanglement_term < 0:
        raise ValueError(f"Need C0 > 0 and a nonnegative entanglement term, got {c0}, {entanglement_term}")
    rotation = c0 * _log_inverse(eps)
    return 1.0 + (1 << n) * rotation / (rotation + entanglement_term)

def worst_case_boundary(n: int, eps: float, c0: float = DEFAULT_C0, kappa: float = DEFAULT_KAPPA) -> float:
    if kappa < 0:
        raise ValueError(f"kappa must be nonnegative, got {kappa}")
    return boundary_k(n, eps, c0, kappa * n * n)

def best_case_boundary(n: int, eps: float, c0: float = DEFAULT_C0) -> float:
    return boundary_k(n, eps, c0, best_case_entanglement(n))

def boundary_bisection(n: int, eps: float, c0: float, entanglement_term: float, iterations: int = 200) -> float:
    """Solves the boundary equality numerically on [1, 1 + 2^n]."""
    rotation = c0 * _log_inverse(eps)
    walsh = (1 << n) * rotation

    def excess(k: float) -> float:
        return (k - 1.0) * (rotation + entanglement_term) - walsh

    lo, hi = 1.0, 1.0 + (1 << n)
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if excess(mid) < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return 0.5 * (lo + hi)

def decide(n: int, k: int, eps: float, c0: float = DEFAULT_C0, kappa: float = DEFAULT_KAPPA) -> DecisionPoint:
    """Worst-case model choice: pcd strictly below the boundary, walsh above."""
    k_star = worst_case_boundary(n, eps, c0, kappa)
    if math.isclose(k, k_star, rel_tol=1e-12):
        choice = "tie"
    else:
        choice = "pcd" if k < k_star else "walsh"
    return DecisionPoint(n, k, eps, k_star, choice)

def decision_surface(n_values: Iterable[int], k_values: Iterable[int], eps_values: Iterable[float],
                     c0: float = DEFAULT_C0, kappa: float = DEFAULT_KAPPA) -> List[Dict]:
    rows = []
    k_values, eps_values = list(k_values), list(eps_values)
    for n in n_values:
        for eps in eps_values:
            best = best_case_boundary(n, eps, c0)
            for k in k_values:
                point = decide(n, k, eps, c0, kappa)
                rows.append({
                    "n": n, "k": k, "log10_inv_eps": math.log10(1.0 / eps), "choice": point.choice,
                    "k_star_worst": point.boundary_k, "k_star_best": best,
                })
    return rows

def decision_surface_csv(rows: Sequence[Dict]) -> str:
    lines = ["n,k,log10_inv_eps,choice,k_star_worst,k_star_best"]
    for r in rows:
        lines.append(
            f"{r['n']},{r['k']},{format_float(r['log10_inv_eps'])},{r['choice']},"
            f"{format_float(r['k_star_worst'])},{format_float(r['k_star_best'])}"
        )
    return "\n".join(lines) + "\n"


# --- Measured pipeline costs ---
@lru_cache(maxsize=4096)
def activation_cost(n: int, intervals: Tuple[Tuple[int, int], ...]) -> Tuple[int, int]:
    """(paired T-count, width) of the entangler for a union of intervals."""
    plan = activation_plan(n, intervals)
    return ced2(plan, 1.0).entanglement_t, plan_width(plan)

def pcd_factor_costs(d: DiagonalSpec) -> Tuple[List[int], int]:
    """Paired entanglement T-count per factor, and the widest factor's width."""
    if is_block_structured(d):
        _, factors = pcd_factorize(extract_context(d))
        costs = [entanglement_cost(d.n, f.ell) for f in factors]
        widths = [plan_width(choose_plan(d.n, f.ell)) for f in factors]
    else:
        _, factors = general_activation_sets(d)
        pairs = [activation_cost(d.n, f.intervals) for f in factors]
        costs = [p[0] for p in pairs]
        widths = [p[1] for p in pairs]
    return costs, max(widths, default=d.n)

def pcd_cost(d: DiagonalSpec, eps: float, c0: float = DEFAULT_C0) -> CostReport:
    """(k-1) C0 log2((k-1)/eps) plus the measured entanglement of every factor."""
    costs, width = pcd_factor_costs(d)
    rotations = len(costs)
    rotation_t = rotations * c0 * _log_inverse(budget_split(eps, rotations + 1)) if rotations else 0.0
    return CostReport("pcd", rotations, rotation_t, int(sum(costs)), width)

def walsh_cost(d: DiagonalSpec, eps: float, c0: float = DEFAULT_C0) -> CostReport:
    """Truncation spends a fixed share of eps; the rest is split over the kept rotations."""
    _log_inverse(eps)
    sparse, bound = truncate(walsh_transform(d.thetas), WALSH_TRUNCATION_SHARE * eps)
    rotations = len(sparse.rotation_indices)
    rotation_t = rotations * c0 * math.log2(rotations / (eps - bound)) if rotations else 0.0
    return CostReport("walsh", rotations, rotation_t, 0, d.n)

def choose_method(d: DiagonalSpec, eps: float, c0: float = DEFAULT_C0,
                  kappa: float = DEFAULT_KAPPA) -> Tuple[DecisionPoint, Dict[str, CostReport], str]:
    """Measured costs of both pipelines, the cheaper one (ties to pcd), and the model's view."""
    reports = {"walsh": walsh_cost(d, eps, c0), "pcd": pcd_cost(d, eps, c0)}
    chosen = "pcd" if reports["pcd"].total_t <= reports["walsh"].total_t else "walsh"
    k = reports["pcd"].rotation_count + 1
    return decide(d.n, k, eps, c0, kappa), reports, chosen

def model_costs(n: int, k: int, eps: float, c0: float = DEFAULT_C0,
                kappa: float = DEFAULT_KAPPA) -> Tuple[float, float]:
    """Worst-case model T-counts (walsh, pcd) on either side of the boundary equality."""
    rotation = c0 * _log_inverse(eps)
    return (1 << n) * rotation, (k - 1) * (rotation + kappa * n * n)

def model_residual(n: int, reports: Dict[str, CostReport], eps: float, c0: float = DEFAULT_C0,
                   kappa: float = DEFAULT_KAPPA) -> float:
    """
    Largest gap between a measured pipeline cost and its model estimate.

    When the measured costs differ by more than twice this, the measured choice
    and the model's choice agree.
    """
    walsh_model, pcd_model = model_costs(n, reports["pcd"].rotation_count + 1, eps, c0, kappa)
    return max(abs(reports["walsh"].total_t - walsh_model), abs(reports["pcd"].total_t - pcd_model))

def dense_walsh_estimate(n: int, eps: float, c0: float = DEFAULT_C0) -> float:
    """Walsh T estimate when all 2^n rotations survive truncation."""
    return model_costs(n, 1, eps, c0)[0]


# --- Sweeps ---

@dataclass(frozen=True)
class SweepRow:
    ell: int
    toffoli_count: int
    t_count: int


@dataclass(frozen=True)
class SweepTable:
    n: int
    rows: Tuple[SweepRow, ...] = field(default_factory=tuple)

    @property
    def max_toffoli(self) -> int:
        return max((r.toffoli_count for r in self.rows), default=0)

    @property
    def min_odd_t(self) -> Optional[int]:
        odd = [r.t_count for r in self.rows if r.ell % 2]
        return min(odd) if odd else None

    def to_csv(self) -> str:
        lines = ["ell,toffoli_count,t_count"]
        lines.extend(f"{r.ell},{r.toffoli_count},{r.t_count}" for r in self.rows)
        return "\n".join(lines) + "\n"


def _check_sweep_limit(n: int, limit: int) -> None:
    if n < 1 or n > limit:
        raise SweepLimitExceeded(f"Sweep size n={n} is outside [1, {limit}]")

def max_toffoli_count(n: int, limit: int = DEFAULT_SWEEP_LIMIT) -> int:
    """Largest Toffoli count of a single X^n(ell) over ell < 2^n."""
    _check_sweep_limit(n, limit)
    return max(plan_toffoli_count(choose_plan(n, ell)) for ell in range(1 << n))

def min_odd_entanglement(n: int, limit: int = DEFAULT_SWEEP_LIMIT) -> int:
    """Smallest paired entanglement T-count over odd ell."""
    _check_sweep_limit(n, limit)
    return min(entanglement_cost(n, ell) for ell in range(1, 1 << n, 2))

def sweep_toffoli_counts(n: int, limit: int = DEFAULT_SWEEP_LIMIT) -> SweepTable:
    """Toffoli count of X^n(ell) and paired T-count E(n, ell) for every ell < 2^n."""
    _check_sweep_limit(n, limit)
    rows = tuple(
        SweepRow(ell, plan_toffoli_count(choose_plan(n, ell)), entanglement_cost(n, ell))
        for ell in range(1 << n)
    )
    return SweepTable(n, rows)


# --- Fits ---

@dataclass(frozen=True)
class ReferenceCheck:
    name: str
    value: float
    reference: float
    rel_tol: float = REFERENCE_REL_TOL

    @property
    def relative_deviation(self) -> float:
        return abs(self.value - self.reference) / abs(self.reference)

    @property
    def within(self) -> bool:
        return self.relative_deviation <= self.rel_tol

    def describe(self) -> str:
        verdict = "within" if self.within else "OUTSIDE"
        return (f"{self.name} = {self.value:.4g} vs reference {self.reference:.4g} "
                f"({100 * self.relative_deviation:.1f}% off, {verdict} {100 * self.rel_tol:.0f}%)")


def fit_beta(ns: Sequence[int], limit: int = DEFAULT_SWEEP_LIMIT) -> float:
    """Least-squares beta in max_ell Toffoli(n, ell) ~ beta n^2."""
    ns = np.asarray(list(ns), dtype=float)
    maxima = np.array([max_toffoli_count(int(n), limit) for n in ns], dtype=float)
    return float(np.dot(maxima, ns ** 2) / np.dot(ns ** 2, ns ** 2))

def fit_best_case_slope(ns: Sequence[int], limit: int = DEFAULT_SWEEP_LIMIT) -> float:
    """Least-squares a in min_{odd ell} E(n, ell) ~ a (n - 3), over n > 3."""
    shifted = np.array([n - 3 for n in ns if n > 3], dtype=float)
    if not len(shifted):
        raise ValueError("Best-case fit needs at least one n > 3")
    minima = np.array([min_odd_entanglement(int(s) + 3, limit) for s in shifted], dtype=float)
    return float(np.dot(minima, shifted) / np.dot(shifted, shifted))

def beta_check(ns: Sequence[int]) -> ReferenceCheck:
    return ReferenceCheck("beta", fit_beta(ns), REFERENCE_BETA)

def best_case_check(ns: Sequence[int]) -> ReferenceCheck:
    return ReferenceCheck("best-case slope", fit_best_case_slope(ns), BEST_CASE_SLOPE)

def measured_kappa(n: int, limit: int = DEFAULT_SWEEP_LIMIT) -> float:
    """Worst paired entanglement T-count over ell, divided by n^2."""
    _check_sweep_limit(n, limit)
    return max(entanglement_cost(n, ell) for ell in range(1 << n)) / float(n * n)

def self_similarity(table: SweepTable) -> float:
    """Correlation of Toffoli counts at ell and 2^n - ell over 0 < ell < 2^n."""
    size = 1 << table.n
    counts = {r.ell: r.toffoli_count for r in table.rows}
    ells = range(1, size)
    left = np.array([counts[ell] for ell in ells], dtype=float)
    right = np.array([counts[size - ell] for ell in ells], dtype=float)
    if left.std() == 0 or right.std() == 0:
        return 1.0
    return float(np.corrcoef(left, right)[0, 1])

def controlled_w_comparison(eps: float, c0: float = DEFAULT_C0) -> Dict[str, float]:
    """Rotation T estimates: four diagonal pieces versus nine axial rotations."""
    per_rotation = c0 * _log_inverse(eps)
    return {"controlled_w": 4 * per_rotation, "alternative": 9 * per_rotation}

def expanded_toffoli_t(toffolis: int) -> int:
    return TOFFOLI_T_COUNT * toffolis
