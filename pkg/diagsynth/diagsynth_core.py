# -*- coding: utf-8 -*-
"""
Core logic for diagsynth, including the main class that orchestrates phase
context decomposition, cascaded entanglers, rotation synthesis and the final
dense verification.
"""

import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

# --- Imports from other modules ---
try:
    from .diagsynth_circuit import (
        Circuit, dense_unitary, compare_up_to_global_phase, gphase, project_to_ancilla_zero, t_count,
    )
    from .diagsynth_config import (
        DEFAULT_C0, DEFAULT_DENSE_LIMIT, DEFAULT_EPS, DEFAULT_KAPPA, DEFAULT_MAX_T, DEFAULT_METHOD,
        DEFAULT_ROT_MODE, EXACT_TOL, INVARIANCE_TOL, MAX_BUDGET_REFINEMENTS, METHODS, ROT_MODES,
        WALSH_TRUNCATION_SHARE,
    )
    from .diagsynth_cost import CostReport, DecisionPoint, choose_method, model_residual
    from .diagsynth_entangler import activation_plan, ced2, choose_plan
    from .diagsynth_phase import (
        DiagonalSpec, extract_context, general_activation_sets, is_block_structured, pcd_factorize,
    )
    from .diagsynth_rotsynth import SynthesizerConfig, budget_split, replace_rotations, rotation_t_total
    from .diagsynth_schema import CostReportModel
    from .diagsynth_utils import (
        AncillaNotRestored, DimensionMismatch, NonpositiveEpsilon, VerificationFailed, format_float,
        log_message,
    )
    from .diagsynth_walsh import truncate, walsh_circuit, walsh_transform
except ImportError:
    from diagsynth_circuit import (
        Circuit, dense_unitary, compare_up_to_global_phase, gphase, project_to_ancilla_zero, t_count,
    )
    from diagsynth_config import (
        DEFAULT_C0, DEFAULT_DENSE_LIMIT, DEFAULT_EPS, DEFAULT_KAPPA, DEFAULT_MAX_T, DEFAULT_METHOD,
        DEFAULT_ROT_MODE, EXACT_TOL, INVARIANCE_TOL, MAX_BUDGET_REFINEMENTS, METHODS, ROT_MODES,
        WALSH_TRUNCATION_SHARE,
    )
    from diagsynth_cost import CostReport, DecisionPoint, choose_method, model_residual
    from diagsynth_entangler import activation_plan, ced2, choose_plan
    from diagsynth_phase import (
        DiagonalSpec, extract_context, general_activation_sets, is_block_structured, pcd_factorize,
    )
    from diagsynth_rotsynth import SynthesizerConfig, budget_split, replace_rotations, rotation_t_total
    from diagsynth_schema import CostReportModel
    from diagsynth_utils import (
        AncillaNotRestored, DimensionMismatch, NonpositiveEpsilon, VerificationFailed, format_float,
        log_message,
    )
    from diagsynth_walsh import truncate, walsh_circuit, walsh_transform


# --- Results ---

@dataclass(frozen=True)
class Verification:
    """deviation is None when the dense check was skipped."""
    deviation: Optional[float]
    method: str
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.deviation is None or self.deviation <= self.tolerance


@dataclass(frozen=True)
class SynthesisResult:
    circuit: Circuit
    cost: CostReport
    verification: Optional[Verification] = None
    budget: Optional[float] = None
    decision: Optional[DecisionPoint] = None
    alternatives: Dict[str, CostReport] = field(default_factory=dict)

    def to_report(self) -> CostReportModel:
        deviation = self.verification.deviation if self.verification else None
        return CostReportModel(
            method=self.cost.method, rotations=self.cost.rotation_count,
            entanglement_t=self.cost.entanglement_t, total_t=self.cost.total_t,
            width=self.cost.width, deviation=deviation,
        )


@dataclass(frozen=True)
class _Build:
    circuit: Circuit
    cost: CostReport
    budget: Optional[float]
    tolerance: float


def resolve_rot_mode(rot_mode: str) -> str:
    """Accepts either the short CLI names or the internal mode names."""
    if rot_mode in ROT_MODES:
        return ROT_MODES[rot_mode]
    if rot_mode in ROT_MODES.values():
        return rot_mode
    raise ValueError(f"Unknown rotation mode '{rot_mode}', expected one of {sorted(ROT_MODES)}")


# --- Verification ---
def verify(c: Circuit, d: DiagonalSpec, leak_tol: float = INVARIANCE_TOL,
           limit: int = DEFAULT_DENSE_LIMIT) -> float:
    """
    Deviation of the ancilla-|0> block of c from diag(e^{i theta_k}), up to
    global phase. The block must also be invariant: off-block entries above
    leak_tol raise AncillaNotRestored.
    """
    if c.register_width != d.n:
        raise DimensionMismatch(
            f"Circuit acts on {c.register_width} register qubits, spec has n={d.n}"
        )
    block, leak = project_to_ancilla_zero(dense_unitary(c, limit), c)
    if leak > leak_tol:
        raise AncillaNotRestored(f"Ancilla subspace leaks {format_float(leak)} (tolerance {format_float(leak_tol)})")
    return compare_up_to_global_phase(block, d.target_matrix())


# --- Main Class ---

class DiagonalSynthesizer:
    """
    Synthesizes a Clifford+T (+Rz) circuit for one diagonal unitary.

    The pcd path decomposes the diagonal into a global phase and k-1 factors,
    wraps one rotation slot per factor in a paired cascaded entangler and fills
    the slots at precision eps/(k-1). The walsh path emits one rotation per
    kept Walsh coefficient. auto measures both and keeps the cheaper one.
    """

    def __init__(
            self,
            spec: DiagonalSpec,
            eps: Optional[float] = None,
            # Pipeline
            method: str = DEFAULT_METHOD, rot_mode: str = DEFAULT_ROT_MODE,
            # Cost model
            c0: float = DEFAULT_C0, kappa: float = DEFAULT_KAPPA, max_t: int = DEFAULT_MAX_T,
            # Verification
            verify: bool = False, dense_limit: int = DEFAULT_DENSE_LIMIT,
            # Behavior
            verbose: bool = False, colorize: bool = False,
    ):
        if method not in METHODS:
            raise ValueError(f"Unknown method '{method}', expected one of {list(METHODS)}")
        self.spec = spec
        self.method = method
        self.rot_config = SynthesizerConfig(resolve_rot_mode(rot_mode), c0, max_t)
        self.c0 = c0
        self.kappa = kappa
        self.verify = verify
        self.dense_limit = dense_limit

        self.explicit_eps = eps if eps is not None else spec.eps
        if self.explicit_eps is not None and not self.explicit_eps > 0:
            raise NonpositiveEpsilon(f"Precision must be positive, got {self.explicit_eps}")
        self.eps = self.explicit_eps if self.explicit_eps is not None else DEFAULT_EPS

        self.verbose = verbose
        self.colorize = colorize

        self._log = lambda msg, level="info": log_message(msg, level, self.verbose, self.colorize)
        self._log_config()

    def _log_config(self):
        self._log(f"Initialized DiagonalSynthesizer for n={self.spec.n}", "info")
        if not self.verbose: return
        self._log(f"  Method: {self.method}", "debug")
        self._log(f"  Rotation mode: {self.rot_config.mode}", "debug")
        self._log(f"  Precision: {self.eps}{'' if self.explicit_eps is not None else ' (default)'}", "debug")
        self._log(f"  C0: {self.c0}, kappa: {self.kappa}, max T: {self.rot_config.max_t}", "debug")
        self._log(f"  Verify: {self.verify} (dense limit {self.dense_limit})", "debug")

    @property
    def approximate(self) -> bool:
        return self.rot_config.mode == "brute_force"

    # --- Pipelines ---
    def _pcd_factors(self) -> Tuple[float, List[Tuple[float, object]]]:
        """Global phase and (phase, plan) per factor, in factor order."""
        d = self.spec
        if is_block_structured(d):
            ctx = extract_context(d)
            g, factors = pcd_factorize(ctx)
            self._log(f"Block-structured diagonal: k={ctx.k}, tails {[f.ell for f in factors]}", "debug")
            return g, [(f.phase, choose_plan(d.n, f.ell)) for f in factors]
        g, factors = general_activation_sets(d)
        self._log(f"Scattered phases: {len(factors)} activation factors", "debug")
        return g, [(f.phase, activation_plan(d.n, f.intervals)) for f in factors]

    def _build_pcd(self, scale: float) -> _Build:
        n = self.spec.n
        g, factors = self._pcd_factors()
        circuit = Circuit(n, (gphase(g),))
        for phase, plan in factors:
            circuit = circuit + ced2(plan, phase).circuit
        entanglement_t = t_count(circuit)

        budget = budget_split(self.eps, len(factors) + 1) * scale if factors else None
        circuit, results = replace_rotations(circuit, budget, self.rot_config)
        cost = CostReport("pcd", len(results), rotation_t_total(results), entanglement_t, circuit.width)
        tolerance = self.eps if self.approximate else EXACT_TOL
        return _Build(circuit, cost, budget, tolerance)

    def _build_walsh(self, scale: float) -> _Build:
        d = self.spec
        share = WALSH_TRUNCATION_SHARE * self.eps if (self.explicit_eps is not None or self.approximate) else 0.0
        sparse, bound = truncate(walsh_transform(d.thetas), share)
        rotations = len(sparse.rotation_indices)
        self._log(f"Walsh series keeps {rotations} rotations (dropped weight {format_float(bound)})", "debug")

        circuit = walsh_circuit(sparse)
        budget = (self.eps - bound) / rotations * scale if rotations else None
        circuit, results = replace_rotations(circuit, budget, self.rot_config)
        cost = CostReport("walsh", len(results), rotation_t_total(results), 0, circuit.width)
        # entries are aligned on index 0, so a phase error of b shows up as up to 2b
        tolerance = self.eps if self.approximate else 2.0 * bound + EXACT_TOL
        return _Build(circuit, cost, budget, tolerance)

    def _check(self, build: _Build) -> Verification:
        if build.circuit.width > self.dense_limit:
            self._log(f"Width {build.circuit.width} exceeds dense limit {self.dense_limit}, verification skipped", "warning")
            return Verification(None, "skipped", build.tolerance)
        leak_tol = self.eps if self.approximate else INVARIANCE_TOL
        deviation = verify(build.circuit, self.spec, leak_tol, self.dense_limit)
        return Verification(deviation, "dense", build.tolerance)

    # --- Main Execution ---
    def run(self) -> SynthesisResult:
        method, decision, alternatives = self.method, None, {}
        if method == "auto":
            decision, alternatives, method = choose_method(self.spec, self.eps, self.c0, self.kappa)
            self._log(
                f"auto: walsh ~{alternatives['walsh'].total_t:.1f} T, pcd ~{alternatives['pcd'].total_t:.1f} T "
                f"-> {method} (model says {decision.choice}, k*={decision.boundary_k:.4g}, "
                f"residual {model_residual(self.spec.n, alternatives, self.eps, self.c0, self.kappa):.1f})", "info"
            )

        build_fn = self._build_pcd if method == "pcd" else self._build_walsh
        scale = 1.0
        verification = None
        for attempt in range(MAX_BUDGET_REFINEMENTS + 1):
            build = build_fn(scale)
            if not self.verify:
                break
            verification = self._check(build)
            if verification.passed:
                break
            message = (f"Deviation {format_float(verification.deviation)} exceeds "
                       f"tolerance {format_float(verification.tolerance)}")
            if not self.approximate or attempt == MAX_BUDGET_REFINEMENTS:
                raise VerificationFailed(message)
            scale /= 2.0
            self._log(f"{message}; halving the rotation budget", "warning")

        self._log(
            f"Synthesized {method} circuit: width {build.circuit.width}, {len(build.circuit)} gates, "
            f"{build.cost.rotation_count} rotations, E={build.cost.entanglement_t}", "info"
        )
        return SynthesisResult(build.circuit, build.cost, verification, build.budget, decision, alternatives)


# --- Functional entry points ---
def synthesize(d: DiagonalSpec, eps: Optional[float] = None, method: str = DEFAULT_METHOD, **kwargs) -> SynthesisResult:
    return DiagonalSynthesizer(d, eps, method=method, **kwargs).run()

def mcrz_spec(n: int, theta: float) -> DiagonalSpec:
    """(n+1)-qubit diagonal of Rz(theta) controlled on n qubits all being 1."""
    if n < 1:
        raise ValueError(f"Need at least one control, got n={n}")
    if not math.isfinite(theta):
        raise ValueError(f"Rotation angle must be finite, got {theta}")
    size = 1 << (n + 1)
    thetas = [0.0] * (size - 2) + [-theta / 2.0, theta / 2.0]
    return DiagonalSpec(n + 1, tuple(thetas))

def synth_mcrz(n: int, theta: float, eps: Optional[float] = None, **kwargs) -> SynthesisResult:
    """Fully controlled Rz(theta) through the pcd path."""
    kwargs.setdefault("method", "pcd")
    return DiagonalSynthesizer(mcrz_spec(n, theta), eps, **kwargs).run()
