# -*- coding: utf-8 -*-
"""
Cascaded entanglers X^n(ell) and interval entanglers X^n(p, q).

X^n(ell) flips the ancilla (qubit n) exactly when the register index k
satisfies k >= 2^n - ell. It is factored into multi-controlled NOTs that each
fire on one dyadic block of indices, lowered to Toffoli networks that borrow
idle register qubits, and finally paired around a phase slot so that matching
halves can be simplified against each other.
"""

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple

try:
    from .diagsynth_circuit import (
        Circuit, Gate, GateKind, cnot, gphase, h_gate, mcx, rz_gate, t_count, t_gate, tdg_gate,
        toffoli, x_gate,
    )
    from .diagsynth_config import TOFFOLI_T_COUNT
    from .diagsynth_peephole import simplify
    from .diagsynth_utils import EllOutOfRange, InsufficientFreeQubits, IntervalOutOfRange
except ImportError:
    from diagsynth_circuit import (
        Circuit, Gate, GateKind, cnot, gphase, h_gate, mcx, rz_gate, t_count, t_gate, tdg_gate,
        toffoli, x_gate,
    )
    from diagsynth_config import TOFFOLI_T_COUNT
    from diagsynth_peephole import simplify
    from diagsynth_utils import EllOutOfRange, InsufficientFreeQubits, IntervalOutOfRange

PLAN_MODES = ("binary", "bsb", "interval", "naive")


# --- Signed-bit expansions ---

@dataclass(frozen=True)
class SignedBitExpansion:
    """Terms (sign, power) with strictly increasing powers."""
    terms: Tuple[Tuple[int, int], ...] = ()

    @property
    def value(self) -> int:
        return sum(sign << power for sign, power in self.terms)

    @property
    def weight(self) -> int:
        return len(self.terms)

    def negated(self) -> "SignedBitExpansion":
        return SignedBitExpansion(tuple((-sign, power) for sign, power in self.terms))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = [f"{'+' if s > 0 else '-'}2^{p}" for s, p in reversed(self.terms)]
        return " ".join(parts).lstrip("+")


def bsb(ell: int) -> SignedBitExpansion:
    """
    Balanced signed-bit expansion.

    With m = floor(log2 ell): below (4/3) 2^m the top bit 2^m is kept and the
    remainder expanded; otherwise ell is written as 2^(m+1) minus the expansion
    of 2^(m+1) - ell.
    """
    if ell < 0:
        raise ValueError(f"bsb is defined for nonnegative integers, got {ell}")
    if ell == 0:
        return SignedBitExpansion()
    if ell == 1:
        return SignedBitExpansion(((1, 0),))
    m = ell.bit_length() - 1
    if 3 * ell < 4 << m:
        return SignedBitExpansion(bsb(ell - (1 << m)).terms + ((1, m),))
    return SignedBitExpansion(bsb((2 << m) - ell).negated().terms + ((1, m + 1),))

def binary_expansion(ell: int) -> SignedBitExpansion:
    return SignedBitExpansion(tuple((1, b) for b in range(ell.bit_length()) if (ell >> b) & 1))


# --- Plans ---

@dataclass(frozen=True)
class McxSpec:
    """X on target when control i holds pattern[i]; controls are register qubits."""
    n: int
    controls: Tuple[int, ...]
    pattern: str
    target: int

    def __post_init__(self):
        if len(self.pattern) != len(self.controls):
            raise ValueError(f"Pattern '{self.pattern}' does not cover {len(self.controls)} control(s)")
        if len(self.controls) > self.n:
            raise ValueError(f"{len(self.controls)} controls exceed register size {self.n}")
        if self.target in self.controls:
            raise ValueError(f"Target {self.target} is also a control")

    @property
    def m(self) -> int:
        return len(self.controls)

    def to_gate(self) -> Gate:
        return mcx(self.controls, self.pattern, self.target)


@dataclass(frozen=True)
class EntanglerPlan:
    n: int
    factors: Tuple[McxSpec, ...] = ()
    mode: str = "bsb"

    @property
    def total_control_levels(self) -> int:
        return sum(f.m for f in self.factors)

    def to_circuit(self) -> Circuit:
        """Unlowered MCX form on the register plus ancilla."""
        return Circuit(self.n + 1, tuple(f.to_gate() for f in self.factors), frozenset({self.n}))


def _dyadic_factor(n: int, j: int, k: int) -> McxSpec:
    """Fires on [j 2^k, (j+1) 2^k): the top n-k register bits must spell j."""
    levels = n - k
    pattern = format(j, f"0{levels}b") if levels else ""
    return McxSpec(n, tuple(range(levels)), pattern, n)

def factor_xn(n: int, ell: int, mode: str = "bsb") -> EntanglerPlan:
    """
    Factors X^n(ell) into one dyadic MCX per expansion term.

    With terms ordered by power, threshold p_r = 2^n - sum_{s>=r} sign_s 2^k_s;
    consecutive thresholds differ by 2^k_r and bound one dyadic block.
    """
    if n < 1 or not 0 <= ell <= 1 << n:
        raise EllOutOfRange(f"ell={ell} is outside [0, 2^{n}]")
    if mode not in ("binary", "bsb"):
        raise ValueError(f"Unknown factorization mode '{mode}'")
    expansion = bsb(ell) if mode == "bsb" else binary_expansion(ell)

    size = 1 << n
    tail = 0
    factors = []
    for sign, power in reversed(expansion.terms):
        upper = size - tail
        tail += sign << power
        lower = size - tail
        factors.append(_dyadic_factor(n, min(lower, upper) >> power, power))
    return EntanglerPlan(n, tuple(factors), mode)

def _dyadic_cover(n: int, p: int, q: int) -> List[McxSpec]:
    factors = []
    while p < q:
        k = (p & -p).bit_length() - 1 if p else n
        while (1 << k) > q - p:
            k -= 1
        factors.append(_dyadic_factor(n, p >> k, k))
        p += 1 << k
    return factors

def interval_entangler(n: int, p: int, q: int) -> EntanglerPlan:
    """Flips the ancilla on [p, q) using a maximal dyadic cover."""
    if n < 1 or not 0 <= p <= q <= 1 << n:
        raise IntervalOutOfRange(f"[{p}, {q}) is not an interval of [0, 2^{n}]")
    return EntanglerPlan(n, tuple(_dyadic_cover(n, p, q)), "interval")

def activation_plan(n: int, intervals: Iterable[Tuple[int, int]]) -> EntanglerPlan:
    """Entangler for a union of disjoint intervals."""
    factors: List[McxSpec] = []
    for p, q in intervals:
        factors.extend(interval_entangler(n, p, q).factors)
    return EntanglerPlan(n, tuple(factors), "interval")

def naive_entangler(n: int, ell: int) -> EntanglerPlan:
    """One fully controlled NOT per flipped basis state."""
    if n < 1 or not 0 <= ell <= 1 << n:
        raise EllOutOfRange(f"ell={ell} is outside [0, 2^{n}]")
    size = 1 << n
    return EntanglerPlan(n, tuple(_dyadic_factor(n, j, 0) for j in range(size - ell, size)), "naive")


# --- Lowering to Toffoli networks ---
def _staircase(controls: Sequence[int], target: int, borrowed: Sequence[int]) -> List[Gate]:
    """4(m-2) Toffolis; borrowed qubits may hold any value and are restored."""
    c, a, m = controls, borrowed, len(controls)
    descent = [toffoli(c[i - 1], a[i - 3], a[i - 2]) for i in range(m - 1, 2, -1)]
    half = [toffoli(c[m - 1], a[m - 3], target)] + descent + [toffoli(c[0], c[1], a[0])] + descent[::-1]
    return half + half

def _lower_positive(controls: Tuple[int, ...], target: int, width: int, scratch: Optional[int]) -> List[Gate]:
    m = len(controls)
    if m == 0:
        return [x_gate(target)]
    if m == 1:
        return [cnot(controls[0], target)]
    if m == 2:
        return [toffoli(controls[0], controls[1], target)]

    busy = set(controls) | {target}
    free = [q for q in range(width) if q not in busy]
    if len(free) >= m - 2:
        return _staircase(controls, target, free[:m - 2])
    if not free:
        raise InsufficientFreeQubits(f"{m}-control NOT on {width} qubits has no free qubit to split on")

    # Two halves meeting on one extra qubit, which may be dirty
    a = scratch if scratch in free else free[-1]
    m1 = (m + 1) // 2
    first = _lower_positive(controls[:m1], a, width, None)
    second = _lower_positive(controls[m1:] + (a,), target, width, None)
    return first + second + first + second

def lower_mcx(spec: McxSpec, scratch: Optional[int] = None, width: Optional[int] = None) -> Circuit:
    """Lowers one MCX to X/CNOT/Toffoli; zero-pattern controls are X-conjugated."""
    if width is None:
        width = max(spec.n + 1, spec.target + 1, (scratch + 1) if scratch is not None else 0)
    flips = [x_gate(q) for q, bit in zip(spec.controls, spec.pattern) if bit == "0"]
    core = _lower_positive(tuple(spec.controls), spec.target, width, scratch)
    return Circuit(width, tuple(flips + core + flips))

@lru_cache(maxsize=None)
def mcx_toffoli_count(m: int, width: int) -> int:
    """Toffoli count of _lower_positive without building gates."""
    if m <= 1:
        return 0
    if m == 2:
        return 1
    free = width - m - 1
    if free >= m - 2:
        return 4 * (m - 2)
    if free < 1:
        raise InsufficientFreeQubits(f"{m}-control NOT on {width} qubits has no free qubit to split on")
    m1 = (m + 1) // 2
    return 2 * (mcx_toffoli_count(m1, width) + mcx_toffoli_count(m - m1 + 1, width))

def plan_width(plan: EntanglerPlan) -> int:
    """n+2 when some factor cannot borrow enough idle register qubits, else n+1."""
    n = plan.n
    needs_scratch = any(f.m >= 3 and n - f.m < f.m - 2 for f in plan.factors)
    return n + 2 if needs_scratch else n + 1

def plan_ancillas(plan: EntanglerPlan) -> frozenset:
    return frozenset(range(plan.n, plan_width(plan)))

def plan_toffoli_count(plan: EntanglerPlan, width: Optional[int] = None) -> int:
    width = width if width is not None else plan_width(plan)
    return sum(mcx_toffoli_count(f.m, width) for f in plan.factors)

def lower_plan(plan: EntanglerPlan) -> Circuit:
    width = plan_width(plan)
    scratch = plan.n + 1 if width == plan.n + 2 else None
    gates: List[Gate] = []
    for spec in plan.factors:
        gates.extend(lower_mcx(spec, scratch, width).gates)
    return Circuit(width, tuple(gates), plan_ancillas(plan))


# --- Clifford+T expansion ---
def toffoli_gates(a: int, b: int, c: int) -> List[Gate]:
    """Exact 7-T Toffoli with controls a, b and target c."""
    return [
        h_gate(c), cnot(b, c), tdg_gate(c), cnot(a, c), t_gate(c), cnot(b, c), tdg_gate(c),
        cnot(a, c), t_gate(b), t_gate(c), h_gate(c), cnot(a, b), t_gate(a), tdg_gate(b), cnot(a, b),
    ]

def toffoli_to_clifford_t(g: Gate, width: Optional[int] = None) -> Circuit:
    if g.kind is not GateKind.TOFFOLI:
        raise ValueError(f"Expected a TOFFOLI gate, got {g.kind.value}")
    width = width if width is not None else max(g.qubits) + 1
    return Circuit(width, tuple(toffoli_gates(*g.qubits)))

def expand_toffolis(gates: Iterable[Gate]) -> List[Gate]:
    out: List[Gate] = []
    for g in gates:
        out.extend(toffoli_gates(*g.qubits) if g.kind is GateKind.TOFFOLI else [g])
    return out

def toffoli_relative_phase(a: int, b: int, t: int) -> List[Gate]:
    """4-T Toffoli times a controlled-S-dagger on (a, b)."""
    return [
        h_gate(t), t_gate(t), cnot(b, t), tdg_gate(t), cnot(a, t),
        t_gate(t), cnot(b, t), tdg_gate(t), cnot(a, t), h_gate(t),
    ]

def adjoint_gates(gates: Sequence[Gate]) -> List[Gate]:
    return [g.adjoint() for g in reversed(gates)]


# --- Plan selection ---
def choose_plan(n: int, ell: int) -> EntanglerPlan:
    """Cheaper of the binary and bsb plans; ties go to bsb.

    Plans are ranked by unpaired Toffoli count times seven, not by the paired
    and simplified entanglement_t of ced2. The proxy needs no lowering, so a
    full sweep over ell stays cheap.
    """
    candidates = [factor_xn(n, ell, "bsb"), factor_xn(n, ell, "binary")]
    return min(candidates, key=lambda plan: TOFFOLI_T_COUNT * plan_toffoli_count(plan))

def ced(n: int, ell: int) -> Circuit:
    """Lowered X^n(ell) using the cheaper factorization."""
    return lower_plan(choose_plan(n, ell))


# --- Paired entanglers ---

@dataclass(frozen=True)
class PairedEntangler:
    """X(plan) P(theta) X(plan) on the ancilla, lowered and simplified."""
    plan: EntanglerPlan
    theta: float
    circuit: Circuit
    entanglement_t: int

    @property
    def rotation_slots(self) -> List[int]:
        return [i for i, g in enumerate(self.circuit.gates) if g.kind is GateKind.RZ]


def phase_slot(target: int, theta: float) -> List[Gate]:
    """P(e^{i theta}) = GlobalPhase(theta/2) Rz(theta)."""
    return [gphase(theta / 2.0), rz_gate(target, theta)]

def unoptimized_pair(plan: EntanglerPlan, theta: float) -> Circuit:
    lowered = lower_plan(plan)
    gates = list(lowered.gates) + phase_slot(plan.n, theta) + list(reversed(lowered.gates))
    return lowered.with_gates(gates)

def _peel_disjoint(left: List[Gate], right: List[Gate], support: set) -> None:
    """Mirror gates that commute with everything inside cancel in pairs."""
    while left and support.isdisjoint(left[-1].qubits):
        left.pop()
        right.pop(0)

def ced2(plan: EntanglerPlan, theta: float, optimize: bool = True) -> PairedEntangler:
    """
    Pairs a lowered entangler with its mirror image around the phase slot.

    Mirror gates disjoint from the slot cancel outright. An innermost Toffoli
    pair targeting the ancilla is replaced by 4-T relative-phase Toffolis
    whose phases cancel across the diagonal middle. The rest is expanded to
    Clifford+T and simplified by exact phase folding.
    """
    if not math.isfinite(theta):
        raise ValueError(f"Rotation angle must be finite, got {theta}")
    lowered = lower_plan(plan)
    if not optimize:
        circuit = unoptimized_pair(plan, theta)
        expanded = circuit.with_gates(expand_toffolis(circuit.gates))
        return PairedEntangler(plan, theta, expanded, t_count(expanded))

    left = list(lowered.gates)
    right = left[::-1]
    middle = phase_slot(plan.n, theta)
    support = {plan.n}
    _peel_disjoint(left, right, support)

    innermost = left[-1] if left else None
    if innermost is not None and innermost.kind is GateKind.TOFFOLI and innermost.target == plan.n:
        left.pop()
        right.pop(0)
        a, b = innermost.controls
        relative = toffoli_relative_phase(a, b, plan.n)
        middle = relative + middle + adjoint_gates(relative)
        support = {a, b, plan.n}
        _peel_disjoint(left, right, support)

    gates = simplify(expand_toffolis(left) + middle + expand_toffolis(right))
    circuit = lowered.with_gates(gates)
    return PairedEntangler(plan, theta, circuit, t_count(circuit))

@lru_cache(maxsize=None)
def entanglement_cost(n: int, ell: int) -> int:
    """T-count of the paired, simplified entangler for V(phi, ell); rotation excluded."""
    if n < 1 or not 0 <= ell <= 1 << n:
        raise EllOutOfRange(f"ell={ell} is outside [0, 2^{n}]")
    return ced2(choose_plan(n, ell), 1.0).entanglement_t
