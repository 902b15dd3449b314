# -*- coding: utf-8 -*-
"""
Gate-level intermediate representation for diagsynth.

Circuits are immutable tuples of gates applied left to right to states, so the
matrix of a circuit is the product of its gate matrices accumulated right to
left. Qubit 0 is the most significant bit of a basis index; with a register of
n qubits the entangler ancilla is qubit n and the optional scratch qubit n+1.

Two simulation oracles live here: a vectorised basis-state permutation for the
classical gates and a dense unitary builder for everything else.
"""

import re
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple

import numpy as np

try:
    from .diagsynth_config import DEFAULT_DENSE_LIMIT, TOFFOLI_T_COUNT
    from .diagsynth_utils import (
        CircuitParseError, DimensionMismatch, NonPermutationGate, WidthLimitExceeded,
        format_float,
    )
except ImportError:
    from diagsynth_config import DEFAULT_DENSE_LIMIT, TOFFOLI_T_COUNT
    from diagsynth_utils import (
        CircuitParseError, DimensionMismatch, NonPermutationGate, WidthLimitExceeded,
        format_float,
    )


# --- Gates ---

class GateKind(Enum):
    X = "X"
    CNOT = "CNOT"
    TOFFOLI = "TOFFOLI"
    MCX = "MCX"
    H = "H"
    S = "S"
    SDG = "SDG"
    T = "T"
    TDG = "TDG"
    Z = "Z"
    RZ = "RZ"
    GPHASE = "GPHASE"


CLASSICAL_KINDS = frozenset({GateKind.X, GateKind.CNOT, GateKind.TOFFOLI, GateKind.MCX})
SINGLE_QUBIT_KINDS = frozenset({
    GateKind.X, GateKind.H, GateKind.S, GateKind.SDG, GateKind.T, GateKind.TDG,
    GateKind.Z, GateKind.RZ,
})
# Phase multiples of pi/4 applied to |1>
PHASE_EIGHTHS: Dict[GateKind, int] = {
    GateKind.T: 1, GateKind.S: 2, GateKind.Z: 4, GateKind.SDG: 6, GateKind.TDG: 7,
}
_ADJOINTS = {
    GateKind.S: GateKind.SDG, GateKind.SDG: GateKind.S,
    GateKind.T: GateKind.TDG, GateKind.TDG: GateKind.T,
}
_FIXED_ARITY = {GateKind.CNOT: 2, GateKind.TOFFOLI: 3, GateKind.GPHASE: 0}


@dataclass(frozen=True)
class Gate:
    """One gate. Controls come first in qubits, the target last."""
    kind: GateKind
    qubits: Tuple[int, ...] = ()
    pattern: Optional[str] = None
    angle: Optional[float] = None

    def __post_init__(self):
        qubits = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, 'qubits', qubits)
        if any(q < 0 for q in qubits):
            raise ValueError(f"Negative qubit index in {self.kind.value}: {qubits}")
        if len(set(qubits)) != len(qubits):
            raise ValueError(f"Qubit indices must be distinct in {self.kind.value}: {qubits}")

        arity = 1 if self.kind in SINGLE_QUBIT_KINDS else _FIXED_ARITY.get(self.kind)
        if arity is not None and len(qubits) != arity:
            raise ValueError(f"{self.kind.value} acts on {arity} qubit(s), got {len(qubits)}")

        if self.kind is GateKind.MCX:
            if not qubits:
                raise ValueError("MCX needs a target qubit")
            pattern = self.pattern if self.pattern is not None else "1" * (len(qubits) - 1)
            if len(pattern) != len(qubits) - 1 or set(pattern) - {"0", "1"}:
                raise ValueError(f"MCX pattern '{pattern}' does not match {len(qubits) - 1} control(s)")
            object.__setattr__(self, 'pattern', pattern)
        elif self.pattern is not None:
            raise ValueError(f"Only MCX gates carry a pattern, not {self.kind.value}")

        if self.kind in (GateKind.RZ, GateKind.GPHASE):
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError(f"{self.kind.value} angle must be finite, got {self.angle}")
            object.__setattr__(self, 'angle', float(self.angle))
        elif self.angle is not None:
            raise ValueError(f"{self.kind.value} takes no angle")

    @property
    def controls(self) -> Tuple[int, ...]:
        return self.qubits[:-1] if self.kind in CLASSICAL_KINDS else ()

    @property
    def target(self) -> Optional[int]:
        return self.qubits[-1] if self.qubits else None

    @property
    def is_classical(self) -> bool:
        return self.kind in CLASSICAL_KINDS

    def adjoint(self) -> "Gate":
        if self.kind in _ADJOINTS:
            return Gate(_ADJOINTS[self.kind], self.qubits)
        if self.kind in (GateKind.RZ, GateKind.GPHASE):
            return Gate(self.kind, self.qubits, angle=-self.angle)
        return self

    def relabel(self, mapping: Dict[int, int]) -> "Gate":
        return Gate(self.kind, tuple(mapping.get(q, q) for q in self.qubits), self.pattern, self.angle)


# Factories
def x_gate(q: int) -> Gate: return Gate(GateKind.X, (q,))
def cnot(c: int, t: int) -> Gate: return Gate(GateKind.CNOT, (c, t))
def toffoli(a: int, b: int, t: int) -> Gate: return Gate(GateKind.TOFFOLI, (a, b, t))
def h_gate(q: int) -> Gate: return Gate(GateKind.H, (q,))
def s_gate(q: int) -> Gate: return Gate(GateKind.S, (q,))
def sdg_gate(q: int) -> Gate: return Gate(GateKind.SDG, (q,))
def t_gate(q: int) -> Gate: return Gate(GateKind.T, (q,))
def tdg_gate(q: int) -> Gate: return Gate(GateKind.TDG, (q,))
def z_gate(q: int) -> Gate: return Gate(GateKind.Z, (q,))
def rz_gate(q: int, theta: float) -> Gate: return Gate(GateKind.RZ, (q,), angle=theta)
def gphase(theta: float) -> Gate: return Gate(GateKind.GPHASE, (), angle=theta)

def mcx(controls: Sequence[int], pattern: Optional[str], target: int) -> Gate:
    return Gate(GateKind.MCX, tuple(controls) + (target,), pattern=pattern)

def phase_gates(q: int, eighths: int) -> List[Gate]:
    """Gates applying exp(i*pi*eighths/4) to |1> on q, at most one T."""
    eighths %= 8
    if eighths == 0:
        return []
    if eighths in (1, 2, 4, 6, 7):
        kind = next(k for k, v in PHASE_EIGHTHS.items() if v == eighths)
        return [Gate(kind, (q,))]
    # 3 = S+T, 5 = Z+T
    return [Gate(GateKind.S if eighths == 3 else GateKind.Z, (q,)), t_gate(q)]


# --- Circuits ---

@dataclass(frozen=True)
class Circuit:
    width: int
    gates: Tuple[Gate, ...] = ()
    ancilla_indices: FrozenSet[int] = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, 'gates', tuple(self.gates))
        object.__setattr__(self, 'ancilla_indices', frozenset(int(a) for a in self.ancilla_indices))
        if self.width < 0:
            raise ValueError(f"Circuit width must be nonnegative, got {self.width}")
        for gate in self.gates:
            if any(q >= self.width for q in gate.qubits):
                raise ValueError(f"{gate.kind.value} on {gate.qubits} does not fit width {self.width}")
        if any(a >= self.width for a in self.ancilla_indices):
            raise ValueError(f"Ancilla indices {sorted(self.ancilla_indices)} exceed width {self.width}")

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    def __add__(self, other: "Circuit") -> "Circuit":
        return Circuit(
            max(self.width, other.width),
            self.gates + other.gates,
            self.ancilla_indices | other.ancilla_indices,
        )

    def with_gates(self, gates: Iterable[Gate]) -> "Circuit":
        return Circuit(self.width, tuple(gates), self.ancilla_indices)

    def widened(self, width: int, ancillas: Iterable[int] = ()) -> "Circuit":
        return Circuit(max(self.width, width), self.gates, self.ancilla_indices | frozenset(ancillas))

    def inverse(self) -> "Circuit":
        return self.with_gates(g.adjoint() for g in reversed(self.gates))

    @property
    def register_width(self) -> int:
        return self.width - len(self.ancilla_indices)


# --- Cost accounting ---
def t_count(c: Circuit) -> int:
    """T and T-dagger gates; Toffoli/MCX and Rz are accounted elsewhere."""
    return sum(1 for g in c.gates if g.kind in (GateKind.T, GateKind.TDG))

def toffoli_count(c: Circuit) -> int:
    return sum(1 for g in c.gates if g.kind is GateKind.TOFFOLI)

def rotation_count(c: Circuit) -> int:
    return sum(1 for g in c.gates if g.kind is GateKind.RZ)

def expanded_t_count(c: Circuit) -> int:
    """T-count once every Toffoli is expanded with the 7-T network."""
    return t_count(c) + TOFFOLI_T_COUNT * toffoli_count(c)

def gate_counts(c: Circuit) -> Dict[str, int]:
    counts: Dict[str, int] = {}
    for g in c.gates:
        counts[g.kind.value] = counts.get(g.kind.value, 0) + 1
    return counts


# --- Classical simulation ---
def _bit_shift(width: int, q: int) -> int:
    return width - 1 - q

def _fires(states: np.ndarray, width: int, gate: Gate) -> np.ndarray:
    """Boolean mask of states where every control of a classical gate matches."""
    fires = np.ones(states.shape, dtype=bool)
    pattern = gate.pattern if gate.kind is GateKind.MCX else "1" * len(gate.controls)
    for q, bit in zip(gate.controls, pattern):
        values = (states >> _bit_shift(width, q)) & 1
        fires &= values == int(bit)
    return fires

def _apply_classical(states: np.ndarray, width: int, gate: Gate) -> np.ndarray:
    flip = np.int64(1) << _bit_shift(width, gate.target)
    return np.where(_fires(states, width, gate), states ^ flip, states)

def permutation_table(c: Circuit, limit: int = 22) -> np.ndarray:
    """Image of every basis index under a classical circuit, in one vectorised pass."""
    if c.width > limit:
        raise WidthLimitExceeded(f"Permutation table of width {c.width} exceeds limit {limit}")
    states = np.arange(1 << c.width, dtype=np.int64)
    for gate in c.gates:
        if not gate.is_classical:
            raise NonPermutationGate(f"{gate.kind.value} is not a classical reversible gate")
        states = _apply_classical(states, c.width, gate)
    return states

def apply_to_basis_state(c: Circuit, s: str) -> str:
    """Runs a classical circuit on a bit string (character q is qubit q)."""
    if len(s) != c.width or set(s) - {"0", "1"}:
        raise ValueError(f"Basis state '{s}' must be a bit string of length {c.width}")
    state = np.array([int(s, 2) if s else 0], dtype=np.int64)
    for gate in c.gates:
        if not gate.is_classical:
            raise NonPermutationGate(f"{gate.kind.value} is not a classical reversible gate")
        state = _apply_classical(state, c.width, gate)
    return format(int(state[0]), f"0{c.width}b") if c.width else ""


# --- Dense simulation ---
_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0)

def _diagonal_of(gate: Gate, width: int) -> np.ndarray:
    dim = 1 << width
    if gate.kind is GateKind.GPHASE:
        return np.full(dim, np.exp(1j * gate.angle))
    bits = (np.arange(dim) >> _bit_shift(width, gate.target)) & 1
    if gate.kind is GateKind.RZ:
        half = gate.angle / 2.0
        return np.where(bits == 1, np.exp(1j * half), np.exp(-1j * half))
    return np.where(bits == 1, np.exp(1j * math.pi * PHASE_EIGHTHS[gate.kind] / 4.0), 1.0 + 0j)

def dense_unitary(c: Circuit, limit: int = DEFAULT_DENSE_LIMIT) -> np.ndarray:
    """Product of the gate matrices in circuit order (2^width square)."""
    if c.width > limit:
        raise WidthLimitExceeded(f"Circuit width {c.width} exceeds dense limit {limit}")
    dim = 1 << c.width
    unitary = np.eye(dim, dtype=complex)
    basis = np.arange(dim, dtype=np.int64)
    for gate in c.gates:
        if gate.is_classical:
            images = _apply_classical(basis, c.width, gate)
            permuted = np.empty_like(unitary)
            permuted[images] = unitary
            unitary = permuted
        elif gate.kind is GateKind.H:
            q = gate.target
            blocks = unitary.reshape(1 << q, 2, 1 << (c.width - q - 1), dim)
            unitary = np.einsum('ab,ibjk->iajk', _H, blocks).reshape(dim, dim)
        else:
            unitary = _diagonal_of(gate, c.width)[:, None] * unitary
    return unitary

def unitarity_deviation(u: np.ndarray) -> float:
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))

def compare_up_to_global_phase(a: np.ndarray, b: np.ndarray) -> float:
    """Max-entry |A - lambda*B| with lambda aligned on the largest entry of B."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionMismatch(f"Cannot compare shapes {a.shape} and {b.shape}")
    if a.size == 0:
        return 0.0
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    ratio = a[idx] / b[idx] if abs(b[idx]) > 0 else 0.0
    lam = ratio / abs(ratio) if abs(ratio) > 1e-15 else 1.0
    return float(np.max(np.abs(a - lam * b)))

def project_to_ancilla_zero(u: np.ndarray, c: Circuit) -> Tuple[np.ndarray, float]:
    """Block of u on the all-ancillas-|0> subspace plus the largest leaked entry."""
    dim = 1 << c.width
    inside = np.ones(dim, dtype=bool)
    basis = np.arange(dim)
    for a in c.ancilla_indices:
        inside &= ((basis >> _bit_shift(c.width, a)) & 1) == 0
    block = u[np.ix_(inside, inside)]
    if inside.all():
        return block, 0.0
    leak = max(np.max(np.abs(u[np.ix_(~inside, inside)])), np.max(np.abs(u[np.ix_(inside, ~inside)])))
    return block, float(leak)


# --- Text format ---
_LINE_PATTERNS = {
    GateKind.MCX: re.compile(r"^MCX ctrls=\[(?P<ctrls>[\d,\s]*)\] pattern=(?P<pattern>[01]*) target=(?P<target>\d+)$"),
    GateKind.TOFFOLI: re.compile(r"^TOFFOLI ctrls=\[(?P<ctrls>[\d,\s]*)\] target=(?P<target>\d+)$"),
    GateKind.CNOT: re.compile(r"^CNOT ctrl=(?P<ctrls>\d+) target=(?P<target>\d+)$"),
    GateKind.RZ: re.compile(r"^RZ q=(?P<target>\d+) theta=(?P<angle>\S+)$"),
    GateKind.GPHASE: re.compile(r"^GPHASE theta=(?P<angle>\S+)$"),
}
_SINGLE_PATTERN = re.compile(r"^(?P<kind>X|H|S|SDG|T|TDG|Z) q=(?P<target>\d+)$")
_HEADER_PATTERN = re.compile(r"^QUBITS n=(?P<width>\d+) ancillas=\[(?P<ancillas>[\d,\s]*)\]$")

def _int_list(text: str) -> List[int]:
    return [int(tok) for tok in text.split(",") if tok.strip()]

def format_gate(g: Gate) -> str:
    if g.kind is GateKind.MCX:
        ctrls = ",".join(str(q) for q in g.controls)
        return f"MCX ctrls=[{ctrls}] pattern={g.pattern} target={g.target}"
    if g.kind is GateKind.TOFFOLI:
        return f"TOFFOLI ctrls=[{g.qubits[0]},{g.qubits[1]}] target={g.target}"
    if g.kind is GateKind.CNOT:
        return f"CNOT ctrl={g.qubits[0]} target={g.target}"
    if g.kind is GateKind.RZ:
        return f"RZ q={g.target} theta={format_float(g.angle)}"
    if g.kind is GateKind.GPHASE:
        return f"GPHASE theta={format_float(g.angle)}"
    return f"{g.kind.value} q={g.target}"

def format_circuit(c: Circuit) -> str:
    ancillas = ",".join(str(a) for a in sorted(c.ancilla_indices))
    lines = [f"QUBITS n={c.width} ancillas=[{ancillas}]"]
    lines.extend(format_gate(g) for g in c.gates)
    return "\n".join(lines) + "\n"

def _parse_gate(line: str) -> Gate:
    single = _SINGLE_PATTERN.match(line)
    if single:
        return Gate(GateKind(single.group('kind')), (int(single.group('target')),))
    for kind, pattern in _LINE_PATTERNS.items():
        found = pattern.match(line)
        if not found:
            continue
        fields = found.groupdict()
        if kind is GateKind.GPHASE:
            return gphase(float(fields['angle']))
        if kind is GateKind.RZ:
            return rz_gate(int(fields['target']), float(fields['angle']))
        ctrls = _int_list(fields['ctrls'])
        target = int(fields['target'])
        if kind is GateKind.MCX:
            return mcx(ctrls, fields['pattern'], target)
        return Gate(kind, tuple(ctrls) + (target,))
    raise CircuitParseError(f"Unrecognised gate line: '{line}'")

def parse_circuit(text: str) -> Circuit:
    """Reads the text format back; blank lines and '#' comments are skipped."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines:
        raise CircuitParseError("Empty circuit text")
    header = _HEADER_PATTERN.match(lines[0])
    if not header:
        raise CircuitParseError(f"Missing 'QUBITS n=... ancillas=[...]' header, got '{lines[0]}'")
    try:
        gates = [_parse_gate(ln) for ln in lines[1:]]
        return Circuit(int(header.group('width')), tuple(gates), frozenset(_int_list(header.group('ancillas'))))
    except CircuitParseError:
        raise
    except ValueError as e:
        raise CircuitParseError(str(e)) from e


# --- QASM export ---
_QASM_NAMES = {
    GateKind.X: "x", GateKind.CNOT: "cx", GateKind.TOFFOLI: "ccx", GateKind.H: "h",
    GateKind.S: "s", GateKind.SDG: "sdg", GateKind.T: "t", GateKind.TDG: "tdg", GateKind.Z: "z",
}

def to_qasm(c: Circuit) -> str:
    """OPENQASM 2.0 text; MCX gates must be lowered before export."""
    lines = ['OPENQASM 2.0;', 'include "qelib1.inc";', f"qreg q[{c.width}];"]
    for g in c.gates:
        if g.kind is GateKind.MCX:
            raise ValueError("MCX gates must be lowered before QASM export")
        args = ",".join(f"q[{q}]" for q in g.qubits)
        if g.kind is GateKind.RZ:
            lines.append(f"rz({format_float(g.angle)}) {args};")
        elif g.kind is GateKind.GPHASE:
            lines.append(f"// gphase({format_float(g.angle)})")
        else:
            lines.append(f"{_QASM_NAMES[g.kind]} {args};")
    return "\n".join(lines) + "\n"
