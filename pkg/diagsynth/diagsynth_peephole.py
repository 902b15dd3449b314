# -*- coding: utf-8 -*-
"""
Exact rewrite passes over lowered Clifford+T gate lists.

Every pass returns a gate list with the same unitary, global phase included.
Rz and GlobalPhase gates are never moved, so rotation slots keep their place.

Contains:
    - cancel_inverse_pairs(): remove gate pairs that are adjacent on all their wires
    - fold_phases(): merge T/S/Z phase terms acting on equal parities
    - simplify(): both passes until the gate count stops shrinking
"""

import math
from typing import Dict, List, Optional, Tuple

try:
    from .diagsynth_circuit import PHASE_EIGHTHS, Gate, GateKind, gphase, phase_gates
except ImportError:
    from diagsynth_circuit import PHASE_EIGHTHS, Gate, GateKind, gphase, phase_gates


# Gates a neighbouring copy of which undoes them (after taking the adjoint)
_CANCELLABLE = frozenset({
    GateKind.X, GateKind.H, GateKind.Z, GateKind.CNOT, GateKind.TOFFOLI, GateKind.MCX,
    GateKind.S, GateKind.SDG, GateKind.T, GateKind.TDG,
})


# --- Inverse-pair cancellation ---
def _undoes(first: Gate, second: Gate) -> bool:
    if first.kind not in _CANCELLABLE:
        return False
    if first.kind is GateKind.TOFFOLI and second.kind is GateKind.TOFFOLI:
        return set(first.controls) == set(second.controls) and first.target == second.target
    return second == first.adjoint()

def cancel_inverse_pairs(gates: List[Gate]) -> List[Gate]:
    """
    Drops g, g^-1 pairs with nothing in between on any of their wires.

    Runs in one pass with per-wire stacks, so nested pairs such as
    H CNOT CNOT H collapse completely.
    """
    out: List[Optional[Gate]] = []
    wires: Dict[int, List[int]] = {}
    for gate in gates:
        if gate.qubits:
            tops = {wires[q][-1] if wires.get(q) else None for q in gate.qubits}
            if len(tops) == 1:
                idx = tops.pop()
                if idx is not None:
                    prior = out[idx]
                    if set(prior.qubits) == set(gate.qubits) and _undoes(prior, gate):
                        out[idx] = None
                        for q in prior.qubits:
                            wires[q].pop()
                        continue
        out.append(gate)
        for q in gate.qubits:
            wires.setdefault(q, []).append(len(out) - 1)
    return [g for g in out if g is not None]


# --- Phase folding ---
class _Parity:
    """Affine parity over path variables: XOR of the variables in mask, XOR const."""
    __slots__ = ('mask', 'const')

    def __init__(self, mask: int, const: int = 0):
        self.mask = mask
        self.const = const

def fold_phases(gates: List[Gate]) -> List[Gate]:
    """
    Merges every diagonal Clifford+T phase applied to the same parity.

    Each wire carries an affine parity of path variables; X flips the constant,
    CNOT adds the control parity to the target, and any other non-phase gate
    (H, Rz, Toffoli, ...) starts a fresh variable on its wires. Phase terms on
    equal parities are summed in units of pi/4 and emitted once, where that
    parity first appeared. Terms on constant parities become a trailing
    GlobalPhase.
    """
    parities: Dict[int, _Parity] = {}
    next_var = 0

    def parity(q: int) -> _Parity:
        nonlocal next_var
        if q not in parities:
            parities[q] = _Parity(1 << next_var)
            next_var += 1
        return parities[q]

    totals: Dict[int, int] = {}
    first_seen: Dict[int, Tuple[int, int, int]] = {}
    global_eighths = 0

    for idx, gate in enumerate(gates):
        kind = gate.kind
        if kind in PHASE_EIGHTHS:
            q = gate.target
            state = parity(q)
            eighths = PHASE_EIGHTHS[kind]
            if state.mask == 0:
                global_eighths += eighths * state.const
                continue
            if state.const:
                # phase on 1 xor y  =  phase - phase on y
                global_eighths += eighths
                eighths = -eighths
            totals[state.mask] = (totals.get(state.mask, 0) + eighths) % 8
            first_seen.setdefault(state.mask, (idx, q, state.const))
        elif kind is GateKind.X:
            parity(gate.target).const ^= 1
        elif kind is GateKind.CNOT:
            control, target = parity(gate.qubits[0]), parity(gate.qubits[1])
            target.mask ^= control.mask
            target.const ^= control.const
        elif kind is GateKind.GPHASE:
            continue
        else:
            for q in gate.qubits:
                parities[q] = _Parity(1 << next_var)
                next_var += 1

    emit_at: Dict[int, List[Gate]] = {}
    for mask, total in totals.items():
        if total == 0:
            continue
        idx, q, const = first_seen[mask]
        if const:
            # -total on (1 xor y) gives total on y, minus a constant total
            emit_at[idx] = phase_gates(q, -total)
            global_eighths += total
        else:
            emit_at[idx] = phase_gates(q, total)

    folded: List[Gate] = []
    for idx, gate in enumerate(gates):
        if gate.kind in PHASE_EIGHTHS:
            folded.extend(emit_at.get(idx, []))
        else:
            folded.append(gate)
    global_eighths %= 8
    if global_eighths:
        folded.append(gphase(math.pi * global_eighths / 4.0))
    return folded


def _weight(gates: List[Gate]) -> Tuple[int, int]:
    return (sum(1 for g in gates if g.kind in (GateKind.T, GateKind.TDG)), len(gates))

def simplify(gates: List[Gate], max_rounds: int = 8) -> List[Gate]:
    """Alternates the two passes while the T-count or gate count keeps dropping."""
    current = list(gates)
    for _ in range(max_rounds):
        reduced = fold_phases(cancel_inverse_pairs(current))
        if _weight(reduced) >= _weight(current):
            break
        current = reduced
    return current
