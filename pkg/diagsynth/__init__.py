# -*- coding: utf-8 -*-
# This file makes the diagsynth directory a Python package.
"""
diagsynth Package - Clifford+T synthesis of diagonal unitaries

This package provides tools for:
- Decomposing a diagonal into a global phase and k-1 single-rotation factors
- Building cascaded multi-controlled-X entanglers and their T-optimised pairs
- Walsh-series synthesis as the dense-spectrum alternative
- Cost models deciding between the two, with sweeps and fits
- Dense verification on the ancilla-|0> subspace

Usage:
    from diagsynth import DiagonalSpec, synthesize
    spec = DiagonalSpec.from_blocks(3, [(0.0, 5), (0.7, 3)])
    result = synthesize(spec, method="pcd", verify=True)
    print(result.cost.total_t)
"""

# Package version
__version__ = "1.0.0"

# Import public classes and functions for direct access
from .diagsynth_phase import DiagonalSpec
from .diagsynth_circuit import Circuit, Gate, GateKind, format_circuit, parse_circuit, to_qasm
from .diagsynth_entangler import bsb, ced, ced2, entanglement_cost, factor_xn
from .diagsynth_cost import CostReport, best_case_boundary, choose_method, worst_case_boundary
from .diagsynth_core import DiagonalSynthesizer, SynthesisResult, synth_mcrz, synthesize, verify
from .diagsynth_utils import DiagSynthError
from .diagsynth_cli import main

# Define what gets imported with 'from diagsynth import *'
__all__ = [
    'DiagonalSpec', 'Circuit', 'Gate', 'GateKind', 'format_circuit', 'parse_circuit', 'to_qasm',
    'bsb', 'ced', 'ced2', 'entanglement_cost', 'factor_xn',
    'CostReport', 'best_case_boundary', 'choose_method', 'worst_case_boundary',
    'DiagonalSynthesizer', 'SynthesisResult', 'synth_mcrz', 'synthesize', 'verify',
    'DiagSynthError', 'main',
]
