# -*- coding: utf-8 -*-
"""
Utility functions for diagsynth, including formatting, logging, angle helpers
and the error hierarchy shared by every module.
"""

import sys
import math
from datetime import datetime

# Import Colors from the styling module
try:
    from .diagsynth_styling import Colors
    from .diagsynth_config import FLOAT_SIG_DIGITS
except ImportError:
    # Fallback for direct execution or testing
    try:
        from diagsynth_styling import Colors
        from diagsynth_config import FLOAT_SIG_DIGITS
    except ImportError:
        class Colors:
            RESET = ""; BOLD = ""; BLACK = ""; RED = ""; GREEN = ""; YELLOW = ""
            BLUE = ""; MAGENTA = ""; CYAN = ""; WHITE = ""; GRAY = ""
        FLOAT_SIG_DIGITS = 12


# --- Errors ---
class DiagSynthError(ValueError):
    """Base class for domain errors. exit_code is what the CLI returns for it."""
    exit_code = 3

class SpecSchemaError(DiagSynthError):
    exit_code = 2

class CircuitParseError(DiagSynthError):
    exit_code = 2

class DimensionMismatch(DiagSynthError):
    exit_code = 2

class NonPermutationGate(DiagSynthError):
    pass

class WidthLimitExceeded(DiagSynthError):
    pass

class LengthNotPowerOfTwo(DiagSynthError):
    exit_code = 2

class EllOutOfRange(DiagSynthError):
    pass

class IntervalOutOfRange(DiagSynthError):
    pass

class InsufficientFreeQubits(DiagSynthError):
    pass

class PrecisionUnreachable(DiagSynthError):
    pass

class NonpositiveEpsilon(DiagSynthError):
    exit_code = 2

class KTooSmall(DiagSynthError):
    pass

class EpsilonOutOfRange(DiagSynthError):
    exit_code = 2

class SweepLimitExceeded(DiagSynthError):
    pass

class VerificationFailed(DiagSynthError):
    exit_code = 4

class AncillaNotRestored(VerificationFailed):
    pass

class ReferenceOutOfTolerance(DiagSynthError):
    """A sweep fit landed outside the tolerance around its reference value."""
    exit_code = 4


# --- Formatting ---
def format_float(value: float) -> str:
    """Fixed 12-significant-digit rendering used in every output file."""
    text = f"{float(value):.{FLOAT_SIG_DIGITS}g}"
    return "0" if text == "-0" else text


# --- Numeric helpers ---
def is_power_of_two(x: int) -> bool:
    return x > 0 and not (x & (x - 1))

def principal_angle(theta: float) -> float:
    """Maps an angle into (-pi, pi]."""
    wrapped = math.remainder(float(theta), 2.0 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2.0 * math.pi
    return wrapped

def phases_equal(a: float, b: float, tol: float) -> bool:
    """True when two phases agree modulo 2*pi within tol."""
    return abs(principal_angle(a - b)) <= tol


# --- Logging ---
def log_message(message: str, level: str = "info", verbose: bool = False, colorize: bool = False):
    """Logs a message to stderr; info and debug only when verbose."""
    if not verbose and level in ("info", "debug"):
        return

    color_map = {
        "error": Colors.RED, "warning": Colors.YELLOW, "success": Colors.GREEN,
        "info": Colors.CYAN, "debug": Colors.GRAY
    }
    color = color_map.get(level.lower(), Colors.RESET) if colorize else ""
    reset = Colors.RESET if colorize else ""
    timestamp = datetime.now().strftime("%H:%M:%S.%f")[:-3]

    log_prefix = f"[{timestamp}] {color}[{level.upper():<7}] {reset}"

    lines = str(message).splitlines()
    if not lines: return

    print(f"{log_prefix}{lines[0]}", file=sys.stderr)
    indent = ' ' * (len(log_prefix) - len(color) - len(reset))
    for line in lines[1:]:
        print(f"{indent}{line}", file=sys.stderr)
