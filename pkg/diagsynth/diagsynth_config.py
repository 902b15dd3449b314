# -*- coding: utf-8 -*-
"""
Configuration settings, numeric constants, and saved user defaults for diagsynth.
"""

import json
import logging
from pathlib import Path
from typing import Dict, Any

logger = logging.getLogger(__name__)

CONFIG_FILE_NAME = ".diagsynth_config.json"


# --- Saved Configuration ---
def _config_path() -> Path:
    return Path.home() / CONFIG_FILE_NAME

def get_saved_config() -> Dict[str, Any]:
    """Get all saved configuration options"""
    config_file = _config_path()
    try:
        if config_file.exists():
            data = json.loads(config_file.read_text(encoding='utf-8'))
            if isinstance(data, dict):
                return data
            logger.debug(f"Ignoring saved config, top level is {type(data).__name__}")
    except Exception as e:
        logger.debug(f"Error reading saved config: {e}")
    return {}

def save_config(config_to_save: Dict[str, Any]) -> None:
    """Save the shared command-line defaults for future runs"""
    config_file = _config_path()
    try:
        existing_config = {}
        if config_file.exists():
            try:
                existing_config = json.loads(config_file.read_text(encoding='utf-8'))
            except Exception as e:
                logger.debug(f"Error reading existing config for save, starting fresh: {e}")

        # Paths and per-run targets are never persisted
        for key in SAVE_KEYS:
            if key in config_to_save:
                existing_config[key] = config_to_save[key]

        config_file.write_text(json.dumps(existing_config, indent=2, sort_keys=True), encoding='utf-8')
    except Exception as e:
        print(f"Warning: Error saving configuration: {e}")


# --- Constants ---

SAVE_KEYS = ('eps', 'method', 'rot', 'c0', 'kappa', 'dense_limit', 'max_t', 'verbose', 'colorize')

# Rotation synthesis slope: T-count of one axial rotation ~ C0 * log2(1/eps)
DEFAULT_C0: float = 1.15
# Worst-case per-factor entanglement constant, E ~ KAPPA * n^2
DEFAULT_KAPPA: float = 10.0
# Best-case entanglement fit, E ~ 72 * (n - 3)
BEST_CASE_SLOPE: float = 72.0
# Reference worst-case Toffoli-count fit, max_l T(n, l) ~ beta * n^2
REFERENCE_BETA: float = 1.13
# Fitted values further than this (relative) from a reference get flagged
REFERENCE_REL_TOL: float = 0.4

DEFAULT_EPS: float = 1e-10
DEFAULT_METHOD: str = "auto"
DEFAULT_ROT_MODE: str = "exact"
DEFAULT_DENSE_LIMIT: int = 12
DEFAULT_SWEEP_LIMIT: int = 16
DEFAULT_MAX_T: int = 30

# Tolerances (radians for phases, max-entry deviation otherwise)
PHASE_TOL: float = 1e-12
ZERO_COEFF_TOL: float = 1e-12
EXACT_TOL: float = 1e-10
VERIFY_PASS_TOL: float = 1e-8
INVARIANCE_TOL: float = 1e-12
UNITARITY_TOL: float = 1e-12

# Share of the Walsh error budget spent on truncation; the rest goes to rotations
WALSH_TRUNCATION_SHARE: float = 0.5

# Toffoli -> Clifford+T expansion cost
TOFFOLI_T_COUNT: int = 7

FLOAT_SIG_DIGITS: int = 12

METHODS = ("auto", "walsh", "pcd")
ROT_MODES = {"exact": "exact_rz", "brute": "brute_force", "cost": "cost_only"}

# Brute-force rotation search materialises normal-form prefixes in blocks of at most 2^this syllable strings
BRUTE_FORCE_MAX_LAYER: int = 20
# Rotation budget halvings tried when a synthesized circuit misses its target precision
MAX_BUDGET_REFINEMENTS: int = 4
