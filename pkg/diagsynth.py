#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
diagsynth - Clifford+T synthesis of diagonal unitaries

This script synthesizes circuits for diagonal unitaries from JSON specs and runs
the decision-boundary and entangler-sweep experiments from the command line.
"""

import sys
from pathlib import Path

# Ensure 'diagsynth' is in sys.path when running from the project root.
script_dir = Path(__file__).resolve().parent
if (script_dir / 'diagsynth').is_dir() and str(script_dir) not in sys.path:
    sys.path.insert(0, str(script_dir))

try:
    from diagsynth.diagsynth_cli import main
except ImportError as e:
    print("Error: Could not import diagsynth components.", file=sys.stderr)
    print(f"Details: {e}", file=sys.stderr)
    print("Please ensure the package is correctly installed (e.g., 'pip install -e .') "
          "or run from the project root directory.", file=sys.stderr)
    sys.exit(1)

if __name__ == "__main__":
    main()
