# -*- coding: utf-8 -*-
"""
Styling definitions (colors, verdict and method highlighting) for diagsynth.
"""

from typing import Dict

# --- Styling ---

class Colors:
    """ANSI color codes for terminal output."""
    RESET = "\033[0m"
    BOLD = "\033[1m"
    BLACK = "\033[30m"
    RED = "\033[31m"
    GREEN = "\033[32m"
    YELLOW = "\033[33m"
    BLUE = "\033[34m"
    MAGENTA = "\033[35m"
    CYAN = "\033[36m"
    WHITE = "\033[37m"
    GRAY = "\033[90m" # Bright black, often used for gray


# --- Highlight tables ---
VERDICT_COLORS: Dict[str, str] = {
    "PASS": Colors.GREEN + Colors.BOLD,
    "FAIL": Colors.RED + Colors.BOLD,
}

METHOD_COLORS: Dict[str, str] = {
    "pcd": Colors.CYAN,
    "walsh": Colors.MAGENTA,
    "tie": Colors.YELLOW,
}


def paint(text: str, key: str, colorize: bool) -> str:
    """Wraps text in the color registered for key (verdict or method name)."""
    if not colorize:
        return text
    color = VERDICT_COLORS.get(key) or METHOD_COLORS.get(key)
    if not color:
        return text
    return f"{color}{text}{Colors.RESET}"
