# tests/conftest.py
import pytest
import sys
from pathlib import Path

import numpy as np

# Make sure the main library path is available
package_root = Path(__file__).parent.parent
sys.path.insert(0, str(package_root))
# Ensure the library modules can be imported
sys.path.insert(0, str(package_root / 'diagsynth'))

# Now attempt the imports
try:
    from diagsynth.diagsynth_phase import DiagonalSpec, random_block_spec
    from diagsynth.diagsynth_circuit import Circuit, dense_unitary
    from diagsynth.diagsynth_cli import parse_args
except ImportError as e:
    pytest.fail(f"Failed to import diagsynth components: {e}\n"
                f"Ensure the package is installed correctly (e.g., 'pip install -e .') "
                f"or PYTHONPATH is set up.\n"
                f"Current sys.path: {sys.path}")


SPECS_DIR = package_root / "specs"


@pytest.fixture
def rng():
    """Fixed-seed generator so randomised properties are reproducible."""
    return np.random.default_rng(20240611)

@pytest.fixture
def spec_files():
    """The bundled example specs."""
    return sorted(SPECS_DIR.glob("*.json"))

@pytest.fixture
def write_spec(tmp_path):
    """Writes a JSON spec into tmp_path and returns its path."""
    def _write(name: str, text: str) -> Path:
        path = tmp_path / name
        path.write_text(text, encoding='utf-8')
        return path
    return _write

@pytest.fixture
def isolated_home(tmp_path, monkeypatch):
    """Points the saved-config location at an empty temporary home."""
    home = tmp_path / "home"
    home.mkdir()
    monkeypatch.setattr(Path, "home", classmethod(lambda cls: home))
    return home
