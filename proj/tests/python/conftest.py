import os
import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[2]

# Allow running straight from a source checkout with an existing build tree.
try:
    import divsim  # noqa: F401
except ImportError:
    sys.path.insert(0, str(ROOT / "build" / "python"))


@pytest.fixture(scope="session")
def cli():
    path = Path(os.environ.get("DIVSIM_CLI", ROOT / "build" / "divsim"))
    if not path.exists():
        pytest.skip("divsim CLI binary not built")
    return str(path)


@pytest.fixture(scope="session")
def src_root():
    return Path(os.environ.get("DIVSIM_SRC", ROOT))
