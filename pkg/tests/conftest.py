import pathlib
import sys

SRC = pathlib.Path(__file__).resolve().parents[1] / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

import pytest

from mzi_sensitivity.fock_oracle import OracleConfig


def rel_err(value: float, reference: float, floor: float = 1e-10) -> float:
    """Relative error with an absolute floor for near-zero references."""
    return abs(value - reference) / max(abs(reference), floor)


@pytest.fixture(scope="session")
def tight_oracle():
    """Oracle configuration tight enough for 1e-8 moment comparisons."""
    return OracleConfig(tail_tolerance=1e-12, max_joint_dimension=16384)
