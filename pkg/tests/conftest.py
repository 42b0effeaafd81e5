import json
from pathlib import Path

import pytest

from euler_lab.biotsavart import KernelConfig
from euler_lab.fields import DimensionContext
from euler_lab.initdata import BubbleParams, seed_particles

DATA_DIR = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def ctx3():
    return DimensionContext.for_dimension(3)


@pytest.fixture(scope="session")
def single_bubble(ctx3):
    """One bubble pair at moderate resolution, alpha = 0.6."""
    return seed_particles(BubbleParams(n0=1, m=1, alpha=0.6), 32, ctx3)


@pytest.fixture(scope="session")
def family3(ctx3):
    """Three-bubble family at the evolution default resolution."""
    return seed_particles(BubbleParams(n0=1, m=3, alpha=0.6), 10, ctx3)


@pytest.fixture(scope="session")
def kernel64():
    return KernelConfig(n_theta=64)


@pytest.fixture(scope="session")
def velocity_oracle():
    with open(DATA_DIR / "velocity_oracle.json") as fh:
        return json.load(fh)
