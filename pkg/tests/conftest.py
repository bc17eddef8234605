import numpy as np
import pytest

from dixtrace.config import LadderPlan, RunConfig


@pytest.fixture
def fast_cfg() -> RunConfig:
    """Short ladders for unit tests; full depth stays in the acceptance suite."""
    return RunConfig().with_updates(
        ladder=LadderPlan(n_min=1 << 10, n_max=1 << 16, ratio=2.0),
        dense_ladder=LadderPlan(n_min=1 << 10, n_max=1 << 15, ratio=2.0),
        zeta_head=5_000,
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
