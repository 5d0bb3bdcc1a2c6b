import numpy as np
import pytest

from qkdrates.states import PairState


def random_pair_state(rng: np.random.Generator) -> PairState:
    """Valid pair state with uniform tagging and a random Bell simplex point."""
    big_delta = float(rng.uniform(0.0, 1.0))
    raw = rng.exponential(size=4)
    q = raw / raw.sum()
    q_x, q_y, q_z = (float(v) for v in q[1:])
    q_i = 1.0 - q_x - q_y - q_z  # re-derive so the sum check holds exactly
    return PairState(big_delta=big_delta, q_i=q_i, q_x=q_x, q_y=q_y, q_z=q_z)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20260809)
