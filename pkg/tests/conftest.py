import numpy as np
import pytest

from seqtherm import QubitState


def random_state(rng) -> QubitState:
    """Uniform direction, radius biased toward the interior of the ball."""
    v = rng.normal(size=3)
    v *= rng.random() ** (1.0 / 3.0) / np.linalg.norm(v)
    return QubitState(*v)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
