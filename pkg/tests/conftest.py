from fractions import Fraction

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

# the benchmark alphas plus a spread of small-denominator values
LOSS_ALPHAS = [Fraction(0), Fraction(2, 7), Fraction(2, 3), Fraction(4, 7), Fraction(6, 7),
               Fraction(58, 59), Fraction(84, 85), Fraction(1)]


@pytest.fixture
def rng():
    import numpy as np

    return np.random.default_rng(20240607)
