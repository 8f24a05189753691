import random
from fractions import Fraction

import pytest

from nivenlab.baselines import Baselines


@pytest.fixture(scope="session")
def baselines():
    return Baselines.load()


@pytest.fixture()
def rng():
    return random.Random(20250101)


def random_fraction(rng: random.Random, max_den: int = 10**9) -> Fraction:
    q = rng.randint(2, max_den)
    return Fraction(rng.randint(0, q - 1), q)
