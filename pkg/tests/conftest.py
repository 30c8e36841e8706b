import random
import sys
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ellone import zoo
from ellone.core import Chain, Cochain


@pytest.fixture(scope="session")
def corpus():
    return zoo.corpus()


def random_chain(K, degree, rng, density=0.7, cls=Chain):
    coeffs = {}
    for i in range(K.n_simplices(degree)):
        if rng.random() < density:
            coeffs[i] = Fraction(rng.randint(-6, 6), rng.randint(1, 4))
    return cls(degree, coeffs)


def random_cochain(K, degree, rng, density=0.7):
    return random_chain(K, degree, rng, density, cls=Cochain)


@pytest.fixture
def rng():
    return random.Random(20260810)
