import math

import numpy as np
import pytest
from hypothesis import settings

from teichpong.mcg import MappingClass, classify, Classification, independent

settings.register_profile("deterministic", derandomize=True, deadline=None)
settings.load_profile("deterministic")


PHI = MappingClass(2, 1, 1, 1)
PSI = MappingClass(1, 1, 1, 2)

L_GEN = MappingClass(1, 1, 0, 1)
R_GEN = MappingClass(1, 0, 1, 1)


def random_pseudo_anosov(rng, max_trace=30):
    """Positive alternating words in the two twist generators, trace-capped."""
    while True:
        m = MappingClass.identity()
        for k in range(int(rng.integers(2, 5))):
            a = int(rng.integers(1, 4))
            base = L_GEN if k % 2 == 0 else R_GEN
            m = m * base ** a
        if classify(m) is Classification.PSEUDO_ANOSOV and abs(m.trace) <= max_trace:
            return m


def random_independent_pair(rng, max_trace=30):
    while True:
        m1 = random_pseudo_anosov(rng, max_trace)
        m2 = random_pseudo_anosov(rng, max_trace)
        if independent(m1, m2):
            return m1, m2


def random_thick_point(rng):
    """A point of the fundamental-domain neighborhood, comfortably thick."""
    x = float(rng.uniform(-0.5, 0.5))
    y = float(np.exp(rng.uniform(math.log(0.9), math.log(2.0))))
    from teichpong.hyp2 import Point
    return Point(x, y)


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def standard_pair():
    return PHI, PSI
