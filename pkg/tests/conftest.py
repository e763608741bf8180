import math
import random
from fractions import Fraction

import numpy as np
import pytest

from charvar.character_variety import TracePoint, from_tilde
from charvar.cyclotomic import two_cos


def random_float_point(rng: np.random.Generator) -> TracePoint:
    """Point of E with -2 < k < 2, built from a level x and an angle on the tilde circle."""
    k = rng.uniform(-1.95, 1.95)
    big_r = math.sqrt(2 + k)
    x = rng.uniform(-0.98, 0.98) * min(big_r, 1.99)
    r = math.sqrt(2 + k - x * x)
    phi = rng.uniform(0, 2 * math.pi)
    return from_tilde((x, r * math.cos(phi), r * math.sin(phi)))


def random_angle(rng: random.Random, max_den: int = 12) -> Fraction:
    q = rng.randint(1, max_den)
    return Fraction(rng.randint(0, 2 * q - 1), q)


def random_cosine_point(rng: random.Random, max_den: int = 12) -> TracePoint:
    return TracePoint(*(two_cos(random_angle(rng, max_den)) for _ in range(3)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def prng():
    return random.Random(20240611)
