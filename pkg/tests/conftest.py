from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

LAMBDA_GRID = (0.5, -0.7 + 0.5j, 1.4 - 0.5j, 0.3 + 0.2j)


@pytest.fixture
def rng():
    return np.random.default_rng(42)


def uniform_sphere(rng, n, theta_lo=0.0, theta_hi=math.pi):
    """Area-uniform (theta, phi) samples in a polar band."""
    c = rng.uniform(math.cos(theta_hi), math.cos(theta_lo), n)
    return np.arccos(c), rng.uniform(0.0, 2.0 * math.pi, n)
