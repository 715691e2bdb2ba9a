import math

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20260814)


@pytest.fixture
def subspace_sampler(rng):
    """Random physical states of the population/excited-coherence sector.

    Returns a callable producing (a, b, c, d) with a = rho22,
    b = rho00, rho21 = c + i d, drawn so the reconstructed density
    matrix is strictly positive.
    """

    def draw():
        weights = rng.dirichlet(np.ones(3))
        a, mid, b = (float(w) for w in weights)
        radius = math.sqrt(a * mid) * math.sqrt(float(rng.uniform(0.0, 0.95)))
        angle = float(rng.uniform(0.0, 2.0 * math.pi))
        return a, b, radius * math.cos(angle), radius * math.sin(angle)

    return draw


@pytest.fixture
def random_density(rng):
    """Random full-rank density matrices (no subspace restriction)."""

    def draw():
        g = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
        m = g @ g.conj().T
        return m / np.trace(m).real

    return draw
