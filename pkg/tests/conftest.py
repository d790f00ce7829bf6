import numpy as np
import pytest

import normlab as nl


def gaussian_pair(rng, dim):
    x = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    y = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return x, y


def unit_pair(spec, rng):
    x, y = gaussian_pair(rng, spec.dim)
    return x / nl.norm(spec, x), y / nl.norm(spec, y)


def random_pd_gram(rng, dim):
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return a.conj().T @ a + 0.5 * np.eye(dim)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def family_specs(dim=3):
    """One spec per family, at the given dimension."""
    rng = np.random.default_rng(99)
    f = rng.standard_normal((dim + 1, dim)) + 1j * rng.standard_normal((dim + 1, dim))
    return [
        nl.lp(1, dim),
        nl.lp(2.5, dim),
        nl.lp(np.inf, dim),
        nl.weighted_l1(rng.uniform(0.5, 2.0, dim)),
        nl.pd_inner(random_pd_gram(rng, dim)),
        nl.polyhedral(f),
    ]
