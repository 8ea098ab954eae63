"""Shared strategies and helpers for the test suite."""

import numpy as np
import pytest
from hypothesis import strategies as st

from unital_otto import CycleParams, DensityMatrix


def finite(lo, hi):
    return st.floats(min_value=lo, max_value=hi, allow_nan=False, allow_infinity=False)


# beta bounded away from 0 so regime signs are unambiguous where needed
betas = st.one_of(finite(-2.0, -1e-3), finite(1e-3, 2.0))
gaps = finite(0.05, 3.0)
probs = finite(0.0, 1.0)


@st.composite
def cycle_params(draw, symmetric=False):
    delta = draw(probs)
    zeta = delta if symmetric else draw(probs)
    return CycleParams(draw(betas), draw(gaps), draw(gaps), delta, zeta)


@st.composite
def bloch_states(draw, gap=1.0):
    """Random single-qubit state from a Bloch vector inside the unit ball."""
    v = np.array([draw(finite(-1.0, 1.0)) for _ in range(3)])
    norm = np.linalg.norm(v)
    if norm > 1.0:
        v = v / (norm * (1.0 + 1e-9))
    mat = 0.5 * np.array(
        [
            [1.0 + v[2], v[0] - 1j * v[1]],
            [v[0] + 1j * v[1], 1.0 - v[2]],
        ]
    )
    return DensityMatrix(mat, gap=gap)


def random_params(rng, beta_range=(-2.0, 2.0), nu_range=(1e-3, 3.0)):
    """One CycleParams draw for seeded bulk checks (non-hypothesis loops)."""
    beta = 0.0
    while abs(beta) < 1e-9:
        beta = rng.uniform(*beta_range)
    return CycleParams(
        beta,
        rng.uniform(*nu_range),
        rng.uniform(*nu_range),
        rng.random(),
        rng.random(),
    )


def close(a, b, tol):
    """|a - b| <= tol * max(1, |a|, |b|): relative with an absolute floor."""
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
