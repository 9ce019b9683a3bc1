"""Cross-check the dense-tableau simplex against scipy.optimize.linprog."""

import numpy as np
import pytest
from scipy.optimize import linprog

from hdccrc import lp


def random_bounded_lp(rng, n, m):
    A = rng.normal(size=(m, n))
    b = rng.uniform(0.1, 3.0, size=m)
    # cap every coordinate so the LP is bounded regardless of A's signs
    A = np.vstack([A, np.eye(n)])
    b = np.concatenate([b, rng.uniform(1.0, 5.0, size=n)])
    c = rng.normal(size=n)
    return c, A, b


def test_simple_known_lp():
    # max x + y s.t. x + 2y <= 4, 3x + y <= 6
    status, x, val = lp.simplex_max([1, 1], [[1, 2], [3, 1]], [4, 6])
    assert status == lp.OPTIMAL
    assert val == pytest.approx(2.8, abs=1e-9)
    assert x == pytest.approx([1.6, 1.2], abs=1e-9)


def test_unbounded_detection():
    status, x, val = lp.simplex_max([1.0], [[-1.0]], [0.0])
    assert status == lp.UNBOUNDED


def test_negative_rhs_rejected():
    with pytest.raises(ValueError):
        lp.simplex_max([1.0], [[1.0]], [-1.0])


def test_agrees_with_scipy_on_random_lps():
    rng = np.random.default_rng(123)
    for _ in range(200):
        n = int(rng.integers(2, 8))
        m = int(rng.integers(2, 12))
        c, A, b = random_bounded_lp(rng, n, m)
        status, x, val = lp.simplex_max(c, A, b)
        ref = linprog(-c, A_ub=A, b_ub=b, bounds=[(0, None)] * n,
                      method="highs")
        assert status == lp.OPTIMAL
        assert ref.status == 0
        assert val == pytest.approx(-ref.fun, abs=1e-7)
        assert np.all(A @ x <= b + 1e-7)


def test_max_free_agrees_with_scipy():
    rng = np.random.default_rng(7)
    for _ in range(100):
        n = int(rng.integers(2, 6))
        m = int(rng.integers(4, 12))
        A = rng.normal(size=(m, n))
        b = rng.uniform(0.1, 3.0, size=m)
        A = np.vstack([A, np.eye(n), -np.eye(n)])
        b = np.concatenate([b, np.full(2 * n, 4.0)])
        c = rng.normal(size=n)
        status, x, val = lp.max_free(c, A, b)
        ref = linprog(-c, A_ub=A, b_ub=b, bounds=[(None, None)] * n,
                      method="highs")
        assert status == lp.OPTIMAL and ref.status == 0
        assert val == pytest.approx(-ref.fun, abs=1e-7)
