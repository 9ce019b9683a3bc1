"""Small dense-tableau simplex solver.

All LPs in this package have the form

    max  c.x   s.t.  A x <= b,  x >= 0,  b >= 0,

so the slack basis is always a feasible start and no phase-1 is needed.
Free variables are handled by the x = x+ - x- split in max_free().
scipy's linprog would do the same job but carries ~1 ms of call overhead,
which is too slow for the tens of thousands of solves in the projection
cross-checks and Gaussian sweeps.
"""

from __future__ import annotations

import numpy as np

OPTIMAL = 0
UNBOUNDED = 3


class SimplexError(RuntimeError):
    """Iteration limit hit; indicates degenerate cycling or a bad system."""


def simplex_max(c, A, b, tol=1e-9, max_iter=5000):
    """Maximize c.x subject to A x <= b, x >= 0 (requires b >= -tol).

    Returns (status, x, value). On UNBOUNDED, x and value are None.
    """
    A = np.asarray(A, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=float)
    m, n = A.shape
    if np.any(b < -tol):
        raise ValueError("simplex_max requires b >= 0")
    b = np.maximum(b, 0.0)

    # tableau rows: m constraints + objective row
    T = np.zeros((m + 1, n + m + 1))
    T[:m, :n] = A
    T[:m, n:n + m] = np.eye(m)
    T[:m, -1] = b
    T[m, :n] = -c
    basis = np.arange(n, n + m)

    bland_after = 200
    for it in range(max_iter):
        red = T[m, :-1]
        if it < bland_after:
            j = int(np.argmin(red))
            if red[j] >= -tol:
                break
        else:
            neg = np.nonzero(red < -tol)[0]
            if neg.size == 0:
                break
            j = int(neg[0])  # Bland's rule, guards against cycling
        col = T[:m, j]
        pos = col > tol
        if not pos.any():
            return UNBOUNDED, None, None
        ratios = np.full(m, np.inf)
        ratios[pos] = T[:m, -1][pos] / col[pos]
        rmin = ratios.min()
        ties = np.nonzero(ratios <= rmin + 1e-12)[0]
        i = int(ties[np.argmin(basis[ties])])
        # pivot on (i, j)
        T[i] = T[i] / T[i, j]
        coljv = T[:, j].copy()
        coljv[i] = 0.0
        T -= np.outer(coljv, T[i])
        basis[i] = j
    else:
        raise SimplexError("simplex iteration limit reached")

    x = np.zeros(n + m)
    x[basis] = T[:m, -1]
    return OPTIMAL, x[:n], float(T[m, -1])


def max_free(c, A, b, tol=1e-9):
    """Maximize c.x subject to A x <= b with x free (sign-unrestricted)."""
    A = np.asarray(A, dtype=float)
    c = np.asarray(c, dtype=float)
    status, x, val = simplex_max(
        np.concatenate([c, -c]), np.hstack([A, -A]), b, tol=tol)
    if status != OPTIMAL:
        return status, None, None
    n = A.shape[1]
    return OPTIMAL, x[:n] - x[n:], val
