"""Information measures in bits (log base 2).

Discrete entropy / conditional mutual information on exact pmfs, Gaussian
mutual information via Schur complements, and 1-D Gaussian-mixture entropy
by adaptive quadrature for the I(S;Y) schedule terms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .probability import JointPmf

LOG2 = np.log(2.0)
MI_FLOOR = 1e-9       # numerical negativity tolerated and clamped to 0
GAUSS_RIDGE = 1e-12   # ridge on conditional covariance blocks


class InfoError(ValueError):
    pass


def _clamp_bits(value: float, what: str) -> float:
    if value < -MI_FLOOR:
        raise InfoError(f"{what} = {value!r} bits is negative beyond the floor")
    return max(value, 0.0)


def entropy(pmf: JointPmf) -> float:
    """H(all variables of pmf) in bits, with 0 log 0 = 0."""
    p = pmf.table.reshape(-1)
    nz = p[p > 0]
    return _clamp_bits(float(-(nz * np.log2(nz)).sum()), "entropy")


def _joint_entropy(pmf: JointPmf, names) -> float:
    names = tuple(names)
    if not names:
        return 0.0
    return entropy(pmf.marginal(names))


def cond_mutual_info(pmf: JointPmf, X, Y, Z=()) -> float:
    """I(X;Y|Z) in bits via the four-entropy combination."""
    X, Y, Z = tuple(X), tuple(Y), tuple(Z)
    if set(X) & set(Y) or set(X) & set(Z) or set(Y) & set(Z):
        raise InfoError("X, Y, Z must be disjoint variable sets")
    h_xz = _joint_entropy(pmf, X + Z)
    h_yz = _joint_entropy(pmf, Y + Z)
    h_z = _joint_entropy(pmf, Z)
    h_xyz = _joint_entropy(pmf, X + Y + Z)
    return _clamp_bits(h_xz + h_yz - h_z - h_xyz, "conditional MI")


def event_cond_mi(pmf: JointPmf, X, Y, Z, event) -> float:
    """I(X;Y|Z, event) where event = (variable, symbol).

    Any schedule prefactor (alpha / 1-alpha) is applied by the caller.
    """
    name, symbol = event
    return cond_mutual_info(pmf.condition(name, symbol), X, Y, Z)


@dataclass(frozen=True)
class GaussianVector:
    names: tuple
    cov: np.ndarray  # zero-mean throughout this artifact

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        cov = np.asarray(self.cov, dtype=float)
        if cov.shape != (len(self.names),) * 2:
            raise InfoError("covariance shape does not match names")
        if np.max(np.abs(cov - cov.T)) > 1e-10:
            raise InfoError("covariance not symmetric within 1e-10")
        eigmin = float(np.linalg.eigvalsh(cov).min())
        if eigmin < -1e-9:
            raise InfoError(f"covariance indefinite (min eigenvalue {eigmin})")
        cov.setflags(write=False)
        object.__setattr__(self, "cov", cov)

    def idx(self, names) -> list:
        return [self.names.index(n) for n in names]


def _conditional_cov(cov: np.ndarray, keep: list, given: list) -> np.ndarray:
    """Schur complement Sigma_{keep | given} with ridge regularization."""
    kk = cov[np.ix_(keep, keep)]
    if not given:
        return kk
    gg = cov[np.ix_(given, given)] + GAUSS_RIDGE * np.eye(len(given))
    kg = cov[np.ix_(keep, given)]
    return kk - kg @ np.linalg.solve(gg, kg.T)


def gaussian_mi(vec: GaussianVector, X, Y, Z=()) -> float:
    """I(X;Y|Z) = 1/2 log2( det Sigma_{X|Z} / det Sigma_{X|Y,Z} ) in bits."""
    X, Y, Z = tuple(X), tuple(Y), tuple(Z)
    if set(X) & set(Y) or set(X) & set(Z) or set(Y) & set(Z):
        raise InfoError("X, Y, Z must be disjoint variable sets")
    ix, iy, iz = vec.idx(X), vec.idx(Y), vec.idx(Z)
    ridge = GAUSS_RIDGE * np.eye(len(ix))
    s_xz = _conditional_cov(vec.cov, ix, iz) + ridge
    s_xyz = _conditional_cov(vec.cov, ix, iy + iz) + ridge
    sign1, ld1 = np.linalg.slogdet(s_xz)
    sign2, ld2 = np.linalg.slogdet(s_xyz)
    if sign1 <= 0 or sign2 <= 0:
        raise InfoError("conditional covariance indefinite beyond tolerance")
    return _clamp_bits(0.5 * (ld1 - ld2) / LOG2, "Gaussian MI")


def gaussian_entropy_bits(variance: float) -> float:
    """Differential entropy of N(mu, variance) in bits."""
    if variance <= 0:
        raise InfoError("variance must be positive")
    return 0.5 * np.log2(2.0 * np.pi * np.e * variance)


def mixture_entropy(weights, means, variances, atol=1e-8) -> float:
    """Differential entropy (bits) of sum_k w_k N(mu_k, sigma_k^2)."""
    w = np.asarray(weights, dtype=float)
    mu = np.asarray(means, dtype=float)
    var = np.asarray(variances, dtype=float)
    if abs(w.sum() - 1.0) > 1e-9:
        raise InfoError("mixture weights must sum to 1")
    if np.any(var <= 0):
        raise InfoError("mixture variances must be positive")
    keep = w > 0
    w, mu, var = w[keep], mu[keep], var[keep]
    sig = np.sqrt(var)
    lo = float((mu - 12.0 * sig.max()).min())
    hi = float((mu + 12.0 * sig.max()).max())

    def neg_p_log2_p(y):
        p = np.sum(w * np.exp(-0.5 * (y - mu) ** 2 / var)
                   / np.sqrt(2.0 * np.pi * var))
        if p <= 0.0:
            return 0.0
        return -p * np.log2(p)

    val, err = quad(neg_p_log2_p, lo, hi, epsabs=atol, epsrel=1e-10, limit=400)
    if err > 100 * atol:
        raise InfoError(f"mixture-entropy quadrature error {err} too large")
    return float(val)


def binary_entropy(p: float) -> float:
    if p <= 0.0 or p >= 1.0:
        return 0.0
    return float(-p * np.log2(p) - (1 - p) * np.log2(1 - p))


def state_output_mi(alpha: float, comp_l, comp_t) -> float:
    """I(S;Y) for the two-state Gaussian output mixture; in [0, H2(alpha)]."""
    if not 0.0 <= alpha <= 1.0:
        raise InfoError("alpha must lie in [0, 1]")
    if alpha == 0.0 or alpha == 1.0:
        return 0.0
    (m_l, v_l), (m_t, v_t) = comp_l, comp_t
    h_mix = mixture_entropy([alpha, 1.0 - alpha], [m_l, m_t], [v_l, v_t])
    value = (h_mix - alpha * gaussian_entropy_bits(v_l)
             - (1.0 - alpha) * gaussian_entropy_bits(v_t))
    return float(min(max(value, 0.0), binary_entropy(alpha)))
