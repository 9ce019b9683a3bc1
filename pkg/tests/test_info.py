"""Information-measure tests: closed-form anchors, a brute-force discrete MI
oracle, a Monte Carlo oracle for the Gaussian path, and mixture-entropy
anchors with independently computed reference values."""

import math

import numpy as np
import pytest

from hdccrc import info
from hdccrc.probability import Alphabet, JointPmf


def make_pmf(names, table):
    table = np.asarray(table, dtype=float)
    alphas = tuple(Alphabet(tuple(str(i) for i in range(n)))
                   for n in table.shape)
    return JointPmf(tuple(names), alphas, table)


def random_pmf(rng, max_vars=4, max_symbols=4):
    k = int(rng.integers(2, max_vars + 1))
    shape = tuple(int(rng.integers(2, max_symbols + 1)) for _ in range(k))
    table = rng.dirichlet(np.ones(int(np.prod(shape)))).reshape(shape)
    names = tuple("ABCD"[:k])
    return make_pmf(names, table)


def oracle_cond_mi(pmf, X, Y, Z):
    """I(X;Y|Z) by direct summation of p log [p(xyz)p(z) / (p(xz)p(yz))]."""
    def marg(names):
        keep = [pmf.names.index(n) for n in names]
        drop = tuple(i for i in range(len(pmf.names)) if i not in keep)
        t = pmf.table.sum(axis=drop) if drop else pmf.table
        order = [n for n in pmf.names if n in names]
        return np.transpose(t, [order.index(n) for n in names]), names

    total = 0.0
    names = pmf.names
    for idx in np.ndindex(pmf.table.shape):
        p = pmf.table[idx]
        if p == 0.0:
            continue
        coord = dict(zip(names, idx))

        def pr(sub):
            t, order = marg(tuple(sub))
            return t[tuple(coord[n] for n in order)]

        p_xyz = pr(X + Y + Z)
        p_z = pr(Z) if Z else 1.0
        p_xz = pr(X + Z)
        p_yz = pr(Y + Z)
        total += p * math.log2(p_xyz * p_z / (p_xz * p_yz))
    return total


def test_entropy_uniform_and_point_mass():
    assert info.entropy(make_pmf("A", [0.25] * 4)) == pytest.approx(2.0)
    assert info.entropy(make_pmf("A", [1.0, 0.0, 0.0])) == 0.0


def test_entropy_bernoulli_anchor():
    # H2(0.1) = 0.468996 bits
    h = info.entropy(make_pmf("A", [0.1, 0.9]))
    assert h == pytest.approx(0.46899559358928133, abs=1e-12)


def test_bsc_mutual_information_anchor():
    # uniform input through BSC(0.1): I = 1 - H2(0.1) = 0.531004 bits
    p = 0.1
    table = np.array([[0.5 * (1 - p), 0.5 * p], [0.5 * p, 0.5 * (1 - p)]])
    pmf = make_pmf("AB", table)
    i = info.cond_mutual_info(pmf, ("A",), ("B",))
    assert i == pytest.approx(1.0 - 0.46899559358928133, abs=1e-12)


def test_cond_mi_matches_oracle_random():
    rng = np.random.default_rng(99)
    for _ in range(100):
        pmf = random_pmf(rng)
        names = list(pmf.names)
        X, Y = (names[0],), (names[1],)
        Z = tuple(names[2:])
        ours = info.cond_mutual_info(pmf, X, Y, Z)
        ref = oracle_cond_mi(pmf, X, Y, Z)
        assert ours == pytest.approx(ref, abs=1e-10)


def test_cond_mi_chain_rule():
    rng = np.random.default_rng(3)
    for _ in range(20):
        pmf = random_pmf(rng, max_vars=3)
        if len(pmf.names) < 3:
            continue
        a, b, c = pmf.names
        lhs = info.cond_mutual_info(pmf, (a,), (b, c))
        rhs = (info.cond_mutual_info(pmf, (a,), (b,))
               + info.cond_mutual_info(pmf, (a,), (c,), (b,)))
        assert lhs == pytest.approx(rhs, abs=1e-10)


def test_data_processing_on_markov_chain():
    # X -> Y -> Z built explicitly; I(X;Z) <= I(X;Y)
    rng = np.random.default_rng(17)
    for _ in range(20):
        px = rng.dirichlet(np.ones(3))
        pyx = rng.dirichlet(np.ones(3), size=3)
        pzy = rng.dirichlet(np.ones(3), size=3)
        table = np.einsum("x,xy,yz->xyz", px, pyx, pzy)
        pmf = make_pmf("XYZ", table)
        ixy = info.cond_mutual_info(pmf, ("X",), ("Y",))
        ixz = info.cond_mutual_info(pmf, ("X",), ("Z",))
        assert ixz <= ixy + 1e-10
        # Markov property: I(X;Z|Y) = 0
        assert info.cond_mutual_info(pmf, ("X",), ("Z",), ("Y",)) < 1e-10


def test_disjointness_enforced():
    pmf = random_pmf(np.random.default_rng(0))
    with pytest.raises(info.InfoError):
        info.cond_mutual_info(pmf, ("A",), ("A",))


def test_event_cond_mi_conditions_first():
    rng = np.random.default_rng(8)
    pmf = random_pmf(rng, max_vars=3)
    name = pmf.names[-1]
    sym = pmf.alphabet(name).symbols[0]
    ref = info.cond_mutual_info(pmf.condition(name, sym),
                                (pmf.names[0],), (pmf.names[1],))
    got = info.event_cond_mi(pmf, (pmf.names[0],), (pmf.names[1],), (),
                             (name, sym))
    assert got == pytest.approx(ref, abs=1e-12)


# ---------------------------------------------------------------------------
# Gaussian MI.

def random_cov(rng, dim):
    a = rng.normal(size=(dim, dim + 2))
    return a @ a.T / (dim + 2)


def mc_gaussian_mi(cov, ix, iy, iz, n, rng):
    """Monte Carlo oracle: average of the single-sample log-ratio statistic.

    t = log2[ p(x,z) p(y,z) / ( p(z) p(x,y,z) ) ] averaged over samples of
    the full joint equals I(X;Y|Z). Uses only marginal sub-covariances, so
    it shares no code path with the Schur-complement implementation.
    """
    L = np.linalg.cholesky(cov + 1e-12 * np.eye(len(cov)))
    samples = rng.standard_normal((n, len(cov))) @ L.T

    def logpdf(idx):
        if not idx:
            return np.zeros(n)
        sub = cov[np.ix_(idx, idx)]
        x = samples[:, idx]
        sign, logdet = np.linalg.slogdet(sub)
        assert sign > 0
        q = np.einsum("ni,ij,nj->n", x, np.linalg.inv(sub), x)
        return -0.5 * (q + logdet + len(idx) * math.log(2 * math.pi))

    t = (logpdf(ix + iz) + logpdf(iy + iz) - logpdf(iz)
         - logpdf(ix + iy + iz)) / math.log(2.0)
    t = -t  # the ratio above is the reciprocal of the MI integrand
    return float(t.mean()), float(t.std(ddof=1) / math.sqrt(n))


def test_awgn_unit_snr_anchor():
    vec = info.GaussianVector(("X", "Y"), np.array([[1.0, 1.0], [1.0, 2.0]]))
    assert info.gaussian_mi(vec, ("X",), ("Y",)) == pytest.approx(
        0.5, abs=1e-9)


def test_gaussian_mi_closed_form_scalar():
    # I(X; X+N) = 1/2 log2(1 + P/N)
    for p, nvar in ((2.0, 1.0), (5.0, 0.5)):
        cov = np.array([[p, p], [p, p + nvar]])
        vec = info.GaussianVector(("X", "Y"), cov)
        assert info.gaussian_mi(vec, ("X",), ("Y",)) == pytest.approx(
            0.5 * math.log2(1 + p / nvar), abs=1e-10)


def test_gaussian_mi_monte_carlo():
    rng = np.random.default_rng(314)
    for _ in range(10):
        dim = int(rng.integers(3, 8))
        cov = random_cov(rng, dim)
        names = tuple(f"v{i}" for i in range(dim))
        vec = info.GaussianVector(names, cov)
        perm = list(rng.permutation(dim))
        nx = int(rng.integers(1, dim - 1))
        ny = int(rng.integers(1, dim - nx))
        ix, iy = perm[:nx], perm[nx:nx + ny]
        iz = perm[nx + ny:]
        ours = info.gaussian_mi(vec, [names[i] for i in ix],
                                [names[i] for i in iy],
                                [names[i] for i in iz])
        est, se = mc_gaussian_mi(cov, ix, iy, iz, 200_000, rng)
        assert abs(ours - est) < 3 * se + 1e-6


def test_gaussian_mi_degenerate_dimension_is_zero():
    # a zero-variance coordinate carries no information
    cov = np.zeros((2, 2))
    cov[1, 1] = 1.0
    vec = info.GaussianVector(("X", "Y"), cov)
    assert info.gaussian_mi(vec, ("X",), ("Y",)) == 0.0


# ---------------------------------------------------------------------------
# Mixture entropy and the schedule information term.

def test_mixture_entropy_single_component():
    # reduces to the Gaussian differential entropy
    for var in (0.5, 1.0, 3.0):
        ref = info.gaussian_entropy_bits(var)
        assert info.mixture_entropy([1.0], [0.0], [var]) == pytest.approx(
            ref, abs=1e-7)


def test_mixture_entropy_far_separated_components():
    # far apart: entropy = mean component entropy + H2(w)
    h = info.mixture_entropy([0.5, 0.5], [0.0, 1000.0], [1.0, 1.0])
    ref = info.gaussian_entropy_bits(1.0) + 1.0
    assert h == pytest.approx(ref, abs=1e-7)
    h2 = info.mixture_entropy([0.25, 0.75], [0.0, 1000.0], [1.0, 1.0])
    ref2 = info.gaussian_entropy_bits(1.0) + info.binary_entropy(0.25)
    assert h2 == pytest.approx(ref2, abs=1e-7)


def test_mixture_entropy_riemann_cross_check():
    # independent trapezoid quadrature on a fixed fine grid
    w = np.array([0.3, 0.7])
    mu = np.array([-1.0, 2.0])
    var = np.array([0.8, 2.5])
    ys = np.linspace(-30, 40, 400_001)
    p = np.zeros_like(ys)
    for wi, mi, vi in zip(w, mu, var):
        p += wi * np.exp(-0.5 * (ys - mi) ** 2 / vi) / math.sqrt(
            2 * math.pi * vi)
    integrand = np.where(p > 0, -p * np.log2(np.maximum(p, 1e-300)), 0.0)
    ref = np.trapezoid(integrand, ys)
    assert info.mixture_entropy(w, mu, var) == pytest.approx(ref, abs=1e-6)


def test_state_output_mi_bounds():
    rng = np.random.default_rng(21)
    for _ in range(25):
        alpha = float(rng.uniform(0, 1))
        v_l = float(rng.uniform(0.5, 10))
        v_t = float(rng.uniform(0.5, 10))
        val = info.state_output_mi(alpha, (0.0, v_l), (0.0, v_t))
        assert 0.0 <= val <= info.binary_entropy(alpha) + 1e-12
        assert val <= 1.0
    assert info.state_output_mi(0.0, (0.0, 1.0), (0.0, 2.0)) == 0.0
    assert info.state_output_mi(1.0, (0.0, 1.0), (0.0, 2.0)) == 0.0


def test_state_output_mi_identical_components_is_zero():
    assert info.state_output_mi(0.5, (0.0, 2.0), (0.0, 2.0)) == pytest.approx(
        0.0, abs=1e-7)
