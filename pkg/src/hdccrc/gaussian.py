"""Gaussian channel evaluation: signaling parameters -> covariances -> the 18
constraint constants, plus the legacy two-phase protocol regions and the
non-causal specialization used as their phase-2 building block.

Conventions: direct links have unit gain, all receiver noises are unit
variance, and the full per-state power budgets P_P / P_C are available in
each state. All rates are in bits per channel use.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import astuple, dataclass, replace

import numpy as np
from scipy.stats import qmc

from .info import GaussianVector, InfoError, gaussian_mi, state_output_mi
from .region import (
    CONSTRAINT_IDS, MiTerms, NegativeConstraintError, RHS_TERMS, Region2D,
    build_polytope, frontier_points, default_directions,
    RATE_VARS, PRIMARY_VARS, SECONDARY_VARS, RegionError,
)

GAUSS_VARS = (
    "T_P1co", "T_P1pr", "X_P1co", "X_P1pr", "X_P2co", "X_P2pr",
    "X_P", "U_Cco", "U_Cpr", "X_C", "V_C", "Y_P", "Y_C",
)

# latent basis: unit-variance independent sources
_LATENTS = ("z_x1co", "z_x1pr", "z_tco", "z_tpr", "z_x2co", "z_x2pr",
            "z_cco", "z_cpr", "n_v", "n_p", "n_c")

SWEEP_DIRECTIONS = default_directions(33)
POWER_TOL = 1e-12


class GaussianError(ValueError):
    pass


@dataclass(frozen=True)
class GaussianChannel:
    P_P: float
    P_C: float
    g_PC: float
    h_PC: float
    h_CP: float

    def __post_init__(self):
        for name in ("P_P", "P_C"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0):
                raise GaussianError(f"{name} must be finite and > 0")
        for name in ("g_PC", "h_PC", "h_CP"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0):
                raise GaussianError(f"{name} must be finite and >= 0")


@dataclass(frozen=True)
class GaussianScheme:
    """One signaling point: schedule, power splits, and binning inflations.

    eta1 is the listen-state fraction of P_P on the common stream; the theta
    fractions split P_P across the four transmit-state primary streams; the
    beta fractions split P_C across coherent forwarding of the two resolution
    streams and the secondary's own two streams.
    """

    alpha: float
    schedule_mode: str = "random"  # "random" | "fixed"
    eta1: float = 0.0
    theta_t1co: float = 0.0
    theta_t1pr: float = 0.0
    theta_p2co: float = 0.0
    theta_p2pr: float = 0.0
    beta_coop_co: float = 0.0
    beta_coop_pr: float = 0.0
    beta_cco: float = 0.0
    beta_cpr: float = 0.0
    lambda_co: float = 0.0
    lambda_pr: float = 0.0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise GaussianError("alpha must lie in [0, 1]")
        if self.schedule_mode not in ("random", "fixed"):
            raise GaussianError("schedule_mode must be 'random' or 'fixed'")
        if not 0.0 <= self.eta1 <= 1.0:
            raise GaussianError("eta1 must lie in [0, 1]")
        thetas = (self.theta_t1co, self.theta_t1pr,
                  self.theta_p2co, self.theta_p2pr)
        betas = (self.beta_coop_co, self.beta_coop_pr,
                 self.beta_cco, self.beta_cpr)
        for group, label in ((thetas, "theta"), (betas, "beta")):
            if any(f < 0.0 or f > 1.0 for f in group):
                raise GaussianError(f"{label} fractions must lie in [0, 1]")
            if sum(group) > 1.0 + POWER_TOL:
                raise GaussianError(f"{label} fractions exceed the power budget")


def assemble_covariance(ch: GaussianChannel, sch: GaussianScheme,
                        state: str) -> GaussianVector:
    """Joint covariance of all named variables in the given state."""
    if state not in ("l", "t"):
        raise GaussianError("state must be 'l' or 't'")
    rows = {name: np.zeros(len(_LATENTS)) for name in GAUSS_VARS}

    def lat(name):
        return _LATENTS.index(name)

    if state == "l":
        rows["X_P1co"][lat("z_x1co")] = math.sqrt(sch.eta1 * ch.P_P)
        rows["X_P1pr"][lat("z_x1pr")] = math.sqrt((1.0 - sch.eta1) * ch.P_P)
        rows["X_P"] = rows["X_P1co"] + rows["X_P1pr"]
        rows["V_C"] = math.sqrt(ch.g_PC) * rows["X_P"]
        rows["V_C"][lat("n_v")] = 1.0
        rows["Y_P"] = rows["X_P"].copy()
        rows["Y_P"][lat("n_p")] = 1.0
        rows["Y_C"] = math.sqrt(ch.h_PC) * rows["X_P"]
        rows["Y_C"][lat("n_c")] = 1.0
    else:
        p_tco = sch.theta_t1co * ch.P_P
        p_tpr = sch.theta_t1pr * ch.P_P
        rows["T_P1co"][lat("z_tco")] = math.sqrt(p_tco)
        rows["T_P1pr"][lat("z_tpr")] = math.sqrt(p_tpr)
        rows["X_P2co"][lat("z_x2co")] = math.sqrt(sch.theta_p2co * ch.P_P)
        rows["X_P2pr"][lat("z_x2pr")] = math.sqrt(sch.theta_p2pr * ch.P_P)
        rows["X_P"] = (rows["T_P1co"] + rows["T_P1pr"]
                       + rows["X_P2co"] + rows["X_P2pr"])
        c_co = (math.sqrt(sch.beta_coop_co * ch.P_C / p_tco)
                if p_tco > POWER_TOL else 0.0)
        c_pr = (math.sqrt(sch.beta_coop_pr * ch.P_C / p_tpr)
                if p_tpr > POWER_TOL else 0.0)
        own_co = np.zeros(len(_LATENTS))
        own_co[lat("z_cco")] = math.sqrt(sch.beta_cco * ch.P_C)
        own_pr = np.zeros(len(_LATENTS))
        own_pr[lat("z_cpr")] = math.sqrt(sch.beta_cpr * ch.P_C)
        rows["X_C"] = (c_co * rows["T_P1co"] + c_pr * rows["T_P1pr"]
                       + own_co + own_pr)
        rows["U_Cco"] = own_co + sch.lambda_co * rows["T_P1pr"]
        rows["U_Cpr"] = own_pr + sch.lambda_pr * rows["T_P1pr"]
        rows["Y_P"] = rows["X_P"] + math.sqrt(ch.h_CP) * rows["X_C"]
        rows["Y_P"][lat("n_p")] = 1.0
        rows["Y_C"] = math.sqrt(ch.h_PC) * rows["X_P"] + rows["X_C"]
        rows["Y_C"][lat("n_c")] = 1.0
        # V_C is an erasure in the transmit state: carries nothing

    B = np.array([rows[name] for name in GAUSS_VARS])
    cov = B @ B.T
    var_xp = cov[GAUSS_VARS.index("X_P"), GAUSS_VARS.index("X_P")]
    var_xc = cov[GAUSS_VARS.index("X_C"), GAUSS_VARS.index("X_C")]
    if var_xp > ch.P_P + 1e-9 or var_xc > ch.P_C + 1e-9:
        raise GaussianError("power budget exceeded")
    return GaussianVector(GAUSS_VARS, cov)


def mi_terms_gaussian(ch: GaussianChannel, sch: GaussianScheme) -> MiTerms:
    """The 18 constants of the achievable-rate theorem under Gaussian signaling."""
    alpha = sch.alpha
    prefactor = {"l": alpha, "t": 1.0 - alpha}
    covs = {}

    def cov(state):
        if state not in covs:
            covs[state] = assemble_covariance(ch, sch, state)
        return covs[state]

    cache = {}

    def term_value(state, X, Y, Z):
        key = (state, X, Y, Z)
        if key not in cache:
            cache[key] = gaussian_mi(cov(state), X, Y, Z)
        return cache[key]

    if sch.schedule_mode == "random" and 0.0 < alpha < 1.0:
        i_s_yp = state_output_mi(
            alpha,
            (0.0, _output_var(cov("l"), "Y_P")),
            (0.0, _output_var(cov("t"), "Y_P")))
        i_s_yc = state_output_mi(
            alpha,
            (0.0, _output_var(cov("l"), "Y_C")),
            (0.0, _output_var(cov("t"), "Y_C")))
    else:
        i_s_yp = i_s_yc = 0.0
    addend = {"l": i_s_yp, "r": i_s_yc}

    c = {}
    for cid in CONSTRAINT_IDS:
        total = 0.0
        for state, X, Y, Z, sign in RHS_TERMS[cid]:
            pref = prefactor[state]
            if pref <= 0.0:
                continue
            total += sign * pref * term_value(state, X, Y, Z)
        total += addend.get(cid, 0.0)
        c[cid] = total

    if alpha < 1.0:
        binning = (
            (1.0 - alpha) * term_value("t", ("U_Cco",), ("T_P1pr",), ("T_P1co",)),
            (1.0 - alpha) * term_value(
                "t", ("U_Cpr",), ("T_P1pr",), ("U_Cco", "T_P1co")),
        )
    else:
        binning = (0.0, 0.0)
    return MiTerms(alpha=alpha, c=c, binning=binning)


def _output_var(vec: GaussianVector, name: str) -> float:
    i = vec.names.index(name)
    return float(vec.cov[i, i])


# ---------------------------------------------------------------------------
# Sweep machinery.

_RP_ROW = np.array([1.0 if v in PRIMARY_VARS else 0.0 for v in RATE_VARS])
_RC_ROW = np.array([1.0 if v in SECONDARY_VARS else 0.0 for v in RATE_VARS])
_RE_ROW = np.array([1.0 if v == "R_e" else 0.0 for v in RATE_VARS])
_RP1PR_ROW = np.array([1.0 if v == "R_P1pr" else 0.0 for v in RATE_VARS])

LAMBDA_MAX = 2.0


def scheme_from_unit_box(u: np.ndarray, alpha=None, schedule_mode="random",
                         constraints=None) -> GaussianScheme:
    """Map a point of the 14-dim unit box to a valid scheme.

    Power splits use an exponential (stick-breaking) map with one slack
    component so each group sums to < 1 without boundary clumping.
    """
    u = np.clip(np.asarray(u, dtype=float), 1e-9, 1.0 - 1e-9)

    def split(u4_and_slack):
        e = -np.log(u4_and_slack)
        return e[:-1] / e.sum()

    theta = split(u[2:7])
    beta = split(u[7:12])
    sch = GaussianScheme(
        alpha=float(u[0]) if alpha is None else float(alpha),
        schedule_mode=schedule_mode,
        eta1=float(u[1]),
        theta_t1co=float(theta[0]), theta_t1pr=float(theta[1]),
        theta_p2co=float(theta[2]), theta_p2pr=float(theta[3]),
        beta_coop_co=float(beta[0]), beta_coop_pr=float(beta[1]),
        beta_cco=float(beta[2]), beta_cpr=float(beta[3]),
        lambda_co=float(u[12] * LAMBDA_MAX),
        lambda_pr=float(u[13] * LAMBDA_MAX),
    )
    if constraints:
        sch = replace(sch, **constraints)
    return sch


def costa_lambda(own_power: float, noise_power: float) -> float:
    """Classic dirty-paper inflation factor for a unit-gain interference path."""
    if own_power <= 0.0:
        return 0.0
    return own_power / (own_power + noise_power)


def corner_schemes(ch: GaussianChannel, schedule_mode="random"):
    """Hand-picked specialization points added to every default sweep."""
    out = []
    alphas = (0.0, 0.1, 0.25, 0.5, 0.75, 0.9, 1.0)
    for a in alphas:
        out.append(GaussianScheme(alpha=a, schedule_mode=schedule_mode,
                                  theta_t1pr=0.5, theta_p2pr=0.5))
        # pure interference-channel style point
        out.append(GaussianScheme(alpha=a, schedule_mode=schedule_mode,
                                  theta_p2pr=1.0, beta_cpr=1.0))
        # full cooperation on the private resolution stream
        out.append(GaussianScheme(alpha=a, schedule_mode=schedule_mode,
                                  theta_t1pr=1.0, beta_coop_pr=1.0))
        for lam in (0.0, costa_lambda(0.5 * ch.P_C, 1.0), 1.0):
            out.append(GaussianScheme(
                alpha=a, schedule_mode=schedule_mode, eta1=0.0,
                theta_t1co=0.25, theta_t1pr=0.25, theta_p2pr=0.5,
                beta_coop_co=0.25, beta_coop_pr=0.25,
                beta_cco=0.25, beta_cpr=0.25,
                lambda_co=lam, lambda_pr=lam))
    return out


def sobol_schemes(n_points: int, seed: int, alpha=None,
                  schedule_mode="random", constraints=None):
    sampler = qmc.Sobol(d=14, scramble=True, seed=seed)
    # draw a full power-of-two block to keep the balance properties
    m = max(0, math.ceil(math.log2(max(n_points, 1))))
    u = sampler.random_base2(m)[:n_points]
    return [scheme_from_unit_box(row, alpha=alpha, schedule_mode=schedule_mode,
                                 constraints=constraints)
            for row in u]


def _polytope_for(ch, sch, drop=()):
    terms = mi_terms_gaussian(ch, sch)
    force = ("R_s",) if sch.schedule_mode == "fixed" else ()
    return build_polytope(terms, drop=drop, force_zero=force)


def _eval_scheme_2d(args):
    ch, sch, drop, directions = args
    try:
        poly = _polytope_for(ch, sch, drop=drop)
    except (NegativeConstraintError, InfoError, GaussianError):
        return None
    pts = frontier_points(poly, np.vstack([_RP_ROW, _RC_ROW]), directions)
    return pts


def _worker_count() -> int:
    env = os.environ.get("CCRC_THREADS")
    cap = int(env) if env else os.cpu_count() or 1
    return max(1, min(cap, os.cpu_count() or 1))


def _parallel_map(fn, items):
    workers = _worker_count()
    if workers == 1 or len(items) < 64:
        return [fn(it) for it in items]
    chunk = max(1, len(items) // (workers * 8))
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items, chunksize=chunk))


@dataclass(frozen=True)
class SweepOutcome:
    region: Region2D
    n_points: int
    n_rejected: int
    provenance: tuple  # (vertex (R_P, R_C), scheme) pairs for frontier points


def sweep_region(ch: GaussianChannel, schemes, drop=(),
                 directions=SWEEP_DIRECTIONS) -> SweepOutcome:
    """Hull of the union of projected polytopes over the given schemes.

    Results are merged in scheme order, so the outcome is deterministic
    regardless of worker parallelism.
    """
    args = [(ch, sch, tuple(drop), directions) for sch in schemes]
    results = _parallel_map(_eval_scheme_2d, args)
    pts, owners = [], []
    n_rejected = 0
    for sch, res in zip(schemes, results):
        if res is None:
            n_rejected += 1
            continue
        pts.append(res)
        owners.extend([sch] * len(res))
    if not pts:
        # every scheme was infeasible; the origin is still achievable
        return SweepOutcome(region=Region2D.from_points([[0.0, 0.0]]),
                            n_points=len(schemes), n_rejected=n_rejected,
                            provenance=())
    all_pts = np.vstack(pts)
    region = Region2D.from_points(all_pts)
    prov = []
    for v in region.vertices:
        d = np.linalg.norm(all_pts - v, axis=1)
        i = int(np.argmin(d))
        if d[i] < 1e-7:
            prov.append((tuple(v), owners[i]))
    return SweepOutcome(region=region, n_points=len(schemes),
                        n_rejected=n_rejected, provenance=tuple(prov))


def achievable_region_gaussian(ch: GaussianChannel, n_points: int = 8192,
                             seed: int = 1, schedule_mode: str = "random",
                             extra_schemes=()) -> SweepOutcome:
    """Achievable region of the new theorem over the default scheme sweep."""
    schemes = (sobol_schemes(n_points, seed, schedule_mode=schedule_mode)
               + corner_schemes(ch, schedule_mode=schedule_mode)
               + list(extra_schemes))
    return sweep_region(ch, schemes)


# ---------------------------------------------------------------------------
# Non-causal specialization (phase-2 building block of the legacy protocols).

NC_CONSTRAINTS = {"theta_p2co": 0.0, "theta_p2pr": 0.0}


@dataclass(frozen=True)
class NcFrontier:
    """Frontier of the non-causal region over (R_Pco, R_Ppr, R_C).

    R_Pco is carried by the explicitly forwarded common stream and R_Ppr by
    the private resolution stream in this specialization.
    """

    points: np.ndarray          # (m, 3)
    schemes: tuple              # aligned generating schemes


def _nc_directions(n_polar: int = 7, n_azimuth: int = 7) -> np.ndarray:
    dirs = [(1.0, 0.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)]
    for a in np.linspace(0.05, np.pi / 2 - 0.05, n_polar):
        for b in np.linspace(0.0, np.pi / 2, n_azimuth):
            dirs.append((math.cos(a) * math.cos(b),
                         math.cos(a) * math.sin(b),
                         math.sin(a)))
    return np.array(dirs)


def _eval_scheme_nc(args):
    ch, sch, drop, directions = args
    try:
        poly = _polytope_for(ch, sch, drop=drop)
    except (NegativeConstraintError, InfoError, GaussianError):
        return None
    return frontier_points(
        poly, np.vstack([_RE_ROW, _RP1PR_ROW, _RC_ROW]), directions)


def nc_frontier(ch: GaussianChannel, n_points: int = 1024, seed: int = 2,
                genie: bool = True, restricted: bool = True,
                directions=None) -> NcFrontier:
    """Frontier of the non-causal specialization: transmit state only, no
    fresh phase-2 streams, and (with the genie) no decode-at-S_C constraints.

    The `restricted` flag pins the independent rate-splitting / independent
    binning structure; the linear signaling family here is already
    independent, so it imposes nothing further.
    """
    del restricted  # see note above
    if directions is None:
        directions = _nc_directions()
    drop = ("a", "b") if genie else ()
    schemes = sobol_schemes(n_points, seed, alpha=0.0,
                            schedule_mode="fixed", constraints=NC_CONSTRAINTS)
    # deterministic corner points: full own-signal power, swept inflation
    for bc in (0.0, 0.5, 1.0):
        for lam in (0.0, 0.5, 1.0):
            schemes.append(GaussianScheme(
                alpha=0.0, schedule_mode="fixed",
                theta_t1co=0.5, theta_t1pr=0.5,
                beta_cco=bc / 2, beta_cpr=bc / 2,
                beta_coop_co=(1 - bc) / 2, beta_coop_pr=(1 - bc) / 2,
                lambda_co=lam, lambda_pr=lam))
    args = [(ch, sch, drop, directions) for sch in schemes]
    results = _parallel_map(_eval_scheme_nc, args)

    best = {}
    for sch, res in zip(schemes, results):
        if res is None:
            continue
        for d_idx, point in enumerate(res):
            score = float(directions[d_idx] @ point)
            if d_idx not in best or score > best[d_idx][0] + 1e-12:
                best[d_idx] = (score, point, sch)
    if not best:
        raise RegionError("all non-causal sweep points were rejected")
    pts = np.array([best[k][1] for k in sorted(best)])
    schs = tuple(best[k][2] for k in sorted(best))
    return NcFrontier(points=pts, schemes=schs)


def noncausal_region(ch: GaussianChannel, n_points: int = 1024, seed: int = 2,
                     genie: bool = True, restricted: bool = True) -> Region2D:
    """(R_P, R_C) shadow of the non-causal specialization."""
    fr = nc_frontier(ch, n_points=n_points, seed=seed, genie=genie,
                     restricted=restricted)
    rp = fr.points[:, 0] + fr.points[:, 1]
    return Region2D.from_points(np.column_stack([rp, fr.points[:, 2]]))


# ---------------------------------------------------------------------------
# Legacy protocol regions (closed-form phase-1 bounds composed with the
# non-causal frontier for phase 2).

def _log2p(x: float) -> float:
    return math.log2(1.0 + x)


def protocol1_rate_cap(ch: GaussianChannel, alpha: float, eta: float) -> float:
    """Phase-1 decode bound on R_P for the first legacy protocol."""
    eta_b = 1.0 - eta
    return 0.5 * alpha * (_log2p(ch.g_PC * eta_b * ch.P_P)
                          + _log2p(eta * ch.P_P / (1.0 + eta_b * ch.P_P)))


def r_in_1_rate_cap(ch: GaussianChannel, alpha: float) -> float:
    """Full-power phase-1 decode bound for the parallel-channel inner region."""
    return 0.5 * alpha * _log2p(ch.g_PC * ch.P_P)


def protocol1_points(ch: GaussianChannel, alpha: float, eta: float,
                     nc: NcFrontier) -> np.ndarray:
    """Rate pairs of the first legacy protocol at one (alpha, eta) choice."""
    if not 0.0 <= eta <= 1.0:
        raise GaussianError("eta must lie in [0, 1]")
    ab = 1.0 - alpha
    eta_b = 1.0 - eta
    slot1_pr = 0.5 * alpha * _log2p(eta * ch.P_P / (1.0 + eta_b * ch.P_P))
    cap = protocol1_rate_cap(ch, alpha, eta)
    r_pco = ab * nc.points[:, 0]
    r_ppr = slot1_pr + ab * nc.points[:, 1]
    r_p = np.minimum(r_pco + r_ppr, cap)
    r_c = ab * nc.points[:, 2]
    return np.column_stack([r_p, r_c])


def protocol1_region(ch: GaussianChannel, alphas, etas,
                     nc: NcFrontier) -> Region2D:
    pts = [protocol1_points(ch, a, e, nc) for a in alphas for e in etas]
    return Region2D.from_points(np.vstack(pts))


def r_in_1_points(ch: GaussianChannel, alpha: float, eta1: float,
                  nc: NcFrontier) -> np.ndarray:
    """Rate pairs of the parallel-channel inner region at one (alpha, eta1)."""
    if not 0.0 <= eta1 <= 1.0:
        raise GaussianError("eta1 must lie in [0, 1]")
    ab = 1.0 - alpha
    eta1_b = 1.0 - eta1
    cap = r_in_1_rate_cap(ch, alpha)
    common = min(
        0.5 * alpha * _log2p(eta1 * ch.P_P / (1.0 + eta1_b * ch.P_P)),
        0.5 * alpha * _log2p(ch.h_PC * eta1 * ch.P_P
                             / (1.0 + ch.h_PC * eta1_b * ch.P_P)))
    r_pco = common + ab * nc.points[:, 0]
    r_ppr = 0.5 * alpha * _log2p(eta1_b * ch.P_P) + ab * nc.points[:, 1]
    r_p = np.minimum(r_pco + r_ppr, cap)
    r_c = ab * nc.points[:, 2]
    return np.column_stack([r_p, r_c])


def eta1_bar_lower(ch: GaussianChannel, eta: float) -> float:
    """Lower end of the admissible 1-eta1 range for a given eta."""
    return eta / (1.0 + (1.0 - eta) * ch.P_P)


def r_in_1_region(ch: GaussianChannel, alphas, eta1s,
                  nc: NcFrontier) -> Region2D:
    pts = [r_in_1_points(ch, a, e1, nc) for a in alphas for e1 in eta1s]
    return Region2D.from_points(np.vstack(pts))


def protocol1_theorem_schemes(alphas, nc: NcFrontier):
    """Theorem-side schemes that dominate every protocol-1 point: all listen
    power on the private stream, phase-2 parameters from the frontier."""
    unique = {}
    for sch in nc.schemes:
        unique.setdefault(astuple(sch), sch)
    out = []
    for a in alphas:
        for sch in unique.values():
            out.append(replace(sch, alpha=float(a), schedule_mode="random",
                               eta1=0.0))
    return out


PROTOCOL_CONSTRAINTS = {
    2: {"theta_p2co": 0.0, "theta_p2pr": 0.0},
    3: {"alpha": 0.0, "theta_t1co": 0.0, "theta_t1pr": 0.0,
        "beta_coop_co": 0.0, "beta_coop_pr": 0.0,
        "lambda_co": 0.0, "lambda_pr": 0.0},
    4: {"eta1": 0.0, "theta_t1co": 0.0, "theta_p2co": 0.0, "theta_p2pr": 0.0,
        "beta_coop_co": 0.0, "beta_cco": 0.0, "beta_cpr": 0.0,
        "lambda_co": 0.0, "lambda_pr": 0.0},
}


def protocol_schemes(which: int, n_points: int = 1024, seed: int = 3):
    if which not in PROTOCOL_CONSTRAINTS:
        raise GaussianError("protocol specialization must be 2, 3 or 4")
    constraints = PROTOCOL_CONSTRAINTS[which]
    schemes = sobol_schemes(n_points, seed, schedule_mode="fixed",
                            constraints=constraints)
    # zero-inflation variants: always feasible, so the specialization never
    # collapses when the sampled binning parameters are too aggressive
    for sch in schemes[:min(64, len(schemes))]:
        schemes.append(replace(sch, lambda_co=0.0, lambda_pr=0.0))
    return schemes


def protocol_specialization(ch: GaussianChannel, which: int,
                            n_points: int = 1024, seed: int = 3) -> SweepOutcome:
    """Legacy protocols 2-4 as variable disablings of the theorem evaluator."""
    return sweep_region(ch, protocol_schemes(which, n_points, seed))


# ---------------------------------------------------------------------------
# Time-division evaluator (fixed schedule, per-slot parallel-channel sums).
# Deliberately spelled out term by term, independent of the RHS_TERMS table,
# so it can cross-check the generic evaluator.

def _td_terms(ch: GaussianChannel, sch: GaussianScheme) -> MiTerms:
    a = sch.alpha
    ab = 1.0 - a
    cl = assemble_covariance(ch, sch, "l")
    ct = assemble_covariance(ch, sch, "t")

    def il(X, Y, Z=()):
        return gaussian_mi(cl, X, Y, Z) if a > 0 else 0.0

    def it(X, Y, Z=()):
        return gaussian_mi(ct, X, Y, Z) if ab > 0 else 0.0

    # slot-1 (listen) links
    sc_pr_given_co = il(("X_P1pr",), ("V_C",), ("X_P1co",))
    sc_pr = il(("X_P1pr",), ("V_C",))
    dp_pr_given_co = il(("X_P1pr",), ("Y_P",), ("X_P1co",))
    dp_pr = il(("X_P1pr",), ("Y_P",))
    dc_co = il(("X_P1co",), ("Y_C",))
    # slot-2 (transmit) links
    dp_fresh_pr = it(("X_P2pr",), ("Y_P", "U_Cco"),
                     ("X_P2co", "T_P1pr", "T_P1co"))
    dp_fresh = it(("X_P2pr",), ("Y_P", "U_Cco"), ("T_P1pr", "T_P1co"))
    dp_fresh_pr_cco = it(("X_P2pr", "U_Cco"), ("Y_P",),
                         ("X_P2co", "T_P1pr", "T_P1co"))
    dp_fresh_cco = it(("X_P2pr", "U_Cco"), ("Y_P",), ("T_P1pr", "T_P1co"))
    dp_res_pr = it(("T_P1pr", "X_P2pr"), ("Y_P", "U_Cco"),
                   ("X_P2co", "T_P1co"))
    dp_res = it(("T_P1pr", "X_P2pr"), ("Y_P", "U_Cco"), ("T_P1co",))
    dp_res_pr_cco = it(("T_P1pr", "X_P2pr", "U_Cco"), ("Y_P",),
                       ("X_P2co", "T_P1co"))
    dp_res_cco = it(("T_P1pr", "X_P2pr", "U_Cco"), ("Y_P",), ("T_P1co",))
    dp_all = it(("T_P1co", "T_P1pr", "X_P2pr", "U_Cco"), ("Y_P",))
    dc_pr_bin = it(("U_Cpr",), ("T_P1pr", "U_Cco"), ("T_P1co",))
    dc_both_bin = it(("U_Cco", "U_Cpr"), ("T_P1pr",), ("T_P1co",))
    dc_pr = it(("U_Cpr",), ("Y_C", "U_Cco"), ("X_P2co", "T_P1co"))
    dc_both = it(("U_Cco", "U_Cpr"), ("Y_C",), ("X_P2co", "T_P1co"))
    dc_pr_p2 = it(("X_P2co", "U_Cpr"), ("Y_C", "U_Cco"), ("T_P1co",))
    dc_both_p2 = it(("X_P2co", "U_Cco", "U_Cpr"), ("Y_C",), ("T_P1co",))
    dc_all = it(("T_P1co", "X_P2co", "U_Cco", "U_Cpr"), ("Y_C",))

    c = {
        "a": a * sc_pr_given_co,
        "b": a * sc_pr,
        "c": ab * dp_fresh_pr,
        "d": ab * dp_fresh,
        "e": ab * dp_fresh_pr_cco,
        "f": ab * dp_fresh_cco,
        "g": a * dp_pr_given_co + ab * dp_res_pr,
        "h": a * dp_pr_given_co + ab * dp_res,
        "i": a * dp_pr_given_co + ab * dp_res_pr_cco,
        "j": a * dp_pr_given_co + ab * dp_res_cco,
        "k": a * dp_pr + ab * dp_all,
        "l": a * dp_pr + ab * dp_all,  # fixed schedule: no I(S;Y_P) bonus
        "m": ab * (dc_pr - dc_pr_bin),
        "n": ab * (dc_both - dc_both_bin),
        "o": ab * (dc_pr_p2 - dc_pr_bin),
        "p": ab * (dc_both_p2 - dc_both_bin),
        "q": a * dc_co + ab * (dc_all - dc_both_bin),
        "r": a * dc_co + ab * (dc_all - dc_both_bin),
    }
    binning = (ab * it(("U_Cco",), ("T_P1pr",), ("T_P1co",)),
               ab * it(("U_Cpr",), ("T_P1pr",), ("U_Cco", "T_P1co")))
    return MiTerms(alpha=a, c=c, binning=binning)


def _eval_scheme_td(args):
    ch, sch, directions = args
    try:
        terms = _td_terms(ch, sch)
    except (NegativeConstraintError, InfoError, GaussianError):
        return None
    poly = build_polytope(terms, force_zero=("R_s",))
    return frontier_points(poly, np.vstack([_RP_ROW, _RC_ROW]), directions)


def time_division_region(ch: GaussianChannel, n_points: int = 1024,
                         seed: int = 4,
                         directions=SWEEP_DIRECTIONS) -> SweepOutcome:
    """Two-slot strategy with parallel-channel decoding of the slot-1 message."""
    schemes = sobol_schemes(n_points, seed, schedule_mode="fixed")
    args = [(ch, sch, directions) for sch in schemes]
    results = _parallel_map(_eval_scheme_td, args)
    pts = [r for r in results if r is not None]
    if not pts:
        return SweepOutcome(region=Region2D.from_points([[0.0, 0.0]]),
                            n_points=len(schemes), n_rejected=len(schemes),
                            provenance=())
    region = Region2D.from_points(np.vstack(pts))
    return SweepOutcome(region=region, n_points=len(schemes),
                        n_rejected=len(schemes) - len(pts), provenance=())
