"""Rate polytope over the 7 split rates, 2-D projection, and region algebra.

The 18 inequality constants are the full right-hand sides of the theorem's
bounds (schedule prefactors and the I(S;Y) addends already applied). The
left-hand-side variable map below is frozen so each row can be audited
line by line:

    a: R_P1pr                        b: R_s+R_e+R_P1pr
    c: R_P2pr                        d: R_P2co+R_P2pr
    e: R_P2pr+R_Cco                  f: R_P2co+R_P2pr+R_Cco
    g: R_P1pr+R_P2pr                 h: R_P1pr+R_P2co+R_P2pr
    i: R_P1pr+R_P2pr+R_Cco           j: R_P1pr+R_P2co+R_P2pr+R_Cco
    k: R_e+R_P1pr+R_P2co+R_P2pr+R_Cco
    l: R_s+R_e+R_P1pr+R_P2co+R_P2pr+R_Cco
    m: R_Cpr                         n: R_Cco+R_Cpr
    o: R_P2co+R_Cpr                  p: R_P2co+R_Cco+R_Cpr
    q: R_e+R_P2co+R_Cco+R_Cpr        r: R_s+R_e+R_P2co+R_Cco+R_Cpr
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import lp
from .info import cond_mutual_info, event_cond_mi
from .probability import ChannelSpec, HalfDuplexLaw, make_joint

CONSTRAINT_IDS = tuple("abcdefghijklmnopqr")

RATE_VARS = ("R_s", "R_e", "R_P1pr", "R_P2co", "R_P2pr", "R_Cco", "R_Cpr")
PRIMARY_VARS = ("R_s", "R_e", "R_P1pr", "R_P2co", "R_P2pr")
SECONDARY_VARS = ("R_Cco", "R_Cpr")

LHS_VARS = {
    "a": ("R_P1pr",),
    "b": ("R_s", "R_e", "R_P1pr"),
    "c": ("R_P2pr",),
    "d": ("R_P2co", "R_P2pr"),
    "e": ("R_P2pr", "R_Cco"),
    "f": ("R_P2co", "R_P2pr", "R_Cco"),
    "g": ("R_P1pr", "R_P2pr"),
    "h": ("R_P1pr", "R_P2co", "R_P2pr"),
    "i": ("R_P1pr", "R_P2pr", "R_Cco"),
    "j": ("R_P1pr", "R_P2co", "R_P2pr", "R_Cco"),
    "k": ("R_e", "R_P1pr", "R_P2co", "R_P2pr", "R_Cco"),
    "l": ("R_s", "R_e", "R_P1pr", "R_P2co", "R_P2pr", "R_Cco"),
    "m": ("R_Cpr",),
    "n": ("R_Cco", "R_Cpr"),
    "o": ("R_P2co", "R_Cpr"),
    "p": ("R_P2co", "R_Cco", "R_Cpr"),
    "q": ("R_e", "R_P2co", "R_Cco", "R_Cpr"),
    "r": ("R_s", "R_e", "R_P2co", "R_Cco", "R_Cpr"),
}

# Right-hand sides: list of (state, X, Y, Z, sign); the schedule prefactor is
# alpha for state 'l' terms and 1-alpha for state 't' terms. Constraints 'l'
# and 'r' additionally add I(S;Y_P) / I(S;Y_C).
RHS_TERMS = {
    "a": [("l", ("X_P1pr",), ("V_C",), ("X_P1co",), +1)],
    "b": [("l", ("X_P1pr",), ("V_C",), (), +1)],
    "c": [("t", ("X_P2pr",), ("Y_P", "U_Cco"),
           ("X_P2co", "T_P1pr", "T_P1co"), +1)],
    "d": [("t", ("X_P2pr",), ("Y_P", "U_Cco"), ("T_P1pr", "T_P1co"), +1)],
    "e": [("t", ("X_P2pr", "U_Cco"), ("Y_P",),
           ("X_P2co", "T_P1pr", "T_P1co"), +1)],
    "f": [("t", ("X_P2pr", "U_Cco"), ("Y_P",), ("T_P1pr", "T_P1co"), +1)],
    "g": [("l", ("X_P1pr",), ("Y_P",), ("X_P1co",), +1),
          ("t", ("T_P1pr", "X_P2pr"), ("Y_P", "U_Cco"),
           ("X_P2co", "T_P1co"), +1)],
    "h": [("l", ("X_P1pr",), ("Y_P",), ("X_P1co",), +1),
          ("t", ("T_P1pr", "X_P2pr"), ("Y_P", "U_Cco"), ("T_P1co",), +1)],
    "i": [("l", ("X_P1pr",), ("Y_P",), ("X_P1co",), +1),
          ("t", ("T_P1pr", "X_P2pr", "U_Cco"), ("Y_P",),
           ("X_P2co", "T_P1co"), +1)],
    "j": [("l", ("X_P1pr",), ("Y_P",), ("X_P1co",), +1),
          ("t", ("T_P1pr", "X_P2pr", "U_Cco"), ("Y_P",), ("T_P1co",), +1)],
    "k": [("l", ("X_P1pr",), ("Y_P",), (), +1),
          ("t", ("T_P1co", "T_P1pr", "X_P2pr", "U_Cco"), ("Y_P",), (), +1)],
    "l": [("l", ("X_P1pr",), ("Y_P",), (), +1),
          ("t", ("T_P1co", "T_P1pr", "X_P2pr", "U_Cco"), ("Y_P",), (), +1)],
    "m": [("t", ("U_Cpr",), ("Y_C", "U_Cco"), ("X_P2co", "T_P1co"), +1),
          ("t", ("U_Cpr",), ("T_P1pr", "U_Cco"), ("T_P1co",), -1)],
    "n": [("t", ("U_Cco", "U_Cpr"), ("Y_C",), ("X_P2co", "T_P1co"), +1),
          ("t", ("U_Cco", "U_Cpr"), ("T_P1pr",), ("T_P1co",), -1)],
    "o": [("t", ("X_P2co", "U_Cpr"), ("Y_C", "U_Cco"), ("T_P1co",), +1),
          ("t", ("U_Cpr",), ("T_P1pr", "U_Cco"), ("T_P1co",), -1)],
    "p": [("t", ("X_P2co", "U_Cco", "U_Cpr"), ("Y_C",), ("T_P1co",), +1),
          ("t", ("U_Cco", "U_Cpr"), ("T_P1pr",), ("T_P1co",), -1)],
    "q": [("l", ("X_P1co",), ("Y_C",), (), +1),
          ("t", ("T_P1co", "X_P2co", "U_Cco", "U_Cpr"), ("Y_C",), (), +1),
          ("t", ("U_Cco", "U_Cpr"), ("T_P1pr",), ("T_P1co",), -1)],
    "r": [("l", ("X_P1co",), ("Y_C",), (), +1),
          ("t", ("T_P1co", "X_P2co", "U_Cco", "U_Cpr"), ("Y_C",), (), +1),
          ("t", ("U_Cco", "U_Cpr"), ("T_P1pr",), ("T_P1co",), -1)],
}

STATE_MI_ADDEND = {"l": "Y_P", "r": "Y_C"}  # constraint id -> output variable

BINNING_TERMS = (
    ("U_Cco", ("T_P1pr",), ("T_P1co",)),
    ("U_Cpr", ("T_P1pr",), ("U_Cco", "T_P1co")),
)

NEG_TOL = 1e-9
GEOM_TOL = 1e-12


class RegionError(ValueError):
    pass


class NegativeConstraintError(RegionError):
    """A theorem right-hand side came out negative: parameter point rejected."""

    def __init__(self, constraint_id: str, value: float):
        super().__init__(
            f"constraint ({constraint_id}) right-hand side is {value!r} bits")
        self.constraint_id = constraint_id
        self.value = value


@dataclass(frozen=True)
class MiTerms:
    alpha: float
    c: dict            # constraint id -> bits
    binning: tuple = (0.0, 0.0)

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise RegionError("alpha must lie in [0, 1]")
        clean = {}
        for cid in CONSTRAINT_IDS:
            if cid not in self.c:
                raise RegionError(f"missing constraint constant {cid!r}")
            v = float(self.c[cid])
            if v < -NEG_TOL:
                raise NegativeConstraintError(cid, v)
            clean[cid] = max(v, 0.0)
        object.__setattr__(self, "c", clean)

    def as_vector(self) -> np.ndarray:
        return np.array([self.c[cid] for cid in CONSTRAINT_IDS])


@dataclass(frozen=True)
class RatePolytope:
    """rows . x <= bounds over RATE_VARS; includes non-negativity rows."""

    rows: np.ndarray
    bounds: np.ndarray

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        bounds = np.asarray(self.bounds, dtype=float)
        if rows.ndim != 2 or rows.shape[1] != len(RATE_VARS):
            raise RegionError("rows must be (n, 7)")
        if bounds.shape != (rows.shape[0],):
            raise RegionError("bounds shape mismatch")
        rows.setflags(write=False)
        bounds.setflags(write=False)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "bounds", bounds)

    def member(self, x, tol=1e-9) -> bool:
        return bool(np.all(self.rows @ np.asarray(x, float) <= self.bounds + tol))


def build_polytope(terms: MiTerms, drop=(), force_zero=()) -> RatePolytope:
    """Theorem rows + non-negativity; `drop` removes constraint ids (genie
    specializations), `force_zero` pins named rate variables to 0."""
    rows, bounds = [], []
    for cid in CONSTRAINT_IDS:
        if cid in drop:
            continue
        row = np.zeros(len(RATE_VARS))
        for var in LHS_VARS[cid]:
            row[RATE_VARS.index(var)] = 1.0
        rows.append(row)
        bounds.append(terms.c[cid])
    for i in range(len(RATE_VARS)):
        row = np.zeros(len(RATE_VARS))
        row[i] = -1.0
        rows.append(row)
        bounds.append(0.0)
    for var in force_zero:
        row = np.zeros(len(RATE_VARS))
        row[RATE_VARS.index(var)] = 1.0
        rows.append(row)
        bounds.append(0.0)
    return RatePolytope(np.array(rows), np.array(bounds))


# ---------------------------------------------------------------------------
# 2-D regions (downward-closed convex polygons in the (R_P, R_C) plane).

def _convex_hull(points: np.ndarray) -> np.ndarray:
    """Andrew monotone chain; returns CCW vertices without repetition."""
    pts = np.unique(np.round(points, 12), axis=0)
    if len(pts) == 1:
        return pts
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    pts = pts[order]

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= GEOM_TOL:
            lower.pop()
        lower.append(p)
    upper = []
    for p in pts[::-1]:
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= GEOM_TOL:
            upper.pop()
        upper.append(p)
    hull_pts = lower[:-1] + upper[:-1]
    return np.array(hull_pts)


def _snap(points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=float).copy()
    pts[np.abs(pts) < GEOM_TOL] = 0.0
    return pts


@dataclass(frozen=True)
class Region2D:
    """Downward-closed convex polygon of achievable (R_P, R_C), in bits.

    Vertices are CCW starting at (max R_P, 0); the origin is always included.
    """

    vertices: np.ndarray

    def __post_init__(self):
        verts = np.asarray(self.vertices, dtype=float)
        if verts.ndim != 2 or verts.shape[1] != 2:
            raise RegionError("vertices must be (n, 2)")
        if np.any(verts < -1e-9):
            raise RegionError("negative rate vertex")
        verts.setflags(write=False)
        object.__setattr__(self, "vertices", verts)

    @classmethod
    def from_points(cls, points) -> "Region2D":
        """Hull of the points plus their downward closure toward the axes."""
        pts = _snap(np.atleast_2d(np.asarray(points, dtype=float)))
        if pts.size == 0:
            raise RegionError("empty point set")
        closure = [np.zeros((1, 2)), pts,
                   np.column_stack([pts[:, 0], np.zeros(len(pts))]),
                   np.column_stack([np.zeros(len(pts)), pts[:, 1]])]
        pts = np.vstack(closure)
        pts = np.maximum(pts, 0.0)
        hull_pts = _snap(_convex_hull(pts))
        # rotate so the walk starts at (max R_P, 0)
        start = np.lexsort((hull_pts[:, 1], -hull_pts[:, 0]))[0]
        hull_pts = np.roll(hull_pts, -start, axis=0)
        return cls(hull_pts)

    @property
    def max_rp(self) -> float:
        return float(self.vertices[:, 0].max())

    @property
    def max_rc(self) -> float:
        return float(self.vertices[:, 1].max())

    def area(self) -> float:
        v = self.vertices
        if len(v) < 3:
            return 0.0
        x, y = v[:, 0], v[:, 1]
        return float(0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))

    def halfspaces(self):
        """(normals, offsets) with n.x <= o describing the region."""
        v = self.vertices
        normals = [np.array([-1.0, 0.0]), np.array([0.0, -1.0])]
        offsets = [0.0, 0.0]
        if len(v) < 3:
            normals += [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
            offsets += [self.max_rp, self.max_rc]
        else:
            for i in range(len(v)):
                a, b = v[i], v[(i + 1) % len(v)]
                d = b - a
                if np.hypot(*d) < GEOM_TOL:
                    continue
                n = np.array([d[1], -d[0]])  # outward normal of a CCW edge
                n = n / np.hypot(*n)
                normals.append(n)
                offsets.append(float(n @ a))
        return np.array(normals), np.array(offsets)

    def violation(self, point) -> float:
        """Signed distance of point outside the region (<= 0 means inside)."""
        n, o = self.halfspaces()
        return float(np.max(n @ np.asarray(point, dtype=float) - o))

    def translate(self, dx: float, dy: float) -> "Region2D":
        return Region2D.from_points(self.vertices + np.array([dx, dy]))


def hull(points) -> Region2D:
    return Region2D.from_points(points)


def union(regions) -> Region2D:
    regions = list(regions)
    if not regions:
        raise RegionError("empty union")
    return Region2D.from_points(np.vstack([r.vertices for r in regions]))


def contains(a: Region2D, b: Region2D, tol: float = 1e-9):
    """Does region a contain region b? Returns (bool, max_violation)."""
    if tol < 0:
        raise RegionError("tol must be >= 0")
    worst = max(a.violation(p) for p in b.vertices)
    return worst <= tol, worst


# ---------------------------------------------------------------------------
# Fourier-Motzkin projection onto (R_P, R_C).

# elimination order: most-constrained variables last
FM_ELIM_ORDER = ("R_Cpr", "R_Cco", "R_P2pr", "R_P2co", "R_P1pr", "R_e", "R_s")
_EXT_VARS = ("R_P", "R_C") + RATE_VARS


def _prune_lp(rows: np.ndarray, tol=1e-9) -> np.ndarray:
    """Drop rows provably redundant with respect to the others."""
    keep = np.ones(len(rows), dtype=bool)
    for i in range(len(rows)):
        others = rows[keep & (np.arange(len(rows)) != i)]
        a, b = rows[i, :-1], rows[i, -1]
        status, _, val = lp.max_free(a, others[:, :-1], others[:, -1])
        if status == lp.OPTIMAL and val <= b + tol:
            keep[i] = False
    return rows[keep]


def _dedup(rows: np.ndarray) -> np.ndarray:
    if len(rows) == 0:
        return rows
    norms = np.max(np.abs(rows[:, :-1]), axis=1)
    norms[norms < GEOM_TOL] = 1.0
    scaled = rows / norms[:, None]
    # drop trivially true rows (zero coefficients, non-negative bound)
    nonzero = np.max(np.abs(scaled[:, :-1]), axis=1) > GEOM_TOL
    trivial = ~nonzero & (scaled[:, -1] >= -GEOM_TOL)
    if np.any(~nonzero & ~trivial):
        raise RegionError("inconsistent system during elimination")
    scaled = scaled[nonzero]
    _, idx = np.unique(np.round(scaled, 10), axis=0, return_index=True)
    return scaled[np.sort(idx)]


def _fm_eliminate(rows: np.ndarray, col: int) -> np.ndarray:
    coef = rows[:, col]
    zero = rows[np.abs(coef) <= GEOM_TOL]
    pos = rows[coef > GEOM_TOL]
    neg = rows[coef < -GEOM_TOL]
    combos = []
    for rp in pos:
        rp_n = rp / rp[col]
        for rn in neg:
            combos.append(rp_n + rn / (-rn[col]))
    parts = [zero]
    if combos:
        parts.append(np.array(combos))
    out = np.vstack(parts) if parts else np.zeros((0, rows.shape[1]))
    out = out.copy()
    out[:, col] = 0.0
    return out


def project_fm(poly: RatePolytope) -> Region2D:
    """Exact projection of the rate polytope onto the (R_P, R_C) plane."""
    n_ext = len(_EXT_VARS)
    sys_rows = []
    for row, b in zip(poly.rows, poly.bounds):
        ext = np.zeros(n_ext + 1)
        ext[2:2 + len(RATE_VARS)] = row
        ext[-1] = b
        sys_rows.append(ext)
    # coupling equalities R_P = sum of primary splits, R_C = sum of secondary
    for coord, group in ((0, PRIMARY_VARS), (1, SECONDARY_VARS)):
        eq = np.zeros(n_ext + 1)
        eq[coord] = 1.0
        for var in group:
            eq[2 + RATE_VARS.index(var)] = -1.0
        sys_rows.append(eq)
        sys_rows.append(-eq)
    rows = np.array(sys_rows)

    for var in FM_ELIM_ORDER:
        col = 2 + RATE_VARS.index(var)
        rows = _dedup(_fm_eliminate(rows, col))
        if len(rows) > 24:
            rows = _prune_lp(rows)

    rows = _prune_lp(_dedup(rows))
    a2 = rows[:, :2]
    b2 = rows[:, -1]
    # guard: the projection must be bounded in both coordinates
    for direction in (np.array([1.0, 0.0]), np.array([0.0, 1.0])):
        status, _, _ = lp.max_free(direction, a2, b2)
        if status == lp.UNBOUNDED:
            raise RegionError("unbounded projection; construction bug")
    verts = _vertices_2d(a2, b2)
    return Region2D.from_points(verts)


def _vertices_2d(a: np.ndarray, b: np.ndarray, tol=1e-9) -> np.ndarray:
    """Vertex enumeration of {x : a x <= b} in the plane."""
    cand = []
    n = len(a)
    for i in range(n):
        for j in range(i + 1, n):
            m = np.array([a[i], a[j]])
            det = np.linalg.det(m)
            if abs(det) < 1e-12:
                continue
            x = np.linalg.solve(m, np.array([b[i], b[j]]))
            if np.all(a @ x <= b + tol):
                cand.append(x)
    if not cand:
        cand = [np.zeros(2)]
    return np.array(cand)


def default_directions(n: int = 721) -> np.ndarray:
    """n directions spanning the closed first quadrant, axes included."""
    if n < 3:
        raise RegionError("need at least 3 directions")
    ang = np.linspace(0.0, np.pi / 2.0, n)
    return np.column_stack([np.cos(ang), np.sin(ang)])


def support_sweep(poly: RatePolytope, directions) -> Region2D:
    """Inner approximation of the projection via LP support maximization."""
    directions = np.atleast_2d(np.asarray(directions, dtype=float))
    if len(directions) < 3:
        raise RegionError("need at least 3 directions")
    rp_w = np.array([1.0 if v in PRIMARY_VARS else 0.0 for v in RATE_VARS])
    rc_w = np.array([1.0 if v in SECONDARY_VARS else 0.0 for v in RATE_VARS])
    pts = []
    for mu, nu in directions:
        obj = mu * rp_w + nu * rc_w
        status, x, _ = lp.simplex_max(obj, poly.rows, poly.bounds)
        if status != lp.OPTIMAL:
            raise RegionError("support LP unbounded; construction bug")
        pts.append((float(rp_w @ x), float(rc_w @ x)))
    return Region2D.from_points(pts)


def frontier_points(poly: RatePolytope, weight_rows, directions) -> np.ndarray:
    """Support maximizers of arbitrary rate aggregates (used by sweeps).

    weight_rows: (k, 7) aggregation matrix; directions: (m, k) weights.
    Returns the (m, k) array of aggregate coordinates at the maximizers.
    """
    weight_rows = np.asarray(weight_rows, dtype=float)
    out = []
    for d in np.atleast_2d(directions):
        obj = d @ weight_rows
        status, x, _ = lp.simplex_max(obj, poly.rows, poly.bounds)
        if status != lp.OPTIMAL:
            raise RegionError("frontier LP unbounded")
        out.append(weight_rows @ x)
    return np.array(out)


# ---------------------------------------------------------------------------
# Discrete evaluation of the 18 constants.

STATE_SYMBOL = {"l": "l", "t": "t"}


def mi_terms_dmc(law: HalfDuplexLaw, chan: ChannelSpec) -> MiTerms:
    """Evaluate all 18 right-hand sides exactly on the discrete joint."""
    joint = make_joint(law, chan)
    alpha = law.alpha
    prefactor = {"l": alpha, "t": 1.0 - alpha}
    cache = {}

    def term_value(state, X, Y, Z):
        key = (state, X, Y, Z)
        if key not in cache:
            cache[key] = event_cond_mi(joint, X, Y, Z, ("S", STATE_SYMBOL[state]))
        return cache[key]

    c = {}
    for cid in CONSTRAINT_IDS:
        total = 0.0
        for state, X, Y, Z, sign in RHS_TERMS[cid]:
            pref = prefactor[state]
            if pref <= 0.0:
                continue
            total += sign * pref * term_value(state, X, Y, Z)
        if cid in STATE_MI_ADDEND:
            total += cond_mutual_info(joint, ("S",), (STATE_MI_ADDEND[cid],))
        c[cid] = total

    binning = []
    for u_var, t_set, z_set in BINNING_TERMS:
        if alpha >= 1.0:
            binning.append(0.0)
        else:
            binning.append((1.0 - alpha) * term_value("t", (u_var,), t_set, z_set))
    return MiTerms(alpha=alpha, c=c, binning=tuple(binning))


def binning_report(terms: MiTerms):
    """The proof's two binning thresholds (diagnostic only)."""
    return terms.binning
