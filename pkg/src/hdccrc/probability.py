"""Exact finite-alphabet probability machinery for the HD-CCRC.

Carries the factorized input law (with the listen/transmit state variable S,
null symbol phi and erasure symbol e), the channel conditional, and the full
joint pmf over the 14 named variables. All tables are dense float64 arrays;
alphabets are expected to stay at desk scale (a handful of symbols each).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

PMF_ATOL = 1e-12  # normalization tolerance for every pmf slice

# Fixed variable order of the full joint.
JOINT_VARS = (
    "S", "T_P1co", "T_P1pr", "X_P1co", "X_P1pr", "X_P2co", "X_P2pr",
    "X_P", "U_Cco", "U_Cpr", "X_C", "V_C", "Y_P", "Y_C",
)

LAW_VARS = JOINT_VARS[:11]
CHANNEL_VARS = ("X_P", "X_C", "S", "V_C", "Y_P", "Y_C")

# Factor chain of the achievable-region theorem: child -> parents, with table
# axes ordered (child, *parents).
FACTOR_PARENTS = {
    "T_P1co": ("S",),
    "T_P1pr": ("T_P1co", "S"),
    "X_P1co": ("T_P1co", "S"),
    "X_P1pr": ("X_P1co", "T_P1pr", "T_P1co", "S"),
    "X_P2co": ("T_P1co", "S"),
    "X_P2pr": ("X_P2co", "T_P1pr", "T_P1co", "S"),
    "U_Cco": ("T_P1co", "S"),
    "U_Cpr": ("U_Cco", "T_P1co", "S"),
}
FACTOR_ORDER = tuple(FACTOR_PARENTS)

XP_MAP_PARENTS = ("S", "T_P1co", "T_P1pr", "X_P1co", "X_P1pr", "X_P2co", "X_P2pr")
XC_MAP_PARENTS = ("S", "T_P1co", "T_P1pr", "U_Cco", "U_Cpr")

# Half-duplex point-mass restrictions: (id, variable, state that forces phi)
RESTRICTIONS = (
    ("2a", "T_P1co", "l"),
    ("2b", "T_P1pr", "l"),
    ("2c", "X_P2co", "l"),
    ("2d", "X_P2pr", "l"),
    ("2e", "U_Cco", "l"),
    ("2f", "U_Cpr", "l"),
    ("2g", "X_P1co", "t"),
    ("2h", "X_P1pr", "t"),
)


class ProbabilityError(ValueError):
    pass


class ZeroProbabilityEvent(ProbabilityError):
    """Raised when conditioning on an event of probability zero."""


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple
    null_symbol: Optional[str] = None
    erasure_symbol: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "symbols", tuple(self.symbols))
        if len(set(self.symbols)) != len(self.symbols):
            raise ProbabilityError("alphabet symbols must be unique")
        if len(self.symbols) < 1:
            raise ProbabilityError("alphabet must have at least one symbol")
        for special in (self.null_symbol, self.erasure_symbol):
            if special is not None and special not in self.symbols:
                raise ProbabilityError(
                    f"special symbol {special!r} not in alphabet")

    @property
    def size(self) -> int:
        return len(self.symbols)

    def index(self, symbol) -> int:
        try:
            return self.symbols.index(symbol)
        except ValueError:
            raise ProbabilityError(f"symbol {symbol!r} not in alphabet") from None

    @property
    def null_index(self) -> int:
        if self.null_symbol is None:
            raise ProbabilityError("alphabet has no null symbol")
        return self.index(self.null_symbol)

    @property
    def erasure_index(self) -> int:
        if self.erasure_symbol is None:
            raise ProbabilityError("alphabet has no erasure symbol")
        return self.index(self.erasure_symbol)


S_ALPHABET = Alphabet(("l", "t"))


@dataclass(frozen=True)
class JointPmf:
    names: tuple
    alphabets: tuple  # Alphabet per name, same order
    table: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "alphabets", tuple(self.alphabets))
        table = np.asarray(self.table, dtype=float)
        expected = tuple(a.size for a in self.alphabets)
        if table.shape != expected:
            raise ProbabilityError(
                f"table shape {table.shape} != alphabet sizes {expected}")
        if np.any(table < 0):
            raise ProbabilityError("negative probability entry")
        total = table.sum()
        if abs(total - 1.0) > PMF_ATOL:
            raise ProbabilityError(f"pmf sums to {total!r}, not 1")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)

    def axis(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise ProbabilityError(f"unknown variable {name!r}") from None

    def alphabet(self, name: str) -> Alphabet:
        return self.alphabets[self.axis(name)]

    def marginal(self, keep) -> "JointPmf":
        keep = tuple(keep)
        axes = [self.axis(n) for n in keep]
        drop = tuple(i for i in range(len(self.names)) if i not in axes)
        table = self.table.sum(axis=drop) if drop else self.table
        # reorder remaining axes to match the requested order
        remaining = [n for n in self.names if n in keep]
        perm = [remaining.index(n) for n in keep]
        return JointPmf(keep, tuple(self.alphabet(n) for n in keep),
                        np.transpose(table, perm))

    def condition(self, name: str, symbol) -> "JointPmf":
        ax = self.axis(name)
        idx = self.alphabet(name).index(symbol)
        slc = np.take(self.table, idx, axis=ax)
        mass = slc.sum()
        if mass <= 0.0:
            raise ZeroProbabilityEvent(
                f"Pr[{name}={symbol!r}] = 0; cannot condition")
        names = self.names[:ax] + self.names[ax + 1:]
        alphas = self.alphabets[:ax] + self.alphabets[ax + 1:]
        return JointPmf(names, alphas, slc / mass)

    def prob(self, name: str, symbol) -> float:
        ax = self.axis(name)
        idx = self.alphabet(name).index(symbol)
        return float(np.take(self.table, idx, axis=ax).sum())


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    passed: bool
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self):
        return [c for c in self.checks if not c.passed]

    def __str__(self):
        lines = []
        for c in self.checks:
            mark = "PASS" if c.passed else "FAIL"
            detail = f"  {c.detail}" if c.detail else ""
            lines.append(f"[{mark}] {c.check_id}{detail}")
        return "\n".join(lines)


@dataclass(frozen=True)
class ChannelSpec:
    """p(y_P, y_C, v_C | x_P, x_C, s), table axes (x_P, x_C, s, v_C, y_P, y_C)."""

    alphabets: dict  # name -> Alphabet for CHANNEL_VARS
    table: np.ndarray

    def __post_init__(self):
        table = np.asarray(self.table, dtype=float)
        expected = tuple(self.alphabets[v].size for v in CHANNEL_VARS)
        if table.shape != expected:
            raise ProbabilityError(
                f"channel table shape {table.shape} != {expected}")
        if np.any(table < 0):
            raise ProbabilityError("negative channel entry")
        table.setflags(write=False)
        object.__setattr__(self, "table", table)


@dataclass(frozen=True)
class HalfDuplexLaw:
    """Factorized input law of the achievable-region theorem.

    factors[name] has axes (child, *FACTOR_PARENTS[name]); xp_map / xc_map are
    integer tables giving the deterministic codeword maps, with axes
    XP_MAP_PARENTS and XC_MAP_PARENTS respectively.
    """

    alpha: float
    alphabets: dict  # name -> Alphabet for LAW_VARS (S implied)
    factors: dict    # name -> ndarray
    xp_map: np.ndarray
    xc_map: np.ndarray

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ProbabilityError("alpha must lie in [0, 1]")
        alphabets = dict(self.alphabets)
        alphabets.setdefault("S", S_ALPHABET)
        object.__setattr__(self, "alphabets", alphabets)
        for name in FACTOR_ORDER:
            if name not in self.factors:
                raise ProbabilityError(f"missing factor for {name}")
            tab = np.asarray(self.factors[name], dtype=float)
            shape = (alphabets[name].size,) + tuple(
                alphabets[p].size for p in FACTOR_PARENTS[name])
            if tab.shape != shape:
                raise ProbabilityError(
                    f"factor {name}: shape {tab.shape} != {shape}")
            if np.any(tab < 0):
                raise ProbabilityError(f"factor {name}: negative entry")
        xp = np.asarray(self.xp_map)
        xc = np.asarray(self.xc_map)
        if xp.shape != tuple(alphabets[p].size for p in XP_MAP_PARENTS):
            raise ProbabilityError("xp_map shape mismatch")
        if xc.shape != tuple(alphabets[p].size for p in XC_MAP_PARENTS):
            raise ProbabilityError("xc_map shape mismatch")
        if xp.min() < 0 or xp.max() >= alphabets["X_P"].size:
            raise ProbabilityError("xp_map indexes outside X_P alphabet")
        if xc.min() < 0 or xc.max() >= alphabets["X_C"].size:
            raise ProbabilityError("xc_map indexes outside X_C alphabet")
        object.__setattr__(self, "xp_map", xp)
        object.__setattr__(self, "xc_map", xc)

    @property
    def p_s(self) -> np.ndarray:
        return np.array([self.alpha, 1.0 - self.alpha])


def _onehot(index_map: np.ndarray, size: int) -> np.ndarray:
    out = np.zeros(index_map.shape + (size,))
    np.put_along_axis(out, index_map[..., None], 1.0, axis=-1)
    return out


def _factor_slices_ok(tab: np.ndarray) -> bool:
    sums = tab.sum(axis=0)
    return bool(np.all(np.abs(sums - 1.0) <= PMF_ATOL))


def validate_half_duplex(law: HalfDuplexLaw) -> ValidationReport:
    """Check the eight codeword restrictions plus factor normalization."""
    checks = []
    s_l = S_ALPHABET.index("l")
    for name in FACTOR_ORDER:
        tab = np.asarray(law.factors[name], dtype=float)
        ok = _factor_slices_ok(tab)
        checks.append(CheckResult(
            f"norm:{name}", ok,
            "" if ok else f"conditional slices of p({name}|...) do not sum to 1"))
    for rid, name, state in RESTRICTIONS:
        tab = np.asarray(law.factors[name], dtype=float)
        s_idx = S_ALPHABET.index(state)
        phi = law.alphabets[name].null_index
        # S is always the last parent axis in the chain
        slc = np.take(tab, s_idx, axis=-1)
        mass_at_phi = np.take(slc, phi, axis=0)
        ok = bool(np.all(np.abs(mass_at_phi - 1.0) <= PMF_ATOL))
        detail = ""
        if not ok:
            worst = np.unravel_index(np.argmin(mass_at_phi), mass_at_phi.shape)
            detail = (f"p({name}=phi | parents={worst}, S={state}) = "
                      f"{float(mass_at_phi[worst]):.6g}, expected 1")
        checks.append(CheckResult(f"({rid})", ok, detail))
    # x_C must be the null symbol whenever S = l
    xc_l = law.xc_map[s_l]
    ok = bool(np.all(xc_l == law.alphabets["X_C"].null_index))
    checks.append(CheckResult(
        "xc-null-when-listen", ok,
        "" if ok else "x_C map emits a non-null symbol under S=l"))
    return ValidationReport(tuple(checks))


def validate_channel(chan: ChannelSpec) -> ValidationReport:
    """Check the two structural clauses of the state-switched channel law."""
    checks = []
    tab = chan.table
    sums = tab.sum(axis=(3, 4, 5))
    ok = bool(np.all(np.abs(sums - 1.0) <= PMF_ATOL))
    checks.append(CheckResult(
        "norm", ok, "" if ok else "some (x_P, x_C, s) slice does not sum to 1"))

    s_t = S_ALPHABET.index("t")
    e_idx = chan.alphabets["V_C"].erasure_index
    vc_marg = tab[:, :, s_t].sum(axis=(3, 4))  # (x_P, x_C, v_C)
    ok = bool(np.all(np.abs(vc_marg[:, :, e_idx] - 1.0) <= PMF_ATOL))
    detail = "" if ok else "v_C is not an erasure point mass under S=t"
    checks.append(CheckResult("erasure-when-transmit", ok, detail))

    s_l = S_ALPHABET.index("l")
    listen = tab[:, :, s_l]  # (x_P, x_C, v_C, y_P, y_C)
    ok = bool(np.all(np.abs(listen - listen[:, :1]) <= PMF_ATOL))
    detail = "" if ok else "outputs depend on x_C under S=l"
    checks.append(CheckResult("listen-independence", ok, detail))
    return ValidationReport(tuple(checks))


_EINSUM = (
    "a,ba,cba,dba,edcba,fba,gfcba,abcdefgh,iba,jiba,abcijk,hkalmn"
    "->abcdefghijklmn"
)


def make_joint(law: HalfDuplexLaw, chan: ChannelSpec) -> JointPmf:
    """Full joint pmf over all 14 variables: law chain times channel factors."""
    for name in CHANNEL_VARS:
        if name in law.alphabets:
            la, ca = law.alphabets[name], chan.alphabets[name]
            if la.symbols != ca.symbols:
                raise ProbabilityError(
                    f"alphabet mismatch between law and channel on {name}")
    law_report = validate_half_duplex(law)
    if not law_report.passed:
        raise ProbabilityError(
            "invalid half-duplex law:\n" + str(law_report))
    chan_report = validate_channel(chan)
    if not chan_report.passed:
        raise ProbabilityError("invalid channel:\n" + str(chan_report))

    xp_hot = _onehot(law.xp_map, law.alphabets["X_P"].size)
    xc_hot = _onehot(law.xc_map, law.alphabets["X_C"].size)
    table = np.einsum(
        _EINSUM,
        law.p_s,
        law.factors["T_P1co"], law.factors["T_P1pr"],
        law.factors["X_P1co"], law.factors["X_P1pr"],
        law.factors["X_P2co"], law.factors["X_P2pr"],
        xp_hot,
        law.factors["U_Cco"], law.factors["U_Cpr"],
        xc_hot,
        chan.table.transpose(0, 1, 2, 3, 4, 5),
        optimize=True,
    )
    alphabets = {**law.alphabets,
                 **{v: chan.alphabets[v] for v in ("V_C", "Y_P", "Y_C")}}
    return JointPmf(JOINT_VARS, tuple(alphabets[v] for v in JOINT_VARS), table)


def marginalize(pmf: JointPmf, keep) -> JointPmf:
    return pmf.marginal(keep)


def condition_on_event(pmf: JointPmf, name: str, symbol) -> JointPmf:
    return pmf.condition(name, symbol)


# ---------------------------------------------------------------------------
# Random-law generator (restriction-first): used by tests and DMC sweeps.

def default_alphabets(n_data: int = 2) -> dict:
    """Alphabets with n_data payload symbols plus the required specials."""
    data = tuple(str(i) for i in range(n_data))
    with_null = Alphabet(data + ("phi",), null_symbol="phi")
    return {
        "S": S_ALPHABET,
        "T_P1co": with_null, "T_P1pr": with_null,
        "X_P1co": with_null, "X_P1pr": with_null,
        "X_P2co": with_null, "X_P2pr": with_null,
        "U_Cco": with_null, "U_Cpr": with_null,
        "X_P": Alphabet(data),
        "X_C": Alphabet(data + ("phi",), null_symbol="phi"),
        "V_C": Alphabet(data + ("e",), erasure_symbol="e"),
        "Y_P": Alphabet(data),
        "Y_C": Alphabet(data),
    }


def random_law(rng: np.random.Generator, alphabets: Optional[dict] = None,
               alpha: Optional[float] = None) -> HalfDuplexLaw:
    """Sample a valid law: restrictions are imposed by construction."""
    if alphabets is None:
        alphabets = default_alphabets()
    if alpha is None:
        alpha = float(rng.uniform(0.05, 0.95))
    restricted = {name: state for _, name, state in RESTRICTIONS}

    factors = {}
    for name in FACTOR_ORDER:
        size = alphabets[name].size
        shape = tuple(alphabets[p].size for p in FACTOR_PARENTS[name])
        tab = np.zeros((size,) + shape)
        phi = alphabets[name].null_index
        forced_state = S_ALPHABET.index(restricted[name])
        for parents in np.ndindex(shape):
            if parents[-1] == forced_state:  # S is the last parent
                tab[(phi,) + parents] = 1.0
            else:
                tab[(slice(None),) + parents] = rng.dirichlet(np.ones(size))
        factors[name] = tab

    xp_shape = tuple(alphabets[p].size for p in XP_MAP_PARENTS)
    xp_map = rng.integers(0, alphabets["X_P"].size, size=xp_shape)
    xc_shape = tuple(alphabets[p].size for p in XC_MAP_PARENTS)
    xc_map = rng.integers(0, alphabets["X_C"].size, size=xc_shape)
    xc_map[S_ALPHABET.index("l")] = alphabets["X_C"].null_index
    return HalfDuplexLaw(alpha=alpha, alphabets=alphabets, factors=factors,
                         xp_map=xp_map, xc_map=xc_map)


def noiseless_channel(alphabets: dict) -> ChannelSpec:
    """Noiseless test channel.

    S=l: Y_P = X_P, Y_C = X_P, V_C = X_P (x_C is ignored).
    S=t: Y_P = X_P, Y_C = X_C (null mapped to payload 0), V_C = e.
    """
    chan_alpha = {v: alphabets[v] for v in CHANNEL_VARS}
    nxp = chan_alpha["X_P"].size
    nxc = chan_alpha["X_C"].size
    nv = chan_alpha["V_C"].size
    nyp = chan_alpha["Y_P"].size
    nyc = chan_alpha["Y_C"].size
    tab = np.zeros((nxp, nxc, 2, nv, nyp, nyc))
    s_l, s_t = S_ALPHABET.index("l"), S_ALPHABET.index("t")
    e_idx = chan_alpha["V_C"].erasure_index
    yc_of_xc = []
    for sym in chan_alpha["X_C"].symbols:
        if sym in chan_alpha["Y_C"].symbols:
            yc_of_xc.append(chan_alpha["Y_C"].index(sym))
        else:
            yc_of_xc.append(0)  # null input observed as payload 0
    for xp in range(nxp):
        xp_sym = chan_alpha["X_P"].symbols[xp]
        v_idx = chan_alpha["V_C"].index(xp_sym)
        yp_idx = chan_alpha["Y_P"].index(xp_sym)
        yc_idx = chan_alpha["Y_C"].index(xp_sym)
        for xc in range(nxc):
            tab[xp, xc, s_l, v_idx, yp_idx, yc_idx] = 1.0
            tab[xp, xc, s_t, e_idx, yp_idx, yc_of_xc[xc]] = 1.0
    return ChannelSpec(alphabets=chan_alpha, table=tab)
