"""YAML configuration loading for discrete and Gaussian problem instances.

Two config kinds are supported (`kind: dmc` and `kind: gaussian`). Discrete
laws can be given explicitly (alphabets, factor tables, codeword maps) or via
a seeded generator block; every loaded law and channel is re-validated and a
failing validation report is raised as an error.
"""

from __future__ import annotations

import hashlib

import numpy as np
import yaml

from .gaussian import GaussianChannel
from .probability import (
    Alphabet, ChannelSpec, FACTOR_ORDER, HalfDuplexLaw, CHANNEL_VARS,
    S_ALPHABET, default_alphabets, noiseless_channel, random_law,
    validate_channel, validate_half_duplex,
)


class ConfigError(ValueError):
    pass


def config_hash(path: str) -> str:
    with open(path, "rb") as fh:
        return hashlib.sha256(fh.read()).hexdigest()[:16]


def load_config(path: str) -> dict:
    with open(path) as fh:
        cfg = yaml.safe_load(fh)
    if not isinstance(cfg, dict) or "kind" not in cfg:
        raise ConfigError("config must be a mapping with a 'kind' key")
    if cfg["kind"] not in ("dmc", "gaussian"):
        raise ConfigError(f"unknown config kind {cfg['kind']!r}")
    return cfg


# ---------------------------------------------------------------------------
# Gaussian configs.

def gaussian_channel_from_config(cfg: dict) -> GaussianChannel:
    try:
        ch = cfg["channel"]
        return GaussianChannel(
            P_P=float(ch["P_P"]), P_C=float(ch["P_C"]),
            g_PC=float(ch["g_PC"]), h_PC=float(ch["h_PC"]),
            h_CP=float(ch["h_CP"]))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"bad gaussian channel block: {exc}") from exc


def gaussian_settings(cfg: dict) -> dict:
    sweep = cfg.get("sweep", {}) or {}
    proto = cfg.get("protocols", {}) or {}
    return {
        "points": int(sweep.get("points", 8192)),
        "seed": int(sweep.get("seed", 1)),
        "alphas": [float(a) for a in proto.get(
            "alphas", [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])],
        "etas": [float(e) for e in proto.get(
            "etas", list(np.linspace(0.0, 1.0, 11)))],
        "nc_points": int(proto.get("nc_points", 1024)),
        "nc_seed": int(proto.get("nc_seed", 2)),
    }


# ---------------------------------------------------------------------------
# Discrete configs.

def _alphabet_from_dict(d: dict) -> Alphabet:
    return Alphabet(tuple(str(s) for s in d["symbols"]),
                    null_symbol=d.get("null"),
                    erasure_symbol=d.get("erasure"))


def _alphabet_to_dict(a: Alphabet) -> dict:
    out = {"symbols": list(a.symbols)}
    if a.null_symbol is not None:
        out["null"] = a.null_symbol
    if a.erasure_symbol is not None:
        out["erasure"] = a.erasure_symbol
    return out


def law_to_dict(law: HalfDuplexLaw) -> dict:
    return {
        "alpha": float(law.alpha),
        "alphabets": {name: _alphabet_to_dict(law.alphabets[name])
                      for name in law.alphabets if name != "S"},
        "factors": {name: np.asarray(law.factors[name]).tolist()
                    for name in FACTOR_ORDER},
        "maps": {"X_P": np.asarray(law.xp_map).tolist(),
                 "X_C": np.asarray(law.xc_map).tolist()},
    }


def law_from_dict(d: dict) -> HalfDuplexLaw:
    alphabets = {name: _alphabet_from_dict(spec)
                 for name, spec in d["alphabets"].items()}
    alphabets["S"] = S_ALPHABET
    factors = {name: np.asarray(tab, dtype=float)
               for name, tab in d["factors"].items()}
    law = HalfDuplexLaw(
        alpha=float(d["alpha"]), alphabets=alphabets, factors=factors,
        xp_map=np.asarray(d["maps"]["X_P"], dtype=int),
        xc_map=np.asarray(d["maps"]["X_C"], dtype=int))
    report = validate_half_duplex(law)
    if not report.passed:
        raise ConfigError("law failed validation:\n" + str(report))
    return law


def channel_from_config(cfg: dict, alphabets: dict) -> ChannelSpec:
    block = cfg.get("channel", {"preset": "noiseless"})
    if "preset" in block:
        if block["preset"] != "noiseless":
            raise ConfigError(f"unknown channel preset {block['preset']!r}")
        chan = noiseless_channel(alphabets)
    else:
        chan_alpha = {v: alphabets[v] for v in CHANNEL_VARS}
        chan = ChannelSpec(alphabets=chan_alpha,
                           table=np.asarray(block["table"], dtype=float))
    report = validate_channel(chan)
    if not report.passed:
        raise ConfigError("channel failed validation:\n" + str(report))
    return chan


def dmc_laws_from_config(cfg: dict):
    """All laws described by the config: the explicit one, generated ones,
    or both. Returns (laws, alphabets)."""
    laws = []
    alphabets = None
    if "law" in cfg:
        law = law_from_dict(cfg["law"])
        alphabets = law.alphabets
        laws.append(law)
    gen = cfg.get("generator")
    if gen:
        alphabets = alphabets or default_alphabets(
            int(gen.get("payload_symbols", 2)))
        rng = np.random.default_rng(int(gen.get("seed", 0)))
        alpha = gen.get("alpha")
        for _ in range(int(gen.get("count", 1))):
            laws.append(random_law(
                rng, alphabets,
                alpha=float(alpha) if alpha is not None else None))
    if not laws:
        raise ConfigError("dmc config needs a 'law' or 'generator' block")
    return laws, alphabets


def load_dmc(path_or_cfg):
    cfg = (load_config(path_or_cfg) if isinstance(path_or_cfg, str)
           else path_or_cfg)
    if cfg.get("kind") != "dmc":
        raise ConfigError("expected a dmc config")
    laws, alphabets = dmc_laws_from_config(cfg)
    chan = channel_from_config(cfg, alphabets)
    return laws, chan


def load_gaussian(path_or_cfg):
    cfg = (load_config(path_or_cfg) if isinstance(path_or_cfg, str)
           else path_or_cfg)
    if cfg.get("kind") != "gaussian":
        raise ConfigError("expected a gaussian config")
    return gaussian_channel_from_config(cfg), gaussian_settings(cfg)
