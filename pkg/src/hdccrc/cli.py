"""Command-line interface.

Subcommands:
    validate        check a config (law restrictions, channel structure)
    dmc-region      exact projected region of a discrete instance
    gaussian-region swept achievable region of a Gaussian instance
    protocols       the four legacy protocol regions for a Gaussian instance
    compare         containment verdict: legacy protocols vs the new region

Exit codes: 0 success, 1 domain failure (validation or containment fails),
2 usage or configuration error. Report commands write CSV + JSON per region
plus a PNG figure into --out.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from . import gaussian as g
from .configio import (ConfigError, config_hash, load_config, load_dmc,
                       load_gaussian)
from .probability import (ProbabilityError, validate_channel,
                          validate_half_duplex)
from .region import (RegionError, binning_report, build_polytope,
                     contains, mi_terms_dmc, project_fm, union)
from .serialize import write_region
from .plotting import plot_regions

USAGE_ERROR = 2
DOMAIN_ERROR = 1


def _meta(args, **extra):
    meta = {"tool": "hdccrc", "version": __version__,
            "config_sha256_16": config_hash(args.config)}
    meta.update(extra)
    return meta


def _write_json(outdir, name, obj):
    os.makedirs(outdir, exist_ok=True)
    path = os.path.join(outdir, f"{name}.json")
    with open(path, "w") as fh:
        fh.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")
    return path


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    if cfg["kind"] == "gaussian":
        ch, _ = load_gaussian(cfg)
        print(f"gaussian channel ok: P_P={ch.P_P} P_C={ch.P_C} "
              f"g_PC={ch.g_PC} h_PC={ch.h_PC} h_CP={ch.h_CP}")
        return 0
    laws, chan = load_dmc(cfg)
    ok = True
    for i, law in enumerate(laws):
        report = validate_half_duplex(law)
        print(f"law[{i}] (alpha={law.alpha:.6g}):")
        print(str(report))
        ok = ok and report.passed
    chan_report = validate_channel(chan)
    print("channel:")
    print(str(chan_report))
    ok = ok and chan_report.passed
    return 0 if ok else DOMAIN_ERROR


def cmd_dmc_region(args) -> int:
    laws, chan = load_dmc(args.config)
    regions = []
    binnings = []
    for law in laws:
        terms = mi_terms_dmc(law, chan)
        poly = build_polytope(terms)
        regions.append(project_fm(poly))
        binnings.append(list(binning_report(terms)))
    region = union(regions) if len(regions) > 1 else regions[0]
    meta = _meta(args, n_laws=len(laws), binning_thresholds_bits=binnings)
    paths = write_region(args.out, "dmc_region", region, meta=meta,
                         gnuplot=args.gnuplot_data)
    fig = plot_regions(os.path.join(args.out, "dmc_region.png"),
                       {"achievable region": region},
                       title="Discrete instance")
    for p in paths + [fig]:
        print(p)
    return 0


def cmd_gaussian_region(args) -> int:
    ch, st = load_gaussian(args.config)
    points = args.points if args.points else st["points"]
    seed = args.seed if args.seed is not None else st["seed"]
    mode = "fixed" if args.fixed_schedule else "random"
    outcome = g.achievable_region_gaussian(ch, n_points=points, seed=seed,
                                           schedule_mode=mode)
    meta = _meta(args, seed=seed, points=points, schedule_mode=mode,
                 n_rejected=outcome.n_rejected)
    paths = write_region(args.out, "gaussian_region", outcome.region,
                         meta=meta, provenance=outcome.provenance,
                         gnuplot=args.gnuplot_data)
    fig = plot_regions(os.path.join(args.out, "gaussian_region.png"),
                       {"achievable region": outcome.region},
                       title=f"Gaussian instance ({mode} schedule)")
    for p in paths + [fig]:
        print(p)
    return 0


def _protocol_suite(ch, st, seed):
    """Regions of the four legacy protocols plus the schemes they used."""
    nc = g.nc_frontier(ch, n_points=st["nc_points"], seed=st["nc_seed"])
    alphas, etas = st["alphas"], st["etas"]
    p1 = g.protocol1_region(ch, alphas, etas, nc)
    schemes = {2: g.protocol_schemes(2, st["nc_points"], seed + 11),
               3: g.protocol_schemes(3, st["nc_points"], seed + 12),
               4: g.protocol_schemes(4, st["nc_points"], seed + 13)}
    outcomes = {k: g.sweep_region(ch, v) for k, v in schemes.items()}
    extra = g.protocol1_theorem_schemes(alphas, nc)
    for v in schemes.values():
        extra.extend(v)
    return nc, p1, outcomes, extra


def cmd_protocols(args) -> int:
    ch, st = load_gaussian(args.config)
    seed = args.seed if args.seed is not None else st["seed"]
    nc, p1, outcomes, _ = _protocol_suite(ch, st, seed)
    named = {"protocol 1": p1}
    named.update({f"protocol {k}": o.region for k, o in outcomes.items()})
    named["r_in_1"] = g.r_in_1_region(ch, st["alphas"], st["etas"], nc)
    meta = _meta(args, seed=seed)
    paths = []
    for key, region in named.items():
        name = key.replace(" ", "_")
        paths += write_region(args.out, name, region, meta=meta,
                              gnuplot=args.gnuplot_data)
    fig = plot_regions(os.path.join(args.out, "protocols.png"), named,
                       title="Legacy protocol regions")
    for p in paths + [fig]:
        print(p)
    return 0


def cmd_compare(args) -> int:
    ch, st = load_gaussian(args.config)
    seed = args.seed if args.seed is not None else st["seed"]
    points = args.points if args.points else st["points"]
    nc, p1, outcomes, extra = _protocol_suite(ch, st, seed)
    legacy = union([p1] + [o.region for o in outcomes.values()])
    new = g.achievable_region_gaussian(ch, n_points=points, seed=seed,
                                       extra_schemes=extra)
    ok, violation = contains(new.region, legacy, tol=args.tol)
    gain = new.region.area() - legacy.area()
    strictly_larger = gain > args.tol

    meta = _meta(args, seed=seed, points=points, tol=args.tol)
    write_region(args.out, "legacy_union", legacy, meta=meta,
                 gnuplot=args.gnuplot_data)
    write_region(args.out, "new_region", new.region, meta=meta,
                 provenance=new.provenance, gnuplot=args.gnuplot_data)
    verdict = {
        "contains_legacy": bool(ok),
        "max_violation_bits": float(violation),
        "area_gain_bits2": float(gain),
        "strictly_larger": bool(strictly_larger),
        "legacy_area_bits2": legacy.area(),
        "new_area_bits2": new.region.area(),
        "meta": meta,
    }
    _write_json(args.out, "compare", verdict)
    fig = plot_regions(os.path.join(args.out, "compare.png"),
                       {"new achievable region": new.region,
                        "legacy protocols": legacy},
                       title="New region vs legacy protocols")
    print(fig)
    print(json.dumps(verdict, indent=2, sort_keys=True))
    return 0 if (ok and strictly_larger) else DOMAIN_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hdccrc",
        description="Achievable rate regions for the half-duplex causal "
                    "cognitive radio channel (all rates in bits).")
    parser.add_argument("--version", action="version",
                        version=f"hdccrc {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        p.add_argument("--config", required=True, help="YAML config path")
        if out:
            p.add_argument("--out", required=True, help="output directory")
            p.add_argument("--seed", type=int, default=None)
            p.add_argument("--gnuplot-data", action="store_true",
                           help="also write whitespace-delimited .dat files")

    p = sub.add_parser("validate", help="validate a config")
    common(p, out=False)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("dmc-region", help="exact region of a discrete instance")
    common(p)
    p.set_defaults(fn=cmd_dmc_region)

    p = sub.add_parser("gaussian-region", help="swept Gaussian region")
    common(p)
    p.add_argument("--points", type=int, default=None,
                   help="number of swept signaling points")
    p.add_argument("--fixed-schedule", action="store_true",
                   help="pin the schedule (no rate from state randomization)")
    p.set_defaults(fn=cmd_gaussian_region)

    p = sub.add_parser("protocols", help="legacy protocol regions")
    common(p)
    p.set_defaults(fn=cmd_protocols)

    p = sub.add_parser("compare",
                       help="check the new region contains the legacy ones")
    common(p)
    p.add_argument("--points", type=int, default=None)
    p.add_argument("--tol", type=float, default=1e-6,
                   help="containment violation tolerance in bits")
    p.set_defaults(fn=cmd_compare)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors already
        return int(exc.code or 0)
    try:
        return args.fn(args)
    except (ConfigError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (ProbabilityError, RegionError, g.GaussianError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return DOMAIN_ERROR


if __name__ == "__main__":
    sys.exit(main())
