"""Deterministic serialization of 2-D regions: CSV, JSON and gnuplot data.

CSV carries the hull vertices counterclockwise starting at (max R_P, 0);
floats are written with repr (shortest round-trip form) so repeated runs of
the same command produce byte-identical files.
"""

from __future__ import annotations

import json
import os

from .region import Region2D

CSV_HEADER = "R_P_bits,R_C_bits"


def _fmt(x: float) -> str:
    return repr(float(x))


def region_to_csv(region: Region2D) -> str:
    lines = [CSV_HEADER]
    for rp, rc in region.vertices:
        lines.append(f"{_fmt(rp)},{_fmt(rc)}")
    return "\n".join(lines) + "\n"


def region_to_gnuplot(region: Region2D) -> str:
    """Closed polygon trace, whitespace-delimited, comment header."""
    lines = ["# R_P_bits  R_C_bits"]
    verts = list(region.vertices) + [region.vertices[0]]
    for rp, rc in verts:
        lines.append(f"{_fmt(rp)}  {_fmt(rc)}")
    return "\n".join(lines) + "\n"


def scheme_to_dict(scheme) -> dict:
    from dataclasses import asdict
    return {k: (v if isinstance(v, str) else float(v))
            for k, v in sorted(asdict(scheme).items())}


def region_to_json(region: Region2D, meta=None, provenance=None) -> str:
    obj = {
        "vertices": [[float(rp), float(rc)] for rp, rc in region.vertices],
        "area_bits2": region.area(),
        "max_R_P_bits": region.max_rp,
        "max_R_C_bits": region.max_rc,
    }
    if meta:
        obj["meta"] = meta
    if provenance is not None:
        obj["provenance"] = [
            {"vertex": [float(v[0]), float(v[1])],
             "scheme": scheme_to_dict(sch)}
            for v, sch in provenance]
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def write_region(outdir: str, name: str, region: Region2D, meta=None,
                 provenance=None, gnuplot=False):
    """Write <name>.csv and <name>.json (and optionally <name>.dat)."""
    os.makedirs(outdir, exist_ok=True)
    paths = []
    csv_path = os.path.join(outdir, f"{name}.csv")
    with open(csv_path, "w") as fh:
        fh.write(region_to_csv(region))
    paths.append(csv_path)
    json_path = os.path.join(outdir, f"{name}.json")
    with open(json_path, "w") as fh:
        fh.write(region_to_json(region, meta=meta, provenance=provenance))
    paths.append(json_path)
    if gnuplot:
        dat_path = os.path.join(outdir, f"{name}.dat")
        with open(dat_path, "w") as fh:
            fh.write(region_to_gnuplot(region))
        paths.append(dat_path)
    return paths
