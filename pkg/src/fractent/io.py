"""Region ASCII files with an optional JSON sidecar.

One text line per row, top row first (y descending).  ``#`` marks a cell
of the region and ``.`` a cell outside it.  The sidecar records where the
bottom-left character sits on the lattice, so a parse/serialize round
trip is lossless::

    {"label": ..., "family": ..., "n": ..., "origin_x": 0, "origin_y": 0}

Periodic boards add ``"period"``.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import RegionParseError
from .region import Region

INSIDE = "#"
OUTSIDE = "."


def region_to_ascii(region: Region) -> str:
    rows = []
    for row in region.mask[::-1]:
        rows.append("".join(INSIDE if v else OUTSIDE for v in row))
    return "\n".join(rows) + ("\n" if rows else "")


def region_from_ascii(text: str, origin=(0, 0), label: str | None = None,
                      period: int | None = None) -> Region:
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        if period:
            return Region(np.zeros((period, period), dtype=bool), label=label, period=period)
        return Region(np.zeros((0, 0), dtype=bool), label=label)
    width = None
    rows = []
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip()
        bad = set(line) - {INSIDE, OUTSIDE}
        if bad:
            raise RegionParseError(f"unexpected character {sorted(bad)[0]!r}", lineno)
        if not line:
            raise RegionParseError("empty row inside grid", lineno)
        if width is None:
            width = len(line)
        elif len(line) != width:
            raise RegionParseError(f"row has {len(line)} cells, expected {width}", lineno)
        rows.append([c == INSIDE for c in line])
    mask = np.array(rows[::-1], dtype=bool)
    if period is not None:
        if mask.shape != (period, period):
            raise RegionParseError(f"periodic board must be {period}x{period}")
        return Region(mask, label=label, period=period)
    return Region(mask, origin=origin, label=label)


def sidecar_path(path) -> Path:
    path = Path(path)
    if path.suffix == ".json":
        raise ValueError("region file must not use the .json suffix")
    return path.with_suffix(".json")


def write_region(path, region: Region, family: str | None = None,
                 n: int | None = None) -> tuple[Path, Path]:
    path = Path(path)
    path.write_text(region_to_ascii(region))
    meta = {
        "label": region.label,
        "family": family,
        "n": n,
        "origin_x": region.origin[0],
        "origin_y": region.origin[1],
    }
    if region.period is not None:
        meta["period"] = region.period
    side = sidecar_path(path)
    side.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path, side


def read_region(path) -> tuple[Region, dict]:
    """Load a region file and its sidecar (if present)."""
    path = Path(path)
    try:
        text = path.read_text()
    except UnicodeDecodeError as exc:
        raise RegionParseError(f"not a text file: {exc}") from exc
    meta: dict = {}
    side = sidecar_path(path)
    if side.exists():
        try:
            meta = json.loads(side.read_text())
        except json.JSONDecodeError as exc:
            raise RegionParseError(f"bad sidecar {side.name}: {exc.msg}", exc.lineno) from exc
    origin = (int(meta.get("origin_x", 0)), int(meta.get("origin_y", 0)))
    region = region_from_ascii(text, origin=origin, label=meta.get("label"),
                               period=meta.get("period"))
    return region, meta
