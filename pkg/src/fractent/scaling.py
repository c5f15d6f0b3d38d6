"""Entanglement-to-perimeter ratios, dimensions and the reproduced table."""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .errors import BaseMismatch, InsufficientScales
from .families import FAMILIES, FamilySpec, get_family, predicted_counts
from .region import Region, boundary_edge_coords

TABLE_COLUMNS = [
    "family", "n",
    "p_measured", "p_predicted",
    "alpha_measured", "alpha_predicted",
    "holes_measured", "holes_predicted",
    "S_measured", "S_predicted",
    "S_over_p", "gamma_limit", "D_expr", "one_over_D",
]


class NonConvergenceWarning(UserWarning):
    """|S/p - gamma| failed to shrink over the last entries of a sequence."""


@dataclass(frozen=True)
class ScalingRecord:
    family: str
    n: int
    p: int
    alpha: int
    holes: int
    S: int
    S_over_p: Fraction
    gamma_limit: Fraction
    D: float
    one_over_D: float

    @property
    def gap(self) -> Fraction:
        return abs(self.S_over_p - self.gamma_limit)


def _family(family) -> FamilySpec:
    return get_family(family) if isinstance(family, str) else family


def scaling_record(family, n: int) -> ScalingRecord:
    fam = _family(family)
    c = fam.features(n)
    return ScalingRecord(fam.name, n, c.p, c.alpha, c.holes, c.s_direct,
                         Fraction(c.s_direct, c.p), fam.gamma,
                         fam.dimension.value, 1 / fam.dimension.value)


def is_converging(records, window: int = 3) -> bool:
    """True when ``|S/p - gamma|`` is non-increasing over the last ``window`` entries."""
    gaps = [r.gap for r in records[-window:]]
    return all(b <= a for a, b in zip(gaps, gaps[1:]))


def gamma_sequence(family, n_max: int, n_min: int | None = None) -> list[ScalingRecord]:
    """Exact ratios S(n)/p(n) for ``n_min..n_max``; warns if they stop approaching gamma."""
    fam = _family(family)
    start = fam.min_n if n_min is None else n_min
    fam.check(n_max)
    records = [scaling_record(fam, n) for n in range(start, n_max + 1)]
    if len(records) >= 3 and not is_converging(records):
        gaps = ", ".join(f"{float(r.gap):.4f}" for r in records[-3:])
        warnings.warn(f"{fam.name}: |S/p - {fam.gamma}| not decreasing ({gaps})",
                      NonConvergenceWarning, stacklevel=2)
    return records


@dataclass(frozen=True)
class LeadingEstimate:
    family: str
    n: int
    growth: str
    p_coefficient: Fraction
    S_coefficient: Fraction


def leading_coefficient(family, base: int | None = None, n_max: int | None = None) -> LeadingEstimate:
    """Measured ``p(n)/base**n`` and ``S(n)/base**n`` at ``n_max``.

    ``base=None`` uses the family's own leading form, which for the Greek
    cross and the chessboard is a power of ``n``.  Raises ``BaseMismatch``
    when consecutive estimates drift by more than a quarter, i.e. the
    counts do not grow like the chosen base.
    """
    fam = _family(family)
    n_max = fam.default_n if n_max is None else n_max
    if n_max - 1 < max(fam.min_n, 1):
        raise ValueError("need at least two sizes to check the growth base")
    if base is None and fam.p_leading.base is not None:
        base = fam.p_leading.base
    if base is None:
        degree = fam.p_leading.degree
        scale = lambda n: Fraction(n) ** degree
        growth = f"n^{degree}"
    else:
        if base < 2:
            raise ValueError("base must be at least 2")
        scale = lambda n: Fraction(base) ** n
        growth = f"{base}^n"
    est = {}
    for n in (n_max - 1, n_max):
        c = fam.features(n)
        est[n] = (Fraction(c.p) / scale(n), Fraction(c.s_direct) / scale(n))
    for k in range(2):
        prev, last = est[n_max - 1][k], est[n_max][k]
        if prev == 0 or abs(last / prev - 1) > Fraction(1, 4):
            raise BaseMismatch(f"{fam.name} counts do not grow like {growth}: "
                               f"{float(prev):.4g} -> {float(last):.4g}")
    return LeadingEstimate(fam.name, n_max, growth, est[n_max][0], est[n_max][1])


# -- box counting -------------------------------------------------------------------

@dataclass(frozen=True)
class BoxCount:
    dimension: float
    residual: float
    sizes: tuple
    counts: tuple


def boundary_midpoints(region: Region) -> np.ndarray:
    """Boundary edge midpoints in doubled coordinates, shape (m, 2)."""
    hx, hy, vx, vy = boundary_edge_coords(region)
    h = np.stack([2 * np.asarray(hx) + 1, 2 * np.asarray(hy)], axis=1)
    v = np.stack([2 * np.asarray(vx), 2 * np.asarray(vy) + 1], axis=1)
    return np.concatenate([h, v]).astype(np.int64)


def box_counting_dimension(region: Region, sizes=None, min_scales: int = 4) -> BoxCount:
    """Least-squares slope of log N(eps) against log(1/eps).

    Boxes are aligned squares of side ``eps`` lattice units; a box counts
    when it holds the midpoint of a boundary edge.  Default sizes are the
    powers of two from 2 up to a quarter of the boundary's extent; unit
    boxes are skipped because each one already holds two edge midpoints
    and flattens the small-scale end of the fit.
    """
    pts = boundary_midpoints(region)
    if not len(pts):
        raise InsufficientScales("region has no boundary")
    lo = pts.min(axis=0)
    pts = pts - lo
    extent = int(pts.max()) // 2 + 1
    if sizes is None:
        top = max(0, int(math.floor(math.log2(extent))) - 2)
        sizes = [2**k for k in range(1, top + 1)]
    sizes = sorted(int(s) for s in sizes)
    if len(sizes) < min_scales:
        raise InsufficientScales(f"{len(sizes)} scales available, need {min_scales}")
    counts = []
    for s in sizes:
        boxes = pts // (2 * s)
        counts.append(len(np.unique(boxes[:, 0] * (extent + 2) + boxes[:, 1])))
    x = np.log(1 / np.array(sizes, dtype=float))
    y = np.log(np.array(counts, dtype=float))
    slope, icept = np.polyfit(x, y, 1)
    resid = float(np.sqrt(np.mean((y - (slope * x + icept)) ** 2)))
    return BoxCount(float(slope), resid, tuple(sizes), tuple(counts))


# -- gamma <= 1/D ---------------------------------------------------------------------

@dataclass(frozen=True)
class GammaBound:
    family: str
    gamma: Fraction
    D_expr: str
    one_over_D: float
    holds: bool
    equality: bool

    @property
    def margin(self) -> float:
        return self.one_over_D - float(self.gamma)


def gamma_bound(family) -> GammaBound:
    """Exact test of ``gamma <= 1/D`` with ``D = log a / log b``.

    ``gamma = p/q <= log b / log a`` iff ``a**p <= b**q``, all integers.
    """
    fam = _family(family)
    a, b = fam.dimension.num, fam.dimension.den
    p, q = fam.gamma.numerator, fam.gamma.denominator
    lhs, rhs = a**p, b**q
    return GammaBound(fam.name, fam.gamma, fam.dimension.expr, 1 / fam.dimension.value,
                      lhs <= rhs, lhs == rhs)


def check_gamma_bound() -> list[GammaBound]:
    return [gamma_bound(f) for f in FAMILIES.values()]


# -- table ------------------------------------------------------------------------------

def _cell(v):
    if v is None:
        return ""
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}" if v.denominator != 1 else str(v.numerator)
    if isinstance(v, float):
        return f"{v:.10f}"
    return str(v)


def table_row(name: str, n: int) -> dict:
    fam = get_family(name)
    c = fam.features(n)
    pred = predicted_counts(fam, n)
    return {
        "family": fam.name,
        "n": n,
        "p_measured": c.p,
        "p_predicted": pred.p,
        "alpha_measured": c.alpha,
        "alpha_predicted": pred.alpha,
        "holes_measured": c.holes,
        "holes_predicted": pred.holes,
        "S_measured": c.s_direct,
        "S_predicted": pred.S,
        "S_over_p": Fraction(c.s_direct, c.p),
        "gamma_limit": fam.gamma,
        "D_expr": fam.dimension.expr,
        "one_over_D": 1 / fam.dimension.value,
    }


def table1_rows(n_per_family: dict | None = None, workers: int = 1) -> list[dict]:
    """One row per family, in table order, at the requested (or default) size."""
    n_per_family = dict(n_per_family or {})
    jobs = []
    for name, fam in FAMILIES.items():
        n = n_per_family.pop(name, fam.default_n)
        fam.check(n)
        jobs.append((name, n))
    if n_per_family:
        raise KeyError(f"unknown families: {sorted(n_per_family)}")
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(table_row, *zip(*jobs)))
    return [table_row(name, n) for name, n in jobs]


def table1_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TABLE_COLUMNS)
    for row in rows:
        w.writerow([_cell(row[k]) for k in TABLE_COLUMNS])
    return buf.getvalue()


def table1_json(rows) -> str:
    out = []
    for row in rows:
        fam = get_family(row["family"])
        rec = {k: (_cell(v) if isinstance(v, (Fraction, float)) else v) for k, v in row.items()}
        rec["p_leading"] = str(fam.p_leading)
        rec["S_leading"] = str(fam.s_leading)
        bound = gamma_bound(fam)
        rec["gamma_bound_holds"] = bound.holds
        rec["gamma_bound_equality"] = bound.equality
        out.append(rec)
    return json.dumps(out, indent=2) + "\n"


def emit_table1(n_per_family: dict | None = None, fmt: str = "csv", workers: int = 1) -> str:
    rows = table1_rows(n_per_family, workers=workers)
    if fmt == "csv":
        return table1_csv(rows)
    if fmt == "json":
        return table1_json(rows)
    raise ValueError(f"unknown table format {fmt!r}")


def record_dict(r: ScalingRecord) -> dict:
    d = asdict(r)
    d["S_over_p"] = _cell(r.S_over_p)
    d["gamma_limit"] = _cell(r.gamma_limit)
    return d
