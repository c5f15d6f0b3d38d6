"""The eight fractal bipartitions and their closed-form feature counts.

Every generator returns a canonical region (bounding box at the origin)
labelled ``"<family>_<n>"``.  Predictors use exact rational arithmetic
and refuse to return a non-integer.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .errors import CapExceeded, ConstructionUnavailable, NonIntegerPrediction, OutsideFormulaDomain
from .lsystem import blow_up, close_moore, koch_polygon_word, moore_word, path_to_region, turtle
from .region import FeatureCounts, Region, count_features

DEFAULT_MAX_CELLS = 50_000_000


def max_cells() -> int:
    raw = os.environ.get("FRACTENT_MAX_CELLS")
    return int(raw) if raw else DEFAULT_MAX_CELLS


# -- generators --------------------------------------------------------------

_CARPET = np.array([[1, 1, 1], [1, 0, 1], [1, 1, 1]], dtype=bool)
_SALTIRE = np.array([[1, 0, 1], [0, 1, 0], [1, 0, 1]], dtype=bool)


def sierpinski(n: int) -> Region:
    """Carpet of side 3**n: eight copies of the previous stage around an empty centre."""
    if n < 1:
        raise ValueError("sierpinski needs n >= 1")
    mask = _CARPET
    for _ in range(n - 1):
        mask = np.kron(_CARPET, mask)
    return Region(mask, label=f"sierpinski_{n}")


def greek_cross(n: int) -> Region:
    """Staircase diamond around a lattice vertex.

    Cells whose centres lie within L1 distance ``n + 1`` of a lattice
    vertex.  Its bounding box is ``(2n+2)`` square, so ``p = 8n + 8``, and
    each quadrant is a staircase with ``n`` reflex corners, so
    ``alpha = 4n``.  (Centring on a cell instead gives ``p = 8n + 4``.)
    """
    if n < 1:
        raise ValueError("greek_cross needs n >= 1")
    m = n + 1
    c = np.arange(-m, m) + 0.5
    mask = (np.abs(c)[None, :] + np.abs(c)[:, None]) <= m
    region = Region(mask, label=f"greek_cross_{n}")
    counts = count_features(region)
    if (counts.p, counts.alpha, counts.holes) != (8 * n + 8, 4 * n, 0):
        raise ConstructionUnavailable(f"greek cross construction off at n={n}: {counts}")
    return region


def minkowski(n: int) -> Region:
    """Five copies of the previous stage, joined along whole sides.

    The stage tiles the plane by translations; the four copies sit at the
    generators ``u, v`` of that tiling lattice and their negatives, so each
    copy shares a full side with the centre.  The lattice then advances as
    ``u -> 2u + v, v -> 2v - u``.
    """
    if n < 0:
        raise ValueError("minkowski needs n >= 0")
    xs = np.zeros(1, dtype=np.int64)
    ys = np.zeros(1, dtype=np.int64)
    u, v = np.array([1, 0]), np.array([0, 1])
    for _ in range(n):
        offsets = [(0, 0), tuple(u), tuple(v), tuple(-u), tuple(-v)]
        xs = np.concatenate([xs + dx for dx, _ in offsets])
        ys = np.concatenate([ys + dy for _, dy in offsets])
        u, v = 2 * u + v, 2 * v - u
    return Region.from_coords(xs, ys, label=f"minkowski_{n}").canonical()


def moore(n: int) -> Region:
    """Closed Moore polygon, blown up by a factor of two."""
    if n < 1:
        raise ValueError("moore needs n >= 1")
    path = turtle(close_moore(moore_word(n)))
    return blow_up(path_to_region(path)).canonical().with_label(f"moore_{n}")


def vicsek(n: int) -> Region:
    """Centre copy plus four copies touching it at the corners."""
    if n < 0:
        raise ValueError("vicsek needs n >= 0")
    mask = np.ones((1, 1), dtype=bool)
    for _ in range(n):
        mask = np.kron(_SALTIRE, mask)
    return Region(mask, label=f"vicsek_{n}")


def koch(n: int) -> Region:
    """Quadratic Koch polygon: a unit square whose four sides are Koch curves."""
    if n < 0:
        raise ValueError("koch needs n >= 0")
    path = turtle(koch_polygon_word(n))
    return path_to_region(path).canonical().with_label(f"koch_{n}")


def t_square(n: int) -> Region:
    """Square of side 2**(n+1) with a copy of the previous stage centred on each corner."""
    if n < 0:
        raise ValueError("t_square needs n >= 0")
    mask = np.ones((2, 2), dtype=bool)
    for k in range(1, n + 1):
        side = 2 ** (k + 1)
        prev = mask.shape[0]
        half = prev // 2
        size = side + prev
        new = np.zeros((size, size), dtype=bool)
        new[half:half + side, half:half + side] = True
        for oy in (0, side):
            for ox in (0, side):
                new[oy:oy + prev, ox:ox + prev] |= mask
        mask = new
    return Region(mask, label=f"t_square_{n}")


def chessboard(s: int) -> Region:
    """Checkerboard on a periodic ``s x s`` board; cells with even ``x + y``."""
    if s < 2 or s % 2:
        raise ValueError("chessboard side must be even and >= 2")
    idx = np.arange(s)
    mask = (idx[:, None] + idx[None, :]) % 2 == 0
    return Region(mask, label=f"chessboard_{s}", period=s)


# -- closed forms ----------------------------------------------------------------

@dataclass(frozen=True)
class PredictedCounts:
    """Closed-form counts; ``None`` marks a quantity with no formula at this n."""

    p: int | None
    alpha: int | None
    holes: int | None
    S: int | None

    def as_dict(self) -> dict:
        return {"p": self.p, "alpha": self.alpha, "holes": self.holes, "S": self.S}


def _exact(value, what: str) -> int | None:
    if value is None:
        return None
    value = Fraction(value)
    if value.denominator != 1:
        raise NonIntegerPrediction(f"{what} = {value} is not an integer")
    return int(value)


def _F(*args) -> Fraction:
    return Fraction(*args)


def _pred_sierpinski(n):
    p = _F(4, 5) * (4 * 3**n + 8**n)
    alpha = _F(8**n, 14) - _F(4, 7)
    holes = _F(8 ** (n - 1))
    return p, alpha, holes, p - alpha - 3 * holes


def _pred_greek(n):
    return _F(8 * n + 8), _F(4 * n), _F(0), _F(4 * n + 8)


def _pred_minkowski(n):
    p, alpha = _F(4 * 3**n), _F(2 * 3**n - 2)
    return p, alpha, _F(0), p - alpha


def _pred_moore(n):
    p = _F(2 * 4 ** (n + 1))
    alpha = _F(2, 5) * (-1) ** n + _F(8, 5) * 4**n - 2
    return p, alpha, _F(0), p - alpha


def _pred_vicsek(n):
    p = 20 * _F(5) ** (n - 1)
    alpha = _F(2 * 5**n - 2)
    return p, alpha, _F(0), p - alpha


def _pred_koch(n):
    p = _F(4 * 5**n)
    if n < 3:
        return p, None, None, None
    holes = _F(18, 125) * 5**n + _F(3**n, 3) - 1
    alpha = (p - 4 * holes) / 2
    S = _F(232, 125) * 5**n - _F(3**n, 3) + 1
    return p, alpha, holes, S


def _pred_t_square(n):
    p = _F(16 * 3**n - 8 * 2**n)
    if n == 0:
        S = _F(4)
    elif n == 1:
        S = _F(24)
    else:
        S = _F(92, 9) * 3**n - 4 * 2**n + 4
    return p, None, None, S


def _pred_chessboard(n):
    # every adjacent square is a unit hole, so alpha = 0
    return _F(8 * n * n), _F(0), _F(2 * n * n), _F(2 * n * n)


# -- registry --------------------------------------------------------------------

@dataclass(frozen=True)
class Dimension:
    """Exact dimension ``log(num) / log(den)``."""

    num: int
    den: int

    @property
    def value(self) -> float:
        return math.log(self.num) / math.log(self.den)

    @property
    def expr(self) -> str:
        if self.num == self.den**2:
            return "2"
        return f"log({self.num})/log({self.den})"


@dataclass(frozen=True)
class Leading:
    """Leading term ``coef * base**n`` or, for ``base=None``, ``coef * n**degree``."""

    coef: Fraction
    base: int | None = None
    degree: int = 1

    def __str__(self) -> str:
        c = str(self.coef)
        if self.base is None:
            return f"{c}*n" + (f"^{self.degree}" if self.degree != 1 else "")
        return f"{c}*{self.base}^n"


@dataclass(frozen=True)
class FamilySpec:
    name: str
    title: str
    builder: Callable[[int], Region]
    closed_forms: Callable[[int], tuple]
    gamma: Fraction
    dimension: Dimension
    p_leading: Leading
    s_leading: Leading
    min_n: int
    max_n: int
    bbox_cells: Callable[[int], int]
    default_n: int

    def check(self, n: int) -> None:
        if n < self.min_n:
            raise ValueError(f"{self.name} needs n >= {self.min_n}")
        if n > self.max_n:
            raise CapExceeded(f"{self.name} n={n} exceeds cap n <= {self.max_n}")
        cells = self.bbox_cells(n)
        if cells > max_cells():
            raise CapExceeded(f"{self.name} n={n} needs ~{cells} cells (cap {max_cells()})")

    def generate(self, n: int) -> Region:
        self.check(n)
        return self.builder(n)

    def features(self, n: int) -> FeatureCounts:
        return count_features(self.generate(n))

    def predicted(self, n: int) -> PredictedCounts:
        return predicted_counts(self, n)


def predicted_counts(family, n: int) -> PredictedCounts:
    fam = get_family(family) if isinstance(family, str) else family
    if n < fam.min_n:
        raise OutsideFormulaDomain(f"{fam.name} closed forms start at n = {fam.min_n}")
    p, alpha, holes, S = fam.closed_forms(n)
    tag = f"{fam.name}(n={n})"
    return PredictedCounts(
        p=_exact(p, f"{tag} p"),
        alpha=_exact(alpha, f"{tag} alpha"),
        holes=_exact(holes, f"{tag} holes"),
        S=_exact(S, f"{tag} S"),
    )


FAMILIES: dict[str, FamilySpec] = {
    f.name: f
    for f in [
        FamilySpec("sierpinski", "Sierpinski carpet", sierpinski, _pred_sierpinski,
                   Fraction(99, 224), Dimension(8, 3),
                   Leading(Fraction(4, 5), 8), Leading(Fraction(99, 280), 8),
                   1, 7, lambda n: 9**n, 5),
        FamilySpec("greek_cross", "Greek cross", greek_cross, _pred_greek,
                   Fraction(1, 2), Dimension(4, 2),
                   Leading(Fraction(8)), Leading(Fraction(4)),
                   1, 2000, lambda n: (2 * n + 2) ** 2, 50),
        FamilySpec("minkowski", "Minkowski sausage", minkowski, _pred_minkowski,
                   Fraction(1, 2), Dimension(5, 3),
                   Leading(Fraction(4), 3), Leading(Fraction(2), 3),
                   0, 10, lambda n: 4 * 5**n, 7),
        FamilySpec("vicsek", "Vicsek snowflake", vicsek, _pred_vicsek,
                   Fraction(1, 2), Dimension(5, 3),
                   Leading(Fraction(4), 5), Leading(Fraction(2), 5),
                   0, 8, lambda n: 9**n, 6),
        FamilySpec("koch", "Quadratic Koch", koch, _pred_koch,
                   Fraction(58, 125), Dimension(5, 3),
                   Leading(Fraction(4), 5), Leading(Fraction(232, 125), 5),
                   0, 7, lambda n: 4 * 9**n, 6),
        FamilySpec("moore", "Moore polygon", moore, _pred_moore,
                   Fraction(4, 5), Dimension(9, 6),
                   Leading(Fraction(8), 4), Leading(Fraction(32, 5), 4),
                   1, 9, lambda n: 4 ** (n + 2), 5),
        FamilySpec("t_square", "T-square", t_square, _pred_t_square,
                   Fraction(1, 2), Dimension(4, 2),
                   Leading(Fraction(16), 3), Leading(Fraction(92, 9), 3),
                   0, 10, lambda n: 4 ** (n + 2), 7),
        FamilySpec("chessboard", "Chessboard", lambda n: chessboard(2 * n).with_label(f"chessboard_{n}"),
                   _pred_chessboard,
                   Fraction(1, 4), Dimension(4, 2),
                   Leading(Fraction(8), None, 2), Leading(Fraction(2), None, 2),
                   1, 2048, lambda n: 4 * n * n, 64),
    ]
}


def get_family(name: str) -> FamilySpec:
    key = name.strip().lower().replace("-", "_")
    try:
        return FAMILIES[key]
    except KeyError:
        raise KeyError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}") from None


def generate(name: str, n: int) -> Region:
    return get_family(name).generate(n)
