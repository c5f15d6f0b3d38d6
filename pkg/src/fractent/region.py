"""Finite regions of the square lattice and their boundary features.

A region is a set of unit cells; cell ``(x, y)`` is the square
``[x, x+1] x [y, y+1]``.  Spins live on lattice edges.  The boundary of a
region is the set of edges separating a cell inside from a cell outside,
and every quantity the entanglement counting needs (perimeter, inward
angles, unit holes, adjacent squares) is read off the complement cells
touching that boundary.

Cells are stored as a boolean mask indexed ``mask[y - y0, x - x0]``.  A
region may optionally live on a periodic ``period x period`` board, in
which case neighbours wrap around.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, NamedTuple

import numpy as np
from scipy import ndimage
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components as _graph_components

from .errors import PinchedBoundary


class Cell(NamedTuple):
    x: int
    y: int


class Edge(NamedTuple):
    """Lattice edge.

    A horizontal edge ``('h', x, y)`` joins ``(x, y)-(x+1, y)`` and
    separates cells ``(x, y-1)`` and ``(x, y)``.  A vertical edge
    ``('v', x, y)`` joins ``(x, y)-(x, y+1)`` and separates ``(x-1, y)``
    and ``(x, y)``.
    """

    orientation: str
    x: int
    y: int

    def cells(self) -> tuple[Cell, Cell]:
        if self.orientation == "h":
            return Cell(self.x, self.y - 1), Cell(self.x, self.y)
        return Cell(self.x - 1, self.y), Cell(self.x, self.y)

    def vertices(self) -> tuple[tuple[int, int], tuple[int, int]]:
        if self.orientation == "h":
            return (self.x, self.y), (self.x + 1, self.y)
        return (self.x, self.y), (self.x, self.y + 1)


class Region:
    """Finite set of lattice cells backed by a boolean mask.

    ``origin`` is the coordinate of ``mask[0, 0]``.  Non-periodic regions
    are trimmed to their bounding box on construction.  When ``period`` is
    given the mask must be ``period x period`` and membership is taken
    modulo ``period``.
    """

    __slots__ = ("mask", "origin", "label", "period", "_cells")

    def __init__(self, mask, origin=(0, 0), label: str | None = None,
                 period: int | None = None):
        mask = np.array(mask, dtype=bool)
        if mask.ndim != 2:
            raise ValueError("mask must be two-dimensional")
        x0, y0 = int(origin[0]), int(origin[1])
        if period is not None:
            if mask.shape != (period, period):
                raise ValueError(f"periodic region needs a {period}x{period} mask")
            x0 = y0 = 0
        elif mask.size and mask.any():
            rows = np.flatnonzero(mask.any(axis=1))
            cols = np.flatnonzero(mask.any(axis=0))
            mask = mask[rows[0]:rows[-1] + 1, cols[0]:cols[-1] + 1]
            x0 += int(cols[0])
            y0 += int(rows[0])
        else:
            mask = np.zeros((0, 0), dtype=bool)
            x0 = y0 = 0
        mask.setflags(write=False)
        self.mask = mask
        self.origin = (x0, y0)
        self.label = label
        self.period = period
        self._cells = None

    @classmethod
    def from_cells(cls, cells: Iterable, label: str | None = None,
                   period: int | None = None) -> "Region":
        pts = np.array([(int(c[0]), int(c[1])) for c in cells], dtype=np.int64).reshape(-1, 2)
        return cls.from_coords(pts[:, 0], pts[:, 1], label=label, period=period)

    @classmethod
    def from_coords(cls, xs, ys, label: str | None = None,
                    period: int | None = None) -> "Region":
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        if period is not None:
            mask = np.zeros((period, period), dtype=bool)
            mask[ys % period, xs % period] = True
            return cls(mask, label=label, period=period)
        if xs.size == 0:
            return cls(np.zeros((0, 0), dtype=bool), label=label)
        x0, y0 = int(xs.min()), int(ys.min())
        mask = np.zeros((int(ys.max()) - y0 + 1, int(xs.max()) - x0 + 1), dtype=bool)
        mask[ys - y0, xs - x0] = True
        return cls(mask, origin=(x0, y0), label=label)

    # -- set-like protocol -------------------------------------------------

    def __len__(self) -> int:
        return int(self.mask.sum())

    def __contains__(self, cell) -> bool:
        x, y = int(cell[0]), int(cell[1])
        if self.period is not None:
            return bool(self.mask[y % self.period, x % self.period])
        i, j = y - self.origin[1], x - self.origin[0]
        h, w = self.mask.shape
        return 0 <= i < h and 0 <= j < w and bool(self.mask[i, j])

    def __iter__(self) -> Iterator[Cell]:
        return iter(sorted(self.cells()))

    def cells(self) -> frozenset[Cell]:
        if self._cells is None:
            ys, xs = np.nonzero(self.mask)
            x0, y0 = self.origin
            self._cells = frozenset(Cell(int(x) + x0, int(y) + y0) for x, y in zip(xs, ys))
        return self._cells

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        ys, xs = np.nonzero(self.mask)
        return xs + self.origin[0], ys + self.origin[1]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Region):
            return NotImplemented
        return (self.period == other.period and self.origin == other.origin
                and np.array_equal(self.mask, other.mask))

    def __hash__(self) -> int:
        return hash((self.origin, self.period, self.mask.shape, self.mask.tobytes()))

    def __repr__(self) -> str:
        tag = f" {self.label!r}" if self.label else ""
        per = f", period={self.period}" if self.period else ""
        return f"<Region{tag} cells={len(self)} bbox={self.shape}{per}>"

    # -- geometry -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        """(width, height) of the bounding box."""
        h, w = self.mask.shape
        return w, h

    def bbox(self) -> tuple[int, int, int, int]:
        """Half-open bounding box ``(x0, y0, x1, y1)``."""
        w, h = self.shape
        return self.origin[0], self.origin[1], self.origin[0] + w, self.origin[1] + h

    def translate(self, dx: int, dy: int) -> "Region":
        if self.period is not None:
            mask = np.roll(self.mask, (dy, dx), axis=(0, 1))
            return Region(mask, label=self.label, period=self.period)
        return Region(self.mask, (self.origin[0] + dx, self.origin[1] + dy), self.label)

    def canonical(self) -> "Region":
        """Translate so the bounding box starts at the origin."""
        if self.period is not None:
            return self
        return Region(self.mask, (0, 0), self.label)

    def with_label(self, label: str | None) -> "Region":
        return Region(self.mask, self.origin, label, self.period)

    def complement_in_bbox(self, pad: int = 0) -> "Region":
        """Cells of the (padded) bounding box that are not in the region."""
        m = np.pad(~self.mask, pad, constant_values=True)
        return Region(m, (self.origin[0] - pad, self.origin[1] - pad))


@dataclass(frozen=True)
class FeatureCounts:
    """Boundary features of one region.

    ``s_direct`` (adjacent complement squares) always equals
    ``p - alpha - 3 * holes``.
    """

    p: int
    alpha: int
    holes: int
    s_direct: int
    loops: int

    @property
    def s_over_p(self) -> Fraction | None:
        return Fraction(self.s_direct, self.p) if self.p else None

    def as_dict(self) -> dict:
        ratio = self.s_over_p
        return {
            "p": self.p,
            "alpha": self.alpha,
            "holes": self.holes,
            "s_direct": self.s_direct,
            "loops": self.loops,
            "s_over_p": None if ratio is None else f"{ratio.numerator}/{ratio.denominator}",
        }


# -- internal array helpers ------------------------------------------------

def _padded(region: Region) -> tuple[np.ndarray, int, int]:
    """Mask padded by one ring of empty cells, plus the padded origin."""
    a = np.pad(region.mask, 1, constant_values=False)
    return a, region.origin[0] - 1, region.origin[1] - 1


def _neighbour_counts(region: Region) -> np.ndarray:
    """k(c) for every cell of the working grid; zero on cells of the region."""
    if region.period is not None:
        a = region.mask
        k = (np.roll(a, 1, 0).astype(np.int8) + np.roll(a, -1, 0)
             + np.roll(a, 1, 1) + np.roll(a, -1, 1))
    else:
        a, _, _ = _padded(region)
        k = np.zeros(a.shape, dtype=np.int8)
        k[1:, :] += a[:-1, :]
        k[:-1, :] += a[1:, :]
        k[:, 1:] += a[:, :-1]
        k[:, :-1] += a[:, 1:]
    k[a] = 0
    return k


def _edge_arrays(region: Region) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Coordinates (hx, hy, vx, vy) of horizontal and vertical boundary edges."""
    if region.period is not None:
        a = region.mask
        hy, hx = np.nonzero(a != np.roll(a, 1, axis=0))
        vy, vx = np.nonzero(a != np.roll(a, 1, axis=1))
        return hx, hy, vx, vy
    a, px, py = _padded(region)
    hi, hj = np.nonzero(a[1:, :] != a[:-1, :])
    vi, vj = np.nonzero(a[:, 1:] != a[:, :-1])
    return hj + px, hi + py + 1, vj + px + 1, vi + py


# -- public operations -----------------------------------------------------

def boundary_edges(region: Region) -> set[Edge]:
    """Edges whose two incident cells differ in membership."""
    hx, hy, vx, vy = _edge_arrays(region)
    edges = {Edge("h", int(x), int(y)) for x, y in zip(hx, hy)}
    edges.update(Edge("v", int(x), int(y)) for x, y in zip(vx, vy))
    return edges


def boundary_edge_coords(region: Region) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Boundary edges as arrays ``(hx, hy, vx, vy)`` of horizontal and vertical edge coordinates."""
    return _edge_arrays(region)


def perimeter(region: Region) -> int:
    hx, _, vx, _ = _edge_arrays(region)
    return int(hx.size + vx.size)


def count_adjacent_squares(region: Region) -> int:
    """Number of complement cells with at least one boundary edge."""
    return int(np.count_nonzero(_neighbour_counts(region)))


def adjacent_square_counts(region: Region) -> dict[Cell, int]:
    """Complement cells touching the boundary, mapped to their number of boundary sides."""
    k = _neighbour_counts(region)
    if region.period is not None:
        ox = oy = 0
    else:
        _, ox, oy = _padded(region)
    ys, xs = np.nonzero(k)
    return {Cell(int(x) + ox, int(y) + oy): int(k[y, x]) for x, y in zip(xs, ys)}


def _contains(region: Region, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    if region.period is not None:
        n = region.period
        return region.mask[ys % n, xs % n]
    i = ys - region.origin[1]
    j = xs - region.origin[0]
    h, w = region.mask.shape
    ok = (i >= 0) & (i < h) & (j >= 0) & (j < w)
    out = np.zeros(xs.shape, dtype=bool)
    out[ok] = region.mask[i[ok], j[ok]]
    return out


def count_loops(region: Region) -> int:
    """Closed boundary curves, with every pinch split so the region's cells stay joined.

    Boundary edges are oriented with the region on the left.  At a pinch
    vertex the curve takes the right turn, which hugs the outside cell's
    corner; elsewhere the successor is unique.  Loops are the cycles of
    the resulting successor permutation.
    """
    hx, hy, vx, vy = _edge_arrays(region)
    if hx.size + vx.size == 0:
        return 0
    up = _contains(region, hx, hy)
    left = _contains(region, vx - 1, vy)
    sx = np.concatenate([np.where(up, hx, hx + 1), vx])
    sy = np.concatenate([hy, np.where(left, vy, vy + 1)])
    d = np.concatenate([np.where(up, 0, 2), np.where(left, 1, 3)])
    step_x = np.array([1, 0, -1, 0])
    step_y = np.array([0, 1, 0, -1])
    ex, ey = sx + step_x[d], sy + step_y[d]
    if region.period is not None:
        n = region.period
        sx, sy, ex, ey = sx % n, sy % n, ex % n, ey % n
        ox = oy = 0
        span = n + 1
    else:
        ox, oy = int(sx.min()) - 1, int(sy.min()) - 1
        span = int(max(sx.max() - ox, sy.max() - oy)) + 2
    keys = ((sy - oy) * span + (sx - ox)) * 4 + d
    order = np.argsort(keys)
    sorted_keys = keys[order]
    base = ((ey - oy) * span + (ex - ox)) * 4
    succ = np.full(keys.size, -1)
    for turn in (3, 0, 1):          # right, straight, left
        cand = base + (d + turn) % 4
        pos = np.minimum(np.searchsorted(sorted_keys, cand), keys.size - 1)
        hit = (succ < 0) & (sorted_keys[pos] == cand)
        succ[hit] = order[pos[hit]]
    if (succ < 0).any():
        raise AssertionError("boundary edge without successor")
    m = keys.size
    graph = coo_matrix((np.ones(m, dtype=np.int8), (np.arange(m), succ)), shape=(m, m))
    n_comp, _ = _graph_components(graph, directed=False)
    return int(n_comp)


def count_features(region: Region) -> FeatureCounts:
    """Perimeter, inward angles, unit holes, adjacent squares and loops.

    For each complement cell ``c`` let ``k(c)`` be the number of its sides
    on the boundary.  Then ``p = sum k``, ``holes = #{k == 4}``,
    ``alpha = sum(k - 1 for k in (2, 3))`` and ``s_direct = #{k >= 1}``.
    A complement cell squeezed between two opposite region cells (a
    one-cell strait) contributes 1 to ``alpha`` although it is no corner.
    """
    k = _neighbour_counts(region)
    hist = np.bincount(k.ravel(), minlength=5)
    p = int(hist[1] + 2 * hist[2] + 3 * hist[3] + 4 * hist[4])
    holes = int(hist[4])
    alpha = int(hist[2] + 2 * hist[3])
    s_direct = int(hist[1] + hist[2] + hist[3] + hist[4])
    return FeatureCounts(p=p, alpha=alpha, holes=holes, s_direct=s_direct,
                         loops=count_loops(region))


# directions: 0=E, 1=N, 2=W, 3=S
_STEP = ((1, 0), (0, 1), (-1, 0), (0, -1))


def _directed_boundary(region: Region):
    """Boundary edges oriented so the region lies on the left."""
    if region.period is not None:
        raise ValueError("turn counting is defined for non-periodic regions only")
    out = defaultdict(list)
    a, px, py = _padded(region)
    inside = a[1:-1, 1:-1]
    ys, xs = np.nonzero(inside)
    for i, j in zip(ys, xs):
        x, y = int(j) + region.origin[0], int(i) + region.origin[1]
        r, c = int(i) + 1, int(j) + 1
        if not a[r - 1, c]:
            out[(x, y)].append(0)
        if not a[r, c + 1]:
            out[(x + 1, y)].append(1)
        if not a[r + 1, c]:
            out[(x + 1, y + 1)].append(2)
        if not a[r, c - 1]:
            out[(x, y + 1)].append(3)
    return out


def count_inward_angles_by_turns(region: Region, resolve_pinches: bool = False) -> int:
    """Count reflex corners by walking each boundary loop.

    Loops are traversed with the region on the left, so a reflex corner is
    a right turn.  Loops that go once around a single complement cell
    (unit holes) are skipped because those cells are counted as holes.

    A vertex where the boundary passes twice raises ``PinchedBoundary``
    unless ``resolve_pinches`` is set, in which case each pass turns right
    (the two region cells meeting at the vertex stay joined).
    """
    out = _directed_boundary(region)
    if not resolve_pinches:
        for v, dirs in out.items():
            if len(dirs) > 1:
                raise PinchedBoundary(f"boundary passes through vertex {v} twice")

    def successor(v, d):
        dx, dy = _STEP[d]
        w = (v[0] + dx, v[1] + dy)
        opts = out[w]
        if len(opts) == 1:
            return w, opts[0]
        right = (d - 1) % 4
        return w, right if right in opts else (d + 1) % 4

    seen = set()
    reflex = 0
    for v in sorted(out):
        for d in out[v]:
            if (v, d) in seen:
                continue
            edge = (v, d)
            length = rights = 0
            while edge not in seen:
                seen.add(edge)
                nxt = successor(*edge)
                if (nxt[1] - edge[1]) % 4 == 3:
                    rights += 1
                length += 1
                edge = nxt
            if length == 4 and rights == 4:
                continue  # unit hole
            reflex += rights
    return reflex


def connected_components(cells, adjacency: int = 4) -> list[frozenset[Cell]]:
    """Split a cell set into 4-connected components.

    Components are ordered by their lexicographically smallest cell.
    """
    if adjacency != 4:
        raise ValueError("only 4-adjacency is supported")
    region = cells if isinstance(cells, Region) else Region.from_cells(cells)
    if region.period is not None:
        raise ValueError("components are computed on non-periodic regions")
    labels, n = ndimage.label(region.mask)
    comps = []
    x0, y0 = region.origin
    for lab in range(1, n + 1):
        ys, xs = np.nonzero(labels == lab)
        comps.append(frozenset(Cell(int(x) + x0, int(y) + y0) for x, y in zip(xs, ys)))
    comps.sort(key=min)
    return comps


def bounded_complement_components(region: Region) -> list[frozenset[Cell]]:
    """Complement components enclosed by the region (its holes of any size)."""
    comp = region.complement_in_bbox(pad=1)
    x0, y0, x1, y1 = comp.bbox()
    result = []
    for c in connected_components(comp):
        if not any(x in (x0, x1 - 1) or y in (y0, y1 - 1) for x, y in c):
            result.append(c)
    return result
