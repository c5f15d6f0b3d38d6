"""Static pictures of regions: SVG and binary PGM.

Both writers are deterministic, so the same region always gives the same
bytes.  The picture has one empty cell of margin on each side and lattice
``y`` grows upwards.  Optional marking shades the adjacent squares, with
unit holes in a darker shade.
"""

from __future__ import annotations

import numpy as np

from .region import Region, adjacent_square_counts, boundary_edge_coords

FILL = "#1f3b73"
ADJACENT = "#f2c14e"
HOLE = "#d1495b"
STROKE = "#000000"

PGM_BACKGROUND = 255
PGM_ADJACENT = 200
PGM_HOLE = 120
PGM_CELL = 0


def _frame(region: Region) -> tuple[int, int, int, int]:
    """x0, y0, width, height in cells, including the one-cell margin."""
    if region.period is not None:
        return -1, -1, region.period + 2, region.period + 2
    if not len(region):
        return -1, -1, 3, 3
    x0, y0, x1, y1 = region.bbox()
    return x0 - 1, y0 - 1, x1 - x0 + 2, y1 - y0 + 2


def _runs(row: np.ndarray) -> list[tuple[int, int]]:
    """(start, length) of each run of True in a 1-d boolean array."""
    padded = np.concatenate([[False], row, [False]]).astype(np.int8)
    d = np.diff(padded)
    starts = np.flatnonzero(d == 1)
    ends = np.flatnonzero(d == -1)
    return list(zip(starts.tolist(), (ends - starts).tolist()))


def render_svg(region: Region, cell: int = 10, mark_adjacent: bool = False) -> str:
    x0, y0, w, h = _frame(region)
    top = y0 + h

    def sx(x):
        return (x - x0) * cell

    def sy(y):
        return (top - y) * cell

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w * cell}" height="{h * cell}" '
        f'viewBox="0 0 {w * cell} {h * cell}">',
        f'<rect x="0" y="0" width="{w * cell}" height="{h * cell}" fill="#ffffff"/>',
    ]
    if mark_adjacent:
        for c, k in sorted(adjacent_square_counts(region).items()):
            colour = HOLE if k == 4 else ADJACENT
            out.append(f'<rect x="{sx(c.x)}" y="{sy(c.y + 1)}" width="{cell}" height="{cell}" '
                       f'fill="{colour}"/>')
    ox, oy = region.origin
    mask = region.mask
    for j in range(mask.shape[0]):
        y = oy + j
        for start, length in _runs(mask[j]):
            out.append(f'<rect x="{sx(ox + start)}" y="{sy(y + 1)}" width="{length * cell}" '
                       f'height="{cell}" fill="{FILL}"/>')
    hx, hy, vx, vy = boundary_edge_coords(region)
    segs = sorted([(int(x), int(y), "h") for x, y in zip(hx, hy)]
                  + [(int(x), int(y), "v") for x, y in zip(vx, vy)])
    if segs:
        d = " ".join(f"M{sx(x)} {sy(y)}h{cell}" if o == "h" else f"M{sx(x)} {sy(y)}v{-cell}"
                     for x, y, o in segs)
        width = max(1, cell // 5)
        out.append(f'<path d="{d}" stroke="{STROKE}" stroke-width="{width}" fill="none" '
                   f'stroke-linecap="square"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def render_pgm(region: Region, cell: int = 4, mark_adjacent: bool = False) -> bytes:
    """Binary greyscale image; region cells black on white."""
    x0, y0, w, h = _frame(region)
    grid = np.full((h, w), PGM_BACKGROUND, dtype=np.uint8)
    if mark_adjacent:
        for c, k in adjacent_square_counts(region).items():
            grid[c.y - y0, c.x - x0] = PGM_HOLE if k == 4 else PGM_ADJACENT
    ox, oy = region.origin
    mh, mw = region.mask.shape
    view = grid[oy - y0:oy - y0 + mh, ox - x0:ox - x0 + mw]
    view[region.mask] = PGM_CELL
    img = np.kron(grid[::-1], np.ones((cell, cell), dtype=np.uint8))
    header = f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii")
    return header + img.tobytes()


def read_pgm(data: bytes) -> np.ndarray:
    """Parse a binary PGM written by ``render_pgm`` (rows top to bottom)."""
    parts = data.split(b"\n", 3)
    if len(parts) < 4 or parts[0] != b"P5":
        raise ValueError("not a binary PGM")
    w, h = map(int, parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8, count=w * h).reshape(h, w)
