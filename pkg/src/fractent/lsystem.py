"""Lindenmayer systems and their turtle interpretation on the lattice.

Words are plain strings.  ``F`` draws one unit segment, ``+`` turns left
by 90 degrees, ``-`` turns right; every other symbol is a node variable
the turtle ignores.  Adjacent ``+-`` / ``-+`` pairs are null turns and
are cancelled after every rewrite.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from .errors import LSystemParseError, PathNotClosed, PatternNotFound, WordTooLarge
from .region import Region

DEFAULT_MAX_WORD = 10**8
MOTION = frozenset("F+-")
HEADINGS = "ENWS"
_DXY = np.array([(1, 0), (0, 1), (-1, 0), (0, -1)], dtype=np.int64)


@dataclass(frozen=True)
class LSystem:
    variables: frozenset
    constants: frozenset
    axiom: str
    rules: Mapping[str, str] = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "variables", frozenset(self.variables))
        object.__setattr__(self, "constants", frozenset(self.constants))
        object.__setattr__(self, "rules", dict(self.rules))
        if self.variables & self.constants:
            raise ValueError(f"symbols both variable and constant: {sorted(self.variables & self.constants)}")
        for key in self.rules:
            if key not in self.variables:
                raise ValueError(f"rule for undeclared variable {key!r}")
        alphabet = self.alphabet
        for word in (self.axiom, *self.rules.values()):
            bad = set(word) - alphabet
            if bad:
                raise ValueError(f"undeclared symbol {sorted(bad)[0]!r} in {word!r}")

    @property
    def alphabet(self) -> frozenset:
        return self.variables | self.constants | MOTION


MOORE = LSystem(
    variables={"a", "b"},
    constants={"+", "-"},
    axiom="aFa+F+aFa",
    rules={"a": "-bF+aFa+Fb-", "b": "+aF-bFb-Fa+"},
)

KOCH = LSystem(
    variables={"F"},
    constants={"+", "-"},
    axiom="F",
    rules={"F": "F+F-F-F+F"},
)


def simplify(word: str) -> str:
    """Cancel adjacent opposite turns until none remain."""
    while True:
        shorter = word.replace("+-", "").replace("-+", "")
        if shorter == word:
            return word
        word = shorter


def word_length(lsys: LSystem, steps: int) -> int:
    """Length of the unsimplified word after ``steps`` rewrites."""
    counts = {s: lsys.axiom.count(s) for s in lsys.alphabet}
    for _ in range(steps):
        new = dict.fromkeys(counts, 0)
        for sym, c in counts.items():
            if not c:
                continue
            body = lsys.rules.get(sym, sym)
            for t in body:
                new[t] += c
        counts = new
    return sum(counts.values())


def rewrite(lsys: LSystem, steps: int, max_len: int = DEFAULT_MAX_WORD,
            cancel_turns: bool = True) -> str:
    """Apply the production rules ``steps`` times in parallel."""
    if steps < 0:
        raise ValueError("steps must be non-negative")
    size = word_length(lsys, steps)
    if size > max_len:
        raise WordTooLarge(f"word would have {size} symbols (cap {max_len})")
    table = {ord(k): v for k, v in lsys.rules.items()}
    word = lsys.axiom
    for _ in range(steps):
        word = word.translate(table)
        if cancel_turns:
            word = simplify(word)
    return simplify(word) if cancel_turns else word


def moore_word(n: int, max_len: int = DEFAULT_MAX_WORD) -> str:
    """Open Moore polygon word: the rewritten curve plus its closing segment.

    The curve produced by the grammar ends one unit away from its start;
    the trailing ``F`` is the segment that joins them and still needs its
    heading fixed by ``close_moore``.
    """
    return rewrite(MOORE, n, max_len=max_len) + "F"


def close_moore(word: str) -> str:
    """Fix the heading of the closing segment so the Moore path closes.

    Odd iterations end in ``+Fb-F``, rewritten ``+FbF``; even iterations
    end in ``-FaF``, rewritten ``-Fa+F``.
    """
    if word.endswith("+Fb-F"):
        return word[:-5] + "+FbF"
    if word.endswith("-FaF"):
        return word[:-4] + "-Fa+F"
    raise PatternNotFound(f"word tail {word[-6:]!r} is not a Moore closing pattern")


def koch_polygon_word(n: int, max_len: int = DEFAULT_MAX_WORD) -> str:
    """Four Koch sides joined by right turns; bumps point away from the interior."""
    side = rewrite(KOCH, n, max_len=max(1, max_len // 4))
    return "-".join([side] * 4) + "-"


@dataclass(frozen=True)
class LatticePath:
    start: tuple[int, int]
    steps: str  # one of "ENWS" per unit move

    @property
    def closed(self) -> bool:
        return self.end == tuple(self.start)

    @property
    def end(self) -> tuple[int, int]:
        xs, ys = self.vertices()
        return int(xs[-1]), int(ys[-1])

    def __len__(self) -> int:
        return len(self.steps)

    def vertices(self) -> tuple[np.ndarray, np.ndarray]:
        idx = np.frombuffer(self.steps.translate(str.maketrans("ENWS", "\x00\x01\x02\x03")).encode(),
                            dtype=np.uint8)
        d = _DXY[idx]
        xs = np.concatenate([[self.start[0]], self.start[0] + np.cumsum(d[:, 0])])
        ys = np.concatenate([[self.start[1]], self.start[1] + np.cumsum(d[:, 1])])
        return xs, ys

    def is_simple(self) -> bool:
        """No vertex visited twice (apart from closing on the start)."""
        xs, ys = self.vertices()
        if self.closed:
            xs, ys = xs[:-1], ys[:-1]
        pts = np.stack([xs, ys], axis=1)
        return len(np.unique(pts, axis=0)) == len(pts)


def turtle(word: str, start=(0, 0), heading: str = "E") -> LatticePath:
    """Interpret ``word`` as a lattice path; variables do not move the turtle."""
    h0 = HEADINGS.index(heading)
    arr = np.frombuffer(word.encode("ascii"), dtype=np.uint8)
    turn = (arr == ord("+")).astype(np.int64) - (arr == ord("-"))
    heads = (h0 + np.cumsum(turn)) % 4
    moves = heads[arr == ord("F")]
    steps = bytes(np.frombuffer(HEADINGS.encode(), dtype=np.uint8)[moves]).decode()
    return LatticePath(start=(int(start[0]), int(start[1])), steps=steps)


def path_to_region(path: LatticePath, label: str | None = None) -> Region:
    """Cells enclosed by a closed path, by the even-odd rule.

    A self-touching path encloses the cells on both sides of each pinch,
    giving a corner-touching region.
    """
    if not path.closed:
        raise PathNotClosed(f"path ends at {path.end}, starts at {path.start}")
    if not path.steps:
        return Region(np.zeros((0, 0), dtype=bool), label=label)
    xs, ys = path.vertices()
    x0, y0 = int(xs.min()), int(ys.min())
    w, h = int(xs.max()) - x0, int(ys.max()) - y0
    dy = np.diff(ys)
    vert = dy != 0
    # a vertical step crosses the row of cells just above its lower end
    ex = xs[:-1][vert] - x0
    ey = np.minimum(ys[:-1], ys[1:])[vert] - y0
    toggles = np.zeros((h, w + 1), dtype=np.int64)
    np.add.at(toggles, (ey, ex), 1)
    inside = (np.cumsum(toggles, axis=1) % 2).astype(bool)[:, :w]
    return Region(inside, origin=(x0, y0), label=label)


def blow_up(region: Region, factor: int = 2) -> Region:
    """Replace each cell by a ``factor x factor`` block."""
    if factor < 1:
        raise ValueError("factor must be positive")
    mask = np.kron(region.mask, np.ones((factor, factor), dtype=bool))
    if region.period is not None:
        return Region(mask, label=region.label, period=region.period * factor)
    return Region(mask, (region.origin[0] * factor, region.origin[1] * factor), region.label)


# -- spec files ------------------------------------------------------------

def parse_lsystem(text: str) -> LSystem:
    """Parse the line-oriented L-system description.

    ::

        vars: a b
        consts: + -
        axiom: aFa+F+aFa
        rule: a -> -bF+aFa+Fb-
    """
    variables: set[str] = set()
    constants: set[str] = set()
    axiom: tuple[str, int] | None = None
    rules: list[tuple[str, str, int]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip().replace("−", "-")
        if not line:
            continue
        key, sep, value = line.partition(":")
        if not sep:
            raise LSystemParseError(f"expected 'key: value', got {line!r}", lineno)
        key, value = key.strip(), value.strip()
        if key in ("vars", "consts"):
            syms = value.split()
            for s in syms:
                if len(s) != 1:
                    raise LSystemParseError(f"symbols must be single characters, got {s!r}", lineno)
            (variables if key == "vars" else constants).update(syms)
        elif key == "axiom":
            if axiom is not None:
                raise LSystemParseError("axiom given twice", lineno)
            axiom = (value.replace(" ", ""), lineno)
        elif key == "rule":
            lhs, arrow, rhs = value.partition("->")
            lhs = lhs.strip()
            if not arrow or len(lhs) != 1:
                raise LSystemParseError(f"rule must look like 'x -> word', got {value!r}", lineno)
            rules.append((lhs, rhs.replace(" ", ""), lineno))
        else:
            raise LSystemParseError(f"unknown key {key!r}", lineno)
    if axiom is None:
        raise LSystemParseError("missing axiom")
    overlap = variables & constants
    if overlap:
        raise LSystemParseError(f"symbol {sorted(overlap)[0]!r} declared as variable and constant")
    alphabet = variables | constants | MOTION
    for word, lineno in [axiom] + [(rhs, ln) for _, rhs, ln in rules]:
        bad = [c for c in word if c not in alphabet]
        if bad:
            raise LSystemParseError(f"undeclared symbol {bad[0]!r}", lineno)
    table = {}
    for lhs, rhs, lineno in rules:
        if lhs not in variables:
            raise LSystemParseError(f"rule for undeclared variable {lhs!r}", lineno)
        if lhs in table:
            raise LSystemParseError(f"second rule for {lhs!r}", lineno)
        table[lhs] = rhs
    return LSystem(variables, constants, axiom[0], table)


def format_lsystem(lsys: LSystem) -> str:
    lines = [
        "vars: " + " ".join(sorted(lsys.variables)),
        "consts: " + " ".join(sorted(lsys.constants)),
        "axiom: " + lsys.axiom,
    ]
    lines += [f"rule: {k} -> {v}" for k, v in sorted(lsys.rules.items())]
    return "\n".join(lines) + "\n"
