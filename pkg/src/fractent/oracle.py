"""Toric-code entanglement entropy from the plaquette group.

Spins live on the ``2L**2`` edges of an ``L x L`` torus.  The X-type
plaquette operators generate a group ``G`` of closed string-nets; the
G-uniform state ``|G|**-1/2 * sum_g g|0>`` has entanglement entropy
``log2 |G_AB|`` with ``G_AB = G / (G_A x G_B)``.  This module computes that
number three ways: GF(2) ranks, a dense state vector (small tori only),
and the Schmidt weights of a separable weighted G-state.

A group element is an int bit set over edge indices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from . import gf2
from .errors import (GroupTooLarge, MarginTooSmall, NotInGroup, SeparabilityViolated,
                     TooManySpins)
from .region import Edge, Region, count_features

MAX_DENSE_SPINS = 20
MAX_GROUP_RANK = 15
SEPARABILITY_RTOL = 1e-12


@dataclass(frozen=True)
class TorusCode:
    L: int

    def __post_init__(self):
        if self.L < 2:
            raise ValueError("torus side must be at least 2")

    @property
    def n_spins(self) -> int:
        return 2 * self.L * self.L

    @property
    def n_plaquettes(self) -> int:
        return self.L * self.L

    def edge_index(self, orientation: str, x: int, y: int) -> int:
        L = self.L
        x, y = x % L, y % L
        if orientation == "h":
            return y * L + x
        if orientation == "v":
            return L * L + y * L + x
        raise ValueError(f"bad orientation {orientation!r}")

    def edge(self, index: int) -> Edge:
        L = self.L
        if not 0 <= index < 2 * L * L:
            raise IndexError(index)
        orient, rest = ("h", index) if index < L * L else ("v", index - L * L)
        return Edge(orient, rest % L, rest // L)

    def plaquette_edges(self, x: int, y: int) -> tuple[int, int, int, int]:
        """Bottom, top, left, right edges of cell ``(x, y)``."""
        e = self.edge_index
        return e("h", x, y), e("h", x, y + 1), e("v", x, y), e("v", x + 1, y)

    def plaquette(self, x: int, y: int) -> int:
        return gf2.mask_of(self.plaquette_edges(x, y))


def plaquette_matrix(code: TorusCode) -> gf2.BitMatrix:
    """``L**2 x 2L**2`` incidence matrix; row ``y*L + x`` is plaquette ``(x, y)``."""
    L = code.L
    return gf2.BitMatrix([code.plaquette(x, y) for y in range(L) for x in range(L)], code.n_spins)


@dataclass(frozen=True)
class Bipartition:
    n_spins: int
    a_spins: frozenset

    def __post_init__(self):
        a = frozenset(int(i) for i in self.a_spins)
        if any(not 0 <= i < self.n_spins for i in a):
            raise ValueError("spin index out of range")
        object.__setattr__(self, "a_spins", a)

    @property
    def b_spins(self) -> frozenset:
        return frozenset(range(self.n_spins)) - self.a_spins

    @property
    def a_mask(self) -> int:
        return gf2.mask_of(self.a_spins)

    @property
    def b_mask(self) -> int:
        return ((1 << self.n_spins) - 1) ^ self.a_mask

    def swapped(self) -> "Bipartition":
        return Bipartition(self.n_spins, self.b_spins)


def bipartition_from_cells(code: TorusCode, cells) -> Bipartition:
    """Spins touching at least one cell of A go to A (boundary spins included)."""
    a = set()
    for x, y in cells:
        a.update(code.plaquette_edges(x, y))
    return Bipartition(code.n_spins, frozenset(a))


def bipartition_from_region(code: TorusCode, region: Region, margin: int = 2,
                            offset=(0, 0)) -> Bipartition:
    """Embed ``region`` in the torus, its bounding box ``margin`` cells from wrap-around.

    A periodic region whose period equals ``L`` is laid on the torus as is.
    ``offset`` shifts the embedding (cells wrap modulo ``L``).
    """
    if region.period is not None:
        if region.period != code.L:
            raise MarginTooSmall(f"periodic board of side {region.period} does not tile an L={code.L} torus")
        xs, ys = region.coords()
    else:
        w, h = region.shape
        if max(w, h) + 2 * margin > code.L:
            raise MarginTooSmall(
                f"region of size {w}x{h} needs L >= {max(w, h) + 2 * margin} for margin {margin}")
        x0, y0, _, _ = region.bbox() if len(region) else (0, 0, 0, 0)
        xs, ys = region.coords()
        xs, ys = xs - x0 + margin, ys - y0 + margin
    xs, ys = xs + offset[0], ys + offset[1]
    return bipartition_from_cells(code, zip(xs.tolist(), ys.tolist()))


# -- ranks ----------------------------------------------------------------------

def log2_group(code: TorusCode) -> int:
    return plaquette_matrix(code).rank()


def log2_GA(code: TorusCode, bip: Bipartition) -> int:
    """Dimension of the subgroup supported only on A."""
    m = plaquette_matrix(code)
    return m.rank() - m.restrict(bip.b_mask).rank()


def log2_GAB(code: TorusCode, bip: Bipartition) -> int:
    """``log2 |G| - log2 |G_A| - log2 |G_B|`` by exact ranks."""
    m = plaquette_matrix(code)
    return m.restrict(bip.a_mask).rank() + m.restrict(bip.b_mask).rank() - m.rank()


# -- group structure -------------------------------------------------------------

def group_basis(code: TorusCode) -> list[int]:
    rows, _ = gf2.rref(plaquette_matrix(code).rows, range(code.n_spins))
    return rows


def subgroup_basis(code: TorusCode, support_mask: int) -> list[int]:
    """Basis of the elements of G supported inside ``support_mask``."""
    outside = [j for j in range(code.n_spins) if not support_mask >> j & 1]
    inside = [j for j in range(code.n_spins) if support_mask >> j & 1]
    rows, pivots = gf2.rref(plaquette_matrix(code).rows, outside + inside)
    return [r for r, c in zip(rows, pivots) if support_mask >> c & 1]


def enumerate_group(code: TorusCode) -> list[int]:
    basis = group_basis(code)
    if len(basis) > MAX_GROUP_RANK:
        raise GroupTooLarge(f"group has 2^{len(basis)} elements (cap 2^{MAX_GROUP_RANK})")
    return gf2.span(basis)


class Decomposer:
    """Unique factorisation ``g = g_A + g_B + h`` with ``h`` a canonical class representative.

    ``h`` is ``g`` reduced modulo ``G_A + G_B`` with pivots taken first on
    spins away from the cut, so the representative sits on the boundary
    spins (those in A next to a B-only spin) whenever possible.
    """

    def __init__(self, code: TorusCode, bip: Bipartition):
        self.code = code
        self.bip = bip
        self.group = gf2.xor_basis(plaquette_matrix(code).rows)
        self.ga_basis = subgroup_basis(code, bip.a_mask)
        self.gb_basis = subgroup_basis(code, bip.b_mask)
        boundary = boundary_spins(code, bip)
        order = ([j for j in sorted(bip.a_spins) if j not in boundary]
                 + sorted(bip.b_spins) + sorted(boundary))
        self._rows, self._pivots = gf2.rref(self.ga_basis + self.gb_basis, order)
        # separate reductions recover the A and B parts of g + h
        self._ga = gf2.rref(self.ga_basis, sorted(bip.a_spins))
        self._gb = gf2.rref(self.gb_basis, sorted(bip.b_spins))

    @property
    def log2_GAB(self) -> int:
        return len(self.group) - len(self.ga_basis) - len(self.gb_basis)

    def class_rep(self, g: int) -> int:
        if not gf2.in_span(self.group, g):
            raise NotInGroup(f"{g:#x} is not a product of plaquettes")
        return gf2.reduce(g, self._rows, self._pivots)

    def __call__(self, g: int) -> tuple[int, int, int]:
        h = self.class_rep(g)
        rest = g ^ h
        ga = rest & self.bip.a_mask
        gb = rest & self.bip.b_mask
        if gf2.reduce(ga, *self._ga) or gf2.reduce(gb, *self._gb):
            raise AssertionError("class reduction left a part outside G_A x G_B")
        return ga, gb, h

    def class_reps(self) -> list[int]:
        """One canonical representative per class of ``G_AB``."""
        if len(self.group) > MAX_GROUP_RANK:
            raise GroupTooLarge("too many group elements to list classes")
        return sorted({self.class_rep(g) for g in gf2.span(list(self.group.values()))})


def decompose(code: TorusCode, bip: Bipartition, g: int) -> tuple[int, int, int]:
    return Decomposer(code, bip)(g)


def boundary_spins(code: TorusCode, bip: Bipartition) -> frozenset:
    """A spins sharing a plaquette with some B spin."""
    out = set()
    a = bip.a_mask
    L = code.L
    for y in range(L):
        for x in range(L):
            edges = code.plaquette_edges(x, y)
            if any(not a >> e & 1 for e in edges):
                out.update(e for e in edges if a >> e & 1)
    return frozenset(out)


# -- weighted G-states -----------------------------------------------------------

@dataclass
class ClassWeights:
    """Separable amplitudes ``alpha(g) = alpha_A(g_A) * alpha_B(g_B) * beta(h)``.

    ``amplitudes`` is the full normalised map g -> alpha(g); ``n_a`` and
    ``n_b`` are the norms of the A and B factors.
    """

    amplitudes: dict
    beta: dict
    alpha_a: dict
    alpha_b: dict
    n_a: float
    n_b: float

    def schmidt_probabilities(self) -> np.ndarray:
        p = np.array([abs(self.n_a * self.n_b * b) ** 2 for _, b in sorted(self.beta.items())])
        return p


def uniform_weights(code: TorusCode) -> dict:
    elems = enumerate_group(code)
    a = 1 / math.sqrt(len(elems))
    return {g: a for g in elems}


def _normalised(raw: Mapping[int, complex]) -> dict:
    norm = math.sqrt(sum(abs(v) ** 2 for v in raw.values()))
    return {g: v / norm for g, v in raw.items()}


def string_length_weights(code: TorusCode, mu: float) -> dict:
    """``C * exp(-mu * |g| / 2)`` with ``|g|`` the support size of the whole string-net."""
    if mu < 0:
        raise ValueError("mu must be non-negative")
    return _normalised({g: math.exp(-mu * gf2.weight(g) / 2) for g in enumerate_group(code)})


def tension_weights(code: TorusCode, bip: Bipartition, mu: float) -> ClassWeights:
    """String-tension weights, factorised along the cut.

    The string length is split as ``l_A + l_B + l_AB`` with the three
    pieces read off the decomposition ``g = g_A + g_B + h``.  The weight
    ``C * exp(-mu * (l_A + l_B + l_AB) / 2)`` then factorises exactly.
    ``mu = 0`` is the uniform state.
    """
    if mu < 0:
        raise ValueError("mu must be non-negative")
    dec = Decomposer(code, bip)
    raw = {}
    for g in enumerate_group(code):
        ga, gb, h = dec(g)
        raw[g] = math.exp(-mu * (gf2.weight(ga) + gf2.weight(gb) + gf2.weight(h)) / 2)
    return factorize(code, bip, _normalised(raw), dec)


def factorize(code: TorusCode, bip: Bipartition, amplitudes: Mapping[int, complex],
              decomposer: Decomposer | None = None) -> ClassWeights:
    """Split amplitudes into A, B and class factors; raise if they do not multiply back."""
    dec = decomposer or Decomposer(code, bip)
    e = amplitudes.get(0, 0)
    if e == 0:
        raise SeparabilityViolated("identity has zero weight; factors undefined")
    alpha_a = {g: amplitudes.get(g, 0) / e for g in gf2.span(dec.ga_basis)}
    alpha_b = {g: amplitudes.get(g, 0) / e for g in gf2.span(dec.gb_basis)}
    beta: dict = {}
    for g, amp in amplitudes.items():
        ga, gb, h = dec(g)
        if ga == 0 and gb == 0:
            beta[h] = amp
    for g, amp in amplitudes.items():
        ga, gb, h = dec(g)
        want = alpha_a[ga] * alpha_b[gb] * beta.get(h, 0)
        if abs(amp - want) > SEPARABILITY_RTOL * max(abs(amp), abs(want), 1e-300):
            raise SeparabilityViolated(
                f"weight of {g:#x} is {amp!r}, factors give {want!r}")
    n_a = math.sqrt(sum(abs(v) ** 2 for v in alpha_a.values()))
    n_b = math.sqrt(sum(abs(v) ** 2 for v in alpha_b.values()))
    return ClassWeights(dict(amplitudes), beta, alpha_a, alpha_b, n_a, n_b)


def _entropy_bits(probs) -> float:
    p = np.asarray(probs, dtype=float)
    p = p[p > 1e-15]
    return float(-(p * np.log2(p)).sum())


def gstate_entropy_formula(code: TorusCode, bip: Bipartition, weights=None) -> float:
    """Entropy from the class weights ``|N_A N_B beta(h)|**2``.

    ``weights`` may be ``None`` (uniform), a ``ClassWeights`` or a raw
    map g -> amplitude, which is factorised first.
    """
    if weights is None:
        weights = uniform_weights(code)
    if not isinstance(weights, ClassWeights):
        weights = factorize(code, bip, weights)
    return _entropy_bits(weights.schmidt_probabilities())


def statevector_entropy(code: TorusCode, bip: Bipartition, weights=None) -> float:
    """Von Neumann entropy of A, in bits, from the dense amplitude vector."""
    n = code.n_spins
    if n > MAX_DENSE_SPINS:
        raise TooManySpins(f"{n} spins exceed the dense limit of {MAX_DENSE_SPINS}")
    if weights is None:
        weights = uniform_weights(code)
    amps = weights.amplitudes if isinstance(weights, ClassWeights) else weights
    psi = np.zeros(1 << n, dtype=complex)
    for g, a in amps.items():
        psi[g] = a
    psi /= np.linalg.norm(psi)
    a_axes = sorted(bip.a_spins)
    b_axes = sorted(bip.b_spins)
    if not a_axes or not b_axes:
        return 0.0
    # bit j of the index is spin j; numpy's C order puts spin 0 last
    tensor = psi.reshape((2,) * n)
    axis = {j: n - 1 - j for j in range(n)}
    mat = np.transpose(tensor, [axis[j] for j in a_axes] + [axis[j] for j in b_axes])
    mat = mat.reshape(1 << len(a_axes), 1 << len(b_axes))
    rho = mat @ mat.conj().T if mat.shape[0] <= mat.shape[1] else mat.conj().T @ mat
    evals = np.linalg.eigvalsh(rho)
    return _entropy_bits(np.clip(evals, 0, None))


# -- report ------------------------------------------------------------------------

def oracle_report(region: Region, L: int, margin: int = 2, mu: float | None = None) -> dict:
    """Geometric counts next to the rank oracle for ``region`` on an ``L`` torus."""
    code = TorusCode(L)
    bip = bipartition_from_region(code, region, margin=margin)
    counts = count_features(region)
    rank = log2_GAB(code, bip)
    report = {
        "label": region.label,
        "L": L,
        "p": counts.p,
        "alpha": counts.alpha,
        "holes": counts.holes,
        "loops": counts.loops,
        "s_direct": counts.s_direct,
        "log2_GAB": rank,
        "statevector_entropy": None,
        "correction": counts.s_direct - rank,
    }
    if code.n_spins <= MAX_DENSE_SPINS:
        weights = None if mu is None else tension_weights(code, bip, mu)
        report["statevector_entropy"] = statevector_entropy(code, bip, weights)
        if mu is not None:
            report["mu"] = mu
            report["gstate_entropy"] = gstate_entropy_formula(code, bip, weights)
    return report
