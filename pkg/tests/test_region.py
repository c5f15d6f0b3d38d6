import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import brute
from fractent.errors import PinchedBoundary
from fractent.region import (Cell, Edge, Region, adjacent_square_counts, boundary_edges,
                             bounded_complement_components, connected_components,
                             count_adjacent_squares, count_features,
                             count_inward_angles_by_turns, count_loops, perimeter)


def rect(w, h, x0=0, y0=0):
    return Region(np.ones((h, w), dtype=bool), (x0, y0))


RING = Region.from_cells([(x, y) for x in range(3) for y in range(3) if (x, y) != (1, 1)])
DIAGONAL = Region.from_cells([(0, 0), (1, 1)])


# -- construction -------------------------------------------------------------------

def test_mask_is_trimmed_and_origin_shifted():
    m = np.zeros((5, 6), dtype=bool)
    m[2, 3] = m[3, 4] = True
    r = Region(m, origin=(10, 20))
    assert r.origin == (13, 22)
    assert r.shape == (2, 2)
    assert r.cells() == {Cell(13, 22), Cell(14, 23)}


def test_caller_mask_not_frozen_or_aliased():
    m = np.ones((2, 2), dtype=bool)
    r = Region(m)
    m[0, 0] = False
    assert len(r) == 4
    assert m.flags.writeable


def test_empty_region():
    r = Region.from_cells([])
    assert len(r) == 0
    c = count_features(r)
    assert (c.p, c.alpha, c.holes, c.s_direct, c.loops) == (0, 0, 0, 0, 0)
    assert c.s_over_p is None


def test_contains_iter_and_coords():
    r = Region.from_cells([(2, 1), (0, 0), (1, 0)])
    assert (1, 0) in r and (1, 1) not in r and (99, 99) not in r
    assert list(r) == [Cell(0, 0), Cell(1, 0), Cell(2, 1)]
    xs, ys = r.coords()
    assert sorted(zip(xs.tolist(), ys.tolist())) == [(0, 0), (1, 0), (2, 1)]


def test_equality_and_hash_ignore_label():
    a = Region.from_cells([(0, 0), (1, 0)], label="a")
    b = Region.from_cells([(1, 0), (0, 0)], label="b")
    assert a == b and hash(a) == hash(b)
    assert a != a.translate(1, 0)


def test_translate_and_canonical():
    r = Region.from_cells([(5, 7), (6, 7)])
    assert r.translate(-5, -7).origin == (0, 0)
    assert r.canonical() == r.translate(-5, -7)
    assert r.bbox() == (5, 7, 7, 8)


def test_periodic_membership_wraps():
    r = Region.from_cells([(0, 0)], period=3)
    assert (3, 3) in r and (-3, 0) in r and (1, 0) not in r
    with pytest.raises(ValueError):
        Region(np.ones((2, 3), dtype=bool), period=3)


def test_periodic_translate_rolls():
    r = Region.from_cells([(0, 0)], period=4)
    assert r.translate(1, 2).cells() == {Cell(1, 2)}
    assert r.translate(5, 6).cells() == {Cell(1, 2)}


def test_complement_in_bbox():
    comp = RING.complement_in_bbox()
    assert comp.cells() == {Cell(1, 1)}
    assert len(RING.complement_in_bbox(pad=1)) == 25 - 8


# -- edges and counts -------------------------------------------------------------

def test_edge_cells_and_vertices():
    assert Edge("h", 2, 3).cells() == (Cell(2, 2), Cell(2, 3))
    assert Edge("v", 2, 3).cells() == (Cell(1, 3), Cell(2, 3))
    assert Edge("v", 2, 3).vertices() == ((2, 3), (2, 4))


def test_single_cell():
    r = Region.from_cells([(4, -2)])
    assert boundary_edges(r) == {Edge("h", 4, -2), Edge("h", 4, -1), Edge("v", 4, -2), Edge("v", 5, -2)}
    c = count_features(r)
    assert (c.p, c.alpha, c.holes, c.s_direct, c.loops) == (4, 0, 0, 4, 1)


@pytest.mark.parametrize("w,h", [(1, 1), (2, 3), (3, 3), (5, 2), (7, 7)])
def test_rectangles_have_s_equal_p(w, h):
    c = count_features(rect(w, h))
    assert c.p == 2 * (w + h) == c.s_direct
    assert c.alpha == c.holes == 0


def test_ring_has_one_unit_hole_two_loops():
    c = count_features(RING)
    assert (c.p, c.alpha, c.holes, c.s_direct, c.loops) == (16, 0, 1, 13, 2)


def test_l_tromino():
    c = count_features(Region.from_cells([(0, 0), (1, 0), (0, 1)]))
    assert (c.p, c.alpha, c.holes, c.s_direct) == (8, 1, 0, 7)


def test_strait_counts_once():
    # two cells with a one-cell gap between them: the gap touches two opposite sides
    c = count_features(Region.from_cells([(0, 0), (2, 0)]))
    assert (c.p, c.alpha, c.s_direct) == (8, 1, 7)


def test_adjacent_square_counts():
    k = adjacent_square_counts(RING)
    assert k[Cell(1, 1)] == 4
    assert k[Cell(-1, 0)] == 1
    assert len(k) == count_adjacent_squares(RING) == 13


def test_perimeter_matches_edge_set():
    r = Region.from_cells(brute.random_polyomino(random.Random(3), 30))
    assert perimeter(r) == len(boundary_edges(r))


def test_diagonal_pair_shares_a_loop():
    assert count_loops(DIAGONAL) == 1
    assert count_features(DIAGONAL).s_direct == 6


def test_holes_meeting_at_a_corner_are_separate_loops():
    r = Region.from_cells([(x, y) for x in range(4) for y in range(4) if (x, y) not in {(1, 1), (2, 2)}])
    assert count_loops(r) == 3


def test_hole_pinched_to_the_outside_is_its_own_loop():
    # ring with one corner cell removed diagonally next to the hole
    cells = [(x, y) for x in range(3) for y in range(3) if (x, y) not in {(1, 1), (2, 2)}]
    assert count_loops(Region.from_cells(cells)) == 2


def test_periodic_chessboard_counts():
    idx = np.arange(4)
    board = Region((idx[:, None] + idx[None, :]) % 2 == 0, period=4)
    c = count_features(board)
    assert (c.p, c.alpha, c.holes, c.s_direct) == (32, 0, 8, 8)
    assert c.s_over_p == Fraction(1, 4)
    assert c.loops == 8     # one curve around each empty square


def test_periodic_full_board_has_no_boundary():
    c = count_features(Region(np.ones((3, 3), dtype=bool), period=3))
    assert c.p == 0 and c.loops == 0


def test_as_dict():
    d = count_features(RING).as_dict()
    assert d == {"p": 16, "alpha": 0, "holes": 1, "s_direct": 13, "loops": 2, "s_over_p": "13/16"}


# -- turn walker --------------------------------------------------------------------

def test_turns_on_simple_shapes():
    assert count_inward_angles_by_turns(rect(3, 2)) == 0
    assert count_inward_angles_by_turns(Region.from_cells([(0, 0), (1, 0), (0, 1)])) == 1
    plus = Region.from_cells([(1, 0), (0, 1), (1, 1), (2, 1), (1, 2)])
    assert count_inward_angles_by_turns(plus) == 4 == count_features(plus).alpha


def test_turns_skip_unit_holes():
    assert count_inward_angles_by_turns(RING) == 0


def test_turns_count_big_hole_corners():
    frame = Region.from_cells([(x, y) for x in range(4) for y in range(4)
                               if x in (0, 3) or y in (0, 3)])
    assert count_inward_angles_by_turns(frame) == 4 == count_features(frame).alpha


def test_pinch_raises_then_resolves():
    with pytest.raises(PinchedBoundary):
        count_inward_angles_by_turns(DIAGONAL)
    # turning right at the pinch keeps both cells on one loop: two reflex turns
    assert count_inward_angles_by_turns(DIAGONAL, resolve_pinches=True) == 2


# -- components ---------------------------------------------------------------------

def test_connected_components_sorted():
    comps = connected_components([(5, 5), (0, 0), (1, 0), (6, 5)])
    assert comps == [frozenset({Cell(0, 0), Cell(1, 0)}), frozenset({Cell(5, 5), Cell(6, 5)})]
    assert len(connected_components(DIAGONAL)) == 2


def test_bounded_complement_components():
    frame = Region.from_cells([(x, y) for x in range(4) for y in range(4)
                               if x in (0, 3) or y in (0, 3)])
    holes = bounded_complement_components(frame)
    assert holes == [frozenset({Cell(1, 1), Cell(2, 1), Cell(1, 2), Cell(2, 2)})]
    assert bounded_complement_components(rect(3, 3)) == []


# -- against the brute-force oracle ------------------------------------------------

def test_random_polyominoes_match_brute_force():
    rng = random.Random(20240601)
    for _ in range(300):
        cells = brute.random_polyomino(rng, rng.randint(1, 40))
        r = Region.from_cells(cells)
        c = count_features(r)
        assert (c.p, c.alpha, c.holes, c.s_direct) == brute.features(cells)
        assert c.loops == brute.loops(cells)
        assert boundary_edges(r) == {Edge(*e) for e in brute.boundary_edge_set(cells)}


def test_random_sparse_sets_match_brute_force():
    rng = random.Random(7)
    for _ in range(200):
        cells = brute.random_cell_set(rng, 8, 8, rng.uniform(0.1, 0.9))
        c = count_features(Region.from_cells(cells))
        assert (c.p, c.alpha, c.holes, c.s_direct) == brute.features(cells)
        assert c.loops == brute.loops(cells)


cell_sets = st.sets(st.tuples(st.integers(-6, 6), st.integers(-6, 6)), min_size=1, max_size=40)


@settings(max_examples=200, deadline=None)
@given(cell_sets, st.integers(-50, 50), st.integers(-50, 50))
def test_counts_translation_invariant(cells, dx, dy):
    r = Region.from_cells(cells)
    assert count_features(r) == count_features(r.translate(dx, dy))


@settings(max_examples=200, deadline=None)
@given(cell_sets)
def test_identity_and_ratio_bounds(cells):
    c = count_features(Region.from_cells(cells))
    assert c.s_direct == c.p - c.alpha - 3 * c.holes
    assert Fraction(1, 4) <= c.s_over_p <= 1


@settings(max_examples=100, deadline=None)
@given(cell_sets)
def test_counts_invariant_under_quarter_turn(cells):
    turned = {(-y, x) for x, y in cells}
    assert count_features(Region.from_cells(cells)) == count_features(Region.from_cells(turned))
