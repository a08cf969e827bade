import itertools
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, strategies as st

from planarmatch.graph_core import (ColourAssignment, Injection, PlanarMatching, make_rng,
                                    sample_colouring, sample_injection,
                                    sample_injection_values, segment, validate_planar)


def within_3se(count, total, p):
    se = math.sqrt(p * (1 - p) / total)
    return abs(count / total - p) <= 3 * se


# -- validate_planar -------------------------------------------------------

def test_figure_matching_is_planar():
    m = PlanarMatching(((1, 2), (4, 3), (5, 5), (7, 6), (9, 7)))
    assert validate_planar(m)


def test_empty_matching_is_planar():
    assert validate_planar(PlanarMatching())


def test_crossing_pair_is_not_planar():
    assert not validate_planar(PlanarMatching(((1, 2), (2, 1))))


def test_out_of_range_is_rejected():
    assert not validate_planar(PlanarMatching(((1, 1), (2, 5))), n_bottom=4, n_top=4)
    assert not validate_planar(PlanarMatching(((0, 1),)))


@given(st.lists(st.tuples(st.integers(1, 30), st.integers(1, 30)), max_size=8))
def test_planarity_is_order_insensitive_after_sort(edges):
    canon = sorted(edges)
    shuffled = list(reversed(edges))
    assert validate_planar(canon) == validate_planar(sorted(shuffled))
    bottoms = [i for i, _ in edges]
    tops = [j for _, j in edges]
    if len(set(bottoms)) < len(bottoms) or len(set(tops)) < len(tops):
        assert not validate_planar(canon)
    else:
        by_bottom = [j for _, j in sorted(edges)]
        assert validate_planar(canon) == (by_bottom == sorted(by_bottom))


# -- colourings --------------------------------------------------------------

def test_single_colour_everywhere():
    c = sample_colouring(5, 1, 3)
    assert (c.colour == 1).all()


def test_colouring_is_deterministic():
    assert np.array_equal(sample_colouring(6, 4, 11).colour, sample_colouring(6, 4, 11).colour)
    assert not np.array_equal(sample_colouring(6, 4, 11).colour, sample_colouring(6, 4, 12).colour)


@pytest.mark.parametrize("n,r", [(0, 2), (2, 0)])
def test_colouring_rejects_empty_parameters(n, r):
    with pytest.raises(ValueError):
        sample_colouring(n, r, 0)


def test_colouring_is_uniform_over_16_grids():
    rng = make_rng(2024)
    total = 100_000
    counts = Counter(tuple(sample_colouring(2, 2, rng).colour.ravel()) for _ in range(total))
    assert len(counts) == 16
    assert all(within_3se(counts[g], total, 1 / 16)
               for g in itertools.product((1, 2), repeat=4))


def test_colour_assignment_validates_labels():
    with pytest.raises(ValueError):
        ColourAssignment(n=2, r=2, colour=np.array([[1, 3], [1, 1]]))
    c = ColourAssignment.from_rows([[1, 2], [2, 1]])
    assert c(1, 2) == 2 and c.r == 2 and c.alpha == 1.0
    with pytest.raises(ValueError):
        c.colour[0, 0] = 2


# -- injections --------------------------------------------------------------

def test_only_injection_of_one_point():
    assert sample_injection(1, 1, 5).pi == (1,)


def test_injection_rejects_n_above_k():
    with pytest.raises(ValueError):
        sample_injection(4, 3, 0)
    with pytest.raises(ValueError):
        Injection(n=2, k=3, pi=(1, 1))


def test_injection_uniform_over_six():
    rng = make_rng(99)
    total = 100_000
    counts = Counter(sample_injection(2, 3, rng).pi for _ in range(total))
    assert set(counts) == set(itertools.permutations(range(1, 4), 2))
    assert all(within_3se(c, total, 1 / 6) for c in counts.values())


@pytest.mark.parametrize("prefix", [(2,), (4, 1), (3, 1, 2)])
def test_prefix_event_probability(prefix):
    rng = make_rng(7)
    total = 60_000
    hits = sum(sample_injection(3, 4, rng).pi[:len(prefix)] == prefix for _ in range(total))
    assert within_3se(hits, total, 1 / math.perm(4, len(prefix)))


def test_injection_invariants_fuzz():
    rng = make_rng(1)
    for _ in range(100_000):
        n = int(rng.integers(1, 9))
        k = n + int(rng.integers(0, 9))
        pi = sample_injection_values(n, k, rng)
        assert len(set(pi.tolist())) == n
        assert pi.min() >= 1 and pi.max() <= k


def test_sparse_and_dense_pools_agree():
    # the sparse path is taken for k > 2**16 and k > 4n
    n, k = 50, 100_000
    swaps_rng, check_rng = make_rng(3), make_rng(3)
    got = sample_injection_values(n, k, swaps_rng)
    swaps = check_rng.integers(np.arange(n), k)
    pool = list(range(1, k + 1))
    for i, j in enumerate(swaps.tolist()):
        pool[i], pool[j] = pool[j], pool[i]
    expect = pool[:n]
    assert got.tolist() == expect
    assert len(set(expect)) == n


def test_trial_streams_are_independent_of_order():
    a = [make_rng(5, i).integers(0, 1 << 30) for i in range(4)]
    b = [make_rng(5, i).integers(0, 1 << 30) for i in reversed(range(4))][::-1]
    assert a == b
    assert len(set(a)) == 4


# -- segmentation ------------------------------------------------------------

def test_exact_division():
    seg = segment(10, 5, 10, 5)
    assert seg.blocks_bottom == (range(1, 6), range(6, 11))


def test_remainder_folded_into_last_block():
    seg = segment(10, 4, 10, 4)
    assert seg.I == 2
    assert seg.blocks_bottom == (range(1, 5), range(5, 11))


def test_single_block():
    assert segment(7, 7, 7, 7).blocks_bottom == (range(1, 8),)


@pytest.mark.parametrize("args", [(10, 0, 10, 1), (10, 11, 10, 1), (10, 2, 10, 3), (10, 2, 10, 0)])
def test_segment_rejects_bad_widths(args):
    with pytest.raises(ValueError):
        segment(*args)


@given(st.integers(1, 200), st.data())
def test_segmentation_blocks(n, data):
    t = data.draw(st.integers(1, n))
    k = data.draw(st.integers(n, 3 * n))
    s = data.draw(st.integers(1, t * k // n))
    seg = segment(n, t, k, s)
    assert seg.I == n // t
    for blocks, width, size in ((seg.blocks_bottom, t, n), (seg.blocks_top, s, k)):
        assert all(len(b) == width for b in blocks[:-1])
        assert width <= len(blocks[-1]) <= 2 * width - 1
        assert [x for b in blocks for x in b] == list(range(1, size + 1))
    if s * n == t * k:
        assert seg.I == seg.J
