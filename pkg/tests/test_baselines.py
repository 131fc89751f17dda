import itertools
import random

import pytest
from hypothesis import given, strategies as st

from bitstree import Segment, SegmentBag
from bitstree.baselines import (
    DynamicSegmentTree,
    RangeExceededError,
    StaticSegmentTree,
    dst_delete,
    dst_insert,
    dst_new,
    dst_stab,
    sst_build,
    sst_stab,
)

from conftest import FIGURE_SEGMENTS


@pytest.fixture
def sst():
    return sst_build(FIGURE_SEGMENTS)


@pytest.fixture
def dst():
    tree = dst_new(5, 21)
    for seg in FIGURE_SEGMENTS:
        dst_insert(tree, seg)
    return tree


def test_sst_table_values(sst):
    stats = sst.stats()
    assert (stats.node_count, stats.height, stats.cumulative_list_size) == (13, 3, 4)


def test_dst_table_values(dst):
    stats = dst.stats()
    assert (stats.node_count, stats.height, stats.cumulative_list_size) == (31, 4, 8)


def test_stab_cost_examples(sst, dst):
    assert sst_stab(sst, 15).nodes_visited == 7
    assert dst_stab(dst, 13).nodes_visited == 9
    assert max(sst.stab(x).nodes_visited for x in range(0, 25)) == 7
    assert max(dst.stab(x).nodes_visited for x in range(0, 25)) == 9


def test_single_segment_sst():
    assert sst_build([Segment("s", 0, 1)]).node_count == 5


def test_shared_endpoints_shrink_sst():
    segs = [Segment("x", 0, 4), Segment("y", 4, 8), Segment("z", 0, 8)]
    assert sst_build(segs).node_count < 4 * len(segs) + 1


def test_sst_rejects_empty_and_duplicates():
    with pytest.raises(ValueError):
        sst_build([])
    with pytest.raises(KeyError):
        sst_build([Segment("x", 0, 1), Segment("x", 2, 3)])


def test_dst_range_exceeded(dst):
    with pytest.raises(RangeExceededError):
        dst.insert(Segment("e", 3, 8))
    with pytest.raises(RangeExceededError):
        dst.insert(Segment("e", 20, 22))
    assert dst.segment_count == 3


def test_dst_delete(dst):
    assert dst_delete(dst, Segment("a", 5, 12))
    assert not dst_delete(dst, Segment("a", 5, 12))
    assert dst.node_count == 31
    assert dst.stab(6).output_segments == set()
    with pytest.raises(ValueError):
        dst.delete(Segment("b", 10, 14))


def test_out_of_bounds_stab(dst):
    trace = dst.stab(40)
    assert trace.output_segments == set() and trace.nodes_visited == 1


def test_figure_queries_match_oracle(sst, dst):
    bag = SegmentBag(FIGURE_SEGMENTS)
    for x in range(0, 25):
        assert sst.stab(x).output_segments == bag.stab(x)
    for x in range(5, 22):
        assert dst.stab(x).output_segments == bag.stab(x)
    for lo, hi in itertools.combinations(range(4, 23), 2):
        assert sst.range_query(lo, hi).output_segments == bag.range(lo, hi)
        assert dst.range_query(lo, hi).output_segments == bag.range(lo, hi)


@pytest.mark.parametrize("leaves", range(1, 40))
def test_dst_height_and_node_count(leaves):
    tree = DynamicSegmentTree(0, leaves + 1)
    width = leaves + 1
    assert tree.node_count == 2 * width - 1
    assert tree.height == (width - 1).bit_length()
    assert sorted(tree.parents()).count(-1) == 1


segment_sets = st.lists(
    st.tuples(st.integers(0, 30), st.integers(1, 12)).map(lambda t: (t[0], t[0] + t[1])),
    min_size=1,
    max_size=10,
)


@given(segment_sets)
def test_queries_match_oracle(spans):
    segs = [Segment(i, lo, hi) for i, (lo, hi) in enumerate(spans)]
    bag = SegmentBag(segs)
    sst = StaticSegmentTree(segs)
    dst = DynamicSegmentTree(0, 42)
    for seg in segs:
        dst.insert(seg)
    for x in range(0, 43):
        assert sst.stab(x).output_segments == bag.stab(x)
        assert dst.stab(x).output_segments == bag.stab(x)
    for lo in range(0, 42, 5):
        assert dst.range_query(lo, lo + 3).output_segments == bag.range(lo, lo + 3)
        assert sst.range_query(lo, lo + 3).output_segments == bag.range(lo, lo + 3)


@given(segment_sets)
def test_canonical_cover(spans):
    """Each segment sits on disjoint maximal slabs whose union is the segment."""
    segs = [Segment(i, lo, hi) for i, (lo, hi) in enumerate(spans)]
    for tree in (StaticSegmentTree(segs), DynamicSegmentTree(0, 42)):
        if isinstance(tree, DynamicSegmentTree):
            for seg in segs:
                tree.insert(seg)
        parent = tree.parents()
        slabs = _slabs(tree)
        for seg in segs:
            nodes = tree.canonical_nodes(seg.id)
            covered = sorted(slabs[k] for k in nodes)
            assert covered[0][0] == seg.lo and covered[-1][1] == seg.hi
            for (_, b), (c, _) in zip(covered, covered[1:]):
                assert b == c
            for k in nodes:
                # maximal: the parent's slab is not inside the segment
                p = parent[k]
                if p >= 0:
                    assert not (seg.lo <= slabs[p][0] and slabs[p][1] <= seg.hi)


def _slabs(tree):
    out = [None] * tree.node_count
    stack = [(0, 0, tree.leaves - 1)]
    while stack:
        k, a, b = stack.pop()
        out[k] = (tree.bounds[a], tree.bounds[b + 1])
        if a != b:
            mid = (a + b) // 2
            stack.append((k + 1, a, mid))
            stack.append((k + 2 * (mid - a + 1), mid + 1, b))
    return out


@pytest.mark.parametrize("n1, n2", [(0, 4), (5, 21), (10, 13)])
def test_segment_count_limit_with_distinct_endpoints(n1, n2):
    """At most n2 - n1 segments with pairwise distinct endpoints fit in [n1, n2]."""
    points = list(range(n1, n2 + 1))
    capacity = len(points) // 2
    assert capacity <= n2 - n1
    # capacity is attained
    rng = random.Random(n1)
    rng.shuffle(points)
    tree = DynamicSegmentTree(n1, n2)
    for i in range(capacity):
        lo, hi = sorted(points[2 * i : 2 * i + 2])
        tree.insert(Segment(i, lo, hi))
    assert tree.segment_count == capacity
    # one more distinct-endpoint segment needs a coordinate outside the range
    used = {p for s in tree._segments.values() for p in (s.lo, s.hi)}
    free = [p for p in range(n1, n2 + 1) if p not in used]
    assert len(free) < 2
    with pytest.raises(RangeExceededError):
        tree.insert(Segment("extra", n2, n2 + 1))
