"""Standard segment trees used as comparison baselines.

Both trees are balanced binary trees over elementary slabs. A segment is
recorded on its canonical cover: the maximal nodes whose slab lies inside
it. A stabbing query walks from the root down to every leaf whose closed
slab contains the query point, so a point on a slab boundary that splits at
an inner node follows two paths.

Nodes are numbered in preorder: the left child of node ``k`` is ``k + 1``
and its right child is ``k + 2 * (size of left half)``. That numbering
uses exactly ``2 * leaves - 1`` indices.
"""

from __future__ import annotations

import math
from typing import Dict, Hashable, List, Sequence

from .intervals import Segment, make_segment
from .tree import QueryTrace, TreeStats


class RangeExceededError(ValueError):
    """Segment falls outside the fixed range of a dynamic segment tree."""


class _SlabTree:
    def __init__(self, bounds: Sequence):
        # leaf i covers the closed slab [bounds[i], bounds[i + 1]]
        self.bounds = list(bounds)
        self.leaves = len(self.bounds) - 1
        self.lists: List[set] = [set() for _ in range(2 * self.leaves - 1)]
        self._segments: Dict[Hashable, Segment] = {}

    @property
    def node_count(self) -> int:
        return len(self.lists)

    @property
    def height(self) -> int:
        return (self.leaves - 1).bit_length()

    @property
    def segment_count(self) -> int:
        return len(self._segments)

    def stats(self) -> TreeStats:
        return TreeStats(
            node_count=self.node_count,
            height=self.height,
            cumulative_list_size=sum(len(ids) for ids in self.lists),
            segment_count=self.segment_count,
        )

    def _cover(self, seg: Segment, add: bool) -> None:
        bounds = self.bounds
        stack = [(0, 0, self.leaves - 1)]
        while stack:
            k, a, b = stack.pop()
            lo, hi = bounds[a], bounds[b + 1]
            if seg.lo <= lo and hi <= seg.hi:
                if add:
                    self.lists[k].add(seg.id)
                else:
                    self.lists[k].discard(seg.id)
                continue
            mid = (a + b) // 2
            # children whose slab interior meets the segment
            if seg.lo < bounds[mid + 1] and lo < seg.hi:
                stack.append((k + 1, a, mid))
            if bounds[mid + 1] < seg.hi and seg.lo < hi:
                stack.append((k + 2 * (mid - a + 1), mid + 1, b))

    def stab(self, x) -> QueryTrace:
        trace = QueryTrace()
        bounds = self.bounds
        if not bounds[0] <= x <= bounds[-1]:
            trace.nodes_visited = 1  # the root's range rules x out
            return trace
        stack = [(0, 0, self.leaves - 1)]
        while stack:
            k, a, b = stack.pop()
            trace.nodes_visited += 1
            trace.output_segments.update(self.lists[k])
            if a == b:
                continue
            mid = (a + b) // 2
            split = bounds[mid + 1]
            if x <= split:
                stack.append((k + 1, a, mid))
            if x >= split:
                stack.append((k + 2 * (mid - a + 1), mid + 1, b))
        return trace

    def range_query(self, lo, hi) -> QueryTrace:
        """Collect lists from every node whose closed slab meets ``[lo, hi]``.

        Without threads this is a pruned traversal; its cost grows with the
        number of nodes spanned.
        """
        if not lo < hi:
            raise ValueError(f"query range [{lo},{hi}] is degenerate")
        trace = QueryTrace()
        bounds = self.bounds
        stack = [(0, 0, self.leaves - 1)]
        while stack:
            k, a, b = stack.pop()
            if bounds[a] > hi or bounds[b + 1] < lo:
                continue
            trace.nodes_visited += 1
            trace.output_segments.update(self.lists[k])
            if a != b:
                mid = (a + b) // 2
                stack.append((k + 1, a, mid))
                stack.append((k + 2 * (mid - a + 1), mid + 1, b))
        return trace

    def canonical_nodes(self, id) -> List[int]:
        return [k for k, ids in enumerate(self.lists) if id in ids]

    def parents(self) -> List[int]:
        """Parent index of every node (-1 for the root)."""
        parent = [-1] * self.node_count
        stack = [(0, 0, self.leaves - 1)]
        while stack:
            k, a, b = stack.pop()
            if a == b:
                continue
            mid = (a + b) // 2
            left, right = k + 1, k + 2 * (mid - a + 1)
            parent[left] = parent[right] = k
            stack.append((left, a, mid))
            stack.append((right, mid + 1, b))
        return parent


class StaticSegmentTree(_SlabTree):
    """Segment tree built once over the endpoints of a fixed segment set.

    The slabs are the gaps between consecutive distinct endpoints plus two
    unbounded outer slabs, giving ``4n + 1`` nodes for ``n`` segments with
    distinct endpoints.
    """

    def __init__(self, segments):
        segments = [make_segment(*s) for s in segments]
        if not segments:
            raise ValueError("a static segment tree needs at least one segment")
        points = sorted({p for s in segments for p in (s.lo, s.hi)})
        super().__init__([-math.inf, *points, math.inf])
        for seg in segments:
            if seg.id in self._segments:
                raise KeyError(f"duplicate segment id {seg.id!r}")
            self._segments[seg.id] = seg
            self._cover(seg, add=True)


class DynamicSegmentTree(_SlabTree):
    """Segment tree over the unit slabs of a fixed integer range ``[lo, hi]``.

    The whole skeleton (``2 * (hi - lo) - 1`` nodes) exists from the start.
    Segments may be inserted and deleted, but only inside the range.
    """

    def __init__(self, lo: int, hi: int):
        if not lo < hi:
            raise ValueError(f"dynamic segment tree range [{lo},{hi}] is degenerate")
        self.lo, self.hi = lo, hi
        super().__init__(range(lo, hi + 1))

    def insert(self, seg) -> None:
        seg = make_segment(*seg)
        if seg.lo < self.lo or seg.hi > self.hi:
            raise RangeExceededError(
                f"segment {seg.id!r} [{seg.lo},{seg.hi}] exceeds tree range [{self.lo},{self.hi}]"
            )
        if seg.id in self._segments:
            raise KeyError(f"segment id {seg.id!r} is already stored")
        self._segments[seg.id] = seg
        self._cover(seg, add=True)

    def delete(self, seg) -> bool:
        seg = make_segment(*seg)
        stored = self._segments.get(seg.id)
        if stored is None:
            return False
        if (stored.lo, stored.hi) != (seg.lo, seg.hi):
            raise ValueError(
                f"segment {seg.id!r} is stored as [{stored.lo},{stored.hi}], not [{seg.lo},{seg.hi}]"
            )
        del self._segments[seg.id]
        self._cover(stored, add=False)
        return True


def sst_build(segments) -> StaticSegmentTree:
    return StaticSegmentTree(segments)


def sst_stab(tree: StaticSegmentTree, x) -> QueryTrace:
    return tree.stab(x)


def dst_new(lo: int, hi: int) -> DynamicSegmentTree:
    return DynamicSegmentTree(lo, hi)


def dst_insert(tree: DynamicSegmentTree, seg) -> None:
    tree.insert(seg)


def dst_delete(tree: DynamicSegmentTree, seg) -> bool:
    return tree.delete(seg)


def dst_stab(tree: DynamicSegmentTree, x) -> QueryTrace:
    return tree.stab(x)
