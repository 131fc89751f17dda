"""Closed-interval arithmetic shared by every tree in the package.

Coordinates are exact (integers in practice); no tolerance is applied to any
endpoint comparison. The empty range is represented by ``None``.
"""

from __future__ import annotations

import enum
from typing import AbstractSet, Hashable, NamedTuple, Optional


class Interval(NamedTuple):
    lo: int
    hi: int

    def __str__(self) -> str:
        return f"[{self.lo},{self.hi}]"


class Segment(NamedTuple):
    """A stored closed interval ``[lo, hi]`` with ``lo < hi`` and a unique id."""

    id: Hashable
    lo: int
    hi: int

    @property
    def interval(self) -> Interval:
        return Interval(self.lo, self.hi)


def make_segment(id: Hashable, lo: int, hi: int) -> Segment:
    if not lo < hi:
        raise ValueError(f"segment {id!r} must satisfy lo < hi, got [{lo},{hi}]")
    return Segment(id, lo, hi)


class Relation(enum.Enum):
    LEFT_OF = "left-of"
    RIGHT_OF = "right-of"
    LEFT_OVERLAPS = "left-overlaps"
    RIGHT_OVERLAPS = "right-overlaps"
    CONTAINED_IN = "contained-in"
    COVERS = "covers"
    EQUAL = "equal"


class Partition(NamedTuple):
    left: Optional[Interval]
    center: Interval
    right: Optional[Interval]
    left_ids: frozenset
    center_ids: frozenset
    right_ids: frozenset


def _check(*ranges) -> None:
    for r in ranges:
        if r is None:
            raise ValueError("empty range is not a valid argument here")
        if not r[0] < r[1]:
            raise ValueError(f"range [{r[0]},{r[1]}] is degenerate")


def compare_intervals(s, t) -> int:
    """Return -1 if ``s`` lies left of ``t``, 1 if right of it, 0 if the interiors meet.

    Touching endpoints count as left/right, so ``[5,10]`` is left of ``[10,12]``.
    """
    _check(s, t)
    if s[1] <= t[0]:
        return -1
    if t[1] <= s[0]:
        return 1
    return 0


def classify_overlap(s, t) -> Relation:
    _check(s, t)
    p, q = s[0], s[1]
    m, n = t[0], t[1]
    if q <= m:
        return Relation.LEFT_OF
    if n <= p:
        return Relation.RIGHT_OF
    if p == m and q == n:
        return Relation.EQUAL
    if p < m < q < n:
        return Relation.LEFT_OVERLAPS
    if m < p < n < q:
        return Relation.RIGHT_OVERLAPS
    if m <= p and q <= n:
        return Relation.CONTAINED_IN
    return Relation.COVERS


def interval_union(s, t) -> Interval:
    _check(s, t)
    return Interval(min(s[0], t[0]), max(s[1], t[1]))


def interval_intersection(s, t) -> Optional[Interval]:
    """Common part of two ranges, or ``None`` when the interiors do not meet."""
    if s is None or t is None:
        return None
    lo, hi = max(s[0], t[0]), min(s[1], t[1])
    if lo >= hi:
        return None
    return Interval(lo, hi)


def partition(s, s_ids: AbstractSet, t, t_ids: AbstractSet) -> Partition:
    """Split ``s ∪ t`` into left, center and right parts with their id-sets.

    The center is the intersection and carries both lists. An outer part
    carries the list of whichever input sticks out on that side, and is
    ``None`` (with an empty list) when both inputs share that endpoint.
    """
    p, q = s[0], s[1]
    m, n = t[0], t[1]
    if not (p < q and m < n):
        raise ValueError(f"cannot partition degenerate ranges {s} and {t}")
    if q <= m or n <= p:
        raise ValueError(f"cannot partition disjoint ranges {s} and {t}")
    s_ids = frozenset(s_ids)
    t_ids = frozenset(t_ids)
    center = Interval(max(p, m), min(q, n))

    if p < m:
        left, left_ids = Interval(p, m), s_ids
    elif m < p:
        left, left_ids = Interval(m, p), t_ids
    else:
        left, left_ids = None, frozenset()

    if n < q:
        right, right_ids = Interval(n, q), s_ids
    elif q < n:
        right, right_ids = Interval(q, n), t_ids
    else:
        right, right_ids = None, frozenset()

    return Partition(left, center, right, left_ids, s_ids | t_ids, right_ids)
