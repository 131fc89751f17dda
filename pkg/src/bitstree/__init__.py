"""Balanced inorder-threaded segment trees (BITS-trees) and baseline segment trees."""

from .intervals import (
    Interval,
    Partition,
    Relation,
    Segment,
    classify_overlap,
    compare_intervals,
    interval_intersection,
    interval_union,
    make_segment,
    partition,
)
from .oracle import SegmentBag, oracle_range, oracle_stab
from .tree import BitsTree, QueryTrace, TreeStats, new_tree

__all__ = [
    "BitsTree",
    "Interval",
    "Partition",
    "QueryTrace",
    "Relation",
    "Segment",
    "SegmentBag",
    "TreeStats",
    "classify_overlap",
    "compare_intervals",
    "interval_intersection",
    "interval_union",
    "make_segment",
    "new_tree",
    "oracle_range",
    "oracle_stab",
    "partition",
]
