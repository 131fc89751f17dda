"""Brute-force reference answers by linear scan."""

from __future__ import annotations

from typing import Dict, Hashable, Iterator

from .intervals import Segment, make_segment


class SegmentBag:
    """Flat id-keyed collection of segments. Ground truth for differential tests."""

    def __init__(self, segments=()):
        self._segments: Dict[Hashable, Segment] = {}
        for seg in segments:
            self.insert(seg)

    def __len__(self) -> int:
        return len(self._segments)

    def __iter__(self) -> Iterator[Segment]:
        return iter(self._segments.values())

    def __contains__(self, id) -> bool:
        return id in self._segments

    def get(self, id):
        return self._segments.get(id)

    def insert(self, seg: Segment) -> None:
        seg = make_segment(*seg)
        if seg.id in self._segments:
            raise KeyError(f"duplicate segment id {seg.id!r}")
        self._segments[seg.id] = seg

    def delete(self, id) -> bool:
        return self._segments.pop(id, None) is not None

    def stab(self, x) -> set:
        return {s.id for s in self._segments.values() if s.lo <= x <= s.hi}

    def range(self, lo, hi) -> set:
        if not lo < hi:
            raise ValueError(f"query range [{lo},{hi}] is degenerate")
        return {s.id for s in self._segments.values() if s.lo <= hi and lo <= s.hi}


def oracle_stab(bag: SegmentBag, x) -> set:
    return bag.stab(x)


def oracle_range(bag: SegmentBag, q) -> set:
    return bag.range(q[0], q[1])
