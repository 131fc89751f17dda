"""Workload generation and replay, plus side-by-side structure comparisons.

Everything here produces plain dict records so the command line can print
them as one JSON object per line.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Optional, Union

from .baselines import DynamicSegmentTree, RangeExceededError, StaticSegmentTree
from .intervals import Interval, Segment, make_segment
from .oracle import SegmentBag
from .tree import BitsTree

WORKLOAD_DESCRIPTION = (
    "op kind uniform over insert/delete/stab/range; endpoints uniform over the integer "
    "window; segment length uniform in [1, window/4]; deletions uniform over live ids"
)


class ParseError(ValueError):
    def __init__(self, source: str, line: int, message: str):
        super().__init__(f"{source}:{line}: {message}")
        self.source = source
        self.line = line


@dataclass(frozen=True)
class WorkloadOp:
    kind: str  # insert | delete | stab | range | stats | check
    payload: Union[Segment, int, Interval, str, None] = None
    line: int = 0

    def to_script(self) -> str:
        if self.kind == "insert":
            return f"insert {self.payload.id} {self.payload.lo} {self.payload.hi}"
        if self.kind == "delete":
            seg = self.payload
            return f"delete {seg.id if isinstance(seg, Segment) else seg}"
        if self.kind == "stab":
            return f"stab {self.payload}"
        if self.kind == "range":
            return f"range {self.payload.lo} {self.payload.hi}"
        return self.kind


# ----------------------------------------------------------------------
# file formats


def _lines(text: str):
    for number, raw in enumerate(text.splitlines(), start=1):
        body = raw.split("#", 1)[0].strip()
        if body:
            yield number, body.split()


def _int(token: str, source: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(source, line, f"expected an integer, got {token!r}") from None


def parse_segments(text: str, source: str = "<segments>") -> List[Segment]:
    """Parse ``<id> <lo> <hi>`` records; ``#`` starts a comment."""
    segments, seen = [], set()
    for line, fields in _lines(text):
        if len(fields) != 3:
            raise ParseError(source, line, f"expected '<id> <lo> <hi>', got {' '.join(fields)!r}")
        id_, lo, hi = fields[0], _int(fields[1], source, line), _int(fields[2], source, line)
        if not lo < hi:
            raise ParseError(source, line, f"segment {id_} needs lo < hi, got [{lo},{hi}]")
        if id_ in seen:
            raise ParseError(source, line, f"duplicate segment id {id_!r}")
        seen.add(id_)
        segments.append(Segment(id_, lo, hi))
    return segments


def parse_script(text: str, source: str = "<script>") -> List[WorkloadOp]:
    ops = []
    for line, fields in _lines(text):
        kind, args = fields[0], fields[1:]
        if kind == "insert" and len(args) == 3:
            lo, hi = _int(args[1], source, line), _int(args[2], source, line)
            if not lo < hi:
                raise ParseError(source, line, f"segment {args[0]} needs lo < hi, got [{lo},{hi}]")
            ops.append(WorkloadOp("insert", Segment(args[0], lo, hi), line))
        elif kind == "delete" and len(args) == 1:
            ops.append(WorkloadOp("delete", args[0], line))
        elif kind == "stab" and len(args) == 1:
            ops.append(WorkloadOp("stab", _int(args[0], source, line), line))
        elif kind == "range" and len(args) == 2:
            lo, hi = _int(args[0], source, line), _int(args[1], source, line)
            if not lo < hi:
                raise ParseError(source, line, f"range needs lo < hi, got [{lo},{hi}]")
            ops.append(WorkloadOp("range", Interval(lo, hi), line))
        elif kind in ("stats", "check") and not args:
            ops.append(WorkloadOp(kind, None, line))
        else:
            raise ParseError(source, line, f"unrecognised operation {' '.join(fields)!r}")
    return ops


def load_segments(path) -> List[Segment]:
    path = Path(path)
    return parse_segments(path.read_text(encoding="utf-8"), str(path))


def load_script(path) -> List[WorkloadOp]:
    path = Path(path)
    return parse_script(path.read_text(encoding="utf-8"), str(path))


# ----------------------------------------------------------------------
# random workloads


def random_segment(rng: random.Random, id, window: int) -> Segment:
    length = rng.randint(1, max(1, window // 4))
    lo = rng.randint(0, window - length)
    return Segment(id, lo, lo + length)


def random_workload(n_ops: int, seed: int, window: int = 1000) -> List[WorkloadOp]:
    rng = random.Random(seed)
    live: List[Segment] = []
    ops: List[WorkloadOp] = []
    next_id = 0
    for _ in range(n_ops):
        kind = rng.choice(("insert", "delete", "stab", "range"))
        if kind == "insert":
            seg = random_segment(rng, f"s{next_id}", window)
            next_id += 1
            live.append(seg)
            ops.append(WorkloadOp("insert", seg))
        elif kind == "delete":
            if not live:
                ops.append(WorkloadOp("stab", rng.randint(0, window)))
                continue
            seg = live.pop(rng.randrange(len(live)))
            ops.append(WorkloadOp("delete", seg))
        elif kind == "stab":
            ops.append(WorkloadOp("stab", rng.randint(0, window)))
        else:
            lo = rng.randint(0, window - 1)
            ops.append(WorkloadOp("range", Interval(lo, rng.randint(lo + 1, window))))
    return ops


# ----------------------------------------------------------------------
# differential replay


@dataclass
class Divergence:
    step: int
    op: WorkloadOp
    message: str


def range_walk_bound(tree: BitsTree, lo, hi) -> int:
    """height + (#nodes strictly between the walk's two boundary nodes) + 2.

    The boundary nodes are the first node ending at or after ``lo`` and the
    first node starting beyond ``hi`` (the head sentinel when none does).
    """
    order = list(tree.nodes())
    start = next((i for i, n in enumerate(order) if n.hi >= lo), len(order))
    stop = next((i for i, n in enumerate(order) if n.lo > hi), len(order))
    between = max(0, stop - start - 1)
    return tree.height + between + 2


def replay(
    ops: Iterable[WorkloadOp],
    check: bool = True,
    check_rotations: bool = True,
    check_walk_cost: bool = True,
) -> Optional[Divergence]:
    """Run ops against a BITS-tree and the oracle; return the first disagreement."""
    tree = BitsTree()
    bag = SegmentBag()
    rotation_errors: List[str] = []
    if check_rotations:
        snapshot: Dict[str, list] = {}

        def watch(kind, phase, pivot):
            if phase == "before":
                snapshot["seq"] = tree.inorder()
            elif tree.inorder() != snapshot["seq"]:
                rotation_errors.append(f"{kind} rotation at {pivot} changed the inorder sequence")

        tree.rotation_listeners.append(watch)

    for step, op in enumerate(ops):
        if op.kind == "insert":
            tree.insert(op.payload)
            bag.insert(op.payload)
        elif op.kind == "delete":
            seg = op.payload if isinstance(op.payload, Segment) else bag.get(op.payload)
            if seg is None:
                continue
            got, want = tree.delete(seg), bag.delete(seg.id)
            if got != want:
                return Divergence(step, op, f"delete returned {got}, oracle {want}")
        elif op.kind == "stab":
            got, want = tree.stab(op.payload).output_segments, bag.stab(op.payload)
            if got != want:
                return Divergence(step, op, f"stab {sorted(got)} != oracle {sorted(want)}")
        elif op.kind == "range":
            trace = tree.range_query(*op.payload)
            want = bag.range(*op.payload)
            if trace.output_segments != want:
                return Divergence(
                    step, op, f"range {sorted(trace.output_segments)} != oracle {sorted(want)}"
                )
            if check_walk_cost:
                bound = range_walk_bound(tree, *op.payload)
                if trace.nodes_visited > bound:
                    return Divergence(step, op, f"range walk visited {trace.nodes_visited} > {bound}")
        if rotation_errors:
            return Divergence(step, op, rotation_errors[0])
        if check and op.kind in ("insert", "delete", "check"):
            problem = tree.check_invariants()
            if problem is not None:
                return Divergence(step, op, f"invariant violated: {problem}")
    return None


def shrink(ops: List[WorkloadOp], fails: Callable[[List[WorkloadOp]], bool]) -> List[WorkloadOp]:
    """Greedy chunk removal (ddmin style) keeping ``fails(ops)`` true."""
    ops = list(ops)
    chunk = max(1, len(ops) // 2)
    while chunk >= 1:
        i, removed = 0, False
        while i < len(ops):
            candidate = ops[:i] + ops[i + chunk:]
            if candidate and fails(candidate):
                ops, removed = candidate, True
            else:
                i += chunk
        if not removed:
            chunk //= 2
    return ops


def fuzz_seed(seed: int, n_ops: int, window: int = 1000, repro_path=None) -> dict:
    ops = random_workload(n_ops, seed, window)
    divergence = replay(ops)
    record = {
        "record": "fuzz",
        "seed": seed,
        "ops": n_ops,
        "window": window,
        "divergences": 0 if divergence is None else 1,
    }
    if divergence is not None:
        prefix = ops[: divergence.step + 1]
        minimal = shrink(prefix, lambda c: replay(c) is not None)
        record["step"] = divergence.step
        record["message"] = divergence.message
        record["reproducer_ops"] = len(minimal)
        if repro_path is not None:
            Path(repro_path).write_text(
                "".join(op.to_script() + "\n" for op in minimal), encoding="utf-8"
            )
            record["reproducer"] = str(repro_path)
    return record


# ----------------------------------------------------------------------
# bound sweep


def nested_segments(n: int) -> List[Segment]:
    """Fully nested segments, the worst case for cumulative list size."""
    return [Segment(f"n{i}", i, 2 * n + 1 - i) for i in range(1, n + 1)]


def bound_record(segments: List[Segment], label: str) -> dict:
    n = len(segments)
    tree = BitsTree()
    for seg in segments:
        tree.insert(seg)
    stats = tree.stats()
    sst = StaticSegmentTree(segments)
    lo = min(s.lo for s in segments)
    hi = max(s.hi for s in segments)
    dst = DynamicSegmentTree(lo, hi)
    for seg in segments:
        dst.insert(seg)
    distinct = len({p for s in segments for p in (s.lo, s.hi)}) == 2 * n
    height_bound = 1.441 * math.ceil(math.log2(stats.node_count)) + 1
    checks = {
        "nodes<=2n-1": stats.node_count <= 2 * n - 1,
        "list<=n^2": stats.cumulative_list_size <= n * n,
        "height<1.441ceil(log2 m)+1": stats.height < height_bound,
        "sst<=4n+1": sst.node_count <= 4 * n + 1 and (not distinct or sst.node_count == 4 * n + 1),
        "dst=2(n2-n1)-1": dst.node_count == 2 * (hi - lo) - 1,
    }
    return {
        "record": "bound",
        "case": label,
        "n": n,
        "bits_nodes": stats.node_count,
        "bits_list": stats.cumulative_list_size,
        "bits_height": stats.height,
        "height_bound": round(height_bound, 3),
        "sst_nodes": sst.node_count,
        "dst_nodes": dst.node_count,
        "dst_range": [lo, hi],
        "distinct_endpoints": distinct,
        "violations": sorted(k for k, ok in checks.items() if not ok),
    }


def bounds_sweep(n_max: int, trials: int, seed: int, window: int = 1000) -> List[dict]:
    if n_max < 1:
        raise ValueError("n_max must be at least 1")
    rng = random.Random(seed)
    records = []
    for n in range(1, n_max + 1):
        records.append(bound_record(nested_segments(n), "nested"))
        for _ in range(trials):
            segs = [random_segment(rng, f"s{i}", window) for i in range(n)]
            records.append(bound_record(segs, "random"))
    return records


# ----------------------------------------------------------------------
# comparison of the three structures


def max_stab(structure, points) -> dict:
    best = None
    for x in points:
        visits = structure.stab(x).nodes_visited
        if best is None or visits > best[0]:
            best = (visits, x)
    return {"visits": best[0], "at": best[1]}


def compare(segments: List[Segment], dst_range=None, bits: Optional[BitsTree] = None) -> List[dict]:
    """Size and worst-case stab cost of BITS, SST and DST over the same segments."""
    if not segments:
        raise ValueError("compare needs at least one segment")
    if bits is None:
        bits = BitsTree()
        for seg in segments:
            bits.insert(seg)
    sst = StaticSegmentTree(segments)
    lo, hi = dst_range if dst_range else (min(s.lo for s in segments), max(s.hi for s in segments))
    dst = DynamicSegmentTree(lo, hi)
    for seg in segments:
        dst.insert(seg)
    points = range(min(s.lo for s in segments) - 1, max(s.hi for s in segments) + 2)
    records = []
    for name, structure in (("sst", sst), ("dst", dst), ("bits", bits)):
        stats = structure.stats()
        records.append(
            {
                "record": "compare",
                "structure": name,
                "node_count": stats.node_count,
                "cumulative_list_size": stats.cumulative_list_size,
                "height": stats.height,
                "max_stab": max_stab(structure, points),
            }
        )
    return records
