"""Acceptance criteria, one test each. Results are summarised after the run."""

import time

import pytest

from bitstree import BitsTree, Interval, Segment, SegmentBag, bench

from conftest import ACCEPTANCE_RESULTS, FIGURE_SEGMENTS, SEGMENT_D

FUZZ_SEEDS = range(10)
FUZZ_OPS = 10_000


def record(name, ok, detail):
    ACCEPTANCE_RESULTS.append((name, bool(ok), detail))
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def fuzz_corpus():
    return [bench.random_workload(FUZZ_OPS, seed, window=1000) for seed in FUZZ_SEEDS]


def test_table1_reproduction(figure1):
    start = time.perf_counter()
    natural = bench.compare(FIGURE_SEGMENTS, dst_range=(5, 21))
    published = bench.compare(FIGURE_SEGMENTS, dst_range=(5, 21), bits=figure1)
    elapsed = time.perf_counter() - start
    want = {"sst": (13, 4, 3), "dst": (31, 8, 4), "bits": (4, 5, 2)}
    got = {}
    for records in (natural, published):
        for r in records:
            got.setdefault(r["structure"], set()).add(
                (r["node_count"], r["cumulative_list_size"], r["height"])
            )
    ok = all(got[k] == {v} for k, v in want.items()) and elapsed < 1.0
    record("table1", ok, f"(nodes, list, height) {dict(sorted(got.items()))}, {elapsed:.3f}s")


def test_worked_insertion(figure1):
    figure1.insert(SEGMENT_D)
    order = [(r.lo, r.hi) for r, _ in figure1.inorder()]
    lists = [set(ids) for _, ids in figure1.inorder()]
    ok = (
        order == [(2, 5), (5, 7), (7, 10), (10, 12), (12, 15), (18, 21)]
        and lists == [{"d"}, {"a", "d"}, {"a"}, {"a", "b"}, {"b"}, {"c"}]
        and dict(figure1.rotation_counts) == {"LR": 1}
    )
    record("worked-insertion", ok, f"inorder {order}, rotations {dict(figure1.rotation_counts)}")


def test_worked_deletion(figure2c):
    figure2c.delete(Segment("a", 5, 12))
    got = figure2c.inorder()
    want = [(Interval(2, 7), {"d"}), (Interval(10, 15), {"b"}), (Interval(18, 21), {"c"})]
    ok = got == want and figure2c.check_invariants() is None
    record("worked-deletion", ok, ", ".join(f"{r}:{sorted(ids)}" for r, ids in got))


def test_stab_maxima(figure1, figure1_inserted):
    rows = {r["structure"]: r["max_stab"] for r in bench.compare(FIGURE_SEGMENTS, dst_range=(5, 21))}
    published = bench.compare(FIGURE_SEGMENTS, dst_range=(5, 21), bits=figure1)[2]["max_stab"]
    ok = (
        rows["sst"] == {"visits": 7, "at": 15}
        and rows["dst"] == {"visits": 9, "at": 13}
        and rows["bits"]["visits"] == 4
        and published["visits"] == 4
    )
    record("stab-maxima", ok, f"sst {rows['sst']}, dst {rows['dst']}, bits {rows['bits']['visits']}/{published['visits']}")


def test_differential_fuzz(fuzz_corpus):
    start = time.perf_counter()
    failures = []
    for seed, ops in zip(FUZZ_SEEDS, fuzz_corpus):
        divergence = bench.replay(ops, check=True, check_rotations=False, check_walk_cost=False)
        if divergence is not None:
            failures.append(f"seed {seed} step {divergence.step}: {divergence.message}")
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 60
    record(
        "differential-fuzz",
        ok,
        f"{len(FUZZ_SEEDS)}x{FUZZ_OPS} ops, {len(failures)} divergences, {elapsed:.1f}s"
        + (f"; first: {failures[0]}" if failures else ""),
    )


def test_bound_sweep():
    start = time.perf_counter()
    records = bench.bounds_sweep(200, 20, seed=0)
    elapsed = time.perf_counter() - start
    bad = [r for r in records if r["violations"]]
    ok = not bad and len(records) == 200 * 21
    detail = f"{len(records)} sets for n=1..200, {len(bad)} violations, {elapsed:.1f}s"
    if bad:
        detail += f"; first: n={bad[0]['n']} {bad[0]['violations']}"
    record("bound-sweep", ok, detail)


def test_rotation_transparency(fuzz_corpus):
    events = violations = 0
    for ops in fuzz_corpus:
        tree = BitsTree()
        snapshot = []

        def watch(kind, phase, pivot, tree=tree, snapshot=snapshot):
            nonlocal events, violations
            if phase == "before":
                snapshot[:] = tree.inorder()
            else:
                events += 1
                violations += tree.inorder() != snapshot

        tree.rotation_listeners.append(watch)
        for op in ops:
            if op.kind == "insert":
                tree.insert(op.payload)
            elif op.kind == "delete":
                tree.delete(op.payload)
    ok = violations == 0 and events > 0
    record("rotation-transparency", ok, f"{events} rotations, {violations} violations")


def test_range_walk_cost(fuzz_corpus):
    queries = violations = 0
    tightest = None
    for ops in fuzz_corpus:
        tree, bag = BitsTree(), SegmentBag()
        for op in ops:
            if op.kind == "insert":
                tree.insert(op.payload)
            elif op.kind == "delete":
                tree.delete(op.payload)
            elif op.kind == "range":
                trace = tree.range_query(*op.payload)
                bound = bench.range_walk_bound(tree, *op.payload)
                queries += 1
                violations += trace.nodes_visited > bound
                margin = bound - trace.nodes_visited
                tightest = margin if tightest is None else min(tightest, margin)
    ok = violations == 0 and queries > 0
    record("range-walk-cost", ok, f"{queries} range queries, {violations} over bound, tightest margin {tightest}")
