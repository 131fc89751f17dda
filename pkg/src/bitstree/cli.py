"""bits-bench: drive BITS, SST and DST structures from files or random workloads.

Subcommands::

    bits-bench run SEGMENTS SCRIPT [--structure bits|sst|dst|all] [--dst-range LO HI] [--check]
    bits-bench compare SEGMENTS [--dst-range LO HI]
    bits-bench fuzz [--ops N] [--seed S] [--seeds K] [--window W] [--repro PATH]
    bits-bench bounds [--n-max N] [--trials T] [--seed S]

Every report line is a JSON object. Exit status: 0 on success, 1 on usage or
parse errors, 2 on invariant failures or oracle divergences.
"""

from __future__ import annotations

import argparse
import json
import sys
from contextlib import contextmanager
from typing import List

from . import bench
from .baselines import DynamicSegmentTree, RangeExceededError, StaticSegmentTree
from .tree import BitsTree

EXIT_OK, EXIT_USAGE, EXIT_FAILURE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _emit(out, record: dict) -> None:
    out.write(json.dumps(record, sort_keys=True) + "\n")


@contextmanager
def _output(path):
    if path is None:
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8") as fh:
            yield fh


def _ids(ids) -> List[str]:
    return sorted(map(str, ids))


def cmd_run(args, out) -> int:
    segments = bench.load_segments(args.segments)
    ops = bench.load_script(args.script)
    names = ["bits", "sst", "dst"] if args.structure == "all" else [args.structure]
    status = EXIT_OK

    structures = {}
    if "bits" in names:
        tree = BitsTree()
        for seg in segments:
            tree.insert(seg)
        structures["bits"] = tree
    if "sst" in names:
        if not segments:
            raise ValueError("the static tree needs a non-empty segments file")
        structures["sst"] = StaticSegmentTree(segments)
    if "dst" in names:
        if args.dst_range:
            lo, hi = args.dst_range
        elif segments:
            lo, hi = min(s.lo for s in segments), max(s.hi for s in segments)
        else:
            raise ValueError("--dst-range is required when the segments file is empty")
        dst = DynamicSegmentTree(lo, hi)
        for seg in segments:
            try:
                dst.insert(seg)
            except RangeExceededError as exc:
                _emit(out, {"record": "error", "structure": "dst", "error": "range-exceeded", "detail": str(exc)})
        structures["dst"] = dst

    registry = {seg.id: seg for seg in segments}
    for op in ops:
        if op.kind == "insert":
            registry[op.payload.id] = op.payload
        seg = registry.get(op.payload) if op.kind == "delete" else None
        for name, st in structures.items():
            record = {"record": op.kind, "structure": name, "line": op.line}
            if op.kind in ("insert", "delete") and name == "sst":
                record["error"] = "static tree is immutable"
            elif op.kind == "insert":
                try:
                    st.insert(op.payload)
                    record["segment"] = [op.payload.id, op.payload.lo, op.payload.hi]
                except RangeExceededError as exc:
                    record.update(error="range-exceeded", detail=str(exc))
                except KeyError as exc:
                    record.update(error="duplicate-id", detail=str(exc.args[0]))
            elif op.kind == "delete":
                record["segment"] = op.payload
                record["deleted"] = seg is not None and st.delete(seg)
            elif op.kind == "stab":
                trace = st.stab(op.payload)
                record.update(x=op.payload, segments=_ids(trace.output_segments), nodes_visited=trace.nodes_visited)
            elif op.kind == "range":
                trace = st.range_query(*op.payload)
                record.update(
                    range=list(op.payload), segments=_ids(trace.output_segments), nodes_visited=trace.nodes_visited
                )
            elif op.kind == "stats":
                record.update(vars(st.stats()))
            elif op.kind == "check":
                if name != "bits":
                    record["skipped"] = True
                    _emit(out, record)
                    continue
                problem = st.check_invariants()
                record["ok"] = problem is None
                if problem is not None:
                    record["violation"] = problem
                    status = EXIT_FAILURE
            _emit(out, record)
            if args.check and name == "bits" and op.kind in ("insert", "delete"):
                problem = st.check_invariants()
                if problem is not None:
                    _emit(out, {"record": "violation", "line": op.line, "violation": problem})
                    return EXIT_FAILURE
    return status


def cmd_compare(args, out) -> int:
    segments = bench.load_segments(args.segments)
    for record in bench.compare(segments, args.dst_range):
        _emit(out, record)
    return EXIT_OK


def cmd_fuzz(args, out) -> int:
    _emit(
        out,
        {
            "record": "header",
            "command": "fuzz",
            "ops": args.ops,
            "seed": args.seed,
            "seeds": args.seeds,
            "window": args.window,
            "workload": bench.WORKLOAD_DESCRIPTION,
        },
    )
    total = 0
    for seed in range(args.seed, args.seed + args.seeds):
        repro = args.repro.format(seed=seed)
        record = bench.fuzz_seed(seed, args.ops, args.window, repro_path=repro)
        total += record["divergences"]
        _emit(out, record)
    _emit(out, {"record": "summary", "divergences": total, "message": f"{total} divergences"})
    return EXIT_OK if total == 0 else EXIT_FAILURE


def cmd_bounds(args, out) -> int:
    _emit(
        out,
        {
            "record": "header",
            "command": "bounds",
            "n_max": args.n_max,
            "trials": args.trials,
            "seed": args.seed,
            "window": args.window,
            "workload": "per n: one fully nested set plus random sets; " + bench.WORKLOAD_DESCRIPTION,
        },
    )
    violations = 0
    for record in bench.bounds_sweep(args.n_max, args.trials, args.seed, args.window):
        violations += bool(record["violations"])
        _emit(out, record)
    _emit(out, {"record": "summary", "violations": violations})
    return EXIT_OK if violations == 0 else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="bits-bench", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--out", help="write the report here instead of stdout")
        p.add_argument("--seed", type=int, default=0)

    run = sub.add_parser("run", help="replay a script against one or all structures")
    run.add_argument("segments")
    run.add_argument("script")
    run.add_argument("--structure", choices=["bits", "sst", "dst", "all"], default="bits")
    run.add_argument("--dst-range", type=int, nargs=2, metavar=("LO", "HI"))
    run.add_argument("--check", action="store_true", help="check BITS invariants after every update")
    common(run)

    cmp_ = sub.add_parser("compare", help="node/list/height/stab-cost table for all structures")
    cmp_.add_argument("segments")
    cmp_.add_argument("--dst-range", type=int, nargs=2, metavar=("LO", "HI"))
    common(cmp_)

    fz = sub.add_parser("fuzz", help="differential fuzzing of BITS against the oracle")
    fz.add_argument("--ops", type=int, default=10000)
    fz.add_argument("--seeds", type=int, default=1, help="number of consecutive seeds")
    fz.add_argument("--window", type=int, default=1000)
    fz.add_argument("--repro", default="fuzz-repro-{seed}.txt", help="reproducer path template")
    common(fz)

    bd = sub.add_parser("bounds", help="sweep node/list/height bounds over random sets")
    bd.add_argument("--n-max", type=int, default=200)
    bd.add_argument("--trials", type=int, default=20)
    bd.add_argument("--window", type=int, default=1000)
    common(bd)
    return parser


COMMANDS = {"run": cmd_run, "compare": cmd_compare, "fuzz": cmd_fuzz, "bounds": cmd_bounds}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        with _output(args.out) as out:
            return COMMANDS[args.command](args, out)
    except (bench.ParseError, ValueError, OSError) as exc:
        print(f"bits-bench: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
