"""
Differential fuzzing and size bounds
====================================

Random insert/delete/stab/range workloads are replayed against the tree and
a brute-force bag of segments. Any disagreement is shrunk to a short script.
"""

from bitstree import bench

for seed in range(3):
    print(bench.fuzz_seed(seed, n_ops=3000, window=200))

###############################################################################
# Fully nested segments are the worst case for list sizes: n segments give
# exactly n^2 list entries while the node count stays at 2n - 1.

for n in (1, 2, 4, 8, 16):
    r = bench.bound_record(bench.nested_segments(n), "nested")
    print(f"n={n:2}  nodes={r['bits_nodes']:3}  lists={r['bits_list']:4}  height={r['bits_height']}")

###############################################################################
# Random sets stay well inside the AVL height bound.

records = bench.bounds_sweep(60, trials=3, seed=1)
worst = max(records, key=lambda r: r["bits_height"] / r["height_bound"])
print("tallest relative to bound:", {k: worst[k] for k in ("n", "bits_nodes", "bits_height", "height_bound")})
print("violations:", sum(bool(r["violations"]) for r in records))
