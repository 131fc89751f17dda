"""
BITS-tree against static and dynamic segment trees
===================================================

The segment trees store a segment on its canonical slabs, so lists are
duplicated across nodes and a stab can follow two paths. The BITS-tree has
one node per elementary range actually covered.
"""

from bitstree import Segment, bench
from bitstree.baselines import DynamicSegmentTree, RangeExceededError

segments = [Segment("a", 5, 12), Segment("b", 10, 15), Segment("c", 18, 21)]

print(f"{'':6}{'nodes':>7}{'lists':>7}{'height':>8}{'max stab':>10}")
for row in bench.compare(segments, dst_range=(5, 21)):
    stab = row["max_stab"]
    print(
        f"{row['structure']:6}{row['node_count']:>7}{row['cumulative_list_size']:>7}"
        f"{row['height']:>8}{stab['visits']:>6} @{stab['at']}"
    )

###############################################################################
# The dynamic segment tree is sized up front; anything outside that range
# is refused.

dst = DynamicSegmentTree(5, 21)
try:
    dst.insert(Segment("e", 1, 30))
except RangeExceededError as exc:
    print("dst:", exc)
