"""
Building, growing and shrinking a small BITS-tree
=================================================

Three segments split the line into four disjoint ranges. Each node keeps
the ids of every segment covering its range.
"""

from bitstree import BitsTree, Segment

a, b, c = Segment("a", 5, 12), Segment("b", 10, 15), Segment("c", 18, 21)

tree = BitsTree()
for seg in (a, b, c):
    tree.insert(seg)


def show(tree):
    for rng, ids in tree.inorder():
        print(f"  {rng}: {sorted(ids)}")


print("after a, b, c:")
show(tree)
print("stats:", tree.stats())

###############################################################################
# Stabbing walks down the tree and hops one thread at most. A point on a
# shared endpoint collects both neighbouring lists.

for x in (11, 12, 16):
    trace = tree.stab(x)
    print(f"stab {x}: {sorted(trace.output_segments)} in {trace.nodes_visited} visits")

###############################################################################
# A new segment is cut against every range it overlaps. Whether a
# rotation is needed depends on the shape; this tree absorbs d without one.


def report(kind, phase, pivot):
    if phase == "after":
        print(f"  {kind} rotation at {pivot}")


tree.rotation_listeners.append(report)
tree.insert(Segment("d", 2, 7))
print("after d:")
show(tree)
print("rotations so far:", dict(tree.rotation_counts))

###############################################################################
# The same three segments can also sit in a tree rooted at [12,15]. There,
# d unbalances the root and a left-right rotation repairs it.

leaning = BitsTree.from_layout(
    (12, 15, {"b"}, (5, 10, {"a"}, None, (10, 12, {"a", "b"}, None, None)), (18, 21, {"c"}, None, None)),
    [a, b, c],
)
leaning.rotation_listeners.append(report)
leaning.insert(Segment("d", 2, 7))
print("root after d:", leaning.root.range)

###############################################################################
# Deleting a segment empties or shrinks lists, and neighbours left with
# identical lists merge back together.

tree.delete(a)
print("after deleting a:")
show(tree)
assert tree.check_invariants() is None
