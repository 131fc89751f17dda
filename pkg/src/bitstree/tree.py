"""The BITS-tree: a height-balanced, two-way inorder-threaded segment tree.

Every node owns a range; ranges of distinct nodes meet at most at an
endpoint and appear in ascending order in the inorder sequence. A node's
list holds exactly the stored segments that contain its range, so a
stabbing query is answered by (at most) two adjacent nodes.

Empty child slots are threads: a missing left child points to the inorder
predecessor, a missing right child to the inorder successor. The sentinel
``head`` node (empty range, empty list) closes both ends, its ``right``
thread addressing the first node and its ``left`` thread the last one.
Balance is kept with ordinary AVL rotations, which never change thread
targets because they do not change the inorder sequence.
"""

from __future__ import annotations

import bisect
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, Iterator, List, Optional, Tuple

from .intervals import Interval, Segment, make_segment, partition


class Node:
    __slots__ = ("lo", "hi", "ids", "left", "right", "lthread", "rthread", "parent", "height")

    def __init__(self, lo, hi, ids: frozenset):
        self.lo = lo
        self.hi = hi
        self.ids = ids
        self.left: Optional[Node] = None
        self.right: Optional[Node] = None
        self.lthread = True
        self.rthread = True
        self.parent: Optional[Node] = None
        self.height = 0

    @property
    def range(self) -> Optional[Interval]:
        if self.lo is None:
            return None
        return Interval(self.lo, self.hi)

    @property
    def balance(self) -> int:
        return _child_height(self, right=True) - _child_height(self, right=False)

    def __repr__(self) -> str:
        if self.lo is None:
            return "Node(head)"
        return f"Node([{self.lo},{self.hi}], {sorted(map(str, self.ids))})"


def _child_height(node: Node, right: bool) -> int:
    if right:
        return -1 if node.rthread else node.right.height
    return -1 if node.lthread else node.left.height


@dataclass
class TreeStats:
    node_count: int
    height: int
    cumulative_list_size: int
    segment_count: int


@dataclass
class QueryTrace:
    nodes_visited: int = 0
    output_segments: set = field(default_factory=set)


# listener(kind, phase, pivot_range); kind in {"LL", "RR", "LR", "RL"}, phase in {"before", "after"}
RotationListener = Callable[[str, str, Interval], None]


class BitsTree:
    def __init__(self):
        head = Node(None, None, frozenset())
        head.left = head.right = head
        self.head = head
        self.root: Optional[Node] = None
        self.node_count = 0
        self._segments: Dict[Hashable, Segment] = {}
        self.rotation_counts: Counter = Counter()
        self.rotation_listeners: List[RotationListener] = []
        self.last_update_visits = 0

    # ------------------------------------------------------------------
    # basic accessors

    @property
    def segment_count(self) -> int:
        return len(self._segments)

    @property
    def segments(self) -> Dict[Hashable, Segment]:
        return dict(self._segments)

    def __len__(self) -> int:
        return len(self._segments)

    def __contains__(self, id) -> bool:
        return id in self._segments

    def first(self) -> Node:
        return self.head.right

    def last(self) -> Node:
        return self.head.left

    def succ(self, node: Node) -> Node:
        if node is self.head:
            return self.head.right
        if node.rthread:
            return node.right
        node = node.right
        while not node.lthread:
            node = node.left
        return node

    def pred(self, node: Node) -> Node:
        if node is self.head:
            return self.head.left
        if node.lthread:
            return node.left
        node = node.left
        while not node.rthread:
            node = node.right
        return node

    def nodes(self) -> Iterator[Node]:
        """Inorder node walk along successor threads, no stack needed."""
        node = self.head.right
        while node is not self.head:
            yield node
            node = self.succ(node)

    def inorder(self) -> List[Tuple[Interval, frozenset]]:
        return [(Interval(n.lo, n.hi), n.ids) for n in self.nodes()]

    @property
    def height(self) -> int:
        return -1 if self.root is None else self.root.height

    def stats(self) -> TreeStats:
        return TreeStats(
            node_count=self.node_count,
            height=self.height,
            cumulative_list_size=sum(len(n.ids) for n in self.nodes()),
            segment_count=self.segment_count,
        )

    # ------------------------------------------------------------------
    # structural primitives

    def _replace_child(self, parent: Optional[Node], old: Node, new: Node) -> None:
        if parent is None:
            self.root = new
        elif not parent.lthread and parent.left is old:
            parent.left = new
        else:
            parent.right = new

    @staticmethod
    def _refresh(node: Node) -> None:
        node.height = 1 + max(_child_height(node, False), _child_height(node, True))

    def _rotate_right(self, x: Node) -> Node:
        y = x.left
        if y.rthread:
            # y.right was the thread to x; x gains a thread back to y
            x.left = y
            x.lthread = True
        else:
            x.left = y.right
            x.left.parent = x
        y.right = x
        y.rthread = False
        self._replace_child(x.parent, x, y)
        y.parent = x.parent
        x.parent = y
        self._refresh(x)
        self._refresh(y)
        return y

    def _rotate_left(self, x: Node) -> Node:
        y = x.right
        if y.lthread:
            x.right = y
            x.rthread = True
        else:
            x.right = y.left
            x.right.parent = x
        y.left = x
        y.lthread = False
        self._replace_child(x.parent, x, y)
        y.parent = x.parent
        x.parent = y
        self._refresh(x)
        self._refresh(y)
        return y

    def _rebalance(self, x: Node) -> Node:
        bal = x.balance
        if -1 <= bal <= 1:
            return x
        if bal < -1:
            kind = "LR" if x.left.balance > 0 else "LL"
        else:
            kind = "RL" if x.right.balance < 0 else "RR"
        pivot = Interval(x.lo, x.hi)
        for listener in self.rotation_listeners:
            listener(kind, "before", pivot)
        if kind == "LL":
            top = self._rotate_right(x)
        elif kind == "LR":
            self._rotate_left(x.left)
            top = self._rotate_right(x)
        elif kind == "RR":
            top = self._rotate_left(x)
        else:
            self._rotate_right(x.right)
            top = self._rotate_left(x)
        self.rotation_counts[kind] += 1
        for listener in self.rotation_listeners:
            listener(kind, "after", pivot)
        return top

    def _retrace(self, node: Optional[Node]) -> None:
        while node is not None:
            old = node.height
            self._refresh(node)
            node = self._rebalance(node)
            if node.height == old:
                return
            node = node.parent

    def _attach(self, parent: Optional[Node], new: Node, as_left: bool) -> None:
        head = self.head
        self.node_count += 1
        if parent is None:
            self.root = new
            new.left = new.right = head
            head.left = head.right = new
            return
        new.parent = parent
        if as_left:
            pred = parent.left
            new.left, new.right = pred, parent
            parent.left, parent.lthread = new, False
            # pred (if real) is an ancestor reaching parent via a real child
            if pred is head:
                head.right = new
        else:
            succ = parent.right
            new.left, new.right = parent, succ
            parent.right, parent.rthread = new, False
            if succ is head:
                head.left = new
        self._retrace(parent)

    def _unlink(self, z: Node) -> None:
        """Remove a node having at most one real child and rebalance."""
        head = self.head
        p, s = self.pred(z), self.succ(z)
        parent = z.parent
        if not z.lthread:
            child = z.left
        elif not z.rthread:
            child = z.right
        else:
            child = None

        if child is not None:
            child.parent = parent
            self._replace_child(parent, z, child)
        elif parent is None:
            self.root = None
        elif not parent.lthread and parent.left is z:
            parent.left, parent.lthread = z.left, True
        else:
            parent.right, parent.rthread = z.right, True

        if p is head:
            head.right = s
        elif p.rthread:
            p.right = s
        if s is head:
            head.left = p
        elif s.lthread:
            s.left = p

        self.node_count -= 1
        z.parent = z.left = z.right = None
        self._retrace(parent)

    def _remove(self, z: Node) -> Node:
        """Remove ``z``'s range from the tree; return the node now following it."""
        if z.lthread or z.rthread:
            nxt = self.succ(z)
            self._unlink(z)
            return nxt
        s = z.right
        while not s.lthread:
            s = s.left
        z.lo, z.hi, z.ids = s.lo, s.hi, s.ids
        self._unlink(s)
        return z

    def _merge(self, a: Node, b: Node) -> Node:
        """Join adjacent nodes ``a`` (predecessor) and ``b`` with equal lists.

        The deeper of the two is removed and the shallower one, its ancestor,
        takes the combined range.
        """
        if a.rthread:
            survivor, victim = b, a
        else:
            survivor, victim = a, b
        lo, hi = a.lo, b.hi
        self._unlink(victim)
        survivor.lo, survivor.hi = lo, hi
        return survivor

    # ------------------------------------------------------------------
    # updates

    def insert(self, seg) -> None:
        seg = make_segment(*seg)
        if seg.id in self._segments:
            raise KeyError(f"segment id {seg.id!r} is already stored")
        self._segments[seg.id] = seg
        visits = 0
        # (anchor, direction, lo, hi, ids): the piece continues at the
        # predecessor (direction -1) or successor (+1) of anchor; the
        # initial item descends from the root.
        work = [(None, 0, seg.lo, seg.hi, frozenset((seg.id,)))]
        while work:
            anchor, direction, lo, hi, ids = work.pop()
            if anchor is None:
                start = self.root
            else:
                start = self.pred(anchor) if direction < 0 else self.succ(anchor)
                if start is self.head:
                    start = self.root
            if start is None:
                self._attach(None, Node(lo, hi, ids), False)
                continue
            u = start
            while True:
                visits += 1
                if hi <= u.lo:
                    if u.lthread:
                        self._attach(u, Node(lo, hi, ids), True)
                        break
                    u = u.left
                elif u.hi <= lo:
                    if u.rthread:
                        self._attach(u, Node(lo, hi, ids), False)
                        break
                    u = u.right
                else:
                    parts = partition((lo, hi), ids, (u.lo, u.hi), u.ids)
                    u.lo, u.hi = parts.center
                    u.ids = parts.center_ids
                    # LIFO: the left piece (and everything it spawns) runs first
                    if parts.right is not None:
                        work.append((u, 1, parts.right.lo, parts.right.hi, parts.right_ids))
                    if parts.left is not None:
                        work.append((u, -1, parts.left.lo, parts.left.hi, parts.left_ids))
                    break
        self.last_update_visits = visits

    def _find_start(self, lo) -> Tuple[Optional[Node], int]:
        u, visits = self.root, 0
        while u is not None:
            visits += 1
            if lo < u.lo:
                if u.lthread:
                    return None, visits
                u = u.left
            elif lo >= u.hi:
                if u.rthread:
                    return None, visits
                u = u.right
            elif lo == u.lo:
                return u, visits
            else:
                return None, visits
        return None, visits

    def delete(self, seg) -> bool:
        """Remove a stored segment. Returns False when its id is not stored."""
        seg = make_segment(*seg)
        stored = self._segments.get(seg.id)
        if stored is None:
            self.last_update_visits = 0
            return False
        if (stored.lo, stored.hi) != (seg.lo, seg.hi):
            raise ValueError(
                f"segment {seg.id!r} is stored as [{stored.lo},{stored.hi}], not [{seg.lo},{seg.hi}]"
            )
        node, visits = self._find_start(seg.lo)
        if node is None or seg.id not in node.ids:
            raise RuntimeError(f"tree is corrupt: no node starts segment {seg.id!r} at {seg.lo}")
        del self._segments[seg.id]

        head = self.head
        last = None
        while True:
            visits += 1
            node.ids = node.ids - {seg.id}
            done = node.hi >= seg.hi
            if not node.ids:
                nxt = self._remove(node)
                last = None
            else:
                p = self.pred(node)
                if p is not head and p.hi == node.lo and p.ids == node.ids:
                    node = self._merge(p, node)
                last = node
                nxt = self.succ(node)
            if done or nxt is head:
                break
            node = nxt

        if last is not None:
            s = self.succ(last)
            if s is not head and s.lo == last.hi and s.ids == last.ids:
                visits += 1
                self._merge(last, s)
        self.last_update_visits = visits
        return True

    # ------------------------------------------------------------------
    # queries

    def stab(self, x) -> QueryTrace:
        """Segments containing ``x`` (closed endpoints).

        The descent prefers the deeper node of an adjacent pair sharing ``x``
        as an endpoint, so the partner is always one thread hop away.
        """
        trace = QueryTrace()
        head = self.head
        u = self.root
        while u is not None:
            trace.nodes_visited += 1
            if x < u.lo or (x == u.lo and not u.lthread):
                if u.lthread:
                    p = u.left
                    if p is not head:
                        trace.nodes_visited += 1
                        if p.hi == x:
                            trace.output_segments.update(p.ids)
                    break
                u = u.left
            elif x > u.hi or (x == u.hi and not u.rthread):
                if u.rthread:
                    s = u.right
                    if s is not head:
                        trace.nodes_visited += 1
                        if s.lo == x:
                            trace.output_segments.update(s.ids)
                    break
                u = u.right
            else:
                trace.output_segments.update(u.ids)
                if x == u.lo:
                    p = u.left
                    if p is not head:
                        trace.nodes_visited += 1
                        if p.hi == x:
                            trace.output_segments.update(p.ids)
                elif x == u.hi:
                    s = u.right
                    if s is not head:
                        trace.nodes_visited += 1
                        if s.lo == x:
                            trace.output_segments.update(s.ids)
                break
        return trace

    def range_query(self, lo, hi) -> QueryTrace:
        """Segments meeting the closed range ``[lo, hi]``.

        Locates the first node ending at or after ``lo`` and walks successor
        links until a node starts beyond ``hi``. A successor step counts as
        one visit.
        """
        if not lo < hi:
            raise ValueError(f"query range [{lo},{hi}] is degenerate")
        trace = QueryTrace()
        head = self.head
        start = None
        u = self.root
        while u is not None:
            trace.nodes_visited += 1
            if u.hi >= lo:
                start = u
                if u.lthread:
                    break
                u = u.left
            else:
                if u.rthread:
                    break
                u = u.right
        node = start
        while node is not None and node is not head and node.lo <= hi:
            trace.output_segments.update(node.ids)
            if node.hi > hi:
                break
            node = self.succ(node)
            if node is not head:
                trace.nodes_visited += 1
        return trace

    # ------------------------------------------------------------------
    # construction from an explicit shape

    @classmethod
    def from_layout(cls, layout, segments) -> "BitsTree":
        """Build a tree with a prescribed shape.

        ``layout`` is a nested tuple ``(lo, hi, ids, left, right)`` where
        ``left``/``right`` are layouts or ``None``. Used to reproduce
        published example trees whose shape is not an insertion outcome.
        Raises ``ValueError`` if the result violates any tree invariant.
        """
        tree = cls()
        for seg in segments:
            seg = make_segment(*seg)
            tree._segments[seg.id] = seg

        def build(shape, parent):
            if shape is None:
                return None
            lo, hi, ids, left, right = shape
            node = Node(lo, hi, frozenset(ids))
            node.parent = parent
            node.left = build(left, node)
            node.right = build(right, node)
            node.lthread = node.left is None
            node.rthread = node.right is None
            cls._refresh(node)
            tree.node_count += 1
            return node

        tree.root = build(layout, None)
        order = []
        stack, u = [], tree.root
        while stack or u is not None:
            while u is not None:
                stack.append(u)
                u = None if u.lthread else u.left
            u = stack.pop()
            order.append(u)
            u = None if u.rthread else u.right
        chain = [tree.head] + order + [tree.head]
        for i, node in enumerate(order, start=1):
            if node.lthread:
                node.left = chain[i - 1]
            if node.rthread:
                node.right = chain[i + 1]
        tree.head.right = chain[1]
        tree.head.left = chain[-2]
        problem = tree.check_invariants()
        if problem is not None:
            raise ValueError(f"layout does not form a valid tree: {problem}")
        return tree

    # ------------------------------------------------------------------
    # invariant checker

    def check_invariants(self) -> Optional[str]:
        """Return a description of the first violated invariant, or None."""
        head = self.head
        if head.lo is not None or head.ids:
            return "head node must have an empty range and list"
        if self.root is None:
            if head.left is not head or head.right is not head:
                return "empty tree: head threads must point at head"
            if self.node_count != 0:
                return f"empty tree but node_count={self.node_count}"
            if self._segments:
                return "empty tree but segments are stored"
            return None
        if self.root.parent is not None:
            return "root has a parent"

        # one structural inorder pass; heights and balance are checked
        # locally, which by induction validates every stored height
        order: List[Node] = []
        stack: List[Node] = []
        u = self.root
        while stack or u is not None:
            while u is not None:
                stack.append(u)
                if u.lthread:
                    u = None
                elif u.left.parent is not u:
                    return f"bad parent link below {u!r}"
                else:
                    u = u.left
            u = stack.pop()
            hl = -1 if u.lthread else u.left.height
            hr = -1 if u.rthread else u.right.height
            if u.height != 1 + max(hl, hr):
                return f"stale height at {u!r}"
            if not -1 <= hr - hl <= 1:
                return f"AVL balance {hr - hl} at {u!r}"
            order.append(u)
            if u.rthread:
                u = None
            elif u.right.parent is not u:
                return f"bad parent link below {u!r}"
            else:
                u = u.right
        if len(order) != self.node_count:
            return f"node_count={self.node_count} but {len(order)} nodes reachable"

        known = self._segments.keys()
        prev = head
        last_index = len(order) - 1
        for i, node in enumerate(order):
            if node.lthread and node.left is not prev:
                return f"left thread of {node!r} does not address its predecessor"
            if node.rthread and node.right is not (head if i == last_index else order[i + 1]):
                return f"right thread of {node!r} does not address its successor"
            if node.lo is None or not node.lo < node.hi:
                return f"degenerate range at {node!r}"
            if prev is not head and prev.hi > node.lo:
                return f"ranges out of order or overlapping: {prev!r} then {node!r}"
            if not node.ids:
                return f"empty list at {node!r}"
            if not node.ids <= known:
                return f"unknown segment ids at {node!r}"
            prev = node
        if head.right is not order[0] or head.left is not order[-1]:
            return "head threads do not address the first/last node"

        n = self.segment_count
        if self.node_count > 2 * n - 1:
            return f"node_count={self.node_count} exceeds 2n-1 for n={n}"
        return self._check_coverage(order)

    def _check_coverage(self, order: List[Node]) -> Optional[str]:
        """Each node's list must equal the set of segments covering its range."""
        segs = self._segments.values()
        by_lo = sorted(segs, key=lambda s: s.lo)
        by_hi = sorted(segs, key=lambda s: s.hi)
        los = [s.lo for s in by_lo]
        endpoints = sorted(set(los).union(s.hi for s in by_hi))
        if los[0] < order[0].lo or by_hi[-1].hi > order[-1].hi:
            return "a stored segment extends beyond the outermost node ranges"

        # active holds segments with lo <= x < hi for the current sweep point x
        active: set = set()
        i = j = 0
        n_seg = len(by_lo)
        last_index = len(order) - 1
        for k, node in enumerate(order):
            x = node.lo
            while i < n_seg and by_lo[i].lo <= x:
                active.add(by_lo[i].id)
                i += 1
            while j < n_seg and by_hi[j].hi <= x:
                active.discard(by_hi[j].id)
                j += 1
            if node.ids != active:
                missing = sorted(map(str, active - node.ids))
                extra = sorted(map(str, node.ids - active))
                return f"list mismatch at {node!r}: missing {missing}, extra {extra}"
            pos = bisect.bisect_right(endpoints, x)
            if pos < len(endpoints) and endpoints[pos] < node.hi:
                return f"segment endpoint {endpoints[pos]} falls inside {node!r}"
            if k < last_index and node.hi < order[k + 1].lo:
                gap_lo, gap_hi = node.hi, order[k + 1].lo
                while j < n_seg and by_hi[j].hi <= gap_lo:
                    active.discard(by_hi[j].id)
                    j += 1
                if i < n_seg and by_lo[i].lo < gap_hi:
                    return f"a segment starts inside gap ({gap_lo},{gap_hi})"
                if active:
                    return f"gap ({gap_lo},{gap_hi}) is covered by {sorted(map(str, active))}"
        return None


def new_tree() -> BitsTree:
    return BitsTree()
