"""Representing trees of finite ultrametric spaces and rooted-tree orders.

The representing tree is built top down: the root is the whole space, and
the children of any vertex of positive diameter are the parts of its
diametrical graph.  The construction never consults the ballean, so the
fact that the vertex set coincides with it stays independently checkable
through `verify_tree_invariants`.
"""

from __future__ import annotations

from collections import deque
from fractions import Fraction
from typing import Iterable, Optional

from .core import (
    FiniteUltrametricSpace,
    diametrical_partition,
    format_rational,
    parse_rational,
    _subset_diam_rank,
)
from .balls import ballean


class RootedLabeledTree:
    """A tree with rational vertex labels and an optional root.

    Free-tree operations accept `root=None`; rooted-only operations refuse
    it.  When built from a space, `ball_points[v]` carries the point set of
    the ball the vertex stands for.  `truncated` marks prefixes of infinite
    trees whose leaves still carry positive labels.
    """

    __slots__ = ("labels", "edges", "root", "ball_points", "truncated", "_adj")

    def __init__(self, labels, edges, root: Optional[int] = None,
                 ball_points=None, truncated: bool = False):
        self.labels = tuple(parse_rational(v) for v in labels)
        n = len(self.labels)
        if n == 0:
            raise ValueError("a tree needs at least one vertex")
        norm = []
        for u, v in edges:
            u, v = int(u), int(v)
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise ValueError(f"bad edge ({u},{v})")
            norm.append((u, v) if u < v else (v, u))
        self.edges = tuple(sorted(norm))
        if len(set(self.edges)) != len(self.edges):
            raise ValueError("duplicate edge")
        if len(self.edges) != n - 1:
            raise ValueError(f"{n} vertices need {n - 1} edges, got {len(self.edges)}")
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        if not self._connected():
            raise ValueError("edges do not connect the vertex set")
        if any(l < 0 for l in self.labels):
            raise ValueError("labels must be nonnegative")
        if root is not None and not (0 <= root < n):
            raise ValueError(f"root {root} out of range")
        self.root = root
        if ball_points is not None:
            ball_points = tuple(tuple(p) for p in ball_points)
            if len(ball_points) != n:
                raise ValueError("ball_points must match the vertex count")
        self.ball_points = ball_points
        self.truncated = bool(truncated)

    def _connected(self) -> bool:
        n = len(self.labels)
        seen = [False] * n
        stack = [0]
        seen[0] = True
        count = 1
        while stack:
            u = stack.pop()
            for v in self._adj[u]:
                if not seen[v]:
                    seen[v] = True
                    count += 1
                    stack.append(v)
        return count == n

    @property
    def n(self) -> int:
        return len(self.labels)

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def require_root(self) -> int:
        if self.root is None:
            raise ValueError("operation needs a rooted tree")
        return self.root

    def parent_map(self, root: Optional[int] = None) -> tuple[Optional[int], ...]:
        root = self.require_root() if root is None else root
        parent: list[Optional[int]] = [None] * self.n
        order = deque([root])
        seen = [False] * self.n
        seen[root] = True
        while order:
            u = order.popleft()
            for v in self._adj[u]:
                if not seen[v]:
                    seen[v] = True
                    parent[v] = u
                    order.append(v)
        return tuple(parent)

    def children_map(self, root: Optional[int] = None) -> tuple[tuple[int, ...], ...]:
        root = self.require_root() if root is None else root
        parent = self.parent_map(root)
        kids: list[list[int]] = [[] for _ in range(self.n)]
        for v, p in enumerate(parent):
            if p is not None:
                kids[p].append(v)
        return tuple(tuple(sorted(k)) for k in kids)

    def out_degree(self, v: int, root: Optional[int] = None) -> int:
        root = self.require_root() if root is None else root
        return self.degree(v) if v == root else self.degree(v) - 1

    def leaves(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n) if self.degree(v) <= 1)

    def levels(self, root: Optional[int] = None) -> tuple[int, ...]:
        root = self.require_root() if root is None else root
        depth = [-1] * self.n
        depth[root] = 0
        order = deque([root])
        while order:
            u = order.popleft()
            for v in self._adj[u]:
                if depth[v] < 0:
                    depth[v] = depth[u] + 1
                    order.append(v)
        return tuple(depth)

    def __repr__(self):
        r = "free" if self.root is None else f"root={self.root}"
        return f"<RootedLabeledTree n={self.n} {r}>"


def build_representing_tree(space: FiniteUltrametricSpace) -> RootedLabeledTree:
    """Representing tree of a space, labeled by ball diameters.

    Vertices are created in depth-first order; the children of a vertex
    are the parts of its diametrical graph, sorted by smallest point
    index.  Leaves are exactly the singletons, labeled zero.
    """
    if not isinstance(space, FiniteUltrametricSpace):
        raise TypeError("representing trees need a FiniteUltrametricSpace")
    labels: list[Fraction] = []
    edges: list[tuple[int, int]] = []
    payload: list[tuple[int, ...]] = []

    def build(points: tuple[int, ...]) -> int:
        vid = len(labels)
        labels.append(space.distance_values[_subset_diam_rank(space, points)])
        payload.append(points)
        if len(points) > 1:
            parts = diametrical_partition(space, points)
            for part in parts:
                cid = build(tuple(part))
                edges.append((vid, cid))
        return vid

    build(tuple(space.points()))
    return RootedLabeledTree(labels, edges, root=0, ball_points=payload)


class CheckEntry:
    __slots__ = ("name", "passed", "witness")

    def __init__(self, name: str, passed: bool, witness: Optional[str] = None):
        self.name = name
        self.passed = passed
        self.witness = witness

    def __repr__(self):
        tail = "" if self.passed else f" ({self.witness})"
        return f"<{self.name}: {'ok' if self.passed else 'FAIL'}{tail}>"


class InvariantReport:
    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[CheckEntry]):
        self.entries = tuple(entries)

    @property
    def ok(self) -> bool:
        return all(e.passed for e in self.entries)

    def failures(self) -> tuple[CheckEntry, ...]:
        return tuple(e for e in self.entries if not e.passed)

    def __repr__(self):
        return f"<InvariantReport {'ok' if self.ok else self.failures()}>"


def verify_tree_invariants(tree: RootedLabeledTree,
                           space: FiniteUltrametricSpace) -> InvariantReport:
    """Structural audit of a representing tree against its space.

    Checks, each with a witness on failure: the vertex set equals the
    independently enumerated ballean; labels are ball diameters; degree 2
    occurs at most once; no vertex has out-degree 1; the degree of every
    vertex matches the part count of its diametrical graph; and leaves are
    exactly the zero-labeled vertices.
    """
    entries: list[CheckEntry] = []
    root = tree.require_root()
    pts = tree.ball_points
    if pts is None:
        raise ValueError("tree carries no ball payloads to verify against")

    tree_sets = {frozenset(p) for p in pts}
    ball_sets = {frozenset(b.points) for b in ballean(space)}
    ok = tree_sets == ball_sets and len(tree_sets) == tree.n
    entries.append(CheckEntry(
        "vertices-equal-ballean", ok,
        None if ok else f"tree {len(tree_sets)} sets vs ballean {len(ball_sets)}"))

    bad = next(
        (v for v in range(tree.n)
         if tree.labels[v] != space.distance_values[_subset_diam_rank(space, pts[v])]),
        None)
    entries.append(CheckEntry(
        "labels-are-diameters", bad is None,
        None if bad is None else f"vertex {bad}"))

    deg2 = [v for v in range(tree.n) if tree.degree(v) == 2]
    entries.append(CheckEntry(
        "degree-two-at-most-once", len(deg2) <= 1,
        None if len(deg2) <= 1 else f"vertices {deg2}"))

    bad = next((v for v in range(tree.n) if tree.out_degree(v, root) == 1), None)
    entries.append(CheckEntry(
        "out-degree-never-one", bad is None,
        None if bad is None else f"vertex {bad}"))

    bad = None
    for v in range(tree.n):
        parts = diametrical_partition(space, pts[v])
        k = 0 if parts is None else len(parts)
        d = tree.degree(v)
        if v == root:
            expected = 0 if tree.labels[v] == 0 else k
        else:
            expected = 1 if tree.labels[v] == 0 else 1 + k
        if d != expected:
            bad = f"vertex {v}: degree {d}, expected {expected}"
            break
    entries.append(CheckEntry("degree-formula", bad is None, bad))

    bad = next(
        (v for v in range(tree.n)
         if (tree.out_degree(v, root) == 0) != (tree.labels[v] == 0)),
        None)
    entries.append(CheckEntry(
        "leaf-iff-zero-label", bad is None,
        None if bad is None else f"vertex {bad}"))

    return InvariantReport(entries)


def edge_characterization_check(space: FiniteUltrametricSpace,
                                tree: RootedLabeledTree) -> bool:
    """Adjacency in the tree iff strict ball nesting with no ball between.

    Exhaustive over all vertex pairs, using bitmask closures of the
    inclusion order.
    """
    pts = tree.ball_points
    if pts is None:
        raise ValueError("tree carries no ball payloads")
    n = tree.n
    sets = [frozenset(p) for p in pts]
    sub = [0] * n   # sub[v]: bitmask of u with sets[u] <= sets[v]
    sup = [0] * n
    for u in range(n):
        for v in range(n):
            if sets[u] <= sets[v]:
                sub[v] |= 1 << u
                sup[u] |= 1 << v
    adjacent = {e for e in tree.edges}
    for u in range(n):
        for v in range(u + 1, n):
            lo, hi = (u, v) if sets[u] < sets[v] else (v, u)
            nested = sets[lo] < sets[hi]
            if nested:
                between = sup[lo] & sub[hi] & ~(1 << lo) & ~(1 << hi)
                expected = between == 0
            else:
                expected = False
            if ((u, v) in adjacent) != expected:
                return False
    return True


class TreeOrder:
    """The partial order a root induces on a tree.

    `leq(u, v)` holds iff v lies on the path from u to the root, so the
    root is the largest element and covering pairs are exactly the
    child-parent pairs.
    """

    __slots__ = ("root", "parent", "path_sets", "covers")

    def __init__(self, root, parent, path_sets, covers):
        self.root = root
        self.parent = parent
        self.path_sets = path_sets
        self.covers = covers

    def leq(self, u: int, v: int) -> bool:
        return v in self.path_sets[u]

    def comparable(self, u: int, v: int) -> bool:
        return self.leq(u, v) or self.leq(v, u)

    def incomparable(self, u: int, v: int) -> bool:
        return not self.comparable(u, v)


def tree_order(tree: RootedLabeledTree) -> TreeOrder:
    """Build the root-path order and verify its characteristic properties.

    Verified on the way out: the root is the largest element, every other
    vertex has exactly one upper cover, the order equals the transitive
    closure of the covering relation, covering pairs are exactly the
    edges, and (for trees carrying ball payloads) the order coincides
    with ball inclusion.
    """
    root = tree.require_root()
    parent = tree.parent_map(root)
    n = tree.n
    path_sets = [None] * n
    path_sets[root] = frozenset({root})

    def path_of(v):
        if path_sets[v] is None:
            path_sets[v] = path_sets[parent[v]] | {v}
        return path_sets[v]

    depth = tree.levels(root)
    for v in sorted(range(n), key=lambda x: depth[x]):
        path_of(v)
    covers = tuple(sorted((v, parent[v]) for v in range(n) if v != root))
    order = TreeOrder(root, parent, tuple(path_sets), covers)

    for v in range(n):
        if not order.leq(v, root):
            raise RuntimeError("root is not the largest element")
    # upper covers derived from the order itself must be the parents: the
    # strict superiors of v are its root path, and the cover is the one
    # whose own path is exactly one vertex shorter
    for v in range(n):
        if v == root:
            continue
        uppers = [u for u in path_sets[v] if u != v
                  and len(path_sets[u]) == len(path_sets[v]) - 1]
        if uppers != [parent[v]]:
            raise RuntimeError(f"vertex {v} has upper covers {uppers}")
    # order equals the transitive closure of the covering relation
    reach = [1 << v for v in range(n)]
    changed = True
    while changed:
        changed = False
        for lo, hi in covers:
            merged = reach[lo] | reach[hi]
            if merged != reach[lo]:
                reach[lo] = merged
                changed = True
    for u in range(n):
        for v in range(n):
            if ((reach[u] >> v) & 1) != (1 if order.leq(u, v) else 0):
                raise RuntimeError("order differs from the closure of its covers")
    undirected = {tuple(sorted(c)) for c in covers}
    if undirected != set(tree.edges):
        raise RuntimeError("covering pairs differ from the edge set")
    if tree.ball_points is not None:
        sets = [frozenset(p) for p in tree.ball_points]
        for u in range(n):
            for v in range(n):
                if order.leq(u, v) != (sets[u] <= sets[v]):
                    raise RuntimeError("tree order disagrees with ball inclusion")
    return order


def tree_to_json(tree: RootedLabeledTree) -> dict:
    obj = {
        "root": tree.root,
        "labels": [format_rational(l) for l in tree.labels],
        "edges": [[u, v] for u, v in tree.edges],
        "ball_points": (None if tree.ball_points is None
                        else [list(p) for p in tree.ball_points]),
    }
    if tree.truncated:
        obj["truncated"] = True
    return obj


def tree_from_json(obj: dict) -> RootedLabeledTree:
    if not isinstance(obj, dict) or "labels" not in obj or "edges" not in obj:
        raise ValueError('tree JSON needs "labels" and "edges"')
    return RootedLabeledTree(
        obj["labels"],
        [tuple(e) for e in obj["edges"]],
        root=obj.get("root"),
        ball_points=obj.get("ball_points"),
        truncated=obj.get("truncated", False),
    )


def tree_to_dot(tree: RootedLabeledTree, name: str = "tree") -> str:
    """Graphviz rendering: labels on nodes, leaves drawn as double circles."""
    lines = [f"graph {name} {{", "  node [shape=circle];"]
    leaf = set(tree.leaves())
    for v in range(tree.n):
        shape = ", shape=doublecircle" if v in leaf else ""
        lines.append(f'  v{v} [label="{format_rational(tree.labels[v])}"{shape}];')
    for u, v in tree.edges:
        lines.append(f"  v{u} -- v{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"
