"""Metrics generated by labeled trees and the characterization checkers.

The path-max metric turns vertex labels into distances; monotone labelings
on rooted trees are exactly the ones whose maximal chains reconstruct an
ultrametric space; and the covering-digraph checker decides which finite
posets arise as ball lattices.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .core import FiniteUltrametricSpace, diametrical_partition
from .balls import Ball, ballean
from .repr_tree import RootedLabeledTree


class PseudoUltrametricSpace:
    """A path-max metric that collapses some distinct vertex pair to zero.

    Not a metric space; `zero_pair` witnesses the collapse so callers
    cannot silently treat it as one.
    """

    __slots__ = ("names", "matrix", "zero_pair")

    def __init__(self, names, matrix, zero_pair: tuple[int, int]):
        self.names = tuple(names)
        self.matrix = tuple(tuple(row) for row in matrix)
        self.zero_pair = zero_pair

    def __len__(self):
        return len(self.names)

    def __repr__(self):
        return f"<PseudoUltrametricSpace n={len(self)} zero_pair={self.zero_pair}>"


def path_max_metric(tree: RootedLabeledTree) -> Union[FiniteUltrametricSpace,
                                                      PseudoUltrametricSpace]:
    """Distance between vertices: the largest label on the connecting path.

    Yields a genuine ultrametric iff every edge has a positively labeled
    endpoint; otherwise the pseudoultrametric is returned with a witness
    pair at distance zero.
    """
    n = tree.n
    labels = tree.labels
    matrix = [[Fraction(0)] * n for _ in range(n)]
    for src in range(n):
        stack = [(src, -1, labels[src])]
        while stack:
            u, parent, running = stack.pop()
            if u != src:
                matrix[src][u] = running
            for v in tree.neighbors(u):
                if v != parent:
                    stack.append((v, u, max(running, labels[v])))
    names = [f"v{i}" for i in range(n)]
    for u, v in tree.edges:
        if labels[u] == 0 and labels[v] == 0:
            return PseudoUltrametricSpace(names, matrix, (u, v))
    return FiniteUltrametricSpace(names, matrix)


def is_monotone_labeling(tree: RootedLabeledTree,
                         root: Optional[int] = None) -> tuple[bool, Optional[str]]:
    """Labels strictly decrease toward the leaves and every leaf is labeled zero.

    This is the finite reading of a monotone labeling: maximal chains end
    in a leaf, and their labels must reach zero there.
    """
    root = tree.require_root() if root is None else root
    parent = tree.parent_map(root)
    for v in range(tree.n):
        p = parent[v]
        if p is not None and not tree.labels[v] < tree.labels[p]:
            return False, f"label of {v} does not drop below its parent {p}"
    for v in range(tree.n):
        if tree.out_degree(v, root) == 0 and tree.labels[v] != 0:
            return False, f"leaf {v} has positive label {tree.labels[v]}"
    return True, None


class Representability:
    __slots__ = ("accepted", "root", "reason")

    def __init__(self, accepted: bool, root: Optional[int], reason: Optional[str]):
        self.accepted = accepted
        self.root = root
        self.reason = reason

    def __repr__(self):
        if self.accepted:
            return f"<accepted root={self.root}>"
        return f"<rejected: {self.reason}>"


def _out_degree_violation(tree: RootedLabeledTree, root: int) -> Optional[int]:
    for v in range(tree.n):
        if tree.out_degree(v, root) == 1:
            return v
    return None


def check_representable(tree: RootedLabeledTree) -> Representability:
    """Decide whether a labeled tree is the representing tree of some space.

    Tries every root in index order and accepts the first one under which
    the labeling is monotone and no vertex has out-degree one.  Rejects
    with the blocking condition of the smallest-index root otherwise.
    """
    first_reason = None
    for root in range(tree.n):
        v = _out_degree_violation(tree, root)
        if v is not None:
            if first_reason is None:
                first_reason = f"root {root}: out-degree 1 at vertex {v}"
            continue
        ok, reason = is_monotone_labeling(tree, root)
        if ok:
            return Representability(True, root, None)
        if first_reason is None:
            first_reason = f"root {root}: {reason}"
    return Representability(False, None, first_reason)


class MaxChain:
    """A maximal chain of the rooted order: the vertex path from root to a leaf."""

    __slots__ = ("vertices",)

    def __init__(self, vertices: Sequence[int]):
        self.vertices = tuple(vertices)

    @property
    def leaf(self) -> int:
        return self.vertices[-1]

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)

    def __eq__(self, other):
        return isinstance(other, MaxChain) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        return f"<MaxChain {'>'.join(map(str, self.vertices))}>"


def maximal_chains(tree: RootedLabeledTree) -> tuple[MaxChain, ...]:
    """One chain per leaf, each the unique root-to-leaf path, in leaf order."""
    root = tree.require_root()
    kids = tree.children_map(root)
    chains: list[MaxChain] = []
    stack: list[tuple[int, tuple[int, ...]]] = [(root, (root,))]
    while stack:
        v, path = stack.pop()
        if not kids[v]:
            chains.append(MaxChain(path))
        else:
            for c in reversed(kids[v]):
                stack.append((c, path + (c,)))
    return tuple(chains)


class MaxChainSpace:
    """The ultrametric space reconstructed from a monotone labeled tree."""

    __slots__ = ("chains", "space")

    def __init__(self, chains: tuple[MaxChain, ...], space: FiniteUltrametricSpace):
        self.chains = chains
        self.space = space


def reconstruct_space(tree: RootedLabeledTree) -> MaxChainSpace:
    """Space over the maximal chains: distance is the label of the deepest common vertex.

    The deepest common vertex of two chains is the meet of their
    intersection, i.e. the lowest common ancestor of their leaves.
    Requires a monotone labeling.
    """
    ok, reason = is_monotone_labeling(tree)
    if not ok:
        raise ValueError(f"labeling is not monotone: {reason}")
    chains = maximal_chains(tree)
    m = len(chains)
    matrix = [[Fraction(0)] * m for _ in range(m)]
    for i in range(m):
        vi = chains[i].vertices
        for j in range(i + 1, m):
            vj = chains[j].vertices
            deepest = vi[0]
            for a, b in zip(vi, vj):
                if a != b:
                    break
                deepest = a
            matrix[i][j] = matrix[j][i] = tree.labels[deepest]
    names = [str(c.leaf) for c in chains]
    return MaxChainSpace(chains, FiniteUltrametricSpace(names, matrix))


class PosetCheckReport:
    """Condition flags for the ball-lattice characterization of finite posets.

    `accepted` is the finite verdict: every non-largest element has a
    unique upper cover and every non-minimal element has at least two
    lower covers.
    """

    __slots__ = ("n", "has_largest", "largest", "unique_upper_cover",
                 "upper_witness", "lower_covers_ok", "lower_witness",
                 "covers_are_covering_relation", "covers_witness")

    def __init__(self, **kw):
        for name in self.__slots__:
            setattr(self, name, kw[name])

    @property
    def accepted(self) -> bool:
        return self.unique_upper_cover and self.lower_covers_ok

    def __repr__(self):
        return (f"<PosetCheckReport accepted={self.accepted} "
                f"largest={self.has_largest} upper={self.unique_upper_cover} "
                f"lower={self.lower_covers_ok}>")


def check_ballean_poset(n: int, covers: Iterable[tuple[int, int]]) -> PosetCheckReport:
    """Test whether a finite poset is order-isomorphic to a ball lattice.

    `covers` lists pairs (lower, upper).  The order is their
    reflexive-transitive closure; a cycle means the input is not a partial
    order and raises ValueError.
    """
    if n <= 0:
        raise ValueError("poset must be nonempty")
    arcs = []
    for lo, hi in covers:
        lo, hi = int(lo), int(hi)
        if not (0 <= lo < n and 0 <= hi < n) or lo == hi:
            raise ValueError(f"bad cover pair ({lo},{hi})")
        arcs.append((lo, hi))
    up: list[int] = [1 << v for v in range(n)]
    changed = True
    while changed:
        changed = False
        for lo, hi in arcs:
            merged = up[lo] | up[hi]
            if merged != up[lo]:
                up[lo] = merged
                changed = True
    for v in range(n):
        for w in range(n):
            if v != w and (up[v] >> w) & 1 and (up[w] >> v) & 1:
                raise ValueError(f"not a partial order: {v} and {w} lie on a cycle")

    def leq(a, b):
        return (up[a] >> b) & 1

    largest = next((l for l in range(n) if all(leq(v, l) for v in range(n))), None)

    # true covering relation of the closure order
    derived: set[tuple[int, int]] = set()
    for a in range(n):
        for b in range(n):
            if a != b and leq(a, b):
                if not any(w != a and w != b and leq(a, w) and leq(w, b)
                           for w in range(n)):
                    derived.add((a, b))
    covers_match = derived == set(arcs)
    covers_witness = None
    if not covers_match:
        extra = sorted(set(arcs) - derived)
        covers_witness = f"redundant or missing cover arcs, e.g. {extra[:1] or sorted(derived - set(arcs))[:1]}"

    unique_upper = True
    upper_witness = None
    for p in range(n):
        if p == largest:
            continue
        uppers = [q for a, q in derived if a == p]
        if len(uppers) != 1:
            unique_upper = False
            upper_witness = f"element {p} has upper covers {sorted(uppers)}"
            break

    lower_ok = True
    lower_witness = None
    for b in range(n):
        lowers = [a for a, q in derived if q == b]
        minimal = not any(leq(a, b) and a != b for a in range(n))
        if not minimal and len(lowers) < 2:
            lower_ok = False
            lower_witness = f"element {b} has lower covers {sorted(lowers)}"
            break

    return PosetCheckReport(
        n=n,
        has_largest=largest is not None,
        largest=largest,
        unique_upper_cover=unique_upper,
        upper_witness=upper_witness,
        lower_covers_ok=lower_ok,
        lower_witness=lower_witness,
        covers_are_covering_relation=covers_match,
        covers_witness=covers_witness,
    )


def poset_from_json(obj: dict) -> tuple[int, list[tuple[int, int]]]:
    if not isinstance(obj, dict) or "elements" not in obj or "covers" not in obj:
        raise ValueError('poset JSON needs "elements" and "covers"')
    return len(obj["elements"]), [tuple(c) for c in obj["covers"]]


def sphere_plus_center_condition(
    space: FiniteUltrametricSpace,
) -> tuple[bool, Optional[Ball]]:
    """Every ball of positive diameter has a singleton part in its diametrical graph.

    Equivalently each such ball is a sphere with its center added.  The
    witness is the first offending ball in canonical order.
    """
    for ball in ballean(space):
        if ball.diameter == 0:
            continue
        parts = diametrical_partition(space, ball.points)
        if not any(len(p) == 1 for p in parts):
            return False, ball
    return True, None
