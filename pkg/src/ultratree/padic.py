"""Exact p-adic valuations, finite p-adic sample spaces, and Bethe-tree generators.

Rationals stand in for p-adic numbers throughout: the integers are dense
in the p-adic integers, so finite samples of rationals already exhibit
the ball structure.  No digit-stream representation is kept.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional

from .core import FiniteUltrametricSpace, diametrical_partition, parse_rational
from .repr_tree import RootedLabeledTree, build_representing_tree
from .morphisms import canonical_code


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _require_prime(p: int) -> int:
    p = int(p)
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    return p


def _int_valuation(n: int, p: int) -> int:
    count = 0
    n = abs(n)
    while n % p == 0:
        n //= p
        count += 1
    return count


class PAdicValuation:
    """Norm of a rational at a prime: p^(-gamma), where t = p^gamma * m/n.

    `gamma` is None for t = 0, whose norm is zero.
    """

    __slots__ = ("prime", "gamma", "norm")

    def __init__(self, prime: int, gamma: Optional[int], norm: Fraction):
        self.prime = prime
        self.gamma = gamma
        self.norm = norm

    def __repr__(self):
        return f"<|.|_{self.prime} gamma={self.gamma} norm={self.norm}>"


def p_valuation(t, p: int) -> PAdicValuation:
    """Exact valuation of a rational at a prime.

    Multiplicative over products and non-Archimedean over sums.
    """
    p = _require_prime(p)
    t = parse_rational(t)
    if t == 0:
        return PAdicValuation(p, None, Fraction(0))
    gamma = _int_valuation(t.numerator, p) - _int_valuation(t.denominator, p)
    norm = Fraction(1, p ** gamma) if gamma >= 0 else Fraction(p ** (-gamma))
    return PAdicValuation(p, gamma, norm)


def padic_metric(t, w, p: int) -> Fraction:
    return p_valuation(parse_rational(t) - parse_rational(w), p).norm


def padic_space(points: Iterable, p: int) -> FiniteUltrametricSpace:
    """Finite sample of rationals with the p-adic metric.

    Every distance is an integer power of p (or zero), so the sample is
    ultrametric by construction; the constructor re-checks anyway.
    """
    p = _require_prime(p)
    pts = [parse_rational(v) for v in points]
    if len(set(pts)) != len(pts):
        raise ValueError("sample points must be distinct")
    names = [str(v) for v in pts]
    n = len(pts)
    matrix = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            d = p_valuation(pts[i] - pts[j], p).norm
            matrix[i][j] = matrix[j][i] = d
    return FiniteUltrametricSpace(names, matrix)


def residue_partition_check(points: Iterable[int], p: int) -> bool:
    """Do the diametrical parts of an integer sample equal its residue classes mod p?

    Requires at least two residue classes to be represented, so that the
    sample's diameter is 1 and the diametrical graph separates residues.
    """
    p = _require_prime(p)
    pts = [int(v) for v in points]
    residues: dict[int, set[int]] = {}
    for i, v in enumerate(pts):
        residues.setdefault(v % p, set()).add(i)
    if len(residues) < 2:
        raise ValueError("sample must meet at least two residue classes")
    space = padic_space(pts, p)
    parts = diametrical_partition(space)
    got = {frozenset(part) for part in parts}
    want = {frozenset(s) for s in residues.values()}
    return got == want


def bethe_ball_tree(p: int, depth: int, top_label) -> RootedLabeledTree:
    """Depth-limited prefix of the representing tree of a p-adic ball.

    A full p-ary tree: every vertex gets p children carrying one p-th of
    its label.  The result is marked truncated, because its leaves keep
    positive labels; it is the prefix of an infinite tree, not a finite
    representing tree itself.
    """
    p = _require_prime(p)
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    top = parse_rational(top_label)
    if top <= 0:
        raise ValueError("top label must be positive")
    labels: list[Fraction] = []
    edges: list[tuple[int, int]] = []

    def build(label: Fraction, remaining: int) -> int:
        vid = len(labels)
        labels.append(label)
        if remaining > 0:
            for _ in range(p):
                cid = build(label / p, remaining - 1)
                edges.append((vid, cid))
        return vid

    build(top, depth)
    return RootedLabeledTree(labels, edges, root=0, truncated=True)


def sphere_tree(p: int, depth: int, top_label) -> RootedLabeledTree:
    """Depth-limited representing tree of a p-adic sphere.

    For p >= 3 the sphere tree is the ball tree with one root subtree
    removed (the root keeps p - 1 children).  For p = 2 the sphere is
    isometric to a ball of half the diameter, so the ball tree is built
    with the top label halved.
    """
    p = _require_prime(p)
    if depth < 1:
        raise ValueError("sphere trees need depth >= 1")
    top = parse_rational(top_label)
    if top <= 0:
        raise ValueError("top label must be positive")
    if p == 2:
        return bethe_ball_tree(2, depth, top / 2)
    labels: list[Fraction] = [top]
    edges: list[tuple[int, int]] = []

    def build(label: Fraction, remaining: int) -> int:
        vid = len(labels)
        labels.append(label)
        if remaining > 0:
            for _ in range(p):
                cid = build(label / p, remaining - 1)
                edges.append((vid, cid))
        return vid

    for _ in range(p - 1):
        cid = build(top / p, depth - 1)
        edges.append((0, cid))
    return RootedLabeledTree(labels, edges, root=0, truncated=True)


def padic_ball_tree_vs_sample(p: int, depth: int) -> bool:
    """Check the sample {0..p^depth - 1} against the Bethe-tree prediction.

    The representing tree of the sample must match the depth-limited ball
    tree, scaled to the sample's diameter, once the truncated leaf level
    collapses to label zero (singletons have diameter zero).
    """
    p = _require_prime(p)
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    sample = range(p ** depth)
    space = padic_space(sample, p)
    actual = build_representing_tree(space)
    if depth == 0:
        return actual.n == 1 and actual.labels[0] == 0
    diameter = space.distance_values[-1]
    predicted = bethe_ball_tree(p, depth, diameter)
    collapsed = RootedLabeledTree(
        [Fraction(0) if predicted.degree(v) <= 1 and v != predicted.root
         else predicted.labels[v] for v in range(predicted.n)],
        predicted.edges,
        root=predicted.root,
    )
    return canonical_code(actual) == canonical_code(collapsed)
