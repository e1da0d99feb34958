"""Canonical tree codes, isometry and weak-similarity decisions, distance transforms.

Two finite ultrametric spaces are isometric exactly when their labeled
representing trees are isomorphic, so isometry reduces to comparing
canonical codes.  Weak similarity (order-preserving bijection of
distances) reduces to isometry after replacing every distance by its rank
in the distance set.
"""

from __future__ import annotations

import hashlib
from fractions import Fraction
from typing import Callable, Iterable, Mapping, Optional, Union

from .core import (
    FiniteUltrametricSpace,
    format_rational,
    parse_rational,
)
from .repr_tree import RootedLabeledTree, build_representing_tree


class CanonicalCode:
    """Order-independent encoding of a rooted labeled tree.

    Two rooted labeled trees are isomorphic iff their codes are equal.
    `digest` is a short fingerprint of the full nested text.
    """

    __slots__ = ("text", "digest")

    def __init__(self, text: str):
        self.text = text
        self.digest = hashlib.sha256(text.encode("ascii")).hexdigest()

    def __eq__(self, other):
        return isinstance(other, CanonicalCode) and self.text == other.text

    def __hash__(self):
        return hash(self.text)

    def __repr__(self):
        return f"<CanonicalCode {self.digest[:12]}>"


def canonical_code(tree: RootedLabeledTree) -> CanonicalCode:
    """Recursive code: a vertex is its label plus the sorted codes of its children."""
    root = tree.require_root()

    def encode(v: int, parent: int) -> str:
        subs = sorted(encode(w, v) for w in tree.neighbors(v) if w != parent)
        return "(" + format_rational(tree.labels[v]) + ";" + ",".join(subs) + ")"

    return CanonicalCode(encode(root, -1))


def spaces_isometric(x: FiniteUltrametricSpace, y: FiniteUltrametricSpace) -> bool:
    """Isometry decision through labeled representing trees."""
    return canonical_code(build_representing_tree(x)) == canonical_code(
        build_representing_tree(y)
    )


def brute_force_isometry(
    x: FiniteUltrametricSpace,
    y: FiniteUltrametricSpace,
    max_size: int = 8,
) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Exhaustive search for a distance-preserving bijection.

    Ground truth for `spaces_isometric` on small instances.  Returns the
    witness mapping (x index -> y index) when one exists.  Backtracking
    prunes on per-point distance profiles, and spaces with different
    distance multisets are rejected without search.
    """
    if len(x) != len(y):
        return False, None
    n = len(x)
    if n > max_size:
        raise ValueError(f"brute force capped at {max_size} points, got {n}")
    flat_x = sorted(v for row in x.matrix for v in row)
    flat_y = sorted(v for row in y.matrix for v in row)
    if flat_x != flat_y:
        return False, None
    profile_x = [tuple(sorted(x.matrix[i])) for i in range(n)]
    profile_y = [tuple(sorted(y.matrix[i])) for i in range(n)]
    mapping: list[int] = []
    used = [False] * n

    def extend(i: int) -> bool:
        if i == n:
            return True
        for j in range(n):
            if used[j] or profile_x[i] != profile_y[j]:
                continue
            if any(x.matrix[i][k] != y.matrix[j][mapping[k]] for k in range(i)):
                continue
            used[j] = True
            mapping.append(j)
            if extend(i + 1):
                return True
            used[j] = False
            mapping.pop()
        return False

    if extend(0):
        return True, tuple(mapping)
    return False, None


class ScalingFunction:
    """A strictly increasing map between two finite distance sets.

    Zero maps to zero and nothing else does.
    """

    __slots__ = ("domain", "values", "_table")

    def __init__(self, domain: Iterable, values: Iterable):
        self.domain = tuple(parse_rational(v) for v in domain)
        self.values = tuple(parse_rational(v) for v in values)
        if len(self.domain) != len(self.values) or not self.domain:
            raise ValueError("domain and values must align and be nonempty")
        if self.domain[0] != 0 or self.values[0] != 0:
            raise ValueError("a scaling function fixes zero")
        for seq in (self.domain, self.values):
            for a, b in zip(seq, seq[1:]):
                if not a < b:
                    raise ValueError("scaling data must be strictly increasing")
        self._table = dict(zip(self.domain, self.values))

    def __call__(self, t) -> Fraction:
        return self._table[parse_rational(t)]

    def __repr__(self):
        pairs = ", ".join(f"{a}->{b}" for a, b in zip(self.domain, self.values))
        return f"<ScalingFunction {pairs}>"


def weak_similarity_check(
    x: FiniteUltrametricSpace,
    y: FiniteUltrametricSpace,
    bijection: Iterable[int],
) -> tuple[bool, Optional[ScalingFunction]]:
    """Does the bijection preserve the order of distances?

    True iff d(a,b) <= d(c,e) exactly when the image distances compare the
    same way, for all quadruples.  On success the scaling function mapping
    each image distance back to its source distance is returned; it is a
    strictly increasing bijection of the distance sets.
    """
    phi = tuple(bijection)
    n = len(x)
    if len(phi) != n or len(y) != n or sorted(phi) != list(range(n)):
        raise ValueError("mapping must be a bijection between the point sets")
    forward: dict[Fraction, Fraction] = {}
    for i in range(n):
        for j in range(i, n):
            src = x.matrix[i][j]
            dst = y.matrix[phi[i]][phi[j]]
            if forward.setdefault(dst, src) != src:
                return False, None
    # order equivalence for all quadruples == the map is strictly increasing
    items = sorted(forward.items())
    for (d1, s1), (d2, s2) in zip(items, items[1:]):
        if not s1 < s2:
            return False, None
    domain = [d for d, _ in items]
    values = [s for _, s in items]
    if set(domain) != set(y.distance_values) or set(values) != set(x.distance_values):
        return False, None
    return True, ScalingFunction(domain, values)


def rank_transform(space: FiniteUltrametricSpace) -> FiniteUltrametricSpace:
    """Replace every distance by its rank in the distance set."""
    rank = space.rank
    matrix = [[Fraction(rank[i][j]) for j in range(len(space))] for i in range(len(space))]
    return FiniteUltrametricSpace(space.names, matrix)


def weakly_similar(x: FiniteUltrametricSpace, y: FiniteUltrametricSpace) -> bool:
    """Weak-similarity decision via rank reduction.

    A weak similarity is an order isomorphism of distance sets composed
    with an isometry, so the spaces are weakly similar iff their
    rank-transformed copies are isometric.
    """
    return spaces_isometric(rank_transform(x), rank_transform(y))


class PreservingFunctionError(ValueError):
    """The supplied function is not ultrametric preserving on the distance set."""

    def __init__(self, witness: tuple, message: str):
        super().__init__(message)
        self.witness = witness


def apply_preserving(
    space: FiniteUltrametricSpace,
    fn: Union[Callable[[Fraction], Fraction], Mapping],
) -> FiniteUltrametricSpace:
    """Transform a space by an increasing function with f(t)=0 only at t=0.

    `fn` may be a callable or a table over the distance set.  Those two
    conditions, checked on the realized distances, are exactly what makes
    the composed matrix an ultrametric again; violations are rejected
    with a witness.
    """
    values = space.distance_values
    if callable(fn):
        image = [parse_rational(fn(v)) for v in values]
    else:
        table = {parse_rational(k): parse_rational(v) for k, v in dict(fn).items()}
        missing = [v for v in values if v not in table]
        if missing:
            raise PreservingFunctionError(
                (missing[0],), f"function undefined at distance {missing[0]}"
            )
        image = [table[v] for v in values]
    if image[0] != 0:
        raise PreservingFunctionError((Fraction(0),), "f(0) must be 0")
    for a, b in zip(values[1:], image[1:]):
        if b <= 0:
            raise PreservingFunctionError(
                (a,), f"f({a}) = {b} must be positive for positive {a}"
            )
    for i in range(1, len(values)):
        if image[i] < image[i - 1]:
            raise PreservingFunctionError(
                (values[i - 1], values[i]),
                f"f not increasing: f({values[i - 1]}) = {image[i - 1]} > "
                f"f({values[i]}) = {image[i]}",
            )
    rank = space.rank
    n = len(space)
    matrix = [[image[rank[i][j]] for j in range(n)] for i in range(n)]
    return FiniteUltrametricSpace(space.names, matrix)


def threshold_function(r) -> Callable[[Fraction], Fraction]:
    """The cutoff t -> min(r, t); flattens every distance above r to r."""
    r = parse_rational(r)
    if r <= 0:
        raise ValueError("threshold must be positive")
    return lambda t: min(r, parse_rational(t))


def bound_transform(space: FiniteUltrametricSpace, d_star) -> FiniteUltrametricSpace:
    """Rescale distances by t -> d*.t/(1+t); the result stays below d*."""
    d_star = parse_rational(d_star)
    if d_star <= 0:
        raise ValueError("d_star must be positive")
    return apply_preserving(space, lambda t: d_star * t / (1 + t))


def unbound_transform(space: FiniteUltrametricSpace, d_star) -> FiniteUltrametricSpace:
    """Inverse of `bound_transform`: s -> s/(d* - s); needs all distances below d*."""
    d_star = parse_rational(d_star)
    if d_star <= 0:
        raise ValueError("d_star must be positive")
    top = space.distance_values[-1]
    if top >= d_star:
        raise ValueError(f"distance {top} is not below d_star = {d_star}")
    return apply_preserving(space, lambda s: s / (d_star - s))


class PiecewiseLinearFn:
    """A strictly increasing piecewise linear function through the origin.

    Breakpoints are exact; beyond the last one the function continues with
    `tail_slope`.
    """

    __slots__ = ("breakpoints", "tail_slope")

    def __init__(self, breakpoints, tail_slope):
        self.breakpoints = tuple((parse_rational(a), parse_rational(b))
                                 for a, b in breakpoints)
        self.tail_slope = parse_rational(tail_slope)
        if self.breakpoints[0] != (0, 0):
            raise ValueError("must start at the origin")
        for (x0, y0), (x1, y1) in zip(self.breakpoints, self.breakpoints[1:]):
            if not (x0 < x1 and y0 < y1):
                raise ValueError("breakpoints must be strictly increasing")
        if self.tail_slope <= 0:
            raise ValueError("tail slope must be positive")

    def __call__(self, t) -> Fraction:
        t = parse_rational(t)
        if t < 0:
            raise ValueError("defined on nonnegative inputs only")
        pts = self.breakpoints
        if t >= pts[-1][0]:
            x0, y0 = pts[-1]
            return y0 + self.tail_slope * (t - x0)
        lo, hi = 0, len(pts) - 1
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if pts[mid][0] <= t:
                lo = mid
            else:
                hi = mid
        (x0, y0), (x1, y1) = pts[lo], pts[hi]
        return y0 + (y1 - y0) * (t - x0) / (x1 - x0)


def extend_scaling_function(psi: ScalingFunction) -> PiecewiseLinearFn:
    """Extend a finite scaling function to a strictly increasing function on [0, oo).

    Linear interpolation bridges the gaps between consecutive domain
    points; the gap below the smallest positive point is bridged by a
    segment through the origin, and past the largest point the function
    grows proportionally, so the extension stays strictly increasing and
    agrees with the input exactly.
    """
    if len(psi.domain) < 2:
        raise ValueError("need at least one positive domain point")
    pts = [(Fraction(0), Fraction(0))]
    pts.extend(zip(psi.domain[1:], psi.values[1:]))
    a, va = psi.domain[-1], psi.values[-1]
    return PiecewiseLinearFn(pts, tail_slope=va / a)


def quantize_binary(space: FiniteUltrametricSpace) -> FiniteUltrametricSpace:
    """Snap every positive distance down to a power of 1/2, capped at 1/2.

    A distance t >= 1/2 becomes 1/2, and t in [2^-(n+1), 2^-n) becomes
    2^-(n+1).  Output distances are dyadic, never exceed the input, and
    the input never exceeds twice the output when it was at most 1/2.
    """

    def snap(t: Fraction) -> Fraction:
        if t == 0:
            return t
        step = Fraction(1, 2)
        while step > t:
            step /= 2
        return step

    return apply_preserving(space, snap)


def quantize_ladder(space: FiniteUltrametricSpace, ladder) -> FiniteUltrametricSpace:
    """Snap distances onto an arbitrary strictly decreasing positive ladder.

    A distance at or above the top rung maps to the top rung; anything
    else maps to the largest rung not exceeding it.  The ladder must reach
    at or below the smallest positive distance.
    """
    rungs = [parse_rational(v) for v in ladder]
    for a, b in zip(rungs, rungs[1:]):
        if not a > b:
            raise ValueError("ladder must be strictly decreasing")
    if not rungs or rungs[-1] <= 0:
        raise ValueError("ladder must be positive")
    positive = [v for v in space.distance_values if v > 0]
    if positive and rungs[-1] > positive[0]:
        raise ValueError("ladder does not reach the smallest positive distance")

    def snap(t: Fraction) -> Fraction:
        if t == 0:
            return t
        for r in rungs:
            if r <= t:
                return r
        raise AssertionError("unreachable: ladder checked against the distance set")

    return apply_preserving(space, snap)
