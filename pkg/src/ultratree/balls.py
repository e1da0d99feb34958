"""Balls of a finite ultrametric space: enumeration, inclusion order, Hausdorff metric.

For finite ultrametric spaces the open and closed balls coincide as set
families, so a single enumeration over centers and realized radii yields
the whole ballean.  Balls are identified by their point sets; centers and
radii are only witnesses, since every point of a ball is one of its
centers.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional

from .core import (
    FiniteUltrametricSpace,
    format_rational,
    parse_rational,
    _subset_diam_rank,
)


class Ball:
    """A ball, canonically keyed by its sorted point tuple."""

    __slots__ = ("points", "diameter", "witness_center", "witness_radius")

    def __init__(self, points: Iterable[int], diameter: Fraction,
                 witness_center: int, witness_radius: Fraction):
        self.points = tuple(sorted(points))
        self.diameter = diameter
        self.witness_center = witness_center
        self.witness_radius = witness_radius

    def __eq__(self, other):
        return isinstance(other, Ball) and self.points == other.points

    def __hash__(self):
        return hash(self.points)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __contains__(self, point: int):
        return point in self.points

    def __repr__(self):
        return f"<Ball {{{','.join(map(str, self.points))}}} diam={self.diameter}>"


class Ballean:
    """The distinct balls of a space, in canonical order.

    Canonical order is decreasing diameter, ties broken by smallest point
    index, so the whole space comes first and singletons last.
    """

    __slots__ = ("balls",)

    def __init__(self, balls: Iterable[Ball]):
        self.balls = tuple(balls)

    def __len__(self):
        return len(self.balls)

    def __iter__(self):
        return iter(self.balls)

    def __contains__(self, ball: Ball):
        return any(b == ball for b in self.balls)

    def point_sets(self) -> set[tuple[int, ...]]:
        return {b.points for b in self.balls}


def _require_ultrametric(space) -> FiniteUltrametricSpace:
    if not isinstance(space, FiniteUltrametricSpace):
        raise TypeError("ball operations need a FiniteUltrametricSpace")
    return space


def _ball_diam_from_center(space: FiniteUltrametricSpace, center: int,
                           members: tuple[int, ...]) -> int:
    # diameter seen from any member equals the true diameter in an ultrametric
    rc = space.rank[center]
    return max(rc[x] for x in members)


def closed_ball(space: FiniteUltrametricSpace, center: int, radius) -> Ball:
    """The ball of points within `radius` of `center`.

    The stored diameter is the diameter of the member set, which is the
    canonical radius: re-drawing the ball at that radius gives the same set.
    """
    _require_ultrametric(space)
    radius = parse_rational(radius)
    if radius < 0:
        raise ValueError("radius must be nonnegative")
    row = space.matrix[center]
    members = tuple(x for x in space.points() if row[x] <= radius)
    d = space.distance_values[_ball_diam_from_center(space, center, members)]
    return Ball(members, d, center, radius)


def _canonical_sort(space: FiniteUltrametricSpace, balls: list[Ball]) -> list[Ball]:
    index = {v: i for i, v in enumerate(space.distance_values)}
    return sorted(balls, key=lambda b: (-index[b.diameter], b.points[0]))


def ballean(space: FiniteUltrametricSpace) -> Ballean:
    """All distinct balls, enumerated as closed balls over realized radii.

    Contains the whole space and every singleton; the count never exceeds
    2n - 1.
    """
    _require_ultrametric(space)
    rank = space.rank
    values = space.distance_values
    n = len(space)
    seen: dict[tuple[int, ...], Ball] = {}
    for c in range(n):
        rc = rank[c]
        for t, value in enumerate(values):
            members = tuple(x for x in range(n) if rc[x] <= t)
            if members not in seen:
                d = values[max(rc[x] for x in members)]
                seen[members] = Ball(members, d, c, value)
    return Ballean(_canonical_sort(space, list(seen.values())))


def smallest_enclosing_ball(space: FiniteUltrametricSpace, points: Iterable[int]) -> Ball:
    """Smallest ball containing `points`: the ball around any member at radius diam."""
    _require_ultrametric(space)
    pts = tuple(sorted(points))
    if not pts:
        raise ValueError("smallest enclosing ball of an empty set")
    r = space.distance_values[_subset_diam_rank(space, pts)]
    ball = closed_ball(space, pts[0], r)
    # sanity per the enclosing-ball characterization: meets the set, same diameter
    assert ball.diameter == r and pts[0] in ball
    return ball


class BallPoset:
    """The ballean ordered by inclusion.

    Any two balls are nested or disjoint, so joins always exist (the
    smallest ball around the union) while meets exist exactly for
    non-disjoint pairs, where the meet is the intersection.  A missing
    meet is reported as None, not an error.
    """

    __slots__ = ("space", "balls", "_index", "_sets")

    def __init__(self, space: FiniteUltrametricSpace, balls: tuple[Ball, ...]):
        self.space = space
        self.balls = balls
        self._index = {b.points: i for i, b in enumerate(balls)}
        self._sets = tuple(frozenset(b.points) for b in balls)

    def __len__(self):
        return len(self.balls)

    def _resolve(self, ball: Ball) -> int:
        try:
            return self._index[ball.points]
        except KeyError:
            raise ValueError(f"{ball!r} is not a ball of this space") from None

    def leq(self, lower: Ball, upper: Ball) -> bool:
        return self._sets[self._resolve(lower)] <= self._sets[self._resolve(upper)]

    def comparable(self, a: Ball, b: Ball) -> bool:
        return self.leq(a, b) or self.leq(b, a)

    def join(self, a: Ball, b: Ball) -> Ball:
        self._resolve(a), self._resolve(b)
        merged = tuple(sorted(set(a.points) | set(b.points)))
        found = smallest_enclosing_ball(self.space, merged)
        return self.balls[self._index[found.points]]

    def meet(self, a: Ball, b: Ball) -> Optional[Ball]:
        ia, ib = self._resolve(a), self._resolve(b)
        common = self._sets[ia] & self._sets[ib]
        if not common:
            return None
        # non-disjoint balls are nested, so the intersection is the smaller ball
        inner = ia if self._sets[ia] <= self._sets[ib] else ib
        return self.balls[inner]

    def largest(self) -> Ball:
        return self.balls[0]


def ball_poset(space: FiniteUltrametricSpace) -> BallPoset:
    return BallPoset(space, ballean(space).balls)


def hausdorff_distance(space: FiniteUltrametricSpace, a: Ball, b: Ball) -> Fraction:
    """Hausdorff distance between two balls: diameter of their union when distinct."""
    _require_ultrametric(space)
    if a.points == b.points:
        return Fraction(0)
    merged = tuple(sorted(set(a.points) | set(b.points)))
    return space.distance_values[_subset_diam_rank(space, merged)]


def hausdorff_distance_direct(space: FiniteUltrametricSpace, a: Ball, b: Ball) -> Fraction:
    """Hausdorff distance evaluated straight from the sup-inf definition.

    Independent of the diameter-of-union shortcut; kept as an oracle for
    cross-checking it.
    """
    rank = space.rank

    def directed(src, dst):
        return max(min(rank[x][y] for y in dst) for x in src)

    t = max(directed(a.points, b.points), directed(b.points, a.points))
    return space.distance_values[t]


class HausdorffBallSpace:
    """The ballean as an ultrametric space under the Hausdorff metric."""

    __slots__ = ("space", "balls")

    def __init__(self, space: FiniteUltrametricSpace, balls: tuple[Ball, ...]):
        self.space = space
        self.balls = balls


def hausdorff_ball_space(space: FiniteUltrametricSpace) -> HausdorffBallSpace:
    """Build (ballean, Hausdorff metric) as a validated ultrametric space.

    Point names are brace-wrapped member lists; the map x -> {x} embeds
    the original space isometrically.
    """
    _require_ultrametric(space)
    balls = ballean(space).balls
    names = ["{" + ",".join(space.names[p] for p in b.points) + "}" for b in balls]
    matrix = [
        [hausdorff_distance(space, a, b) for b in balls]
        for a in balls
    ]
    return HausdorffBallSpace(FiniteUltrametricSpace(names, matrix), balls)


def ballean_to_json(bn: Ballean) -> dict:
    return {
        "balls": [
            {"points": list(b.points), "diameter": format_rational(b.diameter)}
            for b in bn.balls
        ]
    }
