"""Offline latency machinery: zigzag tours, first-visit arc indexing, and the
exact latency-optimal service walk.

A tour starts at the origin and alternates direction, each turning point
strictly extending coverage on its side.  The latency optimum is computed two
independent ways: an interval dynamic program (used everywhere) and a
permutation brute force (used as a cross-check oracle on small inputs).
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .core import Instance, Request, Trajectory, _exact

Scalar = Fraction

_ZERO = Fraction(0)


class UncoveredLocationError(ValueError):
    """A location outside the coverage of a tour was queried."""


class Direction(enum.Enum):
    LEFT = -1
    RIGHT = 1

    @property
    def opposite(self) -> "Direction":
        return Direction.LEFT if self is Direction.RIGHT else Direction.RIGHT


@dataclass(frozen=True)
class Tour:
    """Alternating service walk from the origin.

    Leg k goes to ``turning_points[k]``; directions alternate starting with
    ``first_direction`` and every turning point strictly extends the covered
    interval on its side.  An empty tour stays parked at the origin.
    """

    first_direction: Direction
    turning_points: Tuple[Scalar, ...]

    def __post_init__(self):
        tps = tuple(_exact(tp, "turning point") for tp in self.turning_points)
        object.__setattr__(self, "turning_points", tps)
        lo = hi = _ZERO
        d = self.first_direction
        for tp in tps:
            if d is Direction.LEFT:
                if not tp < lo:
                    raise ValueError(f"turning point {tp} does not extend left of {lo}")
                lo = tp
            else:
                if not tp > hi:
                    raise ValueError(f"turning point {tp} does not extend right of {hi}")
                hi = tp
            d = d.opposite

    @property
    def legs(self) -> Tuple[Tuple[Scalar, Scalar], ...]:
        pts = (_ZERO,) + self.turning_points
        return tuple(zip(pts, pts[1:]))

    @property
    def total_arclength(self) -> Scalar:
        return sum((abs(v - u) for u, v in self.legs), _ZERO)

    @property
    def extent(self) -> Tuple[Scalar, Scalar]:
        """Covered interval (lo, hi)."""
        lo = min((tp for tp in self.turning_points), default=_ZERO)
        hi = max((tp for tp in self.turning_points), default=_ZERO)
        return min(lo, _ZERO), max(hi, _ZERO)

    @property
    def end_position(self) -> Scalar:
        return self.turning_points[-1] if self.turning_points else _ZERO

    def covers(self, x) -> bool:
        lo, hi = self.extent
        return lo <= x <= hi

    def position_at_arc(self, s) -> Scalar:
        """Position after walking arc length ``s`` along the tour (clamped)."""
        if s < 0:
            raise ValueError("arc length must be nonnegative")
        for u, v in self.legs:
            step = abs(v - u)
            if s <= step:
                return u + s if v > u else u - s
            s = s - step
        return self.end_position


def canonical_tour(waypoints: Iterable[Scalar]) -> Tour:
    """Collapse an ordered visit list into a canonical alternating tour.

    Waypoints already covered by the walk so far are dropped and consecutive
    same-side extensions are merged, so no first visit happens later than in
    the literal walk.
    """
    seq = [_exact(w, "waypoint") for w in waypoints]
    while True:
        kept: List[Scalar] = []
        lo = hi = _ZERO
        for w in seq:
            if lo <= w <= hi:
                continue
            kept.append(w)
            lo, hi = min(lo, w), max(hi, w)
        merged: List[Scalar] = []
        for w in kept:
            if merged and (merged[-1] > 0) == (w > 0):
                # survivors on one side come in increasing magnitude
                merged[-1] = w
            else:
                merged.append(w)
        if merged == seq:
            break
        seq = merged
    first = Direction.LEFT if seq and seq[0] < 0 else Direction.RIGHT
    return Tour(first, tuple(seq))


class ArcIndex:
    """First-visit arc length along a tour, per covered location."""

    def __init__(self, tour: Tour):
        self.tour = tour
        self._segments = []  # (u, v, arc_at_u, covered_lo, covered_hi) per leg
        arc = _ZERO
        lo = hi = _ZERO
        for u, v in tour.legs:
            self._segments.append((u, v, arc, lo, hi))
            arc += abs(v - u)
            lo, hi = min(lo, v), max(hi, v)
        self._lo, self._hi = lo, hi

    def at(self, x) -> Scalar:
        """Arc length at which ``x`` is first visited."""
        if x == 0:
            return _ZERO
        for u, v, arc, lo, hi in self._segments:
            if v < u and v <= x < lo:
                return arc + (u - x)
            if v > u and hi < x <= v:
                return arc + (x - u)
        raise UncoveredLocationError(f"{x} is outside the tour coverage [{self._lo}, {self._hi}]")


def arc_index(tour: Tour) -> ArcIndex:
    return ArcIndex(tour)


def tour_trajectory(tour: Tour) -> Trajectory:
    """Walk the tour once at unit speed starting at time 0, then park."""
    pts = [(_ZERO, _ZERO)]
    t = _ZERO
    for u, v in tour.legs:
        t += abs(v - u)
        pts.append((t, v))
    return Trajectory(tuple(pts))


# --- exact latency optimum ----------------------------------------------------


def optimal_latency_tour(points: Iterable[Scalar]) -> Tuple[Tour, Scalar]:
    """Minimum-latency service walk over the given locations (with repeats).

    Returns the canonical optimal tour and the exact minimal sum of
    first-visit times.  Locations at the origin are served at time 0 and do
    not influence the walk.  Ties prefer fewer direction changes, then a
    first move to the left, which pins the result down uniquely.
    """
    weights: Dict[Scalar, int] = {}
    for p in points:
        p = _exact(p, "location")
        weights[p] = weights.get(p, 0) + 1
    weights.pop(_ZERO, None)
    if not weights:
        return Tour(Direction.RIGHT, ()), _ZERO

    xs = sorted(weights)
    if _ZERO not in weights:
        xs = sorted(xs + [_ZERO])
    w = [weights.get(x, 0) for x in xs]
    m = len(xs)
    o = xs.index(_ZERO)
    total_w = sum(w)
    prefix = [0]
    for wi in w:
        prefix.append(prefix[-1] + wi)

    def served(i: int, j: int) -> int:
        return prefix[j + 1] - prefix[i]

    # dp[(i, j, side)] = (cost, turns, first_move_right); side 0 = at xs[i], 1 = at xs[j]
    dp: Dict[Tuple[int, int, int], Tuple[Scalar, int, int]] = {
        (o, o, 0): (_ZERO, 0, 0),
        (o, o, 1): (_ZERO, 0, 0),
    }
    parent: Dict[Tuple[int, int, int], Tuple[int, int, int]] = {}

    def relax(key, value, par):
        cur = dp.get(key)
        if cur is None or value < cur:
            dp[key] = value
            parent[key] = par

    for length in range(1, m):
        for i in range(max(0, o - length), o + 1):
            j = i + length
            if j >= m or j < o:
                continue
            unserved_from = lambda ii, jj: total_w - served(ii, jj)
            # arrive at the left end xs[i]
            if i + 1 <= o:
                for side, dist, dturn in (
                    (0, xs[i + 1] - xs[i], 0),
                    (1, xs[j] - xs[i], 1),
                ):
                    prev = dp.get((i + 1, j, side))
                    if prev is None:
                        continue
                    cost, turns, first = prev
                    moving_first = (i + 1, j) == (o, o)
                    turns = turns + (0 if moving_first else dturn)
                    first = 0 if moving_first else first
                    relax(
                        (i, j, 0),
                        (cost + dist * unserved_from(i + 1, j), turns, first),
                        (i + 1, j, side),
                    )
            # arrive at the right end xs[j]
            if j - 1 >= o:
                for side, dist, dturn in (
                    (1, xs[j] - xs[j - 1], 0),
                    (0, xs[j] - xs[i], 1),
                ):
                    prev = dp.get((i, j - 1, side))
                    if prev is None:
                        continue
                    cost, turns, first = prev
                    moving_first = (i, j - 1) == (o, o)
                    turns = turns + (0 if moving_first else dturn)
                    first = 1 if moving_first else first
                    relax(
                        (i, j, 1),
                        (cost + dist * unserved_from(i, j - 1), turns, first),
                        (i, j - 1, side),
                    )

    finals = [(dp[key], key) for key in ((0, m - 1, 0), (0, m - 1, 1)) if key in dp]
    (best, key) = min(finals)
    # walk parents back, collecting the interval-extension positions in order
    events: List[Scalar] = []
    while key in parent:
        i, j, side = key
        events.append(xs[i] if side == 0 else xs[j])
        key = parent[key]
    events.reverse()
    return canonical_tour(events), best[0]


_PERM_CACHE: Dict[int, np.ndarray] = {}


def _perms(n: int) -> np.ndarray:
    if n not in _PERM_CACHE:
        _PERM_CACHE[n] = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    return _PERM_CACHE[n]


def brute_force_latency(points: Iterable[Scalar], max_n: int = 9) -> Tuple[Scalar, Tuple[Scalar, ...]]:
    """Exhaustive latency optimum: tries every service order.

    Independent of the dynamic program above.  Positions are scaled to a
    common denominator and all orders are evaluated with int64 vector math;
    the winning order is then re-costed exactly.  Returns (total, order).
    """
    pts = sorted(p for p in (_exact(q, "location") for q in points) if p != 0)
    n = len(pts)
    if n == 0:
        return _ZERO, ()
    if n > max_n:
        raise ValueError(f"brute force capped at {max_n} non-origin points, got {n}")

    scale = lcm(*(p.denominator for p in pts))
    ints = [int(p * scale) for p in pts]
    # worst-case weighted total fits comfortably in int64 for sane inputs
    bound = 2 * max(abs(v) for v in ints) * n * n
    if bound < 2**62:
        perms = _perms(n)
        X = np.array(ints, dtype=np.int64)[perms]  # (n!, n) positions in order
        prev = np.concatenate([np.zeros((X.shape[0], 1), dtype=np.int64), X[:, :-1]], axis=1)
        moves = np.abs(X - prev)
        weights = np.arange(n, 0, -1, dtype=np.int64)
        totals = moves @ weights
        k = int(np.argmin(totals))
        order = tuple(pts[idx] for idx in perms[k])
        best_scaled = int(totals[k])
    else:
        order, best_scaled = None, None
        for perm in itertools.permutations(range(n)):
            t = pos = 0
            tot = 0
            for rank, idx in enumerate(perm):
                t += abs(ints[idx] - pos)
                pos = ints[idx]
                tot += t
            if best_scaled is None or tot < best_scaled:
                best_scaled = tot
                order = tuple(pts[idx] for idx in perm)

    t = _ZERO
    pos = _ZERO
    total = _ZERO
    for p in order:
        t += abs(p - pos)
        pos = p
        total += t
    assert total == Fraction(best_scaled, scale)
    return total, order


# --- per-request and aggregate reference values -------------------------------


def simple_lower_bound(request: Request) -> Scalar:
    """No unit-speed schedule finishes a request before its distance from the
    origin or before its arrival."""
    return max(abs(request.actual), request.arrival)


def tour_reference_bound(request: Request, index: ArcIndex) -> Scalar:
    """First-visit time of the request along a latency-optimal walk of the
    actual locations, floored by the arrival time."""
    return max(index.at(request.actual), request.arrival)


def opt_sum_lower_bound(instance: Instance) -> Scalar:
    """Lower bound on the optimal total completion time of an instance.

    The latency optimum over the actual locations ignores arrivals, and the
    arrival sum ignores geometry; both bound the optimum from below.
    """
    _, dp_total = optimal_latency_tour(r.actual for r in instance.requests)
    arrival_total = sum((r.arrival for r in instance.requests), _ZERO)
    return max(dp_total, arrival_total)
