"""Online strategies: geometric round-trip schedules and prediction-guided tours.

All schedule arithmetic is exact.  The optimal trip growth rate involves
``sqrt(3)``, so scalars here live in the quadratic extension Q[sqrt(3)],
represented as an exact pair ``p + q*sqrt(3)`` of rationals.  Everything
downstream (trajectories, service times, ratios) stays exact in that field.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .core import Instance, LineSegment, Model, Trajectory, _exact
from .offline import Tour, canonical_tour, optimal_latency_tour

_ZERO = Fraction(0)
_HALF = Fraction(1, 2)


def _pair_sign(p, q) -> int:
    """Sign of p + q*sqrt(3), without evaluating the root."""
    if q == 0:
        return (p > 0) - (p < 0)
    if p == 0:
        return 1 if q > 0 else -1
    if p > 0 and q > 0:
        return 1
    if p < 0 and q < 0:
        return -1
    # opposite signs: the sign follows whichever of p^2, 3 q^2 dominates
    pp, qq = p * p, 3 * q * q
    if p > 0:  # q < 0
        return 1 if pp > qq else -1  # pp == qq impossible: sqrt(3) irrational
    return 1 if qq > pp else -1


class ModelMismatchError(ValueError):
    """Strategy asked for information the instance's model does not provide."""


class QuadraticScalar:
    """Exact element p + q*sqrt(3) of Q[sqrt(3)].

    Supports field arithmetic and total ordering, mixes freely with int and
    Fraction, and refuses floats.  Rational values (q == 0) compare and hash
    consistently with the equal Fraction.
    """

    __slots__ = ("p", "q")

    def __init__(self, p, q=0):
        if type(p) is not Fraction:  # hot path: components usually arrive exact
            if isinstance(p, float):
                raise TypeError("QuadraticScalar components must be exact")
            p = Fraction(p)
        if type(q) is not Fraction:
            if isinstance(q, float):
                raise TypeError("QuadraticScalar components must be exact")
            q = Fraction(q)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticScalar is immutable")

    # -- coercion ----------------------------------------------------------

    @staticmethod
    def _coerce(other) -> "QuadraticScalar":
        if isinstance(other, QuadraticScalar):
            return other
        if isinstance(other, float):
            raise TypeError("refusing float arithmetic with QuadraticScalar")
        if isinstance(other, (int, Fraction)):
            return QuadraticScalar(other)
        return NotImplemented  # type: ignore[return-value]

    @property
    def is_rational(self) -> bool:
        return self.q == 0

    def as_fraction(self) -> Fraction:
        if self.q != 0:
            raise ValueError(f"{self} is irrational")
        return self.p

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadraticScalar(self.p + o.p, self.q + o.q)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadraticScalar(self.p - o.p, self.q - o.q)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadraticScalar(o.p - self.p, o.q - self.q)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadraticScalar(self.p * o.p + 3 * self.q * o.q, self.p * o.q + self.q * o.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = o.p * o.p - 3 * o.q * o.q
        if d == 0:
            raise ZeroDivisionError("division by zero in Q[sqrt(3)]")
        return QuadraticScalar(
            (self.p * o.p - 3 * self.q * o.q) / d,
            (self.q * o.p - self.p * o.q) / d,
        )

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o.__truediv__(self)

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        out = QuadraticScalar(1)
        base = self
        e = exponent
        while e:
            if e & 1:
                out = out * base
            base = base * base
            e >>= 1
        return out

    def __neg__(self):
        return QuadraticScalar(-self.p, -self.q)

    def __pos__(self):
        return self

    def __abs__(self):
        return -self if self._sign() < 0 else self

    # -- ordering ----------------------------------------------------------

    def _sign(self) -> int:
        return _pair_sign(self.p, self.q)

    def _cmp(self, other) -> Optional[int]:
        # inlined coercion: comparisons dominate simulation time
        if isinstance(other, QuadraticScalar):
            return _pair_sign(self.p - other.p, self.q - other.q)
        if isinstance(other, (int, Fraction)):
            return _pair_sign(self.p - other, self.q)
        if isinstance(other, float):
            raise TypeError("refusing float comparison with QuadraticScalar")
        return None

    def __eq__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return NotImplemented if c is None else c >= 0

    def __hash__(self):
        return hash(self.p) if self.q == 0 else hash((self.p, self.q))

    # -- conversions -------------------------------------------------------

    def __bool__(self):
        return self.p != 0 or self.q != 0

    def __float__(self):
        return float(self.p) + float(self.q) * math.sqrt(3.0)

    def __floor__(self) -> int:
        n = math.floor(float(self))
        while self >= n + 1:
            n += 1
        while self < n:
            n -= 1
        return n

    def __repr__(self):
        return f"QuadraticScalar({self.p}, {self.q})"

    def __str__(self):
        if self.q == 0:
            return str(self.p)
        sign = "+" if self.q > 0 else "-"
        return f"{self.p} {sign} {abs(self.q)}*sqrt(3)"


SQRT3 = QuadraticScalar(0, 1)
DEFAULT_ALPHA = QuadraticScalar(0, _HALF)  # sqrt(3)/2, the ratio-optimal growth knob
CERT_RATIO = QuadraticScalar(2, 1)  # 2 + sqrt(3): certified per-request ratio
FALLBACK_THRESHOLD = QuadraticScalar(_HALF, Fraction(-1, 4))  # (2 - sqrt(3))/4 ~ 0.067


def parse_alpha(text: str):
    """Parse the trip-growth knob: the literal ``sqrt3/2`` or a positive rational."""
    cleaned = text.strip().lower()
    if cleaned == "sqrt3/2":
        return DEFAULT_ALPHA
    try:
        value = Fraction(cleaned)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad alpha {text!r} (use 'sqrt3/2' or a rational)") from exc
    if value <= 0:
        raise ValueError("alpha must be positive")
    return value


@dataclass(frozen=True)
class RoundTripSchedule:
    """Geometric growth schedule for origin-anchored round trips.

    Trip j has virtual length ``(2+2a)`` for j=1 and ``(2+2a)^(j-1) * (1+2a)``
    after that, plus a constant ``pad`` per trip; the trip lengths telescope so
    that the first j trips together take ``(2+2a)^j + j*pad`` time.  ``reach``
    is the turnaround distance, half the trip length.
    """

    alpha: object = DEFAULT_ALPHA
    pad: Fraction = _ZERO

    def __post_init__(self):
        object.__setattr__(self, "alpha", _exact(self.alpha, "alpha"))
        object.__setattr__(self, "pad", _exact(self.pad, "pad"))
        if not self.alpha > 0:
            raise ValueError("alpha must be positive")
        if self.pad < 0:
            raise ValueError("pad must be nonnegative")

    @property
    def growth(self):
        return 2 + 2 * self.alpha

    def trip_length(self, j: int):
        if j < 1:
            raise ValueError("trips are numbered from 1")
        base = self.growth if j == 1 else self.growth ** (j - 1) * (1 + 2 * self.alpha)
        return base + self.pad

    def reach(self, j: int):
        return self.trip_length(j) / 2

    def cumulative_length(self, j: int):
        """Total time spent in trips 1..j (0 for j=0)."""
        if j < 0:
            raise ValueError("trip count must be nonnegative")
        if j == 0:
            return _ZERO
        return self.growth ** j + j * self.pad


def first_visit_trip(schedule: RoundTripSchedule, arc) -> int:
    """Index of the first trip whose reach covers the given arc distance."""
    j = 1
    while schedule.reach(j) < arc:
        j += 1
    return j


def roundtrip_trajectory(path: Tour, schedule: RoundTripSchedule, horizon) -> Trajectory:
    """Clamped geometric round trips over a path, until ``horizon``.

    Trip j walks the path from the origin out to arc ``min(reach(j), length)``
    and back.  Once the reach passes the path length, every further trip
    sweeps the whole path.  An empty path parks at the origin.
    """
    total = path.total_arclength
    if total == 0 or horizon <= 0:
        return Trajectory(((_ZERO, _ZERO),))
    # arc marks of the path's own turning points (direction changes in space)
    marks: List[Tuple[object, object]] = []
    arc = _ZERO
    for u, v in path.legs:
        arc += abs(v - u)
        marks.append((arc, v))
    pts: List[Tuple[object, object]] = [(_ZERO, _ZERO)]
    t = _ZERO
    j = 1
    clamped = False
    while t < horizon:
        if clamped:
            reach = total
        else:
            reach = schedule.reach(j)
            if reach >= total:
                clamped = True  # stop touching the exploding geometric terms
                reach = total
        turn_pos = path.end_position if reach == total else path.position_at_arc(reach)
        for c, p in marks:
            if c < reach:
                pts.append((t + c, p))
        pts.append((t + reach, turn_pos))
        for c, p in reversed(marks):
            if c < reach:
                pts.append((t + 2 * reach - c, p))
        t = t + 2 * reach
        pts.append((t, _ZERO))
        j += 1
    return Trajectory(tuple(pts))


def coverage_horizon(path: Tour, schedule: RoundTripSchedule, latest_arrival):
    """A time by which every on-path location has surely been visited after
    every arrival: full-coverage trips repeat every round after the reach
    first exceeds the path length."""
    total = path.total_arclength
    if total == 0:
        return _ZERO
    j = 1
    while schedule.reach(j) < total:
        j += 1
    return schedule.cumulative_length(j) + latest_arrival + 4 * total + 1


# --- strategies ----------------------------------------------------------------


@dataclass(frozen=True)
class VisibleInfo:
    """What a strategy may see before time 0."""

    line: LineSegment
    model: Model
    predictions: Optional[Tuple[Fraction, ...]]  # None in the original model


def visible_info(instance: Instance) -> VisibleInfo:
    preds = instance.predictions if instance.model is Model.PREDICTION else None
    return VisibleInfo(instance.line, instance.model, preds)


@dataclass(frozen=True)
class PlannedTrips:
    path: Tour
    schedule: RoundTripSchedule


class Strategy(abc.ABC):
    name: str = "strategy"


class FixedPathStrategy(Strategy):
    """Commits to a path and a trip schedule before time 0."""

    @abc.abstractmethod
    def plan(self, info: VisibleInfo) -> PlannedTrips:
        ...


class AdaptiveStrategy(Strategy):
    """Reacts to arrivals as they happen."""

    @abc.abstractmethod
    def start(self, info: VisibleInfo) -> "ReplanSession":
        ...


def extend_tour_to_line(tour: Tour, line: LineSegment) -> Tour:
    """Append the line endpoints to a tour's visit order, so the walk keeps
    sweeping the whole segment once the planned targets are covered."""
    return canonical_tour(tour.turning_points + (line.a, line.b))


@dataclass(frozen=True)
class HalflineRoundTrips(FixedPathStrategy):
    """Prediction-free round trips on a half-line, growing geometrically."""

    alpha: object = DEFAULT_ALPHA
    name: str = field(default="halfline-roundtrips", init=False)

    def plan(self, info: VisibleInfo) -> PlannedTrips:
        if not info.line.is_halfline():
            raise ValueError("halfline-roundtrips needs the origin at an endpoint")
        far = info.line.b if info.line.b > 0 else info.line.a
        return PlannedTrips(canonical_tour((far,)), RoundTripSchedule(self.alpha))


@dataclass(frozen=True)
class LineSweepRoundTrips(FixedPathStrategy):
    """Prediction-free fallback on a general segment: round trips over a
    zigzag that sweeps the whole line, left end first."""

    alpha: object = DEFAULT_ALPHA
    name: str = field(default="line-sweep", init=False)

    def plan(self, info: VisibleInfo) -> PlannedTrips:
        return PlannedTrips(
            canonical_tour((info.line.a, info.line.b)), RoundTripSchedule(self.alpha)
        )


@dataclass(frozen=True)
class PerfectPredictionTour(FixedPathStrategy):
    """Trusts the predicted locations outright: round trips along the
    latency-optimal tour of the predictions, extended to sweep the line."""

    alpha: object = DEFAULT_ALPHA
    name: str = field(default="prediction-tour", init=False)

    def plan(self, info: VisibleInfo) -> PlannedTrips:
        if info.predictions is None:
            raise ModelMismatchError(f"{self.name} needs predicted locations")
        tour, _ = optimal_latency_tour(info.predictions)
        return PlannedTrips(extend_tour_to_line(tour, info.line), RoundTripSchedule(self.alpha))


def shrink_toward_origin(p, delta):
    """Move a location ``delta`` toward the origin, stopping there."""
    if p >= 0:
        return max(p - delta, _ZERO)
    return min(p + delta, _ZERO)


def padded_robust_path(predictions: Sequence, delta, line: LineSegment) -> Tour:
    """Error-tolerant walk for predictions off by at most ``delta``.

    Plans the latency-optimal tour of the predictions pulled ``delta`` toward
    the origin, pushes each turning point ``2*delta`` outward (clamped to the
    line), and finally guarantees coverage of every point within ``delta`` of
    a prediction -- the pull can flatten near-origin predictions onto 0, which
    would otherwise leave their error neighborhoods uncovered.
    """
    delta = _exact(delta, "delta")
    shrunk = [shrink_toward_origin(p, delta) for p in predictions]
    tour, _ = optimal_latency_tour(shrunk)
    padded = [
        min(tp + 2 * delta, line.b) if tp > 0 else max(tp - 2 * delta, line.a)
        for tp in tour.turning_points
    ]
    if predictions:
        lo_req = max(min(predictions) - delta, line.a)
        hi_req = min(max(predictions) + delta, line.b)
        padded += [lo_req, hi_req]
    return canonical_tour(padded)


@dataclass(frozen=True)
class RobustPredictionTour(FixedPathStrategy):
    """Prediction tour hardened against location error up to ``delta``.

    Below the fallback threshold ``(2-sqrt(3))/4`` of the line length it runs
    padded round trips over the error-tolerant walk; at or above it, the
    predictions are too noisy to help and it degrades to the prediction-free
    sweep.
    """

    delta: Fraction = _ZERO
    alpha: object = DEFAULT_ALPHA
    name: str = field(default="robust-tour", init=False)

    def __post_init__(self):
        object.__setattr__(self, "delta", _exact(self.delta, "delta"))
        if self.delta < 0:
            raise ValueError("delta must be nonnegative")

    def plan(self, info: VisibleInfo) -> PlannedTrips:
        if info.predictions is None:
            raise ModelMismatchError(f"{self.name} needs predicted locations")
        if self.delta >= FALLBACK_THRESHOLD * info.line.length:
            return LineSweepRoundTrips(self.alpha).plan(info)
        path = padded_robust_path(info.predictions, self.delta, info.line)
        return PlannedTrips(path, RoundTripSchedule(self.alpha, pad=4 * self.delta))


class ReplanSession:
    """Mutable state of one adaptive run; see GreedyReplan."""

    def __init__(self, info: VisibleInfo):
        self.info = info
        self._points: List[Tuple[Fraction, Fraction]] = [(_ZERO, _ZERO)]
        self._known: List[Tuple[Fraction, Fraction]] = []  # (location, arrival)

    def _plan_trajectory(self) -> Trajectory:
        return Trajectory(tuple(self._points))

    def on_arrivals(self, time, locations: Sequence) -> None:
        """Fold in all requests arriving at ``time`` and replan from here."""
        plan = self._plan_trajectory()
        pos = plan.position_at(time)
        kept = [bp for bp in self._points if bp[0] < time]
        if not kept:
            kept = [self._points[0]]
        if kept[-1][0] < time:
            kept.append((time, pos))
        self._known.extend((loc, time) for loc in locations)
        committed = Trajectory(tuple(kept))
        unserved = [
            loc
            for loc, arrival in self._known
            if committed.first_service_time(loc, arrival) is None
        ]
        tour, _ = optimal_latency_tour(loc - pos for loc in unserved)
        t = kept[-1][0]
        for u, v in tour.legs:
            t += abs(v - u)
            kept.append((t, pos + v))
        self._points = kept

    def trajectory(self) -> Trajectory:
        return self._plan_trajectory()


@dataclass(frozen=True)
class GreedyReplan(AdaptiveStrategy):
    """On every arrival, replans a latency-optimal walk over the requests
    still unserved, from the current position.  Ignores predictions."""

    name: str = field(default="greedy-replan", init=False)

    def start(self, info: VisibleInfo) -> ReplanSession:
        return ReplanSession(info)


def select_algorithm(instance: Instance, delta=None, alpha=DEFAULT_ALPHA) -> Strategy:
    """Pick a strategy for an instance given the promised error bound.

    With predictions and an error bound strictly below ``(2-sqrt(3))/4``
    (about 0.067) of the line length, prediction-guided round trips keep their
    worst-case guarantee; from the threshold up (or without predictions) the
    prediction-free schedule is the safe choice.
    """
    if instance.model is Model.PREDICTION:
        if delta is None or delta == 0:
            return PerfectPredictionTour(alpha)
        if delta < FALLBACK_THRESHOLD * instance.line.length:
            return RobustPredictionTour(_exact(delta, "delta"), alpha)
    if instance.line.is_halfline():
        return HalflineRoundTrips(alpha)
    return LineSweepRoundTrips(alpha)


STRATEGY_NAMES = ("halfline", "sweep", "perfect", "robust", "greedy")


def make_strategy(name: str, alpha=DEFAULT_ALPHA, delta=_ZERO) -> Strategy:
    """Build a strategy from its CLI name."""
    if name == "halfline":
        return HalflineRoundTrips(alpha)
    if name == "sweep":
        return LineSweepRoundTrips(alpha)
    if name == "perfect":
        return PerfectPredictionTour(alpha)
    if name == "robust":
        return RobustPredictionTour(delta, alpha)
    if name == "greedy":
        return GreedyReplan()
    raise ValueError(f"unknown strategy {name!r} (choose from {', '.join(STRATEGY_NAMES)})")
