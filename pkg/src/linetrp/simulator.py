"""Exact simulation of a strategy on an instance, and ratio evaluation.

A run realizes the strategy's motion as a trajectory, reads off every
request's completion (first visit at or after its arrival), and records an
event log.  Evaluation rates each completion against two per-request floors:
the coarse ``max(|location|, arrival)`` and the sharper first-visit time along
a latency-optimal walk of the actual locations.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional, Tuple

from .core import Instance, Trajectory
from .offline import (
    arc_index,
    optimal_latency_tour,
    simple_lower_bound,
    tour_reference_bound,
)
from .online import (
    AdaptiveStrategy,
    FixedPathStrategy,
    Strategy,
    coverage_horizon,
    roundtrip_trajectory,
    visible_info,
)

_ZERO = Fraction(0)
_ONE = Fraction(1)


class CoverageError(RuntimeError):
    """The planned motion never reaches some request's location."""


@dataclass(frozen=True)
class Event:
    time: object
    kind: str  # 'arrival' | 'service' | 'turnaround'
    position: object
    request_index: Optional[int] = None


_EVENT_RANK = {"arrival": 0, "service": 1, "turnaround": 2}


@dataclass(frozen=True)
class RunResult:
    instance: Instance
    strategy_name: str
    trajectory: Trajectory  # truncated at the last completion unless asked not to
    completions: Tuple[object, ...]

    @property
    def on_sum(self):
        return sum(self.completions, _ZERO)

    @cached_property
    def events(self) -> Tuple[Event, ...]:
        return _events(self.instance, self.trajectory, self.completions)


def run(instance: Instance, strategy: Strategy, *, truncate: bool = True) -> RunResult:
    """Simulate ``strategy`` on ``instance`` exactly."""
    info = visible_info(instance)
    if isinstance(strategy, FixedPathStrategy):
        planned = strategy.plan(info)
        horizon = coverage_horizon(planned.path, planned.schedule, instance.max_arrival())
        traj = roundtrip_trajectory(planned.path, planned.schedule, horizon)
    elif isinstance(strategy, AdaptiveStrategy):
        session = strategy.start(info)
        by_time = {}
        for r in instance.requests:
            by_time.setdefault(r.arrival, []).append(r.actual)
        for t in sorted(by_time):
            session.on_arrivals(t, by_time[t])
        traj = session.trajectory()
    else:
        raise TypeError(f"unknown strategy type {type(strategy).__name__}")

    completions = []
    for r in instance.requests:
        c = traj.first_service_time(r.actual, r.arrival)
        if c is None:
            raise CoverageError(
                f"request {r.index} at {r.actual} is never reached by {strategy.name}"
            )
        completions.append(c)
    if truncate:
        traj = traj.truncated(max(completions, default=_ZERO))
    return RunResult(instance, strategy.name, traj, tuple(completions))


def _events(instance, traj, completions) -> Tuple[Event, ...]:
    evs = []
    for r, c in zip(instance.requests, completions):
        evs.append(Event(r.arrival, "arrival", r.actual, r.index))
        evs.append(Event(c, "service", r.actual, r.index))
    bps = traj.breakpoints
    for (t0, p0), (t1, p1), (t2, p2) in zip(bps, bps[1:], bps[2:]):
        before = (p1 > p0) - (p1 < p0)
        after = (p2 > p1) - (p2 < p1)
        if before and after and before != after:
            evs.append(Event(t1, "turnaround", p1))
    evs.sort(
        key=lambda e: (
            e.time,
            _EVENT_RANK[e.kind],
            -1 if e.request_index is None else e.request_index,
        )
    )
    return tuple(evs)


def request_ratio(actual, arrival, completion):
    """Completion over the distance/arrival floor; 1 when both are zero."""
    floor = max(abs(actual), arrival)
    if floor == 0:
        return _ONE
    return completion / floor


@dataclass(frozen=True)
class RequestReport:
    index: int
    predicted: Optional[object]
    actual: object
    arrival: object
    completion: object
    bound_simple: object  # max(|actual|, arrival)
    bound_tour: object  # first-visit time along the latency-optimal walk
    ratio_simple: object
    ratio_tour: object


@dataclass(frozen=True)
class EvaluationReport:
    rows: Tuple[RequestReport, ...]
    on_sum: object
    opt_sum_bound: object  # lower bound on the optimal completion-time sum
    sum_ratio: object
    max_ratio_simple: object
    max_ratio_tour: object


def evaluate(result: RunResult) -> EvaluationReport:
    """Rate every completion in a run against both per-request floors."""
    inst = result.instance
    tour, dp_total = optimal_latency_tour(r.actual for r in inst.requests)
    index = arc_index(tour)
    rows = []
    for r, c in zip(inst.requests, result.completions):
        bound_s = simple_lower_bound(r)
        bound_t = tour_reference_bound(r, index)
        rows.append(
            RequestReport(
                r.index,
                r.predicted,
                r.actual,
                r.arrival,
                c,
                bound_s,
                bound_t,
                _ONE if bound_s == 0 else c / bound_s,
                _ONE if bound_t == 0 else c / bound_t,
            )
        )
    on_sum = result.on_sum
    arrival_sum = sum((r.arrival for r in inst.requests), _ZERO)
    opt_bound = max(dp_total, arrival_sum)
    return EvaluationReport(
        rows=tuple(rows),
        on_sum=on_sum,
        opt_sum_bound=opt_bound,
        sum_ratio=_ONE if on_sum == 0 else on_sum / opt_bound,
        max_ratio_simple=max((row.ratio_simple for row in rows), default=_ONE),
        max_ratio_tour=max((row.ratio_tour for row in rows), default=_ONE),
    )
