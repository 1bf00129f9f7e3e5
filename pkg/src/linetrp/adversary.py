"""Adversarial release-time game that hunts for large per-request ratios.

The adversary announces eleven predicted locations on [0, 10] upfront: eight
base targets and three requests sitting just off the origin.  Every request
eventually appears exactly at its predicted spot (the predictions are honest);
the adversary only chooses integer release times, watched against the
strategy's unfolding motion.  Near-origin requests are released the moment the
server has committed away from the origin, so a schedule that must keep
growing its trips pays for the detour; a request still unserved at an integer
time at least ``ratio_target`` times its floor ``max(|location|, arrival)`` is
a proven violation.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .core import Instance, LineSegment, Model, Trajectory, make_instance
from .online import FixedPathStrategy, Strategy, VisibleInfo, coverage_horizon, roundtrip_trajectory
from .simulator import request_ratio, run

_ZERO = Fraction(0)


@dataclass(frozen=True)
class GameConfig:
    line: LineSegment = LineSegment(Fraction(0), Fraction(10))
    bases: Tuple[Fraction, ...] = tuple(Fraction(v) for v in (1, 4, 5, 6, 7, 8, 9, 10))
    near_origin: Tuple[Fraction, ...] = (
        Fraction(1, 1000),
        Fraction(2, 1000),
        Fraction(3, 1000),
    )
    ratio_target: Fraction = Fraction(3)
    max_steps: int = 120


@dataclass(frozen=True)
class Witness:
    request_index: int
    location: Fraction
    arrival: Fraction
    completion: object
    floor: Fraction
    ratio: object
    declared_step: int


@dataclass(frozen=True)
class GameTranscript:
    strategy_name: str
    config: GameConfig
    instance: Instance  # everything released, in release order
    completions: Tuple[object, ...]
    witness: Optional[Witness]
    max_ratio: object
    log: Tuple[str, ...]


def _as_instance(cfg: GameConfig, released) -> Instance:
    return make_instance(cfg.line, [(loc, loc, arr) for loc, arr in released])


def _moving_outward(traj: Trajectory, t) -> bool:
    """Is the server strictly heading away from the origin just after t?"""
    pos = traj.position_at(t)
    i = bisect.bisect_right(traj._times, t)
    if i >= len(traj.breakpoints):
        return False  # parked
    nxt = traj.breakpoints[i][1]
    slope = (nxt > pos) - (nxt < pos)
    return (pos > 0 and slope > 0) or (pos < 0 and slope < 0)


def play_lowerbound_game(strategy: Strategy, config: Optional[GameConfig] = None) -> GameTranscript:
    """Run the release-time game against ``strategy``.

    Fixed-path strategies commit their whole motion from the predictions, so
    the adversary reads their trajectory directly; adaptive ones are re-run
    against the releases made so far before every decision.  Returns the full
    transcript; ``witness`` stays None when the strategy escapes every
    deadline within ``max_steps``.
    """
    cfg = config if config is not None else GameConfig()
    all_predictions = cfg.bases + cfg.near_origin
    released: List[Tuple[Fraction, Fraction]] = [(b, _ZERO) for b in cfg.bases]
    near_released: List[int] = []  # indices into `released`
    pending = list(cfg.near_origin)
    log = [
        "predictions announced: " + ", ".join(str(p) for p in all_predictions),
        f"t=0: released base requests at {', '.join(str(b) for b in cfg.bases)}",
    ]

    fixed_traj = None
    if isinstance(strategy, FixedPathStrategy):
        planned = strategy.plan(VisibleInfo(cfg.line, Model.PREDICTION, all_predictions))
        horizon = coverage_horizon(planned.path, planned.schedule, Fraction(cfg.max_steps))
        fixed_traj = roundtrip_trajectory(planned.path, planned.schedule, horizon)

    def probe() -> Trajectory:
        if fixed_traj is not None:
            return fixed_traj
        return run(_as_instance(cfg, released), strategy, truncate=False).trajectory

    declared: Optional[Tuple[int, int]] = None  # (request index, step)
    final_step = cfg.max_steps
    for step in range(cfg.max_steps + 1):
        traj = probe()
        comps = [traj.first_service_time(loc, arr) for loc, arr in released]
        # a violation is provable at an integer time in two ways: the request
        # was served late, or its deadline passed while it sat unserved
        for i, ((loc, arr), c) in enumerate(zip(released, comps)):
            deadline = cfg.ratio_target * max(abs(loc), arr)
            served_late = c is not None and c <= step and c > deadline
            overdue = (c is None or c > step) and step >= deadline
            if served_late or overdue:
                declared = (i, step)
                log.append(
                    f"t={step}: request at {loc} (arrival {arr}) is past its"
                    f" deadline {deadline} -- witness declared"
                )
                break
        if declared is not None:
            final_step = step
            break
        if pending and step >= 1:
            pos = traj.position_at(Fraction(step))
            prev_served = all(
                comps[i] is not None and comps[i] <= step for i in near_released
            )
            if prev_served and pos >= 1 and _moving_outward(traj, Fraction(step)):
                loc = pending.pop(0)
                near_released.append(len(released))
                released.append((loc, Fraction(step)))
                log.append(f"t={step}: server at {pos} heading out -- released {loc}")

    # the predictions stay honest: anything withheld goes out at the end
    for loc in pending:
        released.append((loc, Fraction(final_step)))
        log.append(f"t={final_step}: released remaining {loc} (game over)")

    instance = _as_instance(cfg, released)
    final = run(instance, strategy)
    ratios = [
        request_ratio(r.actual, r.arrival, c)
        for r, c in zip(instance.requests, final.completions)
    ]
    max_ratio = max(ratios, default=Fraction(1))
    witness = None
    if declared is not None:
        idx, step = declared
        r = instance.requests[idx]
        witness = Witness(
            request_index=idx,
            location=r.actual,
            arrival=r.arrival,
            completion=final.completions[idx],
            floor=max(abs(r.actual), r.arrival),
            ratio=ratios[idx],
            declared_step=step,
        )
        log.append(
            f"witness: request {idx} at {r.actual}, arrival {r.arrival},"
            f" completed {final.completions[idx]} (ratio {ratios[idx]})"
        )
    else:
        log.append(f"no witness within {cfg.max_steps} steps; worst ratio {max_ratio}")
    return GameTranscript(
        strategy_name=strategy.name,
        config=cfg,
        instance=instance,
        completions=final.completions,
        witness=witness,
        max_ratio=max_ratio,
        log=tuple(log),
    )


def verify_witness(strategy: Strategy, transcript: GameTranscript) -> bool:
    """Independently re-run the transcript's instance and confirm the flagged
    request really exceeds the target multiple of its floor."""
    if transcript.witness is None:
        return False
    result = run(transcript.instance, strategy)
    w = transcript.witness
    r = transcript.instance.requests[w.request_index]
    ratio = request_ratio(r.actual, r.arrival, result.completions[w.request_index])
    return ratio > transcript.config.ratio_target
