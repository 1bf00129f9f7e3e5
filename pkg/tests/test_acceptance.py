"""Acceptance gate: every shipped guarantee exercised end to end.

Each criterion prints a single PASS/FAIL line (run pytest with ``-s`` to see
them) and then asserts.  Corpora are seeded, so reruns are bit-identical.

One criterion is knowingly red: the release-time game does not trap the
adaptive replanner.  Its fixed roster of three near-origin releases can delay
the far targets by about 2 time units each, which tops out at a ratio of
2.499 against a deadline of 3; trapping a replanner that always returns for
near-origin work would need at least six such releases.  The roster is part
of the game's published interface, so the criterion fails honestly instead of
the game being quietly retuned.  See the test docstring for the arithmetic.
"""

import random
import time
from fractions import Fraction as F

from linetrp.adversary import play_lowerbound_game, verify_witness
from linetrp.cli import main
from linetrp.core import LineSegment, Model, make_instance, parse_instance, serialize_instance
from linetrp.generate import perturbed_instance, random_instance
from linetrp.offline import (
    Tour,
    arc_index,
    brute_force_latency,
    canonical_tour,
    optimal_latency_tour,
    tour_trajectory,
)
from linetrp.online import (
    CERT_RATIO,
    FALLBACK_THRESHOLD,
    GreedyReplan,
    HalflineRoundTrips,
    LineSweepRoundTrips,
    PerfectPredictionTour,
    RobustPredictionTour,
    RoundTripSchedule,
    select_algorithm,
    visible_info,
)
from linetrp.simulator import evaluate, run

HALF_LINES = [LineSegment(F(0), F(b)) for b in (1, 2, 10, 50)] + [
    LineSegment(F(-b), F(0)) for b in (1, 2, 10, 50)
]
FULL_LINES = [
    LineSegment(F(-1), F(1)),
    LineSegment(F(-2), F(3)),
    LineSegment(F(-10), F(10)),
    LineSegment(F(-25), F(50)),
]
UNIT_HALF_LINES = [LineSegment(F(0), F(1)), LineSegment(F(-1), F(0))]


def _report(name: str, ok: bool, detail: str = "") -> bool:
    tail = f"  ({detail})" if detail else ""
    print(f"\n[acceptance] {name}: {'PASS' if ok else 'FAIL'}{tail}")
    return ok


def test_exact_latency_optimum_matches_exhaustive_search():
    """1000 seeded point sets, n <= 8 on a 1/16 grid: the interval dynamic
    program and the permutation brute force must agree exactly, in under 30s."""
    rng = random.Random(1001)
    t0 = time.monotonic()
    mismatches = 0
    for _ in range(1000):
        pts = [F(rng.randint(-128, 128), 16) for _ in range(rng.randint(0, 8))]
        _, dp_total = optimal_latency_tour(pts)
        brute_total, _ = brute_force_latency(pts)
        if dp_total != brute_total:
            mismatches += 1
    elapsed = time.monotonic() - t0
    ok = mismatches == 0 and elapsed < 30.0
    assert _report(
        "latency optimum matches exhaustive search",
        ok,
        f"1000 point sets, {mismatches} mismatches, {elapsed:.1f}s",
    )


def test_optimal_tours_satisfy_structural_invariants():
    """The optimal walk is a canonical alternating zigzag whose stated total
    replays from its own first-visit times and never loses to a plain sweep."""
    rng = random.Random(1002)
    bad = 0
    for _ in range(1000):
        pts = [F(rng.randint(-128, 128), 16) for _ in range(rng.randint(0, 8))]
        tour, total = optimal_latency_tour(pts)
        index = arc_index(tour)
        replayed = sum((index.at(p) for p in pts), F(0))
        canonical = canonical_tour(tour.turning_points)
        lo = min([F(0)] + pts)
        hi = max([F(0)] + pts)
        sweeps = []
        for order in ((lo, hi), (hi, lo)):
            sweep = canonical_tour(order)
            sweep_index = arc_index(sweep)
            sweeps.append(sum((sweep_index.at(p) for p in pts), F(0)))
        if not (
            replayed == total
            and (canonical.first_direction, canonical.turning_points)
            == (tour.first_direction, tour.turning_points)
            and all(tour.covers(p) for p in pts)
            and all(total <= s for s in sweeps)
        ):
            bad += 1
    assert _report(
        "optimal tours satisfy structural invariants", bad == 0, f"1000 tours, {bad} violations"
    )


def test_halfline_schedule_certified_ratio():
    """10000 seeded half-line instances (integer arrivals): the prediction-free
    round-trip schedule never exceeds 2+sqrt(3) times any request's
    distance/arrival floor, compared exactly."""
    rng = random.Random(1003)
    worst = F(0)
    t0 = time.monotonic()
    for k in range(10000):
        line = HALF_LINES[k % len(HALF_LINES)]
        inst = random_instance(rng, line, rng.randint(1, 20), max_arrival=50, denom=1000)
        report = evaluate(run(inst, HalflineRoundTrips()))
        if report.max_ratio_simple > worst:
            worst = report.max_ratio_simple
    elapsed = time.monotonic() - t0
    ok = worst <= CERT_RATIO
    assert _report(
        "halfline schedule stays within the certified ratio",
        ok,
        f"10000 instances, worst {float(worst):.6f} <= {float(CERT_RATIO):.6f}, {elapsed:.0f}s",
    )


def test_halfline_ratio_bound_is_tight():
    """Requests dropped just past a turnaround push the ratio as close to
    2+sqrt(3) as desired: within 1e-2 already at probe depth 1e-2, improving
    monotonically with depth, while never touching the bound."""
    schedule = RoundTripSchedule()
    line = LineSegment(F(0), F(100))
    ok = True
    details = []
    for j in (3, 4, 5):
        gaps = []
        for d in (2, 4, 6):
            loc = schedule.reach(j - 1) + F(1, 10**d)
            # built directly: the probe location is an exact quadratic surd,
            # which the text format does not carry
            inst = make_instance(line, [(None, loc, F(0))], Model.ORIGINAL)
            result = run(inst, HalflineRoundTrips())
            completion = result.completions[0]
            expected = schedule.cumulative_length(j - 1) + loc
            ratio = completion / loc
            gap = CERT_RATIO - ratio
            gaps.append(gap)
            ok = ok and completion == expected and ratio < CERT_RATIO and gap < F(1, 100)
        ok = ok and gaps[0] > gaps[1] > gaps[2] > 0
        details.append(f"trip {j}: gap {float(gaps[-1]):.2e}")
    assert _report("halfline certified ratio is tight", ok, "; ".join(details))


def test_prediction_tour_certified_ratio():
    """5000 seeded full-line instances with exact predictions: round trips
    along the predicted optimal walk stay within 2+sqrt(3) of every request's
    first-visit time on that walk (arrival-floored), compared exactly."""
    rng = random.Random(1005)
    worst = F(0)
    for k in range(5000):
        line = FULL_LINES[k % len(FULL_LINES)]
        inst = random_instance(rng, line, rng.randint(1, 12), max_arrival=50, denom=1000)
        report = evaluate(run(inst, PerfectPredictionTour()))
        if report.max_ratio_tour > worst:
            worst = report.max_ratio_tour
    ok = worst <= CERT_RATIO
    assert _report(
        "prediction tour stays within the certified ratio",
        ok,
        f"5000 instances, worst {float(worst):.6f} <= {float(CERT_RATIO):.6f}",
    )


def test_robust_tour_certified_ratio():
    """5000 seeded unit half-line instances with predictions off by at most
    delta in {1/100, 3/100, 1/20}: the padded schedule stays within
    2+sqrt(3) + 4*delta of the distance/arrival floor, compared exactly."""
    rng = random.Random(1006)
    deltas = (F(1, 100), F(3, 100), F(1, 20))
    worst_slack = None
    ok = True
    for k in range(5000):
        line = UNIT_HALF_LINES[k % len(UNIT_HALF_LINES)]
        delta = deltas[k % len(deltas)]
        inst = perturbed_instance(rng, line, rng.randint(1, 12), delta, max_arrival=50)
        report = evaluate(run(inst, RobustPredictionTour(delta=delta)))
        bound = CERT_RATIO + 4 * delta
        slack = bound - report.max_ratio_simple
        ok = ok and slack >= 0
        if worst_slack is None or slack < worst_slack:
            worst_slack = slack
    assert _report(
        "robust tour stays within the padded certified ratio",
        ok,
        f"5000 instances, smallest slack to bound {float(worst_slack):.6f}",
    )


def test_error_threshold_switches_to_fallback():
    """Prediction-guided planning is used strictly below (2-sqrt(3))/4 of the
    line length (~0.067) and the prediction-free sweep from there up."""
    unit = parse_instance("LINE 0 1\nREQ 1/2 1/2 0\n")
    wide = parse_instance("LINE -1 1\nREQ 1/2 1/2 0\n")
    checks = [
        isinstance(select_algorithm(unit, delta=F(66, 1000)), RobustPredictionTour),
        isinstance(select_algorithm(unit, delta=F(67, 1000)), HalflineRoundTrips),
        isinstance(select_algorithm(unit, delta=FALLBACK_THRESHOLD), HalflineRoundTrips),
        isinstance(
            select_algorithm(unit, delta=FALLBACK_THRESHOLD - F(1, 10**6)), RobustPredictionTour
        ),
        isinstance(select_algorithm(wide, delta=F(133, 1000)), RobustPredictionTour),
        isinstance(select_algorithm(wide, delta=F(134, 1000)), LineSweepRoundTrips),
    ]
    # at the threshold the robust planner itself degrades to the full sweep
    plan = RobustPredictionTour(delta=FALLBACK_THRESHOLD).plan(visible_info(unit))
    checks.append(plan.path.turning_points == (F(1),) and plan.schedule.pad == 0)
    ok = all(checks)
    assert _report(
        "error threshold switches to the fallback schedule",
        ok,
        f"threshold ~ {float(FALLBACK_THRESHOLD):.6f} of the line length",
    )


def test_release_game_traps_committed_schedules():
    """The release-time game finds a request completed more than 3x its floor
    against every schedule that commits before time 0, and each witness
    survives an independent re-run, all in under 10s."""
    t0 = time.monotonic()
    caught = []
    for strategy in (
        HalflineRoundTrips(),
        PerfectPredictionTour(),
        RobustPredictionTour(delta=F(1, 100)),
    ):
        transcript = play_lowerbound_game(strategy)
        w = transcript.witness
        caught.append(
            w is not None and w.ratio > 3 and verify_witness(strategy, transcript)
        )
    elapsed = time.monotonic() - t0
    ok = all(caught) and elapsed < 10.0
    assert _report(
        "release game traps every committed schedule",
        ok,
        f"3 witnesses verified, {elapsed:.1f}s",
    )


def test_release_game_traps_the_replanner():
    """KNOWN RED.  The game's roster has three near-origin releases; each one
    costs the replanner a detour of at most ~2 time units before it returns
    for it, so the far target at 4 finishes by about 10 and the worst ratio
    observed is 2499/1000 < 3.  Pushing a replanner past 3 needs the far
    target's completion above 12, i.e. at least (12-4)/2 = 4 more detours than
    the roster can trigger with slack for release timing -- about six
    near-origin releases.  The roster is part of the game's interface, so
    this criterion stays red rather than moving the goalposts."""
    transcript = play_lowerbound_game(GreedyReplan())
    w = transcript.witness
    ok = w is not None and w.ratio > 3 and verify_witness(GreedyReplan(), transcript)
    assert _report(
        "release game traps the adaptive replanner",
        ok,
        f"no witness; worst ratio {float(transcript.max_ratio):.3f} of target 3"
        " -- see docstring for why the fixed roster cannot reach it",
    )


def test_optimal_walk_replays_to_its_stated_total():
    """500 seeded all-at-zero instances: walking the optimal tour at unit
    speed and reading completions off the trajectory reproduces the dynamic
    program's total exactly."""
    rng = random.Random(1009)
    bad = 0
    for k in range(500):
        line = (HALF_LINES + FULL_LINES)[k % 12]
        inst = random_instance(rng, line, rng.randint(1, 10), max_arrival=0, denom=16)
        actuals = [r.actual for r in inst.requests]
        tour, total = optimal_latency_tour(actuals)
        traj = tour_trajectory(tour)
        replayed = sum((traj.first_service_time(a) for a in actuals), F(0))
        if replayed != total:
            bad += 1
    assert _report(
        "optimal walk replays to its stated total", bad == 0, f"500 instances, {bad} mismatches"
    )


def test_seeded_runs_are_reproducible(tmp_path, capsys):
    """Text round-trips are identities and seeded CLI output is byte-stable,
    including across process-parallel sweeps."""
    rng = random.Random(1010)
    roundtrip_ok = True
    for k in range(200):
        line = (HALF_LINES + FULL_LINES)[k % 12]
        inst = random_instance(rng, line, rng.randint(0, 8), max_arrival=20, denom=40)
        text = serialize_instance(inst)
        back = parse_instance(text)
        roundtrip_ok = roundtrip_ok and back == inst and serialize_instance(back) == text

    gen_args = ["generate", "--line", "-2", "3", "--n", "12", "--delta", "1/50", "--seed", "9"]
    assert main(gen_args + ["--out", str(tmp_path / "a.txt")]) == 0
    assert main(gen_args + ["--out", str(tmp_path / "b.txt")]) == 0
    gen_ok = (tmp_path / "a.txt").read_bytes() == (tmp_path / "b.txt").read_bytes()

    sweep_args = ["sweep", "--strategy", "greedy", "--trials", "6", "--seed", "5",
                  "--line", "0", "10", "--n", "6"]
    assert main(sweep_args + ["--out", str(tmp_path / "s1.csv")]) == 0
    assert main(sweep_args + ["--jobs", "3", "--out", str(tmp_path / "s2.csv")]) == 0
    assert main(sweep_args + ["--out", str(tmp_path / "s3.csv")]) == 0
    s1 = (tmp_path / "s1.csv").read_bytes()
    sweep_ok = s1 == (tmp_path / "s2.csv").read_bytes() == (tmp_path / "s3.csv").read_bytes()

    ok = roundtrip_ok and gen_ok and sweep_ok
    assert _report(
        "seeded runs are reproducible",
        ok,
        "200 text round-trips; generate and parallel sweep byte-identical",
    )
