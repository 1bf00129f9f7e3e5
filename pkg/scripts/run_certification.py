#!/usr/bin/env python3
"""Certification sweep: worst observed ratios per strategy and corpus.

Runs every strategy on seeded corpora matching its planning assumptions and
prints the worst per-request ratio against both floors next to the certified
bound.  Exits nonzero if any certified strategy exceeds its bound.

Usage:
    python scripts/run_certification.py --trials 500 --seed 7
"""

import argparse
import random
import sys
from fractions import Fraction

from linetrp import (
    CERT_RATIO,
    GreedyReplan,
    HalflineRoundTrips,
    LineSegment,
    PerfectPredictionTour,
    RobustPredictionTour,
    evaluate,
    format_decimal,
    perturbed_instance,
    random_instance,
    run,
)

HALF_LINES = [LineSegment(Fraction(0), Fraction(b)) for b in (1, 2, 10, 50)]
FULL_LINES = [LineSegment(Fraction(-2), Fraction(3)), LineSegment(Fraction(-10), Fraction(10))]
DELTA = Fraction(1, 100)


def sweep(make_inst, strategy, trials, seed, floor):
    rng = random.Random(seed)
    worst_simple = worst_tour = Fraction(0)
    for k in range(trials):
        report = evaluate(run(make_inst(rng, k), strategy))
        worst_simple = max(worst_simple, report.max_ratio_simple)
        worst_tour = max(worst_tour, report.max_ratio_tour)
    return worst_simple, worst_tour, worst_simple if floor == "simple" else worst_tour


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--trials", type=int, default=500)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--n", type=int, default=12)
    args = ap.parse_args()

    rows = [
        (
            "halfline-roundtrips / half-lines",
            lambda rng, k: random_instance(rng, HALF_LINES[k % 4], rng.randint(1, args.n)),
            HalflineRoundTrips(),
            "simple",
            CERT_RATIO,
        ),
        (
            "prediction-tour / exact predictions",
            lambda rng, k: random_instance(rng, FULL_LINES[k % 2], rng.randint(1, args.n)),
            PerfectPredictionTour(),
            "tour",
            CERT_RATIO,
        ),
        (
            f"robust-tour / unit half-line, error <= {DELTA}",
            lambda rng, k: perturbed_instance(
                rng, HALF_LINES[0], rng.randint(1, args.n), DELTA
            ),
            RobustPredictionTour(delta=DELTA),
            "simple",
            CERT_RATIO + 4 * DELTA,
        ),
        (
            "greedy-replan / exact predictions (no certificate)",
            lambda rng, k: random_instance(rng, FULL_LINES[k % 2], rng.randint(1, args.n)),
            GreedyReplan(),
            "simple",
            None,
        ),
    ]

    failed = False
    print(f"{args.trials} trials per row, seed {args.seed}\n")
    header = f"{'corpus':<50} {'worst simple':>13} {'worst tour':>11} {'bound':>9}  verdict"
    print(header)
    print("-" * len(header))
    for name, make_inst, strategy, floor, bound in rows:
        ws, wt, certified = sweep(make_inst, strategy, args.trials, args.seed, floor)
        if bound is None:
            verdict = "--"
        elif certified <= bound:
            verdict = "ok"
        else:
            verdict, failed = "EXCEEDED", True
        bound_text = "--" if bound is None else format_decimal(bound)
        print(
            f"{name:<50} {format_decimal(ws):>13} {format_decimal(wt):>11}"
            f" {bound_text:>9}  {verdict}"
        )
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
