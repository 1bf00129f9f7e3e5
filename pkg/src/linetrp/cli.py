"""Command-line interface.

Subcommands: ``generate`` (random instances), ``oracle`` (exact offline
optimum), ``simulate`` (run a strategy, optionally certify its ratios),
``adversary`` (play the lower-bound game), ``sweep`` (seeded certification
sweeps to CSV).  Numeric CSV columns come in exact and 6-place decimal forms.

Exit codes: 0 success, 1 usage, 2 bad input, 3 failed certification or
cross-check.
"""

from __future__ import annotations

import argparse
import csv
import random
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction

from . import __version__
from .adversary import GameConfig, play_lowerbound_game, verify_witness
from .core import (
    LineSegment,
    Model,
    ParseError,
    format_decimal,
    format_scalar,
    parse_instance,
    parse_scalar,
    serialize_instance,
)
from .generate import perturbed_instance, random_instance
from .offline import brute_force_latency, optimal_latency_tour
from .online import (
    CERT_RATIO,
    STRATEGY_NAMES,
    ModelMismatchError,
    make_strategy,
    parse_alpha,
    select_algorithm,
)
from .simulator import CoverageError, evaluate, run


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="linetrp",
        description="Online repairperson on a line segment, with location predictions.",
    )
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a seeded random instance")
    gen.add_argument("--line", nargs=2, metavar=("A", "B"), default=("0", "1"))
    gen.add_argument("--n", type=int, default=10)
    gen.add_argument("--max-arrival", type=int, default=50)
    gen.add_argument("--delta", default=None, help="prediction error bound, exact (e.g. 1/100)")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--denom", type=int, default=1000)
    gen.add_argument("--model", choices=[m.value for m in Model], default="prediction")
    gen.add_argument("--out", default=None, help="output file (default stdout)")

    orc = sub.add_parser("oracle", help="exact offline latency optimum of an instance")
    orc.add_argument("instance")
    orc.add_argument("--brute", action="store_true", help="cross-check against exhaustive search")

    sim = sub.add_parser("simulate", help="run a strategy on an instance")
    sim.add_argument("instance")
    sim.add_argument("--strategy", choices=("auto",) + STRATEGY_NAMES, default="auto")
    sim.add_argument("--alpha", default="sqrt3/2", help="trip growth knob ('sqrt3/2' or rational)")
    sim.add_argument("--delta", default="0", help="promised prediction error bound, exact")
    sim.add_argument(
        "--certify",
        choices=("simple", "tour"),
        default=None,
        help="exit 3 unless the worst per-request ratio stays within the certified bound",
    )
    sim.add_argument("--out", default=None, help="write per-request CSV")

    adv = sub.add_parser("adversary", help="play the release-time lower-bound game")
    adv.add_argument("--strategy", choices=STRATEGY_NAMES, default="halfline")
    adv.add_argument("--alpha", default="sqrt3/2")
    adv.add_argument("--delta", default="1/100")
    adv.add_argument("--max-steps", type=int, default=120)

    sw = sub.add_parser("sweep", help="seeded certification sweep, CSV output")
    sw.add_argument("--strategy", choices=("auto",) + STRATEGY_NAMES, default="auto")
    sw.add_argument("--trials", type=int, default=100)
    sw.add_argument("--seed", type=int, default=0)
    sw.add_argument("--line", nargs=2, metavar=("A", "B"), default=("0", "1"))
    sw.add_argument("--n", type=int, default=10)
    sw.add_argument("--max-arrival", type=int, default=50)
    sw.add_argument("--delta", default="0")
    sw.add_argument("--alpha", default="sqrt3/2")
    sw.add_argument("--jobs", type=int, default=1)
    sw.add_argument("--out", default=None, help="output CSV (default stdout)")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 1
    try:
        return _dispatch(args)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (OSError, ValueError, TypeError, CoverageError, ModelMismatchError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args) -> int:
    return {
        "generate": _cmd_generate,
        "oracle": _cmd_oracle,
        "simulate": _cmd_simulate,
        "adversary": _cmd_adversary,
        "sweep": _cmd_sweep,
    }[args.command](args)


def _write(text: str, out) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


def _resolve_strategy(name, alpha_text, delta_text, instance=None):
    alpha = parse_alpha(alpha_text)
    delta = parse_scalar(delta_text) if delta_text is not None else Fraction(0)
    if name == "auto":
        if instance is None:
            raise ValueError("auto strategy needs an instance")
        return select_algorithm(instance, delta if delta > 0 else None, alpha), delta
    return make_strategy(name, alpha, delta), delta


def _cmd_generate(args) -> int:
    rng = random.Random(args.seed)
    line = LineSegment(parse_scalar(args.line[0]), parse_scalar(args.line[1]))
    if args.delta is not None:
        if Model(args.model) is not Model.PREDICTION:
            raise ValueError("--delta only makes sense with --model prediction")
        delta = parse_scalar(args.delta)
        inst = perturbed_instance(rng, line, args.n, delta, args.max_arrival, args.denom)
    else:
        inst = random_instance(
            rng, line, args.n, args.max_arrival, args.denom, Model(args.model)
        )
    _write(serialize_instance(inst), args.out)
    return 0


def _tour_text(tour) -> str:
    if not tour.turning_points:
        return "stay at origin"
    return "origin -> " + " -> ".join(format_scalar(tp) for tp in tour.turning_points)


def _cmd_oracle(args) -> int:
    with open(args.instance) as fh:
        inst = parse_instance(fh.read())
    actuals = [r.actual for r in inst.requests]
    tour, total = optimal_latency_tour(actuals)
    print(f"requests: {len(actuals)}")
    print(f"optimal latency sum: {total} ({format_decimal(total)})")
    print(f"optimal walk: {_tour_text(tour)}")
    if args.brute:
        brute_total, order = brute_force_latency(actuals)
        if brute_total != total:
            print(
                f"cross-check FAILED: exhaustive search got {brute_total}"
                f" via {', '.join(str(p) for p in order)}",
                file=sys.stderr,
            )
            return 3
        print("cross-check ok: exhaustive search agrees")
    return 0


def _cmd_simulate(args) -> int:
    with open(args.instance) as fh:
        inst = parse_instance(fh.read())
    strategy, delta = _resolve_strategy(args.strategy, args.alpha, args.delta, inst)
    result = run(inst, strategy)
    report = evaluate(result)
    print(f"strategy: {strategy.name}")
    print(f"requests: {len(inst.requests)}")
    print(f"completion sum: {result.on_sum} ({format_decimal(result.on_sum)})")
    print(
        f"optimal-sum floor: {report.opt_sum_bound} ({format_decimal(report.opt_sum_bound)})"
        f"  sum ratio: {format_decimal(report.sum_ratio)}"
    )
    print(
        f"worst ratio vs distance/arrival floor: {report.max_ratio_simple}"
        f" ({format_decimal(report.max_ratio_simple)})"
    )
    print(
        f"worst ratio vs tour-prefix floor: {report.max_ratio_tour}"
        f" ({format_decimal(report.max_ratio_tour)})"
    )
    if args.out:
        _write(_request_csv(report), args.out)
    if args.certify:
        bound = CERT_RATIO + 4 * delta
        worst = report.max_ratio_simple if args.certify == "simple" else report.max_ratio_tour
        if worst > bound:
            print(f"certification FAILED: {worst} > {bound}", file=sys.stderr)
            return 3
        print(f"certified: worst ratio within {bound}")
    return 0


def _request_csv(report) -> str:
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(
        [
            "index",
            "predicted",
            "actual",
            "arrival",
            "completion",
            "completion_dec",
            "bound_simple",
            "bound_tour",
            "ratio_simple",
            "ratio_simple_dec",
            "ratio_tour",
            "ratio_tour_dec",
        ]
    )
    for row in report.rows:
        writer.writerow(
            [
                row.index,
                "" if row.predicted is None else str(row.predicted),
                str(row.actual),
                str(row.arrival),
                str(row.completion),
                format_decimal(row.completion),
                str(row.bound_simple),
                str(row.bound_tour),
                str(row.ratio_simple),
                format_decimal(row.ratio_simple),
                str(row.ratio_tour),
                format_decimal(row.ratio_tour),
            ]
        )
    return buf.getvalue()


def _cmd_adversary(args) -> int:
    strategy, _ = _resolve_strategy(args.strategy, args.alpha, args.delta)
    transcript = play_lowerbound_game(strategy, GameConfig(max_steps=args.max_steps))
    for line in transcript.log:
        print(line)
    if transcript.witness is None:
        print(f"outcome: no witness (worst ratio {format_decimal(transcript.max_ratio)})")
        return 0
    w = transcript.witness
    print(
        f"outcome: witness at step {w.declared_step}; request {w.request_index}"
        f" (location {w.location}, arrival {w.arrival}) completed {w.completion}"
        f" = {format_decimal(w.ratio)}x its floor {w.floor}"
    )
    if not verify_witness(strategy, transcript):
        print("witness verification FAILED", file=sys.stderr)
        return 3
    print("witness verified by independent re-run")
    return 0


def _sweep_trial(params) -> list:
    (trial, seed, strategy_name, alpha_text, delta_text, a_text, b_text, n, max_arrival) = params
    rng = random.Random(f"{seed}:{trial}")
    line = LineSegment(parse_scalar(a_text), parse_scalar(b_text))
    delta = parse_scalar(delta_text)
    if delta > 0:
        inst = perturbed_instance(rng, line, n, delta, max_arrival)
    else:
        inst = random_instance(rng, line, n, max_arrival)
    strategy, _ = _resolve_strategy(strategy_name, alpha_text, delta_text, inst)
    report = evaluate(run(inst, strategy))
    return [
        trial,
        strategy.name,
        n,
        delta_text,
        str(report.on_sum),
        format_decimal(report.on_sum),
        str(report.opt_sum_bound),
        format_decimal(report.opt_sum_bound),
        str(report.sum_ratio),
        format_decimal(report.sum_ratio),
        str(report.max_ratio_simple),
        format_decimal(report.max_ratio_simple),
        str(report.max_ratio_tour),
        format_decimal(report.max_ratio_tour),
    ]


_SWEEP_HEADER = [
    "trial",
    "strategy",
    "n",
    "delta",
    "on_sum",
    "on_sum_dec",
    "opt_floor",
    "opt_floor_dec",
    "sum_ratio",
    "sum_ratio_dec",
    "max_ratio_simple",
    "max_ratio_simple_dec",
    "max_ratio_tour",
    "max_ratio_tour_dec",
]


def _cmd_sweep(args) -> int:
    params = [
        (
            trial,
            args.seed,
            args.strategy,
            args.alpha,
            args.delta,
            args.line[0],
            args.line[1],
            args.n,
            args.max_arrival,
        )
        for trial in range(args.trials)
    ]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            rows = list(pool.map(_sweep_trial, params))
    else:
        rows = [_sweep_trial(p) for p in params]
    import io

    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_SWEEP_HEADER)
    writer.writerows(rows)
    _write(buf.getvalue(), args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
