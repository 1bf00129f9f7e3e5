"""Online repairperson on a line segment, with location predictions.

Exact (rational / quadratic-irrational) simulation of round-trip server
schedules, latency-optimal offline tours, prediction-guided online strategies,
ratio certification, and an adversarial lower-bound game.
"""

from .core import (
    Instance,
    LineSegment,
    Model,
    ParseError,
    Request,
    Scalar,
    Trajectory,
    format_decimal,
    format_scalar,
    make_instance,
    parse_instance,
    parse_scalar,
    serialize_instance,
)
from .offline import (
    ArcIndex,
    Direction,
    Tour,
    UncoveredLocationError,
    arc_index,
    brute_force_latency,
    canonical_tour,
    opt_sum_lower_bound,
    optimal_latency_tour,
    simple_lower_bound,
    tour_reference_bound,
    tour_trajectory,
)
from .online import (
    CERT_RATIO,
    DEFAULT_ALPHA,
    FALLBACK_THRESHOLD,
    SQRT3,
    GreedyReplan,
    HalflineRoundTrips,
    LineSweepRoundTrips,
    ModelMismatchError,
    PerfectPredictionTour,
    QuadraticScalar,
    RobustPredictionTour,
    RoundTripSchedule,
    Strategy,
    VisibleInfo,
    make_strategy,
    parse_alpha,
    roundtrip_trajectory,
    select_algorithm,
)
from .simulator import CoverageError, EvaluationReport, RunResult, evaluate, request_ratio, run
from .adversary import GameConfig, GameTranscript, Witness, play_lowerbound_game, verify_witness
from .generate import perturbed_instance, random_instance

__version__ = "0.1.0"
