"""Tests for the adversarial release-time game: committed schedules get
caught by a near-origin release, the replanner escapes, and every claimed
violation survives an independent re-run."""

from fractions import Fraction as F

from linetrp.adversary import GameConfig, Witness, play_lowerbound_game, verify_witness
from linetrp.online import (
    GreedyReplan,
    HalflineRoundTrips,
    PerfectPredictionTour,
    QuadraticScalar,
    RobustPredictionTour,
)

QS = QuadraticScalar


def test_committed_halfline_schedule_is_caught():
    transcript = play_lowerbound_game(HalflineRoundTrips())
    w = transcript.witness
    assert w is not None
    assert w.request_index == 8  # first near-origin release
    assert w.location == F(1, 1000)
    assert w.arrival == 1
    # the server is past the release point on an outward leg; it only comes
    # back at the end of the first full trip
    assert w.completion == QS(F(1999, 1000), 1)
    assert w.floor == 1
    assert w.ratio > 3
    assert w.declared_step == 3
    assert verify_witness(HalflineRoundTrips(), transcript)


def test_committed_prediction_tour_is_caught():
    transcript = play_lowerbound_game(PerfectPredictionTour())
    w = transcript.witness
    assert w is not None
    assert w.completion == QS(F(1999, 1000), 1)
    assert w.declared_step == 3
    assert verify_witness(PerfectPredictionTour(), transcript)


def test_committed_robust_tour_is_caught():
    strategy = RobustPredictionTour(delta=F(1, 100))
    transcript = play_lowerbound_game(strategy)
    w = transcript.witness
    assert w is not None
    # same trap, shifted by the per-trip pad of 4*delta
    assert w.completion == QS(F(2039, 1000), 1)
    assert w.ratio > 3
    assert verify_witness(strategy, transcript)


def test_greedy_replanner_escapes():
    transcript = play_lowerbound_game(GreedyReplan())
    assert transcript.witness is None
    assert transcript.max_ratio == F(2499, 1000)

    inst = transcript.instance
    assert len(inst.requests) == 11
    # all three near-origin requests were eventually released, one per return
    near = [(r.actual, r.arrival) for r in inst.requests if abs(r.actual) < 1]
    assert near == [(F(1, 1000), F(1)), (F(2, 1000), F(3)), (F(3, 1000), F(5))]
    by_loc = {r.actual: transcript.completions[r.index] for r in inst.requests}
    assert by_loc[F(1, 1000)] == F(1999, 1000)
    assert by_loc[F(2, 1000)] == 4
    assert by_loc[F(3, 1000)] == F(5999, 1000)
    # the worst ratio comes from a base target pushed back by the detours
    assert by_loc[F(4)] == F(2499, 250)


def test_transcript_log_is_reproducible():
    a = play_lowerbound_game(HalflineRoundTrips())
    b = play_lowerbound_game(HalflineRoundTrips())
    assert a.log == b.log
    assert a.completions == b.completions


def test_game_respects_custom_target():
    # an unreachable target means no witness even for committed schedules
    cfg = GameConfig(ratio_target=F(100))
    transcript = play_lowerbound_game(HalflineRoundTrips(), cfg)
    assert transcript.witness is None
    assert transcript.max_ratio > 3
