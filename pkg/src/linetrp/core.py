"""Exact data model for the repairperson-on-a-line problem.

Positions, times, and line endpoints are exact numbers (``fractions.Fraction``
or compatible exact types), so simulation results and ratio certificates never
depend on float rounding.  Server motion is a piecewise-linear trajectory with
speed at most 1, starting at the origin at time 0.
"""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence, Tuple, Union

Scalar = Fraction

# Conservative float slack used only to pre-filter segments before exact checks.
_PREFILTER_SLACK = 1e-9


class ParseError(ValueError):
    """Malformed instance text.  Carries the offending 1-based line number."""

    def __init__(self, lineno: Optional[int], message: str):
        prefix = f"line {lineno}: " if lineno is not None else ""
        super().__init__(prefix + message)
        self.lineno = lineno


def _exact(value, what: str = "value"):
    # Floats smuggle rounding error into exact pipelines; insist on exact input.
    if isinstance(value, float):
        raise TypeError(f"{what} must be exact (int/Fraction), got float {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    return value


def parse_scalar(text: str) -> Fraction:
    """Parse an exact scalar: integer ``-3``, fraction ``7/2``, or decimal ``0.25``."""
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"bad scalar {text!r}") from exc


def format_scalar(value) -> str:
    """Canonical text form of a rational scalar (``3``, ``-5/2``)."""
    frac = value if isinstance(value, Fraction) else Fraction(value)
    if frac.denominator == 1:
        return str(frac.numerator)
    return f"{frac.numerator}/{frac.denominator}"


def format_decimal(value, places: int = 6) -> str:
    """Fixed-point decimal rendering, round half to even.

    Works for any exact scalar supporting floor and rational arithmetic.
    """
    scale = 10**places
    scaled = value * scale
    fl = math.floor(scaled)
    rem = scaled - fl
    half = Fraction(1, 2)
    if rem > half or (rem == half and fl % 2 == 1):
        fl += 1
    sign = "-" if fl < 0 else ""
    whole, frac = divmod(abs(fl), scale)
    return f"{sign}{whole}.{frac:0{places}d}"


class Model(enum.Enum):
    """Information model: classic online, or locations predicted upfront."""

    ORIGINAL = "original"
    PREDICTION = "prediction"


@dataclass(frozen=True)
class LineSegment:
    """Closed segment [a, b] of the real line with a <= 0 <= b and a < b."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", _exact(self.a, "endpoint"))
        object.__setattr__(self, "b", _exact(self.b, "endpoint"))
        if not (self.a <= 0 <= self.b):
            raise ValueError("segment must contain the origin")
        if self.a == self.b:
            raise ValueError("segment must have positive length")

    @property
    def length(self) -> Fraction:
        return self.b - self.a

    def is_halfline(self) -> bool:
        """True when the origin is an endpoint."""
        return self.a == 0 or self.b == 0

    def __contains__(self, x) -> bool:
        return self.a <= x <= self.b

    def clamp(self, x):
        return min(max(x, self.a), self.b)


@dataclass(frozen=True)
class Request:
    """A unit service request.

    Revealed at time ``arrival`` sitting at ``actual``.  ``predicted`` is the
    location announced before time 0 in the prediction model (None in the
    original model).  ``index`` is the request's position in its instance.
    """

    index: int
    predicted: Optional[Fraction]
    actual: Fraction
    arrival: Fraction

    def __post_init__(self):
        if self.predicted is not None:
            object.__setattr__(self, "predicted", _exact(self.predicted, "predicted"))
        object.__setattr__(self, "actual", _exact(self.actual, "actual"))
        object.__setattr__(self, "arrival", _exact(self.arrival, "arrival"))


@dataclass(frozen=True)
class Instance:
    """A problem instance: the line, the information model, and the requests."""

    line: LineSegment
    model: Model
    requests: Tuple[Request, ...]

    def __post_init__(self):
        object.__setattr__(self, "requests", tuple(self.requests))
        for pos, req in enumerate(self.requests):
            if req.index != pos:
                raise ValueError(f"request at position {pos} has index {req.index}")
            if req.actual not in self.line:
                raise ValueError(f"request {pos}: actual location outside the line")
            if req.arrival < 0:
                raise ValueError(f"request {pos}: negative arrival time")
            if self.model is Model.PREDICTION:
                if req.predicted is None:
                    raise ValueError(
                        f"request {pos}: prediction model requires a predicted location"
                    )
                if req.predicted not in self.line:
                    raise ValueError(f"request {pos}: predicted location outside the line")

    @property
    def predictions(self) -> Tuple[Fraction, ...]:
        """Predicted locations in request order (prediction model only)."""
        if self.model is not Model.PREDICTION:
            raise ValueError("predictions are only visible in the prediction model")
        return tuple(req.predicted for req in self.requests)

    def max_arrival(self) -> Fraction:
        return max((req.arrival for req in self.requests), default=Fraction(0))


def make_instance(line, triples, model: Model = Model.PREDICTION) -> Instance:
    """Convenience builder from (predicted, actual, arrival) triples.

    ``line`` may be a LineSegment or an ``(a, b)`` pair.  Pass ``predicted=None``
    in triples for original-model instances.
    """
    seg = line if isinstance(line, LineSegment) else LineSegment(line[0], line[1])
    reqs = tuple(
        Request(i, predicted, actual, arrival)
        for i, (predicted, actual, arrival) in enumerate(triples)
    )
    return Instance(seg, model, reqs)


@dataclass(frozen=True)
class Trajectory:
    """Piecewise-linear server motion, as (time, position) breakpoints.

    Starts at (0, 0); breakpoint times strictly increase; speed never exceeds
    1.  After the final breakpoint the server parks at the final position
    forever.
    """

    breakpoints: Tuple[Tuple[Fraction, Fraction], ...]

    def __post_init__(self):
        pts = tuple((_exact(t, "time"), _exact(p, "position")) for t, p in self.breakpoints)
        object.__setattr__(self, "breakpoints", pts)
        if not pts:
            raise ValueError("trajectory needs at least one breakpoint")
        if pts[0][0] != 0 or pts[0][1] != 0:
            raise ValueError("trajectory must start at the origin at time 0")
        for (ta, pa), (tb, pb) in zip(pts, pts[1:]):
            if tb <= ta:
                raise ValueError("breakpoint times must strictly increase")
            if abs(pb - pa) > tb - ta:
                raise ValueError("speed exceeds 1 between breakpoints")

    @cached_property
    def _times(self) -> list:
        return [t for t, _ in self.breakpoints]

    @cached_property
    def _float_segments(self) -> list:
        # (t_end, lo, hi) per segment, widened so float error can only admit
        # extra segments into the exact check, never drop a matching one.
        out = []
        for (ta, pa), (tb, pb) in zip(self.breakpoints, self.breakpoints[1:]):
            fa, fb = float(pa), float(pb)
            lo, hi = (fa, fb) if fa <= fb else (fb, fa)
            slack = _PREFILTER_SLACK * (1.0 + max(abs(lo), abs(hi), float(tb)))
            out.append((float(tb) + slack, lo - slack, hi + slack))
        return out

    @property
    def end_time(self) -> Fraction:
        return self.breakpoints[-1][0]

    @property
    def end_position(self) -> Fraction:
        return self.breakpoints[-1][1]

    def position_at(self, t) -> Fraction:
        """Exact server position at time ``t >= 0``."""
        if t < 0:
            raise ValueError("time must be nonnegative")
        pts = self.breakpoints
        i = bisect.bisect_right(self._times, t) - 1
        if i >= len(pts) - 1:
            return pts[-1][1]
        ta, pa = pts[i]
        tb, pb = pts[i + 1]
        if pa == pb:
            return pa
        return pa + (pb - pa) * (t - ta) / (tb - ta)

    def first_service_time(self, loc, not_before=0) -> Optional[Fraction]:
        """Earliest t >= not_before with position_at(t) == loc, or None.

        Scans segments in time order; a cheap float envelope rules most
        segments out before any exact arithmetic runs.
        """
        pts = self.breakpoints
        floc = float(loc)
        fnb = float(not_before)
        for k, (ft_end, flo, fhi) in enumerate(self._float_segments):
            if ft_end < fnb or floc < flo or floc > fhi:
                continue
            ta, pa = pts[k]
            tb, pb = pts[k + 1]
            if tb < not_before:
                continue
            if pa == pb:
                if pa == loc:
                    cand = ta if ta >= not_before else not_before
                    if cand <= tb:
                        return cand
            elif min(pa, pb) <= loc <= max(pa, pb):
                # Monotone segment: unique crossing time.
                tc = ta + (loc - pa) * (tb - ta) / (pb - pa)
                if tc >= not_before:
                    return tc
        if pts[-1][1] == loc:
            tail = pts[-1][0]
            return tail if tail >= not_before else not_before
        return None

    def truncated(self, t_end) -> "Trajectory":
        """The same motion cut off (and parked) at time ``t_end``."""
        if t_end < 0:
            raise ValueError("cut-off time must be nonnegative")
        kept = [bp for bp in self.breakpoints if bp[0] < t_end]
        if not kept:
            kept = [self.breakpoints[0]]
        if kept[-1][0] < t_end:
            kept.append((t_end, self.position_at(t_end)))
        return Trajectory(tuple(kept))


# --- instance text format ---------------------------------------------------
#
#   # comment
#   LINE a b
#   MODEL prediction          (optional; this is the default)
#   REQ predicted actual arrival
#   REQ - actual arrival      (no prediction, original model)


def parse_instance(text: str) -> Instance:
    """Parse instance text.  Structural problems raise ParseError with the
    offending line number; semantic ones (locations off the line, ...) raise
    ValueError from the Instance constructor."""
    line_seg: Optional[LineSegment] = None
    model: Optional[Model] = None
    triples = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if not stripped:
            continue
        fields = stripped.split()
        keyword = fields[0].upper()
        if keyword == "LINE":
            if line_seg is not None:
                raise ParseError(lineno, "duplicate LINE")
            if len(fields) != 3:
                raise ParseError(lineno, "LINE takes exactly two endpoints")
            try:
                line_seg = LineSegment(parse_scalar(fields[1]), parse_scalar(fields[2]))
            except ValueError as exc:
                raise ParseError(lineno, str(exc)) from exc
        elif keyword == "MODEL":
            if model is not None:
                raise ParseError(lineno, "duplicate MODEL")
            if len(fields) != 2:
                raise ParseError(lineno, "MODEL takes exactly one name")
            try:
                model = Model(fields[1].lower())
            except ValueError as exc:
                names = ", ".join(m.value for m in Model)
                raise ParseError(lineno, f"unknown model {fields[1]!r} (expected {names})") from exc
        elif keyword == "REQ":
            if len(fields) != 4:
                raise ParseError(lineno, "REQ takes predicted, actual, arrival")
            try:
                predicted = None if fields[1] == "-" else parse_scalar(fields[1])
                actual = parse_scalar(fields[2])
                arrival = parse_scalar(fields[3])
            except ValueError as exc:
                raise ParseError(lineno, str(exc)) from exc
            triples.append((predicted, actual, arrival))
        else:
            raise ParseError(lineno, f"unknown keyword {fields[0]!r}")
    if line_seg is None:
        raise ParseError(None, "missing LINE")
    return make_instance(line_seg, triples, model if model is not None else Model.PREDICTION)


def serialize_instance(instance: Instance) -> str:
    """Canonical text for an instance; parse_instance round-trips it exactly."""
    lines = [
        f"LINE {format_scalar(instance.line.a)} {format_scalar(instance.line.b)}",
        f"MODEL {instance.model.value}",
    ]
    for req in instance.requests:
        pred = "-" if req.predicted is None else format_scalar(req.predicted)
        lines.append(f"REQ {pred} {format_scalar(req.actual)} {format_scalar(req.arrival)}")
    return "\n".join(lines) + "\n"
