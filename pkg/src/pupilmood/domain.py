"""Core domain types: PIR events, mood reports, day keys, and the
plausibility filter applied before featurization.

All values are immutable after construction; every operation here is a pure
function and safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import date, datetime
from enum import Enum

from .errors import (
    BadTimestamp,
    MissingField,
    NonFiniteValue,
    RatioOutOfUnitInterval,
    ScoreOutOfRange,
)


class Eye(Enum):
    LEFT = "L"
    RIGHT = "R"


class Period(Enum):
    """Quarter-day segments of the local civil day.

    Boundaries are a package default (00/06/12/18 local time); they can be
    overridden through PeriodBoundaries where diurnal structure differs.
    """

    MIDNIGHT = "midnight"
    MORNING = "morning"
    AFTERNOON = "afternoon"
    EVENING = "evening"


PERIOD_ORDER = (Period.MIDNIGHT, Period.MORNING, Period.AFTERNOON, Period.EVENING)
EYE_ORDER = (Eye.LEFT, Eye.RIGHT)


@dataclass(frozen=True)
class PeriodBoundaries:
    """Start hours of the four periods, ascending, first must be 0."""

    midnight: int = 0
    morning: int = 6
    afternoon: int = 12
    evening: int = 18

    def __post_init__(self):
        hours = (self.midnight, self.morning, self.afternoon, self.evening)
        if hours[0] != 0 or any(a >= b for a, b in zip(hours, hours[1:])) or hours[-1] > 23:
            raise ValueError(f"bad period boundaries {hours}")


DEFAULT_BOUNDARIES = PeriodBoundaries()


@dataclass(frozen=True)
class PirRange:
    """Plausible pupil-iris-ratio interval; both endpoints inclusive."""

    lo: float = 0.2
    hi: float = 0.7

    def __post_init__(self):
        if not (0.0 < self.lo < self.hi < 1.0):
            raise ValueError(f"require 0 < lo < hi < 1, got ({self.lo}, {self.hi})")

    def contains(self, pir: float) -> bool:
        return self.lo <= pir <= self.hi


DEFAULT_PIR_RANGE = PirRange()


@dataclass(frozen=True)
class PirEvent:
    """One pupil-iris-ratio estimation for one eye.

    `timestamp` is a timezone-aware local civil time; all day/period
    segmentation reads its local wall-clock fields, never UTC.
    `out_of_range` marks values outside the plausible range; such events are
    kept until featurization so ingest funnels stay reconstructible.
    """

    participant_id: str
    timestamp: datetime
    eye: Eye
    pir: float
    out_of_range: bool = False

    @property
    def local_date(self) -> date:
        return self.timestamp.date()


@dataclass(frozen=True)
class MoodReport:
    """One circumplex-model survey response (valence/arousal in [-4, 4])."""

    participant_id: str
    timestamp: datetime
    valence: float
    arousal: float

    @property
    def local_date(self) -> date:
        return self.timestamp.date()


@dataclass(frozen=True, order=True)
class DayKey:
    """(participant, local calendar date) row key."""

    participant_id: str
    date: date


@dataclass(frozen=True)
class FilterResult:
    kept: tuple[PirEvent, ...]
    n_dropped: int

    @property
    def n_kept(self) -> int:
        return len(self.kept)


MOOD_SCALE = (-4.0, 4.0)


def _parse_timestamp(raw, field_name: str) -> datetime:
    if isinstance(raw, datetime):
        ts = raw
    else:
        try:
            ts = datetime.fromisoformat(str(raw))
        except ValueError:
            raise BadTimestamp(field_name, str(raw)) from None
    if ts.tzinfo is None:
        raise BadTimestamp(field_name, str(raw))
    return ts


def validate_event(
    participant_id: str,
    timestamp,
    eye,
    pir,
    pir_range: PirRange = DEFAULT_PIR_RANGE,
) -> PirEvent:
    """Normalize one candidate PIR event or raise a field-level error.

    Accepts pir strictly inside (0, 1); values outside `pir_range` are
    accepted but flagged `out_of_range`.
    """
    if participant_id is None or str(participant_id) == "":
        raise MissingField("participant_id")
    if timestamp is None or timestamp == "":
        raise MissingField("timestamp")
    if eye is None or eye == "":
        raise MissingField("eye")
    if pir is None or pir == "":
        raise MissingField("pir")
    ts = _parse_timestamp(timestamp, "timestamp")
    if not isinstance(eye, Eye):
        token = str(eye).strip().upper()
        if token in ("LEFT", "RIGHT"):
            token = token[0]
        try:
            eye = Eye(token)
        except ValueError:
            # unusable eye token == no usable eye field
            raise MissingField("eye") from None
    try:
        pir_f = float(pir)
    except (TypeError, ValueError):
        raise NonFiniteValue("pir") from None
    if not math.isfinite(pir_f):
        raise NonFiniteValue("pir")
    if not (0.0 < pir_f < 1.0):
        raise RatioOutOfUnitInterval("pir", pir_f)
    return PirEvent(
        participant_id=str(participant_id),
        timestamp=ts,
        eye=eye,
        pir=pir_f,
        out_of_range=not pir_range.contains(pir_f),
    )


def validate_report(participant_id: str, timestamp, valence, arousal) -> MoodReport:
    """Normalize one candidate mood report or raise a field-level error."""
    if participant_id is None or str(participant_id) == "":
        raise MissingField("participant_id")
    if timestamp is None or timestamp == "":
        raise MissingField("timestamp")
    ts = _parse_timestamp(timestamp, "timestamp")
    scores = {}
    for name, raw in (("valence", valence), ("arousal", arousal)):
        if raw is None or raw == "":
            raise MissingField(name)
        try:
            val = float(raw)
        except (TypeError, ValueError):
            raise NonFiniteValue(name) from None
        if not math.isfinite(val):
            raise NonFiniteValue(name)
        if not (MOOD_SCALE[0] <= val <= MOOD_SCALE[1]):
            raise ScoreOutOfRange(name, val)
        scores[name] = val
    return MoodReport(str(participant_id), ts, scores["valence"], scores["arousal"])


def filter_pir(events, pir_range: PirRange = DEFAULT_PIR_RANGE) -> FilterResult:
    """Keep exactly the events with lo <= pir <= hi, preserving order."""
    kept = tuple(e for e in events if pir_range.contains(e.pir))
    return FilterResult(kept=kept, n_dropped=sum(1 for e in events if not pir_range.contains(e.pir)))


def assign_period(ts: datetime, boundaries: PeriodBoundaries = DEFAULT_BOUNDARIES) -> Period:
    """Map a local wall-clock time onto one of the four daily periods."""
    h = ts.hour
    if h < boundaries.morning:
        return Period.MIDNIGHT
    if h < boundaries.afternoon:
        return Period.MORNING
    if h < boundaries.evening:
        return Period.AFTERNOON
    return Period.EVENING
