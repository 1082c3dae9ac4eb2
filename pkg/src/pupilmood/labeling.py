"""Daily mood targets: per-day averages of valence/arousal and their
binarization (below 0 -> low, 0 or above -> high)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .domain import DayKey, MoodReport
from .errors import NoReports
from .features import DayFeatureRow

LOW, HIGH = 0, 1


@dataclass(frozen=True)
class DailyMood:
    key: DayKey
    valence_mean: float
    arousal_mean: float
    n_reports: int


@dataclass(frozen=True)
class JoinReport:
    n_feature_days: int
    n_mood_days: int
    n_matched: int


def binarize(score: float) -> int:
    """Low (0) iff score < 0; high (1) iff score >= 0."""
    return HIGH if score >= 0 else LOW


def daily_average(reports: Sequence[MoodReport]) -> DailyMood:
    """Unweighted arithmetic mean of one participant-day's reports."""
    if not reports:
        raise NoReports("cannot average an empty day")
    key = DayKey(reports[0].participant_id, reports[0].local_date)
    for r in reports:
        if DayKey(r.participant_id, r.local_date) != key:
            raise ValueError("reports span multiple participant-days")
    ordered = sorted(reports, key=lambda r: (r.timestamp.isoformat(), r.valence, r.arousal))
    n = len(ordered)
    return DailyMood(
        key=key,
        valence_mean=sum(r.valence for r in ordered) / n,
        arousal_mean=sum(r.arousal for r in ordered) / n,
        n_reports=n,
    )


def daily_moods(reports: Sequence[MoodReport]) -> list[DailyMood]:
    """Group arbitrary reports by participant-day and average each day."""
    grouped: dict[DayKey, list[MoodReport]] = {}
    for r in reports:
        grouped.setdefault(DayKey(r.participant_id, r.local_date), []).append(r)
    return [daily_average(grouped[key]) for key in sorted(grouped)]


def join_labels(
    rows: Sequence[DayFeatureRow],
    moods: Sequence[DailyMood],
) -> tuple[list[DayFeatureRow], JoinReport]:
    """Attach daily-mood labels to feature rows by day key.

    Rows without a matching mood day stay unlabeled (kept for inspection,
    excluded from learning); mood days without features are dropped.
    """
    by_key = {m.key: m for m in moods}
    out = []
    matched = 0
    for row in rows:
        mood = by_key.get(row.key)
        if mood is None:
            out.append(
                DayFeatureRow(
                    key=row.key,
                    features=row.features,
                    imputed_mask=row.imputed_mask,
                )
            )
        else:
            matched += 1
            out.append(
                DayFeatureRow(
                    key=row.key,
                    features=row.features,
                    imputed_mask=row.imputed_mask,
                    valence_label=binarize(mood.valence_mean),
                    arousal_label=binarize(mood.arousal_mean),
                    valence_mean=mood.valence_mean,
                    arousal_mean=mood.arousal_mean,
                    n_reports=mood.n_reports,
                )
            )
    return out, JoinReport(len(rows), len(moods), matched)
