"""Daily featurization: filtered PIR events -> 48-dimensional day vectors.

Layout is eye-major: for each eye (left, right), for each period (midnight,
morning, afternoon, evening), the six statistics (sum, min, max, mean,
median, std). Missing cells are imputed from same-day donor periods, then
the participant's history, then the cohort, and the imputation mask records
every filled index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .domain import (
    DEFAULT_BOUNDARIES,
    EYE_ORDER,
    PERIOD_ORDER,
    DayKey,
    Eye,
    Period,
    PeriodBoundaries,
    PirEvent,
    assign_period,
)
from .errors import AllCellsMissing

STATS = ("sum", "min", "max", "mean", "median", "std")
N_STATS = len(STATS)
N_FEATURES = len(EYE_ORDER) * len(PERIOD_ORDER) * N_STATS  # 48

_EYE_NAME = {Eye.LEFT: "left", Eye.RIGHT: "right"}


@dataclass(frozen=True)
class FeatureSchema:
    """Canonical ordered names of the 48 feature columns."""

    names: tuple[str, ...] = field(
        default_factory=lambda: tuple(
            f"{_EYE_NAME[eye]}_{period.value}_{stat}"
            for eye in EYE_ORDER
            for period in PERIOD_ORDER
            for stat in STATS
        )
    )

    def __post_init__(self):
        if len(self.names) != N_FEATURES or len(set(self.names)) != N_FEATURES:
            raise ValueError("schema must have 48 unique names")

    def index(self, eye: Eye, period: Period, stat: str) -> int:
        return (
            EYE_ORDER.index(eye) * len(PERIOD_ORDER) * N_STATS
            + PERIOD_ORDER.index(period) * N_STATS
            + STATS.index(stat)
        )


DEFAULT_SCHEMA = FeatureSchema()


@dataclass
class DayFeatureRow:
    """One participant-day: features, imputation mask, optional labels."""

    key: DayKey
    features: np.ndarray  # float64[48]
    imputed_mask: np.ndarray  # bool[48]
    valence_label: Optional[int] = None
    arousal_label: Optional[int] = None
    valence_mean: Optional[float] = None
    arousal_mean: Optional[float] = None
    n_reports: int = 0

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=np.float64)
        self.imputed_mask = np.asarray(self.imputed_mask, dtype=bool)
        if self.features.shape != (N_FEATURES,) or self.imputed_mask.shape != (N_FEATURES,):
            raise ValueError("row must carry exactly 48 features and 48 mask bits")

    @property
    def labeled(self) -> bool:
        return self.n_reports >= 1


def period_stats(values: Sequence[float]) -> Optional[tuple[float, float, float, float, float, float]]:
    """Six statistics of one (eye, period) cell, or None for an empty cell.

    Median is the midpoint of the two central order statistics for even n;
    std is the sample (n-1) standard deviation, defined as 0.0 for n == 1.
    """
    n = len(values)
    if n == 0:
        return None
    arr = np.sort(np.asarray(values, dtype=np.float64))
    total = float(np.sum(arr))
    mean = total / n
    if n % 2 == 1:
        median = float(arr[n // 2])
    else:
        median = (float(arr[n // 2 - 1]) + float(arr[n // 2])) / 2.0
    if n == 1:
        std = 0.0
    else:
        std = math.sqrt(float(np.sum((arr - mean) ** 2)) / (n - 1))
    return (total, float(arr[0]), float(arr[-1]), mean, median, std)


def impute_missing(
    row_cells: Sequence[Optional[float]],
    participant_means: Sequence[Optional[float]],
    cohort_means: Sequence[Optional[float]],
) -> tuple[np.ndarray, np.ndarray]:
    """Fill the missing cells of one day's 48-slot vector.

    Fallback chain per missing cell {eye}_{period}_{stat}:
      1. mean of the same {eye}_{stat} cell over the day's observed periods;
      2. the participant's historical mean for that exact cell;
      3. the cohort mean for that exact cell;
      4. the mean of all cells observed on the day (always defined).
    Returns (features, mask) with mask true exactly at imputed indices.
    """
    cells = list(row_cells)
    if len(cells) != N_FEATURES:
        raise ValueError("expected 48 cells")
    observed = [c for c in cells if c is not None]
    if not observed:
        raise AllCellsMissing("no observed cell in day row")
    day_fallback = sum(observed) / len(observed)

    out = np.empty(N_FEATURES, dtype=np.float64)
    mask = np.zeros(N_FEATURES, dtype=bool)
    n_periods = len(PERIOD_ORDER)
    for ei in range(len(EYE_ORDER)):
        for pi in range(n_periods):
            for si in range(N_STATS):
                idx = ei * n_periods * N_STATS + pi * N_STATS + si
                if cells[idx] is not None:
                    out[idx] = cells[idx]
                    continue
                mask[idx] = True
                donors = [
                    cells[ei * n_periods * N_STATS + pj * N_STATS + si]
                    for pj in range(n_periods)
                    if cells[ei * n_periods * N_STATS + pj * N_STATS + si] is not None
                ]
                if donors:
                    out[idx] = sum(donors) / len(donors)
                elif participant_means[idx] is not None:
                    out[idx] = participant_means[idx]
                elif cohort_means[idx] is not None:
                    out[idx] = cohort_means[idx]
                else:
                    out[idx] = day_fallback
    return out, mask


def _raw_day_cells(
    events: Sequence[PirEvent],
    boundaries: PeriodBoundaries,
) -> dict[DayKey, list[Optional[float]]]:
    """Group events by (participant, date, eye, period) and compute raw cells."""
    grouped: dict[DayKey, dict[int, list[float]]] = {}
    n_periods = len(PERIOD_ORDER)
    for ev in events:
        key = DayKey(ev.participant_id, ev.local_date)
        cell = (
            EYE_ORDER.index(ev.eye) * n_periods * N_STATS
            + PERIOD_ORDER.index(assign_period(ev.timestamp, boundaries)) * N_STATS
        )
        grouped.setdefault(key, {}).setdefault(cell, []).append(ev.pir)
    days: dict[DayKey, list[Optional[float]]] = {}
    for key in sorted(grouped):
        cells: list[Optional[float]] = [None] * N_FEATURES
        for base, values in grouped[key].items():
            # sort for permutation invariance of float accumulation
            stats = period_stats(sorted(values))
            for si, val in enumerate(stats):
                cells[base + si] = val
        days[key] = cells
    return days


def build_day_rows(
    events: Sequence[PirEvent],
    schema: FeatureSchema = DEFAULT_SCHEMA,
    boundaries: PeriodBoundaries = DEFAULT_BOUNDARIES,
) -> list[DayFeatureRow]:
    """Featurize filtered events into unlabeled day rows, sorted by key.

    Days with zero events produce no row. Imputation donor tables
    (participant history and cohort means) are computed from the raw,
    pre-imputation cells so policy changes never touch observed values.
    """
    days = _raw_day_cells(events, boundaries)
    if not days:
        return []

    participant_sums: dict[str, np.ndarray] = {}
    participant_counts: dict[str, np.ndarray] = {}
    cohort_sum = np.zeros(N_FEATURES)
    cohort_count = np.zeros(N_FEATURES)
    for key, cells in days.items():
        psum = participant_sums.setdefault(key.participant_id, np.zeros(N_FEATURES))
        pcount = participant_counts.setdefault(key.participant_id, np.zeros(N_FEATURES))
        for i, c in enumerate(cells):
            if c is not None:
                psum[i] += c
                pcount[i] += 1
                cohort_sum[i] += c
                cohort_count[i] += 1

    cohort_means = [
        cohort_sum[i] / cohort_count[i] if cohort_count[i] > 0 else None for i in range(N_FEATURES)
    ]

    rows = []
    for key in sorted(days):
        psum = participant_sums[key.participant_id]
        pcount = participant_counts[key.participant_id]
        participant_means = [
            psum[i] / pcount[i] if pcount[i] > 0 else None for i in range(N_FEATURES)
        ]
        features, mask = impute_missing(days[key], participant_means, cohort_means)
        rows.append(DayFeatureRow(key=key, features=features, imputed_mask=mask))
    return rows
