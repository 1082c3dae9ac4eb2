"""Synthetic cohort generator: the verification oracle for the pipeline.

Each participant-day draws a latent valence/arousal pair; capture sessions
(Poisson-many per day, spread over waking hours with a small midnight tail)
emit left and right PIR events whose mean shifts linearly with the latent
mood on top of a per-participant baseline and a diurnal sinusoid. Mood
reports echo the latent pair with small noise. Ground-truth binary labels
come from the latent scores, so a planted effect is recoverable end to end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import InvalidConfig
from .ingest import MOOD_HEADER, PIR_HEADER, atomic_write_text

TRUTH_HEADER = [
    "participant_id",
    "date",
    "valence_label",
    "arousal_label",
    "valence_latent",
    "arousal_latent",
]

PIR_CLAMP = (0.05, 0.95)
MOOD_CLAMP = (-4.0, 4.0)
# latent day mood is bimodal: |score| >= this floor, so daily-average labels
# are never flipped by report noise and the planted PIR shift separates days
LATENT_MAGNITUDE_FLOOR = 1.5
MIDNIGHT_TAIL_PROB = 0.06


@dataclass(frozen=True)
class CohortConfig:
    n_participants: int = 25
    n_days: int = 28
    sessions_per_day_mean: float = 11.85
    reports_per_day: int = 3
    effect_beta: float = 0.02
    arousal_beta: float = 0.01
    baseline_pir_mean: float = 0.45
    baseline_pir_sd: float = 0.05
    diurnal_amplitude: float = 0.03
    noise_sd: float = 0.04
    missing_day_prob: float = 0.09
    seed: int = 0

    def __post_init__(self):
        if self.n_participants < 1 or self.n_days < 1 or self.reports_per_day < 1:
            raise InvalidConfig("counts must be >= 1")
        if not (0.0 <= self.missing_day_prob <= 1.0):
            raise InvalidConfig("missing_day_prob must be in [0, 1]")
        if min(self.sessions_per_day_mean, self.baseline_pir_sd, self.noise_sd) < 0:
            raise InvalidConfig("rates and standard deviations must be >= 0")


@dataclass
class CohortFiles:
    pir_events: Path
    mood_reports: Path
    truth_labels: Path
    n_scheduled_days: int = 0
    n_emitted_days: int = 0


def _fmt(x: float) -> str:
    return format(x, ".17g")


def _clamp(x: float, lo: float, hi: float) -> float:
    return min(max(x, lo), hi)


def _session_hour(rng) -> float:
    # waking hours 07:00-24:00 plus a small midnight tail so every period
    # receives data over a study
    if rng.random() < MIDNIGHT_TAIL_PROB:
        return rng.uniform(0.0, 6.0)
    return rng.uniform(7.0, 24.0)


def _latent_score(rng) -> float:
    sign = 1.0 if rng.random() < 0.5 else -1.0
    return _clamp(sign * (LATENT_MAGNITUDE_FLOOR + abs(rng.normal(0.0, 0.9))), *MOOD_CLAMP)


def _stamp(day: str, hour: float) -> str:
    total_ms = int(round(hour * 3_600_000))
    total_ms = min(total_ms, 24 * 3_600_000 - 1)
    h, rem = divmod(total_ms, 3_600_000)
    m, rem = divmod(rem, 60_000)
    s, ms = divmod(rem, 1000)
    return f"{day}T{h:02d}:{m:02d}:{s:02d}.{ms:03d}+00:00"


def generate_cohort(config: CohortConfig, out_dir) -> CohortFiles:
    """Write pir_events.csv, mood_reports.csv and truth_labels.csv."""
    rng = np.random.Generator(np.random.PCG64(config.seed))
    out_dir = Path(out_dir)
    start = np.datetime64("2024-01-01")

    pir_lines = [",".join(PIR_HEADER)]
    mood_lines = [",".join(MOOD_HEADER)]
    truth_lines = [",".join(TRUTH_HEADER)]
    n_scheduled = 0
    n_emitted = 0

    for p in range(config.n_participants):
        pid = f"P{p + 1:02d}"
        baseline = rng.normal(config.baseline_pir_mean, config.baseline_pir_sd)
        phase = rng.uniform(0.0, 2.0 * math.pi)
        for d in range(config.n_days):
            n_scheduled += 1
            day = str(start + np.timedelta64(d, "D"))
            valence = _latent_score(rng)
            arousal = _latent_score(rng)
            truth_lines.append(
                f"{pid},{day},{1 if valence >= 0 else 0},{1 if arousal >= 0 else 0},"
                f"{_fmt(valence)},{_fmt(arousal)}"
            )

            # mood reports are always emitted; only PIR capture goes missing
            for r in range(config.reports_per_day):
                hour = 9.0 + r * (10.0 / max(config.reports_per_day - 1, 1)) + rng.uniform(-0.5, 0.5)
                v = _clamp(valence + rng.normal(0.0, 0.3), *MOOD_CLAMP)
                a = _clamp(arousal + rng.normal(0.0, 0.3), *MOOD_CLAMP)
                mood_lines.append(f"{pid},{_stamp(day, hour)},{_fmt(v)},{_fmt(a)}")

            day_missing = rng.random() < config.missing_day_prob
            n_sessions = int(rng.poisson(config.sessions_per_day_mean))
            if day_missing or n_sessions == 0:
                continue
            n_emitted += 1
            hours = sorted(_session_hour(rng) for _ in range(n_sessions))
            for hour in hours:
                stamp = _stamp(day, hour)
                mean_pir = (
                    baseline
                    + config.diurnal_amplitude * math.sin(2.0 * math.pi * hour / 24.0 + phase)
                    + config.effect_beta * valence
                    + config.arousal_beta * arousal
                )
                for eye in ("L", "R"):
                    pir = _clamp(mean_pir + rng.normal(0.0, config.noise_sd), *PIR_CLAMP)
                    pir_lines.append(f"{pid},{stamp},{eye},{_fmt(pir)}")

    files = CohortFiles(
        pir_events=out_dir / "pir_events.csv",
        mood_reports=out_dir / "mood_reports.csv",
        truth_labels=out_dir / "truth_labels.csv",
        n_scheduled_days=n_scheduled,
        n_emitted_days=n_emitted,
    )
    atomic_write_text(files.pir_events, "\n".join(pir_lines) + "\n")
    atomic_write_text(files.mood_reports, "\n".join(mood_lines) + "\n")
    atomic_write_text(files.truth_labels, "\n".join(truth_lines) + "\n")
    return files


@dataclass(frozen=True)
class FunnelReport:
    generated: int
    usable: int

    @property
    def out_of_range_fraction(self) -> float:
        return 0.0 if self.generated == 0 else 1.0 - self.usable / self.generated


def funnel_check(events, pir_range) -> FunnelReport:
    """Generated vs in-range counts, for comparison with published funnels."""
    generated = len(events)
    usable = sum(1 for e in events if pir_range.contains(e.pir))
    return FunnelReport(generated=generated, usable=usable)
