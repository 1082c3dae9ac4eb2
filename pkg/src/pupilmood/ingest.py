"""CSV ingestion and the canonical feature-table reader/writer.

Input schemas:
  pir_events.csv   participant_id,timestamp,eye,pir
  mood_reports.csv participant_id,timestamp,valence,arousal
Timestamps are ISO-8601 with a UTC offset. Malformed rows are skipped with
line-numbered diagnostics, never silently dropped.
"""

from __future__ import annotations

import csv
import datetime as dt
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .domain import (
    DEFAULT_PIR_RANGE,
    DayKey,
    MoodReport,
    PirEvent,
    PirRange,
    validate_event,
    validate_report,
)
from .errors import BadHeader, EmptyFile, FileNotFound, IoError, ValidationError
from .features import DEFAULT_SCHEMA, DayFeatureRow, FeatureSchema, N_FEATURES

PIR_HEADER = ["participant_id", "timestamp", "eye", "pir"]
MOOD_HEADER = ["participant_id", "timestamp", "valence", "arousal"]

_LABEL_COLUMNS = ["valence_label", "arousal_label", "valence_mean", "arousal_mean", "n_reports"]


@dataclass
class IngestReport:
    """Funnel counts for one PIR ingest run.

    usable = parsed_ok - out_of_range; malformed rows are parsed failures,
    reported in `diagnostics` as (line_number, message).
    """

    total_events: int = 0
    parsed_ok: int = 0
    out_of_range: int = 0
    diagnostics: list[tuple[int, str]] = field(default_factory=list)
    per_participant_daily_mean_events: float = 0.0

    @property
    def usable(self) -> int:
        return self.parsed_ok - self.out_of_range

    def summary(self) -> str:
        lines = [
            f"rows read:        {self.total_events}",
            f"parsed ok:        {self.parsed_ok}",
            f"out of range:     {self.out_of_range}",
            f"usable:           {self.usable}",
            f"daily mean estimations/participant: {self.per_participant_daily_mean_events:.2f}",
        ]
        if self.diagnostics:
            lines.append(f"malformed rows:   {len(self.diagnostics)}")
            lines.extend(f"  line {ln}: {msg}" for ln, msg in self.diagnostics[:20])
        return "\n".join(lines)


def _open_csv(path, expected_header: list[str]):
    path = Path(path)
    if not path.exists():
        raise FileNotFound(path)
    handle = path.open(newline="", encoding="utf-8")
    reader = csv.reader(handle)
    try:
        header = next(reader)
    except StopIteration:
        handle.close()
        raise EmptyFile(path) from None
    if [h.strip() for h in header] != expected_header:
        handle.close()
        raise BadHeader(path, expected_header, header)
    return handle, reader


def _daily_mean_instances(events: Sequence[PirEvent]) -> float:
    """Mean daily capture instances per participant.

    One instance is one capture moment (distinct participant+timestamp);
    a single instance usually yields both a left and a right event.
    """
    per_day: dict[str, dict[dt.date, set]] = {}
    for ev in events:
        per_day.setdefault(ev.participant_id, {}).setdefault(ev.local_date, set()).add(ev.timestamp)
    if not per_day:
        return 0.0
    participant_means = [
        sum(len(stamps) for stamps in days.values()) / len(days) for days in per_day.values()
    ]
    return sum(participant_means) / len(participant_means)


def read_pir_csv(path, pir_range: PirRange = DEFAULT_PIR_RANGE) -> tuple[list[PirEvent], IngestReport]:
    """Parse and validate a PIR event file, returning events plus the funnel."""
    handle, reader = _open_csv(path, PIR_HEADER)
    events: list[PirEvent] = []
    report = IngestReport()
    with handle:
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            report.total_events += 1
            if len(row) != len(PIR_HEADER):
                report.diagnostics.append((line_no, f"expected {len(PIR_HEADER)} fields, got {len(row)}"))
                continue
            try:
                ev = validate_event(row[0], row[1], row[2], row[3], pir_range)
            except ValidationError as exc:
                report.diagnostics.append((line_no, str(exc)))
                continue
            report.parsed_ok += 1
            if ev.out_of_range:
                report.out_of_range += 1
            events.append(ev)
    report.per_participant_daily_mean_events = _daily_mean_instances(events)
    return events, report


def read_mood_csv(path) -> tuple[list[MoodReport], list[tuple[int, str]]]:
    """Parse and validate a mood report file.

    Returns reports in per-participant timestamp order plus per-row
    diagnostics for rejected lines.
    """
    handle, reader = _open_csv(path, MOOD_HEADER)
    reports: list[MoodReport] = []
    diagnostics: list[tuple[int, str]] = []
    with handle:
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(MOOD_HEADER):
                diagnostics.append((line_no, f"expected {len(MOOD_HEADER)} fields, got {len(row)}"))
                continue
            try:
                reports.append(validate_report(row[0], row[1], row[2], row[3]))
            except ValidationError as exc:
                diagnostics.append((line_no, str(exc)))
    reports.sort(key=lambda r: (r.participant_id, r.timestamp.isoformat()))
    return reports, diagnostics


# -- feature table ------------------------------------------------------------

def feature_csv_header(schema: FeatureSchema = DEFAULT_SCHEMA) -> list[str]:
    return (
        ["participant_id", "date"]
        + list(schema.names)
        + _LABEL_COLUMNS
        + [f"imputed_{name}" for name in schema.names]
    )


def _fmt(x: float) -> str:
    return format(x, ".17g")


def atomic_write_text(path, text: str) -> None:
    """Write via a temp file + rename so readers never see partial output."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise IoError(f"writing {path}: {exc}") from exc


def write_feature_csv(rows: Sequence[DayFeatureRow], path, schema: FeatureSchema = DEFAULT_SCHEMA) -> None:
    """Write the canonical feature table; floats at 17 significant digits."""
    lines = [",".join(feature_csv_header(schema))]
    for row in rows:
        cells = [row.key.participant_id, row.key.date.isoformat()]
        cells += [_fmt(v) for v in row.features]
        if row.labeled:
            cells += [
                str(row.valence_label),
                str(row.arousal_label),
                _fmt(row.valence_mean),
                _fmt(row.arousal_mean),
                str(row.n_reports),
            ]
        else:
            cells += ["", "", "", "", "0"]
        cells += ["1" if m else "0" for m in row.imputed_mask]
        lines.append(",".join(cells))
    atomic_write_text(path, "\n".join(lines) + "\n")


def read_feature_csv(path, schema: FeatureSchema = DEFAULT_SCHEMA) -> list[DayFeatureRow]:
    """Read a feature table written by write_feature_csv (lossless round-trip)."""
    handle, reader = _open_csv(path, feature_csv_header(schema))
    rows: list[DayFeatureRow] = []
    with handle:
        for row in reader:
            if not row:
                continue
            pid = row[0]
            date = dt.date.fromisoformat(row[1])
            feats = [float(c) for c in row[2 : 2 + N_FEATURES]]
            off = 2 + N_FEATURES
            labeled = row[off] != ""
            mask = [c == "1" for c in row[off + 5 : off + 5 + N_FEATURES]]
            rows.append(
                DayFeatureRow(
                    key=DayKey(pid, date),
                    features=feats,
                    imputed_mask=mask,
                    valence_label=int(row[off]) if labeled else None,
                    arousal_label=int(row[off + 1]) if labeled else None,
                    valence_mean=float(row[off + 2]) if labeled else None,
                    arousal_mean=float(row[off + 3]) if labeled else None,
                    n_reports=int(row[off + 4]),
                )
            )
    return rows
