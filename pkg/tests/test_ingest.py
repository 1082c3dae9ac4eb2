import datetime as dt

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pupilmood.domain import DayKey
from pupilmood.errors import BadHeader, EmptyFile, FileNotFound
from pupilmood.features import N_FEATURES, DayFeatureRow
from pupilmood.ingest import (
    feature_csv_header,
    read_feature_csv,
    read_mood_csv,
    read_pir_csv,
    write_feature_csv,
)

TS = "2021-04-03T{:02d}:00:00.000-05:00"


def write_pir(path, rows, header="participant_id,timestamp,eye,pir"):
    lines = [header] + rows
    path.write_text("\n".join(lines) + "\n")
    return path


class TestReadPirCsv:
    def test_funnel_counts(self, tmp_path):
        path = write_pir(
            tmp_path / "pir.csv",
            [f"p1,{TS.format(9)},L,{v}" for v in (0.15, 0.3, 0.7)],
        )
        events, report = read_pir_csv(path)
        assert report.total_events == 3
        assert report.parsed_ok == 3
        assert report.out_of_range == 1
        assert report.usable == 2
        assert len(events) == 3  # out-of-range kept with flag

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFound):
            read_pir_csv(tmp_path / "absent.csv")

    def test_bad_header(self, tmp_path):
        path = write_pir(tmp_path / "pir.csv", [], header="participant_id,timestamp,pir")
        with pytest.raises(BadHeader):
            read_pir_csv(path)

    def test_empty_file(self, tmp_path):
        path = tmp_path / "pir.csv"
        path.write_text("")
        with pytest.raises(EmptyFile):
            read_pir_csv(path)

    def test_malformed_rows_diagnosed_not_dropped_silently(self, tmp_path):
        path = write_pir(
            tmp_path / "pir.csv",
            [
                f"p1,{TS.format(9)},L,0.4",
                f"p1,{TS.format(10)},L,1.7",
                f"p1,bad-time,L,0.4",
                f"p1,{TS.format(11)},L,0.5",
            ],
        )
        events, report = read_pir_csv(path)
        assert report.parsed_ok == 2 and len(events) == 2
        assert [ln for ln, _ in report.diagnostics] == [3, 4]

    def test_daily_mean_instances(self, tmp_path):
        # 2 instances on one day, both eyes each -> mean instances/day = 2
        rows = []
        for hour in (9, 15):
            for eye in ("L", "R"):
                rows.append(f"p1,{TS.format(hour)},{eye},0.4")
        _, report = read_pir_csv(write_pir(tmp_path / "p.csv", rows))
        assert report.per_participant_daily_mean_events == pytest.approx(2.0)


class TestReadMoodCsv:
    def test_score_out_of_range_rejected_per_row(self, tmp_path):
        path = tmp_path / "mood.csv"
        path.write_text(
            "participant_id,timestamp,valence,arousal\n"
            f"p1,{TS.format(9)},5,0\n"
            f"p1,{TS.format(9)},-4,4\n"
        )
        reports, diags = read_mood_csv(path)
        assert len(reports) == 1 and len(diags) == 1
        assert reports[0].valence == -4.0 and reports[0].arousal == 4.0

    def test_empty_after_header(self, tmp_path):
        path = tmp_path / "mood.csv"
        path.write_text("participant_id,timestamp,valence,arousal\n")
        reports, diags = read_mood_csv(path)
        assert reports == [] and diags == []


def make_row(pid, day, rng, labeled):
    features = rng.uniform(0.2, 0.7, N_FEATURES)
    mask = rng.random(N_FEATURES) < 0.2
    if labeled:
        v, a = rng.uniform(-4, 4), rng.uniform(-4, 4)
        return DayFeatureRow(
            key=DayKey(pid, dt.date(2021, 4, day)),
            features=features,
            imputed_mask=mask,
            valence_label=int(v >= 0),
            arousal_label=int(a >= 0),
            valence_mean=v,
            arousal_mean=a,
            n_reports=3,
        )
    return DayFeatureRow(key=DayKey(pid, dt.date(2021, 4, day)), features=features, imputed_mask=mask)


class TestFeatureCsv:
    def test_round_trip_identity(self, tmp_path):
        rng = np.random.default_rng(0)
        rows = [make_row(f"p{i}", d, rng, labeled=(d % 2 == 0)) for i in range(3) for d in range(1, 6)]
        path = tmp_path / "features.csv"
        write_feature_csv(rows, path)
        back = read_feature_csv(path)
        assert len(back) == len(rows)
        for a, b in zip(rows, back):
            assert a.key == b.key
            assert np.array_equal(a.features, b.features)
            assert np.array_equal(a.imputed_mask, b.imputed_mask)
            assert a.valence_label == b.valence_label
            assert a.valence_mean == b.valence_mean
            assert a.n_reports == b.n_reports

    def test_zero_rows_header_only(self, tmp_path):
        path = tmp_path / "features.csv"
        write_feature_csv([], path)
        assert path.read_text().strip() == ",".join(feature_csv_header())
        assert read_feature_csv(path) == []

    def test_row_count_matches(self, tmp_path):
        rng = np.random.default_rng(1)
        rows = [make_row("p1", d, rng, True) for d in range(1, 11)]
        path = tmp_path / "features.csv"
        write_feature_csv(rows, path)
        assert len(path.read_text().strip().split("\n")) == 11

    @settings(max_examples=20, deadline=None)
    @given(st.integers(0, 2**31))
    def test_round_trip_property(self, tmp_path_factory, seed):
        rng = np.random.default_rng(seed)
        rows = [make_row("p1", d, rng, bool(rng.integers(2))) for d in range(1, 8)]
        path = tmp_path_factory.mktemp("rt") / "f.csv"
        write_feature_csv(rows, path)
        back = read_feature_csv(path)
        for a, b in zip(rows, back):
            assert np.array_equal(a.features, b.features)
            assert a.valence_mean == b.valence_mean
