import numpy as np
import pytest

from pupilmood.config import RunConfig
from pupilmood.domain import DEFAULT_PIR_RANGE, filter_pir
from pupilmood.features import build_day_rows
from pupilmood.ingest import read_mood_csv, read_pir_csv
from pupilmood.labeling import daily_moods, join_labels
from pupilmood.simgen import CohortConfig, generate_cohort


def cohort_rows(tmp_path, config: CohortConfig):
    """simulate -> filter -> featurize -> label, returning labeled day rows."""
    files = generate_cohort(config, tmp_path)
    events, _ = read_pir_csv(files.pir_events, DEFAULT_PIR_RANGE)
    reports, _ = read_mood_csv(files.mood_reports)
    kept = filter_pir(events, DEFAULT_PIR_RANGE).kept
    rows = build_day_rows(kept)
    labeled, _ = join_labels(rows, daily_moods(reports))
    return labeled


@pytest.fixture(scope="session")
def small_planted_rows(tmp_path_factory):
    """10 participants x 12 days with a strong planted valence effect."""
    cfg = CohortConfig(
        n_participants=10, n_days=12, effect_beta=0.05, noise_sd=0.02, seed=123
    )
    return cohort_rows(tmp_path_factory.mktemp("planted"), cfg)


def planted_matrix(n=80, d=6, seed=0, informative=3):
    """Synthetic matrix whose label depends only on one feature column."""
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, d))
    y = (X[:, informative] > 0).astype(np.int64)
    return X, y
