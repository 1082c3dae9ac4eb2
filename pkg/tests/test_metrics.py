import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from pupilmood.metrics import ConfusionMatrix, balanced_accuracy, balanced_accuracy_ex, confusion, mcc


def oracle_ba(tp, fp, tn, fn):
    pos, neg = tp + fn, tn + fp
    if pos == 0 and neg == 0:
        return Fraction(0)
    if pos == 0:
        return Fraction(tn, neg)
    if neg == 0:
        return Fraction(tp, pos)
    return (Fraction(tp, pos) + Fraction(tn, neg)) / 2


def oracle_mcc(tp, fp, tn, fn):
    denom = (tp + fp) * (tp + fn) * (tn + fp) * (tn + fn)
    if denom == 0:
        return 0.0
    return (tp * tn - fp * fn) / math.sqrt(denom)


class TestBalancedAccuracy:
    def test_hand_arithmetic(self):
        assert balanced_accuracy(ConfusionMatrix(tp=3, fn=1, tn=2, fp=2)) == pytest.approx(0.625)

    def test_perfect(self):
        assert balanced_accuracy(ConfusionMatrix(tp=5, tn=5)) == 1.0

    def test_always_high_on_mixed(self):
        assert balanced_accuracy(ConfusionMatrix(tp=4, fp=6)) == pytest.approx(0.5)

    def test_degeneracy_flag(self):
        value, degenerate = balanced_accuracy_ex(ConfusionMatrix(tn=3, fp=1))
        assert degenerate and value == pytest.approx(0.75)
        _, ok = balanced_accuracy_ex(ConfusionMatrix(tp=1, tn=1))
        assert not ok


class TestMcc:
    def test_extremes(self):
        assert mcc(ConfusionMatrix(tp=5, tn=5)) == 1.0
        assert mcc(ConfusionMatrix(fp=5, fn=5)) == -1.0

    def test_big_integer_oracle_case(self):
        got = mcc(ConfusionMatrix(tp=6, tn=3, fp=1, fn=2))
        assert got == pytest.approx(16 / math.sqrt(1120), rel=1e-15)

    def test_single_class_prediction_is_zero(self):
        assert mcc(ConfusionMatrix(tp=4, fn=0, fp=6, tn=0)) == 0.0

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            ConfusionMatrix(tp=-1)


@given(st.integers(0, 30), st.integers(0, 30), st.integers(0, 30), st.integers(0, 30))
def test_label_swap_antisymmetry(tp, fp, tn, fn):
    cm = ConfusionMatrix(tp=tp, fp=fp, tn=tn, fn=fn)
    swapped = ConfusionMatrix(tp=fn, fp=tn, tn=fp, fn=tp)  # predictions inverted
    assert mcc(swapped) == pytest.approx(-mcc(cm), abs=1e-12)
    ba, deg = balanced_accuracy_ex(cm)
    ba_swapped, deg_swapped = balanced_accuracy_ex(swapped)
    if not deg and not deg_swapped:
        assert ba_swapped == pytest.approx(1.0 - ba, abs=1e-12)


def test_exhaustive_small_enumeration():
    for tp in range(13):
        for fp in range(13 - tp):
            for tn in range(13 - tp - fp):
                for fn in range(13 - tp - fp - tn):
                    cm = ConfusionMatrix(tp=tp, fp=fp, tn=tn, fn=fn)
                    assert balanced_accuracy(cm) == pytest.approx(
                        float(oracle_ba(tp, fp, tn, fn)), abs=1e-12
                    )
                    assert mcc(cm) == pytest.approx(oracle_mcc(tp, fp, tn, fn), abs=1e-12)


def test_confusion_from_labels():
    cm = confusion([1, 1, 0, 0, 1], [1, 0, 0, 1, 1])
    assert (cm.tp, cm.fn, cm.tn, cm.fp) == (2, 1, 1, 1)
    assert cm.total == 5
