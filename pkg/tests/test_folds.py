import pytest
from hypothesis import given, strategies as st

from pupilmood.errors import TooFewGroups
from pupilmood.folds import make_fold_plan


def participants(n):
    return [f"p{i:03d}" for i in range(n)]


def test_balanced_sizes_25_5():
    plan = make_fold_plan(participants(25), 5, seed=0)
    assert plan.fold_sizes() == [5, 5, 5, 5, 5]


def test_uneven_sizes_23_5():
    plan = make_fold_plan(participants(23), 5, seed=0)
    assert sorted(plan.fold_sizes(), reverse=True) == [5, 5, 5, 4, 4]


def test_deterministic():
    a = make_fold_plan(participants(12), 4, seed=42)
    b = make_fold_plan(list(reversed(participants(12))), 4, seed=42)
    assert a == b


def test_seed_changes_assignment():
    a = make_fold_plan(participants(12), 4, seed=1)
    b = make_fold_plan(participants(12), 4, seed=2)
    assert a.assignment != b.assignment


def test_too_few_groups():
    with pytest.raises(TooFewGroups):
        make_fold_plan(participants(3), 5, seed=0)


@given(st.integers(5, 40), st.integers(2, 5), st.integers(0, 2**32 - 1))
def test_partition_properties(n, k, seed):
    if n < k:
        return
    plan = make_fold_plan(participants(n), k, seed)
    assert sorted(plan.assignment) == participants(n)  # everyone exactly once
    sizes = plan.fold_sizes()
    assert sum(sizes) == n
    assert max(sizes) - min(sizes) <= 1
