"""Grouped fold assignment: every participant lands in exactly one fold."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .errors import TooFewGroups


@dataclass(frozen=True)
class FoldPlan:
    k: int
    assignment: Mapping[str, int]  # participant_id -> fold index
    seed: int

    def fold_of(self, participant_id: str) -> int:
        return self.assignment[participant_id]

    def participants_in(self, fold: int) -> list[str]:
        return sorted(p for p, f in self.assignment.items() if f == fold)

    def fold_sizes(self) -> list[int]:
        sizes = [0] * self.k
        for f in self.assignment.values():
            sizes[f] += 1
        return sizes


def make_fold_plan(participants: Iterable[str], k: int, seed: int) -> FoldPlan:
    """Shuffle participants with a seeded generator, deal round-robin.

    Deterministic given (participant set, k, seed); fold sizes differ by
    at most one.
    """
    unique = sorted(set(participants))
    if len(unique) < k:
        raise TooFewGroups(len(unique), k)
    rng = np.random.Generator(np.random.PCG64(seed))
    order = [unique[i] for i in rng.permutation(len(unique))]
    assignment = {pid: i % k for i, pid in enumerate(order)}
    return FoldPlan(k=k, assignment=assignment, seed=seed)
