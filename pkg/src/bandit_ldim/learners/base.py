"""Learner protocol and the version-space learners (BSOA, SOA, random-consistent)."""

from __future__ import annotations

import numpy as np

from ..classes import HypothesisClass
from ..dimensions.solver import DimensionSolver


class Learner:
    """Online learner protocol.

    Each round the harness calls :meth:`predict` with an instance id and then
    exactly one of :meth:`observe_bandit` (loss bit only) or
    :meth:`observe_full` (true label).  Under bandit feedback the harness
    never calls ``observe_full``.
    """

    name = "learner"
    deterministic = True

    def predict(self, x: int) -> int:
        raise NotImplementedError

    def observe_bandit(self, x: int, yhat: int, correct: bool) -> None:
        raise NotImplementedError

    def observe_full(self, x: int, yhat: int, y: int) -> None:
        self.observe_bandit(x, yhat, yhat == y)


def restrict_or_reset(full_mask, mask, label_mask, equal):
    """Apply one restriction; if it empties the set, restart from the full class."""
    for base in (mask, full_mask):
        new = base & label_mask if equal else base & ~label_mask
        if new:
            return new
    return full_mask


class VersionSpaceLearner(Learner):
    """Keeps the set of hypotheses consistent with the feedback seen so far."""

    def __init__(self, cls: HypothesisClass, solver: DimensionSolver | None = None):
        self.cls = cls
        self.solver = solver or DimensionSolver(cls)
        self.mask = cls.full_mask
        self._masks = cls.label_masks

    def _restrict(self, x, y, equal):
        self.mask = restrict_or_reset(self.cls.full_mask, self.mask, self._masks[x][y], equal)

    def observe_bandit(self, x, yhat, correct):
        self._restrict(x, yhat, bool(correct))


class BSOA(VersionSpaceLearner):
    """Bandit Standard Optimal Algorithm.

    Predicts the label whose exclusion leaves the smallest Bandit Littlestone
    dimension, so every mistake lowers ``bldim(V)`` by at least one.
    """

    name = "bsoa"

    def predict(self, x):
        best, best_value = None, None
        for y, m in enumerate(self._masks[x]):
            if not m & self.mask:
                continue
            value = self.solver.bldim(self.mask & ~m)
            if best_value is None or value < best_value:
                best, best_value = y, value
        return best


class SOA(VersionSpaceLearner):
    """Full-information Standard Optimal Algorithm.

    Predicts the label keeping the largest Littlestone dimension.  Under
    bandit feedback it can only restrict by the revealed bit.
    """

    name = "soa"

    def predict(self, x):
        return soa_prediction(self.solver, self.mask, x)

    def observe_full(self, x, yhat, y):
        self._restrict(x, y, True)


def soa_prediction(solver: DimensionSolver, mask: int, x: int) -> int:
    best, best_value = None, None
    for y, m in enumerate(solver.cls.label_masks[x]):
        if not m & mask:
            continue
        value = solver.ldim(mask & m)
        if best_value is None or value > best_value:
            best, best_value = y, value
    return best


class RandomConsistent(VersionSpaceLearner):
    """Baseline: uniform guess among labels the version space still realizes."""

    name = "random-consistent"
    deterministic = False

    def __init__(self, cls, seed=0, solver=None):
        super().__init__(cls, solver)
        self.rng = np.random.default_rng(seed)

    def predict(self, x):
        labels = [y for y, m in enumerate(self._masks[x]) if m & self.mask]
        return labels[int(self.rng.integers(len(labels)))]


class FixedSeed(Learner):
    """Present a seeded randomized learner as a deterministic one.

    With its seed fixed, the wrapped learner's predictions are a function of
    the interaction history, which is all an adaptive adversary needs.
    """

    deterministic = True

    def __init__(self, inner: Learner):
        self.inner = inner
        self.name = f"{inner.name}[fixed-seed]"

    def predict(self, x):
        return self.inner.predict(x)

    def observe_bandit(self, x, yhat, correct):
        self.inner.observe_bandit(x, yhat, correct)

    def observe_full(self, x, yhat, y):
        self.inner.observe_full(x, yhat, y)
