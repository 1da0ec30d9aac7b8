"""Experts reduction and the EXP4-style bandit aggregator.

Each expert is an SOA run with a fixed schedule of at most ``L`` forced
predictions ("overrides").  On an override round the expert predicts its
override label and feeds that label to its SOA state as if it were the true
label.  On other rounds it feeds its own SOA prediction back as the label
(``update="self"``), so expert advice depends only on the instance sequence.
For any hypothesis ``h``, the expert that overrides exactly where SOA run on
``h``'s labels would err agrees with ``h`` on every round; at most ``L(H)``
such overrides exist because each one lowers the Littlestone dimension of
the SOA state.

``update="bandit"`` instead advances non-override experts with the bandit
signal about the aggregate prediction (correct -> restrict to that label,
wrong -> exclude it).  It is kept for comparison only.
"""

from __future__ import annotations

import dataclasses
import itertools
import math

import numpy as np

from ..caps import get_caps
from ..classes import HypothesisClass, max_projection
from ..dimensions.solver import DimensionSolver
from ..errors import CapacityError, InputError, InvariantViolation
from .base import Learner, restrict_or_reset, soa_prediction


def pool_size(T: int, L_value: int, k: int) -> int:
    return sum(math.comb(T, j) * k**j for j in range(min(L_value, T) + 1))


@dataclasses.dataclass(frozen=True, eq=False)
class ExpertPool:
    cls: HypothesisClass
    T: int
    L_value: int
    override: np.ndarray  # (N, T) label id or -1

    @property
    def size(self) -> int:
        return self.override.shape[0]

    def schedule(self, i):
        """Override rounds and labels of expert ``i``."""
        rounds = [int(t) for t in np.flatnonzero(self.override[i] >= 0)]
        return rounds, [int(self.override[i, t]) for t in rounds]


def build_expert_pool(cls: HypothesisClass, T: int, L_value: int, cap: int | None = None) -> ExpertPool:
    """All experts with ``<= L_value`` override rounds among the first ``T``,
    with every assignment of override labels from the class's label universe."""
    if T < 0 or L_value < 0:
        raise InputError("T and L_value must be non-negative")
    cap = get_caps().experts if cap is None else cap
    k = cls.n_labels
    n = pool_size(T, L_value, k)
    if n > cap:
        raise CapacityError(f"expert pool would have N = {n} experts, cap is {cap}")
    override = np.full((n, T), -1, dtype=np.int32)
    i = 0
    for j in range(min(L_value, T) + 1):
        for rounds in itertools.combinations(range(T), j):
            for labels in itertools.product(range(k), repeat=j):
                override[i, list(rounds)] = labels
                i += 1
    assert i == n
    override.setflags(write=False)
    return ExpertPool(cls, T, L_value, override)


class ExpertSimulator:
    """Vectorised state of every expert in a pool.

    Expert states are version-space bitmasks interned to small integer ids.
    SOA predictions and state transitions live in dense tables indexed by
    state id and filled on first use, so a round costs a few fancy-indexing
    operations over the pool.
    """

    def __init__(self, pool: ExpertPool, solver: DimensionSolver | None = None, update: str = "self"):
        if update not in ("self", "bandit"):
            raise InputError(f"unknown expert update rule {update!r}")
        self.pool = pool
        self.cls = pool.cls
        self.update = update
        self.solver = solver or DimensionSolver(pool.cls)
        self._label_masks = pool.cls.label_masks
        self._realized = np.array(
            [[bool(m) for m in x_masks] for x_masks in self._label_masks], dtype=bool
        )
        self._state_masks: list[int] = []
        self._state_ids: dict[int, int] = {}
        n_x, n_y = self.cls.n_instances, self.cls.n_labels
        self._soa = np.full((0, n_x), -1, dtype=np.int64)
        self._next = np.full((0, n_x, n_y, 2), -1, dtype=np.int64)
        self._intern(pool.cls.full_mask)
        self.states = np.zeros(pool.size, dtype=np.int64)
        self.t = 0
        self._overriding = np.zeros(pool.size, dtype=bool)

    def _intern(self, mask):
        sid = self._state_ids.get(mask)
        if sid is None:
            sid = self._state_ids[mask] = len(self._state_masks)
            self._state_masks.append(mask)
            if sid >= len(self._soa):
                grow = max(8, len(self._soa))
                self._soa = np.concatenate([self._soa, np.full((grow,) + self._soa.shape[1:], -1, np.int64)])
                self._next = np.concatenate([self._next, np.full((grow,) + self._next.shape[1:], -1, np.int64)])
        return sid

    def predictions(self, x: int) -> np.ndarray:
        soa = self._soa[self.states, x]
        missing = soa < 0
        if missing.any():
            for sid in set(self.states[missing].tolist()):
                self._soa[sid, x] = soa_prediction(self.solver, self._state_masks[sid], x)
            soa = self._soa[self.states, x]
        if self.t < self.pool.T:
            ov = self.pool.override[:, self.t].astype(np.int64)
            # overrides to labels no hypothesis outputs at x are skipped
            self._overriding = (ov >= 0) & self._realized[x][np.maximum(ov, 0)]
            return np.where(self._overriding, ov, soa)
        self._overriding = np.zeros(self.pool.size, dtype=bool)
        return soa

    def advance(self, x: int, preds: np.ndarray, yhat: int, correct: bool):
        if self.update == "self":
            labels, equal = preds, np.ones(len(preds), dtype=np.int64)
        else:
            labels = np.where(self._overriding, preds, yhat)
            equal = (self._overriding | bool(correct)).astype(np.int64)
        nxt = self._next[self.states, x, labels, equal]
        missing = nxt < 0
        if missing.any():
            todo = set(zip(self.states[missing].tolist(), labels[missing].tolist(), equal[missing].tolist()))
            full = self.cls.full_mask
            for sid, y, eq in todo:
                mask = restrict_or_reset(full, self._state_masks[sid], self._label_masks[x][y], bool(eq))
                target = self._intern(mask)
                self._next[sid, x, y, eq] = target
            nxt = self._next[self.states, x, labels, equal]
        self.states = nxt
        self.t += 1


def default_gamma(k: int, n_experts: int, T: int) -> float:
    if T < 1 or n_experts <= 1:
        return 0.0
    return min(1.0, math.sqrt(k * math.log(n_experts) / T))


class Exp4(Learner):
    """Exponential weights over experts with importance-weighted bandit losses.

    ``p(y) = (1 - gamma) * (weight of experts advising y) + gamma * u(y)``,
    where ``u`` is uniform over the label universe (``explore="universe"``)
    or over the labels the class realizes at ``x`` (``explore="projection"``).
    After the loss bit ``c`` for the sampled ``yhat``, label ``y`` gets the
    estimate ``1{y == yhat} * c / p(yhat)`` and expert ``i`` is multiplied by
    ``exp(-eta * estimate(advice_i))``.
    """

    name = "exp4"
    deterministic = False

    def __init__(
        self,
        pool: ExpertPool,
        seed=0,
        eta: float | None = None,
        gamma: float | None = None,
        explore: str = "universe",
        expert_update: str = "self",
        horizon: int | None = None,
    ):
        if explore not in ("universe", "projection"):
            raise InputError(f"unknown exploration support {explore!r}")
        self.pool = pool
        self.cls = pool.cls
        self.explore = explore
        self.k = self.cls.n_labels if explore == "universe" else max_projection(self.cls.full())
        T = pool.T if horizon is None else horizon
        self.gamma = default_gamma(self.k, pool.size, T) if gamma is None else float(gamma)
        self.eta = self.gamma / self.k if eta is None else float(eta)
        if not 0.0 <= self.gamma <= 1.0:
            raise InputError("gamma must lie in [0, 1]")
        if self.eta < 0:
            raise InputError("eta must be non-negative")
        self.rng = np.random.default_rng(seed)
        self.sim = ExpertSimulator(pool, update=expert_update)
        self.log_weights = np.zeros(pool.size)
        n_y = self.cls.n_labels
        if explore == "universe":
            self._explore = [np.full(n_y, 1.0 / n_y)] * self.cls.n_instances
        else:
            self._explore = []
            for x_masks in self.cls.label_masks:
                realized = np.array([bool(m) for m in x_masks], dtype=float)
                self._explore.append(realized / realized.sum())
        self._preds = None
        self._p = None

    def distribution(self, x: int, advice: np.ndarray | None = None) -> np.ndarray:
        """Sampling distribution over label ids for the current weights."""
        if advice is None:
            advice = self.sim.predictions(x)
        w = np.exp(self.log_weights - self.log_weights.max())
        q = np.bincount(advice, weights=w, minlength=self.cls.n_labels) / w.sum()
        p = (1.0 - self.gamma) * q + self.gamma * self._explore[x]
        if not (abs(p.sum() - 1.0) <= 1e-9 and (p >= 0).all()):
            raise InvariantViolation(f"sampling distribution does not normalize: sum = {p.sum()!r}")
        return p

    def predict(self, x):
        self._preds = self.sim.predictions(x)
        self._p = self.distribution(x, self._preds)
        cdf = np.cumsum(self._p)
        u = self.rng.random() * cdf[-1]
        y = int(np.searchsorted(cdf, u, side="right"))
        y = min(y, len(cdf) - 1)
        while self._p[y] == 0.0:  # guard against landing on a flat cdf step
            y -= 1
        return y

    @staticmethod
    def loss_estimates(p: np.ndarray, yhat: int, correct: bool) -> np.ndarray:
        est = np.zeros(len(p))
        est[yhat] = (0.0 if correct else 1.0) / p[yhat]
        return est

    def observe_bandit(self, x, yhat, correct):
        if self._preds is None:
            raise InvariantViolation("observe called before predict")
        est = self.loss_estimates(self._p, yhat, correct)
        self.log_weights -= self.eta * est[self._preds]
        self.sim.advance(x, self._preds, yhat, correct)
        self._preds = None
