"""Learner-vs-adversary games, regret, and Monte Carlo estimation.

Seeding: trial ``i`` of a Monte Carlo run with master seed ``m`` uses
``s_i = mix64(m, i)``.  Within a trial the learner is built from ``s_i`` and
the adversary draws from ``numpy.random.default_rng(mix64(s_i, ADVERSARY_STREAM))``.
``mix64`` is the SplitMix64 finalizer applied to ``seed + (i + 1) * golden``
(all arithmetic mod 2**64).

Per-trial results are integers, and the aggregate keeps exact integer sums
(count, sum, sum of squares, extrema), so the report does not depend on trial
order or on how trials are split across workers.
"""

from __future__ import annotations

import csv
import dataclasses
import json
import math
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable

import numpy as np

from .adversaries import Adversary, ObliviousAdversary
from .classes import HypothesisClass
from .errors import ConfigurationError, InputError
from .learners.base import Learner
from .learners.bounds import FORMULAS, LOG_BASE, lower_bounds, regret_bounds

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15
ADVERSARY_STREAM = 0xAD
Z99 = 2.576

PROTOCOLS = ("bandit", "full")


def mix64(seed: int, i: int) -> int:
    z = (seed + (i + 1) * GOLDEN) & MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


@dataclasses.dataclass(frozen=True)
class Round:
    x: int
    yhat: int
    y: int
    loss: int


@dataclasses.dataclass
class GameTrace:
    rounds: list[Round]
    protocol: str
    seed: int
    learner: str
    adversary: str
    realizable: bool | None = None

    @property
    def losses(self) -> list[int]:
        return [r.loss for r in self.rounds]

    def write_csv(self, path, cls: HypothesisClass):
        with open(path, "w", newline="", encoding="utf-8") as f:
            w = csv.writer(f)
            w.writerow(["round", "x", "yhat", "ytrue", "loss"])
            for t, r in enumerate(self.rounds, 1):
                w.writerow([t, cls.instances[r.x], cls.labels[r.yhat], cls.labels[r.y], r.loss])


def _check_protocol(protocol):
    if protocol not in PROTOCOLS:
        raise InputError(f"protocol must be one of {PROTOCOLS}, got {protocol!r}")


def run_game(learner: Learner, adversary: Adversary, protocol: str, T: int, seed: int) -> GameTrace:
    """Play one game.  Bandit learners only ever receive the loss bit."""
    _check_protocol(protocol)
    if adversary.adaptive:
        if not learner.deterministic:
            raise ConfigurationError("the adaptive adversary is defined only against deterministic learners")
        if protocol != "bandit":
            raise ConfigurationError("the adaptive adversary plays the bandit protocol only")
        return _adaptive_game(learner, adversary, T, seed)
    if not isinstance(adversary, ObliviousAdversary):
        raise ConfigurationError(f"unsupported adversary {adversary!r}")
    stream = adversary.stream(T, np.random.default_rng(mix64(seed, ADVERSARY_STREAM)))
    rounds = []
    for x, y in stream.examples[: max(T, 0)]:
        yhat = learner.predict(x)
        if protocol == "bandit":
            learner.observe_bandit(x, yhat, yhat == y)
        else:
            learner.observe_full(x, yhat, y)
        rounds.append(Round(x, yhat, y, int(yhat != y)))
    return GameTrace(rounds, protocol, seed, learner.name, adversary.name, stream.realizable)


def _adaptive_game(learner, adversary, T, seed):
    adversary.reset()
    played = []
    for _ in range(max(T, 0)):
        x = adversary.instance()
        yhat = learner.predict(x)
        correct = adversary.respond(x, yhat)
        learner.observe_bandit(x, yhat, correct)
        played.append((x, yhat, correct))
    h = adversary.hypothesis()
    table = adversary.cls.table
    rounds = []
    for x, yhat, correct in played:
        y = table[h][x]
        if (yhat == y) != correct:
            raise AssertionError("adaptive adversary answered inconsistently with its hypothesis")
        rounds.append(Round(x, yhat, y, int(not correct)))
    return GameTrace(rounds, "bandit", seed, learner.name, adversary.name, True)


@dataclasses.dataclass(frozen=True)
class TrialStats:
    """Commutative monoid over per-trial (loss, best loss) pairs."""

    n: int = 0
    loss_sum: int = 0
    best_sum: int = 0
    regret_sum: int = 0
    regret_sq_sum: int = 0
    regret_max: int | None = None
    regret_min: int | None = None
    loss_max: int | None = None
    realizable: bool = True

    @classmethod
    def one(cls, loss: int, best: int):
        r = loss - best
        return cls(1, loss, best, r, r * r, r, r, loss, best == 0)

    def __add__(self, other: TrialStats) -> TrialStats:
        def pick(f, a, b):
            return b if a is None else a if b is None else f(a, b)

        return TrialStats(
            self.n + other.n,
            self.loss_sum + other.loss_sum,
            self.best_sum + other.best_sum,
            self.regret_sum + other.regret_sum,
            self.regret_sq_sum + other.regret_sq_sum,
            pick(max, self.regret_max, other.regret_max),
            pick(min, self.regret_min, other.regret_min),
            pick(max, self.loss_max, other.loss_max),
            self.realizable and other.realizable,
        )


@dataclasses.dataclass
class Bound:
    name: str
    formula: str
    kind: str  # "upper" (mean + hw <= value), "lower" (mean + hw >= value), "max" / "min" (exact)
    value: float
    empirical: float
    satisfied: bool


@dataclasses.dataclass
class RegretReport:
    stats: TrialStats
    T: int
    protocol: str
    learner: str
    adversary: str
    master_seed: int
    bounds: list[Bound] = dataclasses.field(default_factory=list)

    @property
    def trials(self):
        return self.stats.n

    @property
    def cumulative_loss(self) -> float:
        return self.stats.loss_sum / self.stats.n

    @property
    def best_loss(self) -> float:
        return self.stats.best_sum / self.stats.n

    @property
    def regret(self) -> float:
        return self.stats.regret_sum / self.stats.n

    mean_regret = regret

    @property
    def std(self) -> float:
        s = self.stats
        if s.n < 2:
            return 0.0
        var = Fraction(s.n * s.regret_sq_sum - s.regret_sum**2, s.n * (s.n - 1))
        return math.sqrt(var)

    @property
    def half_width(self) -> float:
        return Z99 * self.std / math.sqrt(self.stats.n)

    @property
    def realizable(self) -> bool:
        return self.stats.realizable

    @property
    def ok(self) -> bool:
        return all(b.satisfied for b in self.bounds)

    def to_dict(self):
        s = self.stats
        return {
            "learner": self.learner,
            "adversary": self.adversary,
            "protocol": self.protocol,
            "T": self.T,
            "master_seed": self.master_seed,
            "trials": s.n,
            "cumulative_loss": self.cumulative_loss,
            "best_hypothesis_loss": self.best_loss,
            "regret": self.regret,
            "mean_regret": self.regret,
            "std": self.std,
            "ci99_half_width": self.half_width,
            "max_regret": s.regret_max,
            "min_regret": s.regret_min,
            "max_loss": s.loss_max,
            "realizable": s.realizable,
            "log_base": LOG_BASE,
            "bounds": [dataclasses.asdict(b) for b in self.bounds],
            "ok": self.ok,
        }

    def write_json(self, path):
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2)
            f.write("\n")


def best_hypothesis_loss(trace: GameTrace, cls: HypothesisClass) -> int:
    if not trace.rounds or cls.n_hypotheses == 0:
        return 0
    xs = np.array([r.x for r in trace.rounds])
    ys = np.array([r.y for r in trace.rounds])
    return int((cls.array[:, xs] != ys).sum(axis=1).min())


def regret(trace: GameTrace, cls: HypothesisClass) -> RegretReport:
    loss = sum(trace.losses)
    stats = TrialStats.one(loss, best_hypothesis_loss(trace, cls))
    return RegretReport(stats, len(trace.rounds), trace.protocol, trace.learner, trace.adversary, trace.seed)


def _run_trials(args):
    learner_factory, adversary_factory, protocol, T, master_seed, indices = args
    adversary = adversary_factory()
    total = TrialStats()
    names = None
    for i in indices:
        seed = mix64(master_seed, i)
        learner = learner_factory(seed)
        trace = run_game(learner, adversary, protocol, T, seed)
        total = total + regret(trace, adversary.cls).stats
        names = (trace.learner, trace.adversary)
    return total, names


def monte_carlo(
    learner_factory: Callable[[int], Learner],
    adversary_factory: Callable[[], Adversary],
    protocol: str,
    T: int,
    trials: int,
    master_seed: int,
    workers: int = 1,
) -> RegretReport:
    """Estimate expected regret over ``trials`` independently seeded games.

    With ``workers > 1`` both factories must be picklable; the result is
    identical to a sequential run.
    """
    _check_protocol(protocol)
    if trials < 1:
        raise InputError("trials must be >= 1")
    if workers <= 1:
        total, names = _run_trials((learner_factory, adversary_factory, protocol, T, master_seed, range(trials)))
    else:
        chunks = [range(i, trials, workers) for i in range(workers)]
        with ProcessPoolExecutor(workers) as ex:
            parts = list(
                ex.map(_run_trials, [(learner_factory, adversary_factory, protocol, T, master_seed, c) for c in chunks])
            )
        total = TrialStats()
        names = None
        for part, part_names in parts:
            total = total + part
            names = names or part_names
    return RegretReport(total, T, protocol, names[0], names[1], master_seed)


DETERMINISTIC_LEARNERS = ("bsoa", "soa")


def bound_check(
    report: RegretReport,
    L: int,
    BL: int,
    C: int,
    T: int,
    adversary: str | None = None,
    learner: str | None = None,
) -> RegretReport:
    """Attach the closed-form bounds that apply to this run.

    Upper bounds hold when ``mean + half_width <= bound``; lower bounds when
    ``mean + half_width >= bound`` (the mean is not significantly below).
    Exact bounds for deterministic learners compare the trial extrema.

    The agnostic regret bounds are attached for ``exp4-remap`` (or when no
    learner is named); the realizable mistake bound ``BL`` for ``bsoa`` and
    ``L`` for ``soa`` under full information.  Lower bounds hold for every
    learner.
    """
    mean, hw = report.regret, report.half_width
    stats = report.stats
    bounds = []
    if T >= 1 and learner in (None, "exp4-remap"):
        ups = regret_bounds(L, BL, C, T)
        names = ["bl_agnostic", "projection_agnostic"] + (["bl_agnostic_intermediate"] if T > BL else [])
        for name in names:
            bounds.append(Bound(name, FORMULAS[name], "upper", ups[name], mean + hw, mean + hw <= ups[name]))
    if stats.realizable and learner == "bsoa":
        worst = stats.regret_max
        bounds.append(Bound("realizable_upper", FORMULAS["realizable_upper"], "max", BL, worst, worst <= BL))
    if stats.realizable and learner == "soa" and report.protocol == "full":
        worst = stats.regret_max
        bounds.append(Bound("full_realizable_upper", FORMULAS["full_realizable_upper"], "max", L, worst, worst <= L))
    if T >= 1:
        lows = lower_bounds(BL, C, T)
        if adversary in ("uniform", "bltree"):
            name = f"{adversary}_lower"
            v = lows[name]
            bounds.append(Bound(name, FORMULAS[name], "lower", v, mean + hw, mean + hw >= v))
        elif adversary == "adaptive" and learner in DETERMINISTIC_LEARNERS:
            v = min(BL, T)
            least = stats.regret_min
            bounds.append(Bound("adaptive_lower", FORMULAS["adaptive_lower"], "min", v, least, least >= v))
    report.bounds = bounds
    return report
