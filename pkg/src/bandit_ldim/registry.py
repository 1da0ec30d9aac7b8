"""Selection strings for learners and adversaries.

Learners: ``bsoa``, ``soa``, ``exp4``, ``exp4-remap``, ``random-consistent``.
Adversaries: ``uniform``, ``bltree``, ``adaptive``, ``file:<path>``.

Both selection objects are picklable callables so Monte Carlo trials can run in
worker processes.
"""

from __future__ import annotations

import dataclasses

from .adversaries import AdaptiveBLAdversary, BLTreeAdversary, UniformLabelAdversary, stream_from_file
from .classes import HypothesisClass
from .dimensions.solver import DimensionSolver
from .errors import InputError
from .learners import BSOA, SOA, Exp4, RandomConsistent, RemapWrapper, build_expert_pool, remap_build

LEARNERS = ("bsoa", "soa", "exp4", "exp4-remap", "random-consistent")
ADVERSARIES = ("uniform", "bltree", "adaptive", "file:<path>")


@dataclasses.dataclass
class LearnerSpec:
    name: str
    cls: HypothesisClass
    T: int
    eta: float | None = None
    gamma: float | None = None
    cap: int | None = None
    expert_update: str = "self"
    _cache: dict = dataclasses.field(default_factory=dict, repr=False)

    def __post_init__(self):
        if self.name not in LEARNERS:
            raise InputError(f"unknown learner {self.name!r}; choose from {', '.join(LEARNERS)}")

    @property
    def deterministic(self) -> bool:
        return self.name in ("bsoa", "soa")

    def _pool(self, cls):
        key = ("pool", cls is self.cls)
        if key not in self._cache:
            L = DimensionSolver(cls).ldim(cls.full_mask)
            self._cache[key] = build_expert_pool(cls, self.T, max(L, 0), self.cap)
        return self._cache[key]

    def _remapped(self):
        if "remap" not in self._cache:
            self._cache["remap"] = remap_build(self.cls)
        return self._cache["remap"]

    def prepare(self):
        """Build any expensive shared state (expert pools) up front."""
        if self.name == "exp4":
            self._pool(self.cls)
        elif self.name == "exp4-remap":
            self._pool(self._remapped()[0])
        return self

    def __call__(self, seed: int):
        if self.name == "bsoa":
            return BSOA(self.cls)
        if self.name == "soa":
            return SOA(self.cls)
        if self.name == "random-consistent":
            return RandomConsistent(self.cls, seed)
        kw = dict(eta=self.eta, gamma=self.gamma, expert_update=self.expert_update)
        if self.name == "exp4":
            return Exp4(self._pool(self.cls), seed, explore="universe", **kw)
        remapped, table = self._remapped()
        inner = Exp4(self._pool(remapped), seed, explore="projection", **kw)
        wrapper = RemapWrapper(inner, table)
        wrapper.name = "exp4-remap"
        return wrapper


@dataclasses.dataclass
class AdversarySpec:
    name: str
    cls: HypothesisClass

    def __post_init__(self):
        if self.name not in ("uniform", "bltree", "adaptive") and not self.name.startswith("file:"):
            raise InputError(f"unknown adversary {self.name!r}; choose from {', '.join(ADVERSARIES)}")

    @property
    def kind(self) -> str:
        return "file" if self.name.startswith("file:") else self.name

    def __call__(self):
        if self.name == "uniform":
            return UniformLabelAdversary(self.cls)
        if self.name == "bltree":
            return BLTreeAdversary(self.cls)
        if self.name == "adaptive":
            return AdaptiveBLAdversary(self.cls)
        return stream_from_file(self.name[len("file:") :], self.cls)
