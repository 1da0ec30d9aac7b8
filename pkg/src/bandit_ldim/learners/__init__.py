"""Online learners for finite classes under bandit or full-information feedback."""

from .base import BSOA, SOA, FixedSeed, Learner, RandomConsistent, VersionSpaceLearner, soa_prediction
from .bounds import FORMULAS, LOG_BASE, lower_bounds, regret_bounds
from .experts import Exp4, ExpertPool, ExpertSimulator, build_expert_pool, default_gamma, pool_size
from .remap import SENTINEL, RemapTable, RemapWrapper, remap_build, remap_stream
