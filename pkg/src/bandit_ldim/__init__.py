"""Dimensions, learners and lower-bound adversaries for online multiclass
learning with bandit feedback over finite hypothesis classes."""

from .classes import (
    HypothesisClass,
    Stream,
    VersionSpace,
    gen_constants,
    gen_full,
    gen_random,
    max_projection,
    projection,
    restrict_eq,
    restrict_neq,
)
from .dimensions import bldim, dim_report, ldim, sgdim
from .errors import (
    BanditLdimError,
    CapacityError,
    ConfigurationError,
    ContractViolation,
    InputError,
    InvariantViolation,
    ParseError,
    ValidationError,
)
from .fileformat import load_class, load_stream, save_class, save_stream

__version__ = "0.1.0"
