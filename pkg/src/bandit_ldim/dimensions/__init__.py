"""Littlestone, Bandit Littlestone and Sequential Graph dimensions."""

from .oracle import bldim_oracle, ldim_oracle, sgdim_oracle
from .report import Check, DimReport, bl_ceiling, bldim, dim_report, inequality_checks, ldim, loss_class, sgdim
from .solver import DimensionSolver
from .trees import (
    BLTree,
    LTree,
    Node,
    iter_paths,
    tree_from_dict,
    tree_to_dict,
    verify_shattering,
    witness_bltree,
    witness_ltree,
)
