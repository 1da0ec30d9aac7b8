"""Dimension front-end: ldim / bldim / sgdim on version spaces, and the joint report."""

from __future__ import annotations

import dataclasses
import math

from ..caps import get_caps
from ..classes import HypothesisClass, VersionSpace, max_projection
from ..errors import CapacityError, InputError
from .solver import DimensionSolver


def ldim(v: VersionSpace, memo: bool = True) -> int:
    return DimensionSolver(v.cls, memo=memo).ldim(v.mask)


def bldim(v: VersionSpace, memo: bool = True) -> int:
    return DimensionSolver(v.cls, memo=memo).bldim(v.mask)


def loss_class(v: VersionSpace, cap: int | None = None) -> HypothesisClass:
    """The class ``{(x, y) -> 1{h(x) != y} : h in v}`` over the product domain.

    Identical loss functions are merged.  Instance names are ``"x|y"``.
    """
    cls = v.cls
    cap = get_caps().sg_domain if cap is None else cap
    size = cls.n_instances * cls.n_labels
    if size > cap:
        raise CapacityError(f"loss-class domain has {size} points, cap is {cap}")
    domain = [(x, y) for x in range(cls.n_instances) for y in range(cls.n_labels)]
    rows, names = [], []
    seen = set()
    for h in v.members:
        row = tuple(int(cls.table[h][x] != y) for x, y in domain)
        if row not in seen:
            seen.add(row)
            rows.append(row)
            names.append(cls.names[h])
    return HypothesisClass(
        instances=[f"{cls.instances[x]}|{cls.labels[y]}" for x, y in domain],
        labels=["0", "1"],
        table=rows,
        names=names,
    )


def sgdim(v: VersionSpace, memo: bool = True, cap: int | None = None) -> int:
    lc = loss_class(v, cap)
    return DimensionSolver(lc, memo=memo).ldim(lc.full_mask)


@dataclasses.dataclass
class Check:
    name: str
    holds: bool
    lhs: float
    rhs: float


@dataclasses.dataclass
class DimReport:
    L: int
    BL: int
    SG: int
    C: int
    size: int
    checks: list[Check]
    sg_ratio: float | None = None  # SG / (L * log2(BL + 2)), recorded only

    @property
    def ok(self) -> bool:
        return all(c.holds for c in self.checks)

    def to_dict(self):
        return {
            "L": self.L,
            "BL": self.BL,
            "SG": self.SG,
            "C": self.C,
            "size": self.size,
            "checks": [dataclasses.asdict(c) for c in self.checks],
            "sg_ratio": self.sg_ratio,
            "ok": self.ok,
        }


def bl_ceiling(L: int, C: int) -> int:
    """ceil(4 L C ln C), the projection-bounded ceiling on BL (meaningful for C >= 2)."""
    return math.ceil(4 * L * C * math.log(C))


def inequality_checks(L, BL, SG, C, size) -> list[Check]:
    checks = [
        Check("L <= BL", L <= BL, L, BL),
        Check("L <= SG", L <= SG, L, SG),
        Check("C <= BL + 1", C <= BL + 1, C, BL + 1),
        Check("BL <= |H| - 1", BL <= size - 1, BL, size - 1),
    ]
    if C >= 2:
        ceiling = bl_ceiling(L, C)
        checks.append(Check("BL <= ceil(4 L C ln C)", BL <= ceiling, BL, ceiling))
    return checks


def dim_report(v: VersionSpace) -> DimReport:
    if not v:
        raise InputError("dimension report needs a nonempty class")
    solver = DimensionSolver(v.cls)
    L = solver.ldim(v.mask)
    BL = solver.bldim(v.mask)
    SG = sgdim(v)
    C = max_projection(v)
    ratio = SG / (L * math.log2(BL + 2)) if L > 0 else None
    return DimReport(L, BL, SG, C, len(v), inequality_checks(L, BL, SG, C, len(v)), ratio)
