"""Finite multiclass hypothesis classes, version spaces and class generators.

Instances and labels are dense integer ids into the owning class's universes;
display names are only used for I/O.  A hypothesis is a row of the table, so
``table[h][x]`` is the label id of ``h(x)``.

A :class:`VersionSpace` stores its members as a bitmask over row indices.
The bitmask is the canonical identity of the subset and is what the dimension
solvers memoize on; :attr:`VersionSpace.key` exposes the sorted member list.
"""

from __future__ import annotations

import dataclasses
import itertools
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from .caps import get_caps
from .errors import CapacityError, InputError, ValidationError


def _label_names(count, start=1):
    return tuple(str(i) for i in range(start, start + count))


@dataclasses.dataclass(frozen=True)
class HypothesisClass:
    """A finite table of pairwise distinct functions ``X -> Y``."""

    instances: tuple[str, ...]
    labels: tuple[str, ...]
    table: tuple[tuple[int, ...], ...]
    names: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "instances", tuple(self.instances))
        object.__setattr__(self, "labels", tuple(self.labels))
        object.__setattr__(self, "table", tuple(tuple(int(v) for v in row) for row in self.table))
        object.__setattr__(self, "names", tuple(self.names))
        if len(self.instances) < 1:
            raise ValidationError("a class needs at least one instance")
        if len(self.labels) < 1:
            raise ValidationError("a class needs at least one label")
        if len(set(self.instances)) != len(self.instances):
            raise ValidationError("instance names must be unique")
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError("label names must be unique")
        if len(self.names) != len(self.table):
            raise ValidationError("one name per hypothesis row is required")
        if len(set(self.names)) != len(self.names):
            raise ValidationError("hypothesis names must be unique")
        n_x, n_y = len(self.instances), len(self.labels)
        seen = {}
        for i, row in enumerate(self.table):
            if len(row) != n_x:
                raise ValidationError(f"hypothesis {self.names[i]!r}: expected {n_x} entries, got {len(row)}")
            for v in row:
                if not 0 <= v < n_y:
                    raise ValidationError(f"hypothesis {self.names[i]!r}: label id {v} out of range")
            if row in seen:
                raise ValidationError(
                    f"hypotheses {self.names[seen[row]]!r} and {self.names[i]!r} are the same function"
                )
            seen[row] = i

    @property
    def n_hypotheses(self) -> int:
        return len(self.table)

    @property
    def n_instances(self) -> int:
        return len(self.instances)

    @property
    def n_labels(self) -> int:
        return len(self.labels)

    @cached_property
    def array(self) -> np.ndarray:
        """The table as an ``(|H|, |X|)`` integer array."""
        return np.array(self.table, dtype=np.int64).reshape(self.n_hypotheses, self.n_instances)

    @cached_property
    def label_masks(self) -> tuple[tuple[int, ...], ...]:
        """``label_masks[x][y]`` is the bitmask of rows with ``h(x) == y``."""
        masks = [[0] * self.n_labels for _ in range(self.n_instances)]
        for h, row in enumerate(self.table):
            bit = 1 << h
            for x, y in enumerate(row):
                masks[x][y] |= bit
        return tuple(tuple(m) for m in masks)

    @property
    def full_mask(self) -> int:
        return (1 << self.n_hypotheses) - 1

    def full(self) -> VersionSpace:
        return VersionSpace(self, self.full_mask)

    def subspace(self, members) -> VersionSpace:
        mask = 0
        for h in members:
            if not 0 <= h < self.n_hypotheses:
                raise InputError(f"hypothesis index {h} out of range")
            mask |= 1 << h
        return VersionSpace(self, mask)

    def instance_id(self, name: str) -> int:
        try:
            return self.instances.index(name)
        except ValueError:
            raise InputError(f"unknown instance {name!r}") from None

    def label_id(self, name: str) -> int:
        try:
            return self.labels.index(name)
        except ValueError:
            raise InputError(f"unknown label {name!r}") from None

    def with_extra_labels(self, names: Sequence[str]) -> HypothesisClass:
        return HypothesisClass(self.instances, self.labels + tuple(names), self.table, self.names)

    def check_instance(self, x: int):
        if not 0 <= x < self.n_instances:
            raise InputError(f"instance id {x} out of range (|X| = {self.n_instances})")

    def check_label(self, y: int):
        if not 0 <= y < self.n_labels:
            raise InputError(f"label id {y} out of range (|Y| = {self.n_labels})")


@dataclasses.dataclass(frozen=True)
class VersionSpace:
    """An immutable subset of a class's hypotheses."""

    cls: HypothesisClass
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.cls.n_hypotheses:
            raise InputError("member mask refers to rows outside the class")

    @property
    def members(self) -> tuple[int, ...]:
        return tuple(h for h in range(self.cls.n_hypotheses) if self.mask >> h & 1)

    key = members

    def __len__(self):
        return self.mask.bit_count()

    def __contains__(self, h):
        return h >= 0 and bool(self.mask >> h & 1)

    def __iter__(self):
        return iter(self.members)

    def __bool__(self):
        return self.mask != 0

    def issubset(self, other: VersionSpace) -> bool:
        return self.mask & ~other.mask == 0

    def replace(self, mask: int) -> VersionSpace:
        return VersionSpace(self.cls, mask)


class StreamExample(NamedTuple):
    x: int
    y: int


@dataclasses.dataclass(frozen=True)
class Stream:
    examples: tuple[StreamExample, ...]
    realizable: bool | None = None

    def __post_init__(self):
        object.__setattr__(self, "examples", tuple(StreamExample(int(x), int(y)) for x, y in self.examples))

    def __len__(self):
        return len(self.examples)

    def __iter__(self):
        return iter(self.examples)

    def validate(self, cls: HypothesisClass):
        for t, (x, y) in enumerate(self.examples):
            if not 0 <= x < cls.n_instances or not 0 <= y < cls.n_labels:
                raise ValidationError(f"example {t}: ids ({x}, {y}) invalid for the class")

    def consistent_hypotheses(self, cls: HypothesisClass) -> list[int]:
        """Rows agreeing with every example."""
        self.validate(cls)
        if not self.examples:
            return list(range(cls.n_hypotheses))
        xs = np.array([e.x for e in self.examples])
        ys = np.array([e.y for e in self.examples])
        ok = (cls.array[:, xs] == ys).all(axis=1)
        return [int(h) for h in np.flatnonzero(ok)]

    def is_realizable(self, cls: HypothesisClass) -> bool:
        return bool(self.consistent_hypotheses(cls))

    def annotated(self, cls: HypothesisClass) -> Stream:
        return Stream(self.examples, self.is_realizable(cls))


# -- operations --------------------------------------------------------------


def projection(v: VersionSpace, x: int) -> list[int]:
    """Labels ``{h(x) : h in v}`` in ascending id order."""
    v.cls.check_instance(x)
    return [y for y, m in enumerate(v.cls.label_masks[x]) if m & v.mask]


def restrict_eq(v: VersionSpace, x: int, y: int) -> VersionSpace:
    v.cls.check_instance(x)
    v.cls.check_label(y)
    return v.replace(v.mask & v.cls.label_masks[x][y])


def restrict_neq(v: VersionSpace, x: int, y: int) -> VersionSpace:
    v.cls.check_instance(x)
    v.cls.check_label(y)
    return v.replace(v.mask & ~v.cls.label_masks[x][y])


def max_projection(v: VersionSpace) -> int:
    masks = v.cls.label_masks
    return max(sum(1 for m in masks[x] if m & v.mask) for x in range(v.cls.n_instances))


# -- generators --------------------------------------------------------------


def _instance_names(m):
    return tuple(f"x{i}" for i in range(1, m + 1))


def _compact(rows, k, extra_labels):
    """Keep only labels some row outputs, then append unused extra labels."""
    used = sorted({v for row in rows for v in row})
    remap = {old: new for new, old in enumerate(used)}
    names = tuple(str(v + 1) for v in used) + _label_names(extra_labels, start=k + 1)
    return names, [tuple(remap[v] for v in row) for row in rows]


def gen_constants(n: int, m: int, extra_labels: int = 0) -> HypothesisClass:
    """``n`` constant hypotheses ``h_a(x) = a`` over ``m`` instances."""
    if n < 1 or m < 1:
        raise InputError("gen_constants needs n >= 1 and m >= 1")
    if extra_labels < 0:
        raise InputError("extra_labels must be non-negative")
    return HypothesisClass(
        instances=_instance_names(m),
        labels=_label_names(n + extra_labels),
        table=[(a,) * m for a in range(n)],
        names=[f"h{a}" for a in range(1, n + 1)],
    )


def gen_full(m: int, k: int, extra_labels: int = 0, cap: int | None = None) -> HypothesisClass:
    """All ``k**m`` functions from ``m`` instances to ``k`` labels, lexicographic rows."""
    if m < 1 or k < 1:
        raise InputError("gen_full needs m >= 1 and k >= 1")
    if extra_labels < 0:
        raise InputError("extra_labels must be non-negative")
    cap = get_caps().full_class if cap is None else cap
    size = k**m
    if size > cap:
        raise CapacityError(f"gen_full({m}, {k}) has {size} hypotheses, cap is {cap}")
    rows = list(itertools.product(range(k), repeat=m))
    return HypothesisClass(
        instances=_instance_names(m),
        labels=_label_names(k + extra_labels),
        table=rows,
        names=[f"h{i}" for i in range(1, size + 1)],
    )


def gen_random(m: int, k: int, n: int, seed: int, extra_labels: int = 0) -> HypothesisClass:
    """``n`` distinct functions sampled uniformly from ``[k]^[m]``.

    Labels no sampled function uses are dropped, so the label universe is the
    union of projections plus ``extra_labels`` never-output labels.
    """
    if m < 1 or k < 1:
        raise InputError("gen_random needs m >= 1 and k >= 1")
    if n < 1:
        raise InputError("gen_random needs n >= 1")
    if extra_labels < 0:
        raise InputError("extra_labels must be non-negative")
    total = k**m
    if n > total:
        raise InputError(f"cannot draw {n} distinct functions, only {total} exist")
    rng = np.random.default_rng(seed)
    if total <= 1 << 20:
        codes = rng.choice(total, size=n, replace=False)
    else:
        picked = {}
        while len(picked) < n:
            c = int(rng.integers(0, total))
            picked.setdefault(c, None)
        codes = list(picked)
    rows = []
    for code in codes:
        code = int(code)
        row = []
        for _ in range(m):
            code, r = divmod(code, k)
            row.append(r)
        rows.append(tuple(reversed(row)))
    labels, rows = _compact(rows, k, extra_labels)
    return HypothesisClass(
        instances=_instance_names(m),
        labels=labels,
        table=rows,
        names=[f"h{i}" for i in range(1, n + 1)],
    )
