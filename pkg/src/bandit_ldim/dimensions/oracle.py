"""Brute-force shattering oracles used to cross-check the solver.

These work directly from the tree definitions.  They branch over an explicit
label universe instead of projections, work on frozensets of row tuples
instead of bitmasks, and never take a min/max shortcut.  The only
concession to speed is memoizing "does this set shatter some depth-d tree".
"""

from __future__ import annotations

from functools import lru_cache

from ..caps import get_caps
from ..classes import VersionSpace
from ..errors import CapacityError


def _rows(v: VersionSpace):
    return frozenset(v.cls.table[h] for h in v.members)


def _check_depth(depth_cap):
    cap = get_caps().oracle_depth
    if depth_cap > cap:
        raise CapacityError(f"oracle depth {depth_cap} exceeds cap {cap}")


def bldim_oracle(v: VersionSpace, y_universe=None, depth_cap: int | None = None) -> int:
    """Largest ``d <= depth_cap`` with a depth-d tree that branches on every label
    of ``y_universe`` and is shattered in the bandit sense; -1 for empty ``v``."""
    if y_universe is None:
        y_universe = range(v.cls.n_labels)
    y_universe = tuple(sorted(set(y_universe)))
    depth_cap = len(v) if depth_cap is None else depth_cap
    _check_depth(depth_cap)
    n_x = v.cls.n_instances

    @lru_cache(maxsize=None)
    def shattered(rows, d):
        if d == 0:
            return bool(rows)
        for x in range(n_x):
            if all(shattered(frozenset(r for r in rows if r[x] != y), d - 1) for y in y_universe):
                return True
        return False

    rows = _rows(v)
    if not rows:
        return -1
    d = 0
    while d < depth_cap and shattered(rows, d + 1):
        d += 1
    return d


def _ldim_rows(rows, n_x, y_universe, depth_cap):
    @lru_cache(maxsize=None)
    def shattered(rows, d):
        if d == 0:
            return bool(rows)
        for x in range(n_x):
            for i, y1 in enumerate(y_universe):
                left = frozenset(r for r in rows if r[x] == y1)
                if not shattered(left, d - 1):
                    continue
                for y2 in y_universe[i + 1 :]:
                    if shattered(frozenset(r for r in rows if r[x] == y2), d - 1):
                        return True
        return False

    if not rows:
        return -1
    d = 0
    while d < depth_cap and shattered(rows, d + 1):
        d += 1
    return d


def ldim_oracle(v: VersionSpace, depth_cap: int | None = None) -> int:
    """Depth of the deepest shattered binary tree, searching every instance and
    every pair of distinct labels from the full universe."""
    depth_cap = len(v) if depth_cap is None else depth_cap
    _check_depth(depth_cap)
    return _ldim_rows(_rows(v), v.cls.n_instances, tuple(range(v.cls.n_labels)), depth_cap)


def sgdim_oracle(v: VersionSpace, depth_cap: int | None = None) -> int:
    """Brute-force Littlestone dimension of the 0/1 loss class on ``X x Y``.

    Loss functions are evaluated on the fly; duplicates collapse because the
    rows are kept in a set.
    """
    cls = v.cls
    depth_cap = len(v) if depth_cap is None else depth_cap
    _check_depth(depth_cap)
    domain = [(x, y) for x in range(cls.n_instances) for y in range(cls.n_labels)]
    loss_rows = frozenset(tuple(int(cls.table[h][x] != y) for x, y in domain) for h in v.members)
    return _ldim_rows(loss_rows, len(domain), (0, 1), depth_cap)
