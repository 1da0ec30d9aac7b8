"""Memoized game recursions for the Littlestone and Bandit Littlestone dimensions.

Subsets are bitmasks over the rows of one class.  Conventions: the empty set
has dimension -1 and a singleton has dimension 0.

Littlestone dimension::

    L(S) = max_x max_{y1 != y2 in S(x)} 1 + min(L(S|x=y1), L(S|x=y2))

The inner max over label pairs is 1 + the second largest child value.

Bandit Littlestone dimension, branching only over labels realised at ``x``
(for ``y`` outside ``S(x)`` the surviving set is ``S`` itself, which never
attains the min)::

    BL(S) = max_x min_{y in S(x)} 1 + BL(S|x!=y)
"""

from __future__ import annotations

from ..classes import HypothesisClass


class DimensionSolver:
    """Per-class solver holding its own memo tables.

    A solver is confined to one computation (or one learner); it is never
    shared between threads.
    """

    def __init__(self, cls: HypothesisClass, memo: bool = True):
        self.cls = cls
        self.memo = memo
        self._masks = cls.label_masks
        self._ldim: dict[int, int] = {}
        self._bldim: dict[int, int] = {}

    def projection(self, mask: int, x: int) -> list[int]:
        return [y for y, m in enumerate(self._masks[x]) if m & mask]

    def ldim(self, mask: int) -> int:
        if mask == 0:
            return -1
        if mask & (mask - 1) == 0:
            return 0
        if self.memo and mask in self._ldim:
            return self._ldim[mask]
        # a depth-d tree needs 2**d distinct leaves
        ceiling = mask.bit_count().bit_length() - 1
        best = 0
        for x_masks in self._masks:
            children = [mask & m for m in x_masks if mask & m]
            if len(children) < 2:
                continue
            values = sorted((self.ldim(c) for c in children), reverse=True)
            best = max(best, 1 + values[1])
            if best == ceiling:
                break
        if self.memo:
            self._ldim[mask] = best
        return best

    def bldim(self, mask: int) -> int:
        if mask == 0:
            return -1
        if mask & (mask - 1) == 0:
            return 0
        if self.memo and mask in self._bldim:
            return self._bldim[mask]
        # every branch removes at least one hypothesis
        ceiling = mask.bit_count() - 1
        best = 0
        for x_masks in self._masks:
            hit = [m for m in x_masks if mask & m]
            if len(hit) < 2:
                continue
            worst = ceiling
            for m in hit:
                worst = min(worst, 1 + self.bldim(mask & ~m))
                if worst <= best:
                    break
            best = max(best, worst)
            if best == ceiling:
                break
        if self.memo:
            self._bldim[mask] = best
        return best
