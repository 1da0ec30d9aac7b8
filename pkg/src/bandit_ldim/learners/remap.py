"""Label remapping: shrink each instance's realized labels onto ``{1..C}``.

``phi_x`` sends the labels realized at ``x`` (ascending id) to ``0, 1, ...``;
remapped label id ``j`` is displayed as ``str(j + 1)``.  The remapped class
keeps the hypotheses in the same row order.
"""

from __future__ import annotations

import dataclasses

from ..classes import HypothesisClass, Stream, max_projection
from ..errors import ContractViolation, InputError
from .base import Learner

SENTINEL = "⊥"


@dataclasses.dataclass(frozen=True)
class RemapTable:
    phi: tuple[dict, ...]  # per instance: original label id -> remapped id
    inverse: tuple[tuple[int, ...], ...]  # per instance: remapped id -> original label id
    C: int

    def forward(self, x: int, y: int) -> int | None:
        return self.phi[x].get(y)

    def backward(self, x: int, ybar: int) -> int:
        return self.inverse[x][ybar]


def remap_build(cls: HypothesisClass) -> tuple[HypothesisClass, RemapTable]:
    if cls.n_hypotheses == 0:
        raise InputError("cannot remap an empty class")
    C = max_projection(cls.full())
    inverse = tuple(tuple(y for y, m in enumerate(x_masks) if m) for x_masks in cls.label_masks)
    phi = tuple({y: j for j, y in enumerate(inv)} for inv in inverse)
    table = [tuple(phi[x][y] for x, y in enumerate(row)) for row in cls.table]
    remapped = HypothesisClass(cls.instances, [str(j + 1) for j in range(C)], table, cls.names)
    return remapped, RemapTable(phi, inverse, C)


def remap_stream(stream: Stream, table: RemapTable, remapped: HypothesisClass) -> tuple[Stream, HypothesisClass]:
    """Remap a stream's labels; labels outside ``H(x)`` become a sentinel label.

    Returns the new stream together with the remapped class extended by the
    sentinel (no hypothesis ever outputs it), which the stream is valid for.
    """
    extended = remapped.with_extra_labels([SENTINEL])
    sentinel = extended.n_labels - 1
    examples = []
    for x, y in stream:
        ybar = table.forward(x, y)
        examples.append((x, sentinel if ybar is None else ybar))
    return Stream(examples).annotated(extended), extended


class RemapWrapper(Learner):
    """Run a learner for the remapped class on the original class.

    Queries the inner learner, predicts ``phi_x^{-1}`` of its answer and
    passes the bandit bit through unchanged.
    """

    def __init__(self, inner: Learner, table: RemapTable):
        self.inner = inner
        self.table = table
        self.name = f"remap({inner.name})"
        self.deterministic = inner.deterministic
        self._last = None

    def predict(self, x):
        ybar = self.inner.predict(x)
        inverse = self.table.inverse[x]
        if not 0 <= ybar < len(inverse):
            raise ContractViolation(
                f"inner learner predicted remapped label {ybar + 1} at instance {x}, "
                f"but only {len(inverse)} labels are realized there"
            )
        self._last = ybar
        return inverse[ybar]

    def observe_bandit(self, x, yhat, correct):
        self.inner.observe_bandit(x, self._last, correct)

    def observe_full(self, x, yhat, y):
        ybar = self.table.forward(x, y)
        if ybar is None:
            self.inner.observe_bandit(x, self._last, False)
        else:
            self.inner.observe_full(x, self._last, ybar)
