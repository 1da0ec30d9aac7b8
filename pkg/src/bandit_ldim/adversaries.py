"""Lower-bound adversaries and file-backed streams.

Oblivious adversaries produce the whole :class:`Stream` before the game from
a seeded generator.  The adaptive adversary answers each prediction in turn
by walking down a shattered Bandit Littlestone tree.
"""

from __future__ import annotations

import numpy as np

from .classes import HypothesisClass, Stream, projection
from .dimensions.solver import DimensionSolver
from .dimensions.trees import Node, witness_bltree
from .errors import InputError
from .fileformat import load_stream


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def uniform_label_stream(cls: HypothesisClass, T: int, seed) -> Stream:
    """Repeat one instance ``T`` times with a label drawn uniformly from the
    first ``d = min(C, T)`` labels realized there (ascending id)."""
    if cls.n_hypotheses == 0:
        raise InputError("uniform_label_stream needs a nonempty class")
    if T <= 0:
        return Stream((), True)
    full = cls.full()
    sizes = [len(projection(full, x)) for x in range(cls.n_instances)]
    x_star = int(np.argmax(sizes))
    d = min(sizes[x_star], T)
    y = projection(full, x_star)[int(_rng(seed).integers(d))]
    return Stream([(x_star, y)] * T, True)


def bltree_stream(cls: HypothesisClass, T: int, seed, tree=None) -> Stream:
    """Random root-to-leaf walk down a shattered BL-tree of depth ``min(BL, T)``.

    The label at each step is uniform over the node's branch set; the stream
    is labelled by the leaf witness, which avoids every label on the path.
    A precomputed tree of the right depth may be passed in.
    """
    if tree is None:
        tree = _bltree_for(cls, T)
    rng = _rng(seed)
    node, xs = tree.root, []
    while isinstance(node, Node):
        labels = sorted(node.edges)
        xs.append(node.x)
        node = node.edges[labels[int(rng.integers(len(labels)))]]
    h = node
    return Stream([(x, cls.table[h][x]) for x in xs], True)


def _bltree_for(cls, T):
    if cls.n_hypotheses == 0:
        raise InputError("bltree_stream needs a nonempty class")
    solver = DimensionSolver(cls)
    BL = solver.bldim(cls.full_mask)
    if BL < 1:
        raise InputError("bltree_stream needs a class with bldim >= 1")
    return witness_bltree(cls.full(), solver, depth=min(BL, max(T, 0)))


class Adversary:
    name = "adversary"
    adaptive = False

    def __init__(self, cls: HypothesisClass):
        self.cls = cls


class ObliviousAdversary(Adversary):
    def stream(self, T: int, rng) -> Stream:
        raise NotImplementedError


class UniformLabelAdversary(ObliviousAdversary):
    name = "uniform"

    def stream(self, T, rng):
        return uniform_label_stream(self.cls, T, rng)


class BLTreeAdversary(ObliviousAdversary):
    name = "bltree"

    def __init__(self, cls):
        super().__init__(cls)
        self._trees = {}

    def stream(self, T, rng):
        if T not in self._trees:
            self._trees[T] = _bltree_for(self.cls, T)
        return bltree_stream(self.cls, T, rng, tree=self._trees[T])


class FixedStreamAdversary(ObliviousAdversary):
    """Replays a fixed stream (truncated to ``T`` rounds)."""

    name = "file"

    def __init__(self, cls, stream: Stream, name=None):
        super().__init__(cls)
        stream.validate(cls)
        self.fixed = stream if stream.realizable is not None else stream.annotated(cls)
        if name:
            self.name = name

    def stream(self, T, rng):
        if T >= len(self.fixed):
            return self.fixed
        return Stream(self.fixed.examples[:T]).annotated(self.cls)


def stream_from_file(path, cls: HypothesisClass) -> FixedStreamAdversary:
    return FixedStreamAdversary(cls, load_stream(path, cls), name=f"file:{path}")


class AdaptiveBLAdversary(Adversary):
    """Forces ``bldim`` mistakes on any deterministic learner.

    Presents the current node's instance and always answers "incorrect"
    while inside the tree: a prediction in the branch set moves down that
    edge, any other prediction is wrong for every surviving hypothesis and
    leaves the position unchanged.  At a leaf the adversary commits to the
    leaf witness and answers truthfully from then on, showing the root
    instance.
    """

    name = "adaptive"
    adaptive = True

    def __init__(self, cls):
        super().__init__(cls)
        if cls.n_hypotheses == 0:
            raise InputError("adaptive adversary needs a nonempty class")
        self.tree = witness_bltree(cls.full())
        self.reset()

    def reset(self):
        self.node = self.tree.root
        self.descents = 0

    @property
    def committed(self) -> bool:
        return not isinstance(self.node, Node)

    def instance(self) -> int:
        if isinstance(self.node, Node):
            return self.node.x
        return self.tree.root.x if isinstance(self.tree.root, Node) else 0

    def respond(self, x: int, yhat: int) -> bool:
        """Return whether ``yhat`` is declared correct."""
        if isinstance(self.node, Node):
            if yhat in self.node.edges:
                self.node = self.node.edges[yhat]
                self.descents += 1
            return False
        return self.cls.table[self.node][x] == yhat

    def hypothesis(self) -> int:
        """The hypothesis every answer so far is consistent with."""
        node = self.node
        while isinstance(node, Node):
            node = node.edges[min(node.edges)]
        return node
