"""Shattered-tree witnesses: extraction, direct verification, serialization.

A tree is a nested structure of :class:`Node` objects whose leaves are
hypothesis row ids.  An :class:`LTree` has exactly two differently labelled
edges per node.  A :class:`BLTree` stores its branch-label set explicitly as
the keys of ``Node.edges``, so it can be checked without knowing the global
label universe.
"""

from __future__ import annotations

import dataclasses
from typing import Union

from ..classes import HypothesisClass, VersionSpace
from ..errors import InputError, ParseError
from .solver import DimensionSolver


@dataclasses.dataclass(frozen=True)
class Node:
    x: int
    edges: dict  # label id -> Node | int (leaf witness row)


Subtree = Union[Node, int]


@dataclasses.dataclass(frozen=True)
class LTree:
    root: Subtree
    depth: int
    kind = "L"


@dataclasses.dataclass(frozen=True)
class BLTree:
    root: Subtree
    depth: int
    kind = "BL"


def _lowest(mask):
    return (mask & -mask).bit_length() - 1


def witness_ltree(v: VersionSpace, solver: DimensionSolver | None = None, depth: int | None = None) -> LTree:
    """A shattered Littlestone tree of depth ``ldim(v)`` (or the given smaller depth).

    Ties go to the smallest instance id, then the lexicographically smallest
    label pair.
    """
    if not v:
        raise InputError("cannot extract a witness tree from an empty class")
    solver = solver or DimensionSolver(v.cls)
    target = solver.ldim(v.mask) if depth is None else depth
    if not 0 <= target <= solver.ldim(v.mask):
        raise InputError(f"no shattered L-tree of depth {target}")
    masks = v.cls.label_masks

    def build(mask, d):
        if d == 0:
            return _lowest(mask)
        for x, x_masks in enumerate(masks):
            deep = [y for y, m in enumerate(x_masks) if solver.ldim(mask & m) >= d - 1]
            if len(deep) >= 2:
                y1, y2 = deep[0], deep[1]
                return Node(x, {y1: build(mask & x_masks[y1], d - 1), y2: build(mask & x_masks[y2], d - 1)})
        raise AssertionError("ldim recursion and extraction disagree")

    return LTree(build(v.mask, target), target)


def witness_bltree(v: VersionSpace, solver: DimensionSolver | None = None, depth: int | None = None) -> BLTree:
    """A shattered Bandit Littlestone tree of depth ``bldim(v)`` (or smaller).

    Each node branches over the projection of the hypotheses that survive
    the path leading to it.  Ties go to the smallest instance id.
    """
    if not v:
        raise InputError("cannot extract a witness tree from an empty class")
    solver = solver or DimensionSolver(v.cls)
    target = solver.bldim(v.mask) if depth is None else depth
    if not 0 <= target <= solver.bldim(v.mask):
        raise InputError(f"no shattered BL-tree of depth {target}")
    masks = v.cls.label_masks

    def build(mask, d):
        if d == 0:
            return _lowest(mask)
        for x, x_masks in enumerate(masks):
            labels = [y for y, m in enumerate(x_masks) if m & mask]
            if all(solver.bldim(mask & ~x_masks[y]) >= d - 1 for y in labels):
                return Node(x, {y: build(mask & ~x_masks[y], d - 1) for y in labels})
        raise AssertionError("bldim recursion and extraction disagree")

    return BLTree(build(v.mask, target), target)


def iter_paths(root: Subtree):
    """Yield ``(steps, leaf)`` for every root-to-leaf path, steps = [(x, y), ...]."""
    stack = [(root, ())]
    while stack:
        node, steps = stack.pop()
        if isinstance(node, Node):
            for y, child in node.edges.items():
                stack.append((child, steps + ((node.x, y),)))
        else:
            yield list(steps), node


def _uniform_depth(root, depth):
    return all(len(steps) == depth for steps, _ in iter_paths(root))


def verify_shattering(tree: LTree | BLTree, v: VersionSpace) -> bool:
    """Check the tree against the shattering definitions by enumerating every path.

    L-trees: two distinct edge labels per node and a leaf witness in ``v``
    agreeing with every edge label on its path.

    BL-trees: the leaf witness lies in ``v`` and avoids every edge label on
    its path.  Because a stored node branches only over some labels, we also
    require the branch set to cover the projection of the members of ``v``
    that survive the path so far; any other label at that node is avoided by
    every survivor, so the compact tree stands for a full label-ary one.
    """
    if not _uniform_depth(tree.root, tree.depth):
        return False
    if isinstance(tree, LTree):
        return _verify_l(tree.root, v)
    return _verify_bl(tree.root, v.mask, v)


def _valid_leaf(h, v):
    return isinstance(h, int) and h in v


def _verify_l(node, v):
    table = v.cls.table
    for steps, h in iter_paths(node):
        if not _valid_leaf(h, v):
            return False
        if any(table[h][x] != y for x, y in steps):
            return False
    return _edges_ok(node, v.cls, binary=True)


def _edges_ok(node, cls: HypothesisClass, binary):
    if not isinstance(node, Node):
        return True
    if not 0 <= node.x < cls.n_instances:
        return False
    if any(not 0 <= y < cls.n_labels for y in node.edges):
        return False
    if binary and len(node.edges) != 2:
        return False
    if not node.edges:
        return False
    return all(_edges_ok(c, cls, binary) for c in node.edges.values())


def _verify_bl(node, surviving, v):
    cls = v.cls
    if not isinstance(node, Node):
        if not _valid_leaf(node, v):
            return False
        return bool(surviving >> node & 1)
    if not 0 <= node.x < cls.n_instances or not node.edges:
        return False
    if any(not 0 <= y < cls.n_labels for y in node.edges):
        return False
    x_masks = cls.label_masks[node.x]
    realized = {y for y, m in enumerate(x_masks) if m & surviving}
    if not realized <= set(node.edges):
        return False
    return all(_verify_bl(child, surviving & ~x_masks[y], v) for y, child in node.edges.items())


# -- serialization -----------------------------------------------------------


def tree_to_dict(tree: LTree | BLTree, cls: HypothesisClass):
    def enc(node):
        if isinstance(node, Node):
            return {"x": cls.instances[node.x], "edges": {cls.labels[y]: enc(c) for y, c in node.edges.items()}}
        return cls.names[node]

    return enc(tree.root)


def tree_from_dict(doc, cls: HypothesisClass, kind: str) -> LTree | BLTree:
    hyp_ids = {name: i for i, name in enumerate(cls.names)}
    x_ids = {name: i for i, name in enumerate(cls.instances)}
    y_ids = {name: i for i, name in enumerate(cls.labels)}

    def dec(d, where):
        if isinstance(d, str):
            if d not in hyp_ids:
                raise ParseError(f"{where}: unknown hypothesis {d!r}")
            return hyp_ids[d], 0
        if not isinstance(d, dict) or d.get("x") not in x_ids or not isinstance(d.get("edges"), dict):
            raise ParseError(f"{where}: expected a leaf name or {{'x': instance, 'edges': {{...}}}}")
        edges, depths = {}, set()
        for name, child in d["edges"].items():
            if name not in y_ids:
                raise ParseError(f"{where}.edges: unknown label {name!r}")
            edges[y_ids[name]], sub = dec(child, f"{where}.edges[{name!r}]")
            depths.add(sub)
        if len(depths) > 1:
            raise ParseError(f"{where}: subtrees have different depths")
        return Node(x_ids[d["x"]], edges), 1 + (depths.pop() if depths else 0)

    root, depth = dec(doc, "tree")
    if kind.upper() == "L":
        return LTree(root, depth)
    if kind.upper() == "BL":
        return BLTree(root, depth)
    raise InputError(f"unknown tree kind {kind!r}")
