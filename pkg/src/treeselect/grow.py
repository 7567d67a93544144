"""CART-style recursive growing with misclassification count as impurity.

A node is split only when some (variable, midpoint) cut strictly reduces
the total misclassification count of the node under majority labelling.
Ties break to the smallest variable index, then the smallest threshold,
so growing is a deterministic, order-invariant function of the data.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass

import numpy as np

from .designs import Dataset
from .tree import Internal, Leaf, TreeClassifier

__all__ = ["GrowLimits", "Split", "best_split", "grow_maximal"]

_BIG = np.iinfo(np.int64).max


@dataclass(frozen=True)
class GrowLimits:
    max_leaves: int | None = None
    min_node_size: int = 1

    def __post_init__(self):
        if self.max_leaves is not None and self.max_leaves < 1:
            raise ValueError("max_leaves must be >= 1")
        if self.min_node_size < 1:
            raise ValueError("min_node_size must be >= 1")


@dataclass(frozen=True)
class Split:
    var: int  # 1-based
    threshold: float
    left_label: int
    right_label: int
    err_count: int  # total child misclassifications


def _majority(n0: int, n1: int) -> tuple[int, int]:
    """(label, errors) under majority vote; ties resolve to label 0."""
    return (0, n1) if n0 >= n1 else (1, n0)


def best_split(data: Dataset, rows, min_node_size: int = 1) -> Split | None:
    """Exhaustive scan over all variables and all midpoints between
    consecutive distinct sorted values; None when no cut strictly beats
    the majority-leaf error of the subset."""
    rows = np.asarray(rows)
    if rows.size == 0:
        raise ValueError("row subset is empty")
    X = data.X[rows]
    y = data.y[rows]
    m = y.size
    n1 = int(y.sum())
    parent_err = min(m - n1, n1)
    if parent_err == 0 and n1 in (0, m):
        return None  # label-pure
    if m < 2 * min_node_size or m < 2:
        return None

    order = np.argsort(X, axis=0, kind="stable")
    svals = np.take_along_axis(X, order, axis=0)
    sy = y[order]
    ones = np.cumsum(sy, axis=0)  # ones among the first i+1 sorted rows

    # cut after sorted position i (0..m-2): left size i+1
    left_n = np.arange(1, m, dtype=np.int64)[:, None]
    left_ones = ones[:-1]
    left_err = np.minimum(left_ones, left_n - left_ones)
    right_ones = n1 - left_ones
    right_n = m - left_n
    right_err = np.minimum(right_ones, right_n - right_ones)
    err = left_err + right_err

    valid = svals[1:] > svals[:-1]
    if min_node_size > 1:
        sizes_ok = (left_n >= min_node_size) & (right_n >= min_node_size)
        valid = valid & sizes_ok
    err = np.where(valid, err, _BIG)

    # column-major argmin: smallest variable index first, then smallest
    # threshold (cut positions are threshold-sorted within a column)
    flat = err.T.ravel()
    best = int(np.argmin(flat))
    best_err = int(flat[best])
    if best_err >= parent_err:
        return None
    var0, i = divmod(best, m - 1)
    threshold = float((svals[i, var0] + svals[i + 1, var0]) / 2.0)
    ll, _ = _majority(int(i + 1 - left_ones[i, var0]), int(left_ones[i, var0]))
    rl, _ = _majority(int(m - i - 1 - (n1 - left_ones[i, var0])), int(n1 - left_ones[i, var0]))
    return Split(var0 + 1, threshold, ll, rl, best_err)


class _Node:
    __slots__ = ("rows", "label", "split", "var", "threshold", "left", "right")

    def __init__(self, rows, label):
        self.rows = rows
        self.label = label
        self.split = None
        self.var = None
        self.threshold = None
        self.left = None
        self.right = None


def grow_maximal(data: Dataset, limits: GrowLimits | None = None) -> TreeClassifier:
    """Grow until no split strictly reduces the misclassification count or
    the leaf budget is exhausted.  With a leaf budget, nodes are expanded
    best-first by error reduction (ties by creation order)."""
    if limits is None:
        limits = GrowLimits()
    rows = np.arange(data.n)
    n1 = int(data.y.sum())
    label, _ = _majority(data.n - n1, n1)
    root = _Node(rows, label)

    counter = 0
    heap: list = []

    def consider(node: _Node):
        nonlocal counter
        split = best_split(data, node.rows, limits.min_node_size)
        if split is not None:
            ysub = data.y[node.rows]
            parent_err = min(int(ysub.sum()), ysub.size - int(ysub.sum()))
            node.split = split
            heapq.heappush(heap, (-(parent_err - split.err_count), counter, node))
            counter += 1

    consider(root)
    n_leaves = 1
    while heap and (limits.max_leaves is None or n_leaves < limits.max_leaves):
        _, _, node = heapq.heappop(heap)
        split = node.split
        right_mask = data.X[node.rows, split.var - 1] > split.threshold
        node.var, node.threshold = split.var, split.threshold
        node.left = _Node(node.rows[~right_mask], split.left_label)
        node.right = _Node(node.rows[right_mask], split.right_label)
        node.rows = None
        n_leaves += 1
        consider(node.left)
        consider(node.right)

    nodes: list = []

    def freeze(nd: _Node) -> int:
        idx = len(nodes)
        nodes.append(None)
        if nd.left is None:
            nodes[idx] = Leaf(nd.label)
        else:
            li = freeze(nd.left)
            ri = freeze(nd.right)
            nodes[idx] = Internal(nd.var, nd.threshold, li, ri)
        return idx

    freeze(root)
    return TreeClassifier(tuple(nodes))
