"""Binary tree classifiers: prediction, risks, and the pruned-subtree order.

Trees are immutable index-based arenas: node 0 is the root, internal nodes
carry a (variable, threshold) rule with 1-based variable indices, leaves
carry a 0/1 label.  The routing convention is strict: x moves Right iff
x[var] > threshold, so equality goes Left.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

import numpy as np

from .designs import Dataset, DesignSpec, bayes_risk, generate

__all__ = [
    "Leaf",
    "Internal",
    "TreeClassifier",
    "ClassDescriptor",
    "leaf",
    "stump",
    "empirical_risk",
    "misclass_count",
    "loss_estimate",
    "is_pruned_subtree",
    "tree_to_text",
    "tree_from_text",
    "descriptor_of",
]

LEAF_SHAPE = ()  # shape of a single leaf; internal shapes are (left, right)


@dataclass(frozen=True)
class Leaf:
    label: int


@dataclass(frozen=True)
class Internal:
    var: int  # 1-based variable index
    threshold: float
    left: int
    right: int


@dataclass(frozen=True)
class TreeClassifier:
    """Immutable tree classifier stored as a node arena rooted at index 0."""

    nodes: tuple
    root: int = 0

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        for node in self.nodes:
            if isinstance(node, Leaf):
                if node.label not in (0, 1):
                    raise ValueError("leaf labels must be 0 or 1")
            elif isinstance(node, Internal):
                if node.var < 1:
                    raise ValueError("variable indices are 1-based")
            else:
                raise TypeError("nodes must be Leaf or Internal")

    @property
    def n_leaves(self) -> int:
        return sum(isinstance(nd, Leaf) for nd in self.nodes)

    @property
    def n_internal(self) -> int:
        return len(self.nodes) - self.n_leaves

    @property
    def depth(self) -> int:
        def go(i):
            nd = self.nodes[i]
            if isinstance(nd, Leaf):
                return 0
            return 1 + max(go(nd.left), go(nd.right))

        return go(self.root)

    def max_var(self) -> int:
        return max((nd.var for nd in self.nodes if isinstance(nd, Internal)), default=0)

    def predict(self, x) -> int:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim != 1 or x.shape[0] < self.max_var():
            raise ValueError("feature vector too short for this tree")
        i = self.root
        while True:
            nd = self.nodes[i]
            if isinstance(nd, Leaf):
                return nd.label
            i = nd.right if x[nd.var - 1] > nd.threshold else nd.left

    def predict_batch(self, X: np.ndarray) -> np.ndarray:
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] < self.max_var():
            raise ValueError("feature matrix too narrow for this tree")
        out = np.empty(X.shape[0], dtype=np.int64)
        stack = [(self.root, np.arange(X.shape[0]))]
        while stack:
            i, rows = stack.pop()
            if rows.size == 0:
                continue
            nd = self.nodes[i]
            if isinstance(nd, Leaf):
                out[rows] = nd.label
            else:
                right = X[rows, nd.var - 1] > nd.threshold
                stack.append((nd.left, rows[~right]))
                stack.append((nd.right, rows[right]))
        return out

    def leaf_assignment(self, X: np.ndarray) -> np.ndarray:
        """Arena index of the leaf each row lands in."""
        X = np.asarray(X, dtype=np.float64)
        out = np.empty(X.shape[0], dtype=np.int64)
        stack = [(self.root, np.arange(X.shape[0]))]
        while stack:
            i, rows = stack.pop()
            if rows.size == 0:
                continue
            nd = self.nodes[i]
            if isinstance(nd, Leaf):
                out[rows] = i
            else:
                right = X[rows, nd.var - 1] > nd.threshold
                stack.append((nd.left, rows[~right]))
                stack.append((nd.right, rows[right]))
        return out


def leaf(label: int = 0) -> TreeClassifier:
    return TreeClassifier((Leaf(label),))


def stump(var: int, threshold: float, left_label: int, right_label: int) -> TreeClassifier:
    return TreeClassifier((Internal(var, threshold, 1, 2), Leaf(left_label), Leaf(right_label)))


def misclass_count(tree: TreeClassifier, data: Dataset) -> int:
    return int(np.sum(tree.predict_batch(data.X) != data.y))


def empirical_risk(tree: TreeClassifier, data: Dataset) -> float:
    if data.n == 0:
        raise ValueError("dataset is empty")
    return misclass_count(tree, data) / data.n


def loss_estimate(tree: TreeClassifier, spec: DesignSpec, m: int, seed: int) -> tuple[float, float]:
    """Monte Carlo risk on a fresh size-m sample, and excess risk over Bayes."""
    if m < 1:
        raise ValueError("m must be positive")
    fresh = generate(replace(spec, n=m, seed=seed))
    risk = empirical_risk(tree, fresh)
    return risk, risk - bayes_risk(spec)


def is_pruned_subtree(a: TreeClassifier, b: TreeClassifier) -> bool:
    """True iff a results from collapsing internal nodes of b, ignoring labels."""

    def match(ia: int, ib: int) -> bool:
        na = a.nodes[ia]
        if isinstance(na, Leaf):
            return True
        nb = b.nodes[ib]
        if isinstance(nb, Leaf):
            return False
        if na.var != nb.var or na.threshold != nb.threshold:
            return False
        return match(na.left, nb.left) and match(na.right, nb.right)

    return match(a.root, b.root)


def tree_to_text(tree: TreeClassifier) -> str:
    """Pre-order textual form: node(j, s, left, right) / leaf(label)."""

    def go(i):
        nd = tree.nodes[i]
        if isinstance(nd, Leaf):
            return f"leaf({nd.label})"
        return f"node({nd.var}, {nd.threshold!r}, {go(nd.left)}, {go(nd.right)})"

    return go(tree.root)


_TOKEN = re.compile(r"\s*(node|leaf|\(|\)|,|[^\s(),]+)")


def tree_from_text(text: str) -> TreeClassifier:
    tokens = _TOKEN.findall(text)
    pos = 0
    nodes: list = []

    def expect(tok):
        nonlocal pos
        if pos >= len(tokens) or tokens[pos] != tok:
            raise ValueError(f"malformed tree text near token {pos}: expected {tok!r}")
        pos += 1

    def take():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of tree text")
        tok = tokens[pos]
        pos += 1
        return tok

    def parse() -> int:
        nonlocal pos
        kind = take()
        idx = len(nodes)
        nodes.append(None)  # reserve arena slot in pre-order
        if kind == "leaf":
            expect("(")
            label = int(take())
            expect(")")
            nodes[idx] = Leaf(label)
        elif kind == "node":
            expect("(")
            var = int(take())
            expect(",")
            threshold = float(take())
            expect(",")
            left = parse()
            expect(",")
            right = parse()
            expect(")")
            nodes[idx] = Internal(var, threshold, left, right)
        else:
            raise ValueError(f"unexpected token {kind!r}")
        return idx

    root = parse()
    if pos != len(tokens):
        raise ValueError("trailing tokens after tree text")
    return TreeClassifier(tuple(nodes), root)


@dataclass(frozen=True)
class ClassDescriptor:
    """Shape plus breadth-first-ordered variable list defining a tree class.

    configuration is a nested tuple: () for a leaf, (left, right) otherwise.
    variables[k] is the 1-based variable at the k-th internal node in
    breadth-first order from the root.
    """

    configuration: tuple
    variables: tuple

    def __post_init__(self):
        if len(self.variables) != _internal_count(self.configuration):
            raise ValueError("variable list length must equal internal-node count")

    @property
    def size(self) -> int:
        return _leaf_count(self.configuration)


def _leaf_count(shape) -> int:
    if shape == LEAF_SHAPE:
        return 1
    return _leaf_count(shape[0]) + _leaf_count(shape[1])


def _internal_count(shape) -> int:
    return _leaf_count(shape) - 1


def shape_of(tree: TreeClassifier) -> tuple:
    def go(i):
        nd = tree.nodes[i]
        if isinstance(nd, Leaf):
            return LEAF_SHAPE
        return (go(nd.left), go(nd.right))

    return go(tree.root)


def descriptor_of(tree: TreeClassifier) -> ClassDescriptor:
    variables = []
    queue = [tree.root]
    while queue:
        nd = tree.nodes[queue.pop(0)]
        if isinstance(nd, Internal):
            variables.append(nd.var)
            queue.append(nd.left)
            queue.append(nd.right)
    return ClassDescriptor(shape_of(tree), tuple(variables))


def tree_from_class(desc: ClassDescriptor, thresholds, labels) -> TreeClassifier:
    """Materialize a class member: thresholds in BFS internal-node order,
    labels in BFS leaf order."""
    thresholds = list(thresholds)
    labels = list(labels)
    nodes: list = []
    # BFS construction; children slots are patched as they are dequeued
    queue = [(desc.configuration, None, None)]
    ti = li = 0
    var_iter = iter(desc.variables)
    while queue:
        shape, parent, side = queue.pop(0)
        idx = len(nodes)
        if shape == LEAF_SHAPE:
            nodes.append(Leaf(labels[li]))
            li += 1
        else:
            nodes.append(Internal(next(var_iter), thresholds[ti], -1, -1))
            ti += 1
            queue.append((shape[0], idx, "left"))
            queue.append((shape[1], idx, "right"))
        if parent is not None:
            nodes[parent] = replace(nodes[parent], **{side: idx})
    return TreeClassifier(tuple(nodes))
