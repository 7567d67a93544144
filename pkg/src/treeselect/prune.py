"""Weakest-link cost-complexity pruning and penalized selection in a sequence.

Risks are kept as exact misclassification counts so link strengths and
critical alpha values are computed in rational arithmetic; ties in the
link strength g(t) collapse all tied nodes in one step, which preserves
the classical guarantee that for every alpha in [alpha_k, alpha_{k+1})
the k-th subtree minimizes P_n f + alpha |T| over all pruned subtrees.
"""

from __future__ import annotations

import csv
from bisect import bisect_right
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .designs import Dataset
from .tree import Internal, Leaf, TreeClassifier, is_pruned_subtree

__all__ = ["PrunedSequence", "weakest_link", "prune_with_penalty", "best_in_sequence",
           "subtree_at_alpha", "sequence_to_csv"]


@dataclass(frozen=True)
class PrunedSequence:
    """Nested subtrees from the maximal tree down to the root leaf."""

    subtrees: tuple[TreeClassifier, ...]
    alphas: tuple[Fraction, ...]  # critical values, alphas[0] == 0
    error_counts: tuple[int, ...]  # training misclassification counts
    n: int

    def __post_init__(self):
        k = len(self.subtrees)
        if not (k == len(self.alphas) == len(self.error_counts)):
            raise ValueError("sequence fields must have equal length")
        if k == 0:
            raise ValueError("sequence must be nonempty")
        if self.alphas[0] != 0:
            raise ValueError("first critical alpha must be 0")
        if any(a >= b for a, b in zip(self.alphas, self.alphas[1:])):
            raise ValueError("critical alphas must strictly increase")
        sizes = [t.n_leaves for t in self.subtrees]
        if any(a <= b for a, b in zip(sizes, sizes[1:])):
            raise ValueError("leaf counts must strictly decrease")

    @property
    def risks(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(c, self.n) for c in self.error_counts)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(t.n_leaves for t in self.subtrees)


class _MutableTree:
    """Working copy used during pruning; nodes keyed by arena index."""

    def __init__(self, tree: TreeClassifier, data: Dataset):
        self.data = data
        self.root = tree.root
        self.kind = {}       # idx -> "leaf" | "internal"
        self.node = dict(enumerate(tree.nodes))
        self.counts = {}     # idx -> (n0, n1) of rows reaching the node
        stack = [(tree.root, np.arange(data.n))]
        while stack:
            i, rows = stack.pop()
            ysub = data.y[rows]
            self.counts[i] = (int(ysub.size - ysub.sum()), int(ysub.sum()))
            nd = tree.nodes[i]
            if isinstance(nd, Leaf):
                self.kind[i] = "leaf"
            else:
                self.kind[i] = "internal"
                right = data.X[rows, nd.var - 1] > nd.threshold
                stack.append((nd.left, rows[~right]))
                stack.append((nd.right, rows[right]))

    def node_err(self, i: int) -> int:
        return min(self.counts[i])

    def leaf_label(self, i: int) -> int:
        n0, n1 = self.counts[i]
        return 0 if n0 >= n1 else 1

    def stats(self, i: int) -> tuple[int, int]:
        """(leaf count, total leaf error count) of the current subtree at i."""
        if self.kind[i] == "leaf":
            return 1, self.node_err(i)
        nd = self.node[i]
        ll, le = self.stats(nd.left)
        rl, re = self.stats(nd.right)
        return ll + rl, le + re

    def internal_nodes(self) -> list[int]:
        out = []
        stack = [self.root]
        while stack:
            i = stack.pop()
            if self.kind[i] == "internal":
                out.append(i)
                stack.append(self.node[i].left)
                stack.append(self.node[i].right)
        return out

    def collapse(self, i: int):
        self.kind[i] = "leaf"

    def freeze(self) -> TreeClassifier:
        nodes: list = []

        def go(i) -> int:
            idx = len(nodes)
            nodes.append(None)
            if self.kind[i] == "leaf":
                nodes[idx] = Leaf(self.leaf_label(i))
            else:
                nd = self.node[i]
                li = go(nd.left)
                ri = go(nd.right)
                nodes[idx] = Internal(nd.var, nd.threshold, li, ri)
            return idx

        go(self.root)
        return TreeClassifier(tuple(nodes))


def weakest_link(tree: TreeClassifier, data: Dataset) -> PrunedSequence:
    """Nested subtree/alpha sequence by repeatedly collapsing all internal
    nodes of minimal link strength g(t) = (risk increase)/(leaves saved)."""
    work = _MutableTree(tree, data)
    n = data.n

    def link_strengths() -> dict[int, Fraction]:
        out = {}
        for i in work.internal_nodes():
            leaves, err = work.stats(i)
            out[i] = Fraction(work.node_err(i) - err, n * (leaves - 1))
        return out

    def collapse_all(targets: set[int]):
        # collapsing an ancestor subsumes its tied descendants
        for i in targets:
            if work.kind[i] == "internal":
                work.collapse(i)

    # collapse zero-gain links so the first element is the smallest
    # optimizer at alpha = 0
    while True:
        g = link_strengths()
        zeros = {i for i, v in g.items() if v == 0}
        if not zeros:
            break
        collapse_all(zeros)

    subtrees = [work.freeze()]
    alphas = [Fraction(0)]
    errors = [work.stats(work.root)[1]]

    while work.kind[work.root] == "internal":
        g = link_strengths()
        gmin = min(g.values())
        collapse_all({i for i, v in g.items() if v == gmin})
        subtrees.append(work.freeze())
        alphas.append(gmin)
        errors.append(work.stats(work.root)[1])

    return PrunedSequence(tuple(subtrees), tuple(alphas), tuple(errors), n)


def best_in_sequence(seq: PrunedSequence, pen: Callable[[int], float]) -> tuple[int, float]:
    """Index and penalized cost of the sequence element minimizing
    empirical risk + pen(size); ties go to the smaller tree."""
    best_idx = None
    best_cost = None
    # scan smallest trees first so ties resolve to the smaller tree;
    # Fraction risks keep the cost exact when pen returns Fractions
    for idx in range(len(seq.subtrees) - 1, -1, -1):
        cost = Fraction(seq.error_counts[idx], seq.n) + pen(seq.subtrees[idx].n_leaves)
        if best_cost is None or cost < best_cost:
            best_idx, best_cost = idx, cost
    return best_idx, best_cost


def prune_with_penalty(seq: PrunedSequence, pen: Callable[[int], float]) -> TreeClassifier:
    idx, _ = best_in_sequence(seq, pen)
    return seq.subtrees[idx]


def subtree_at_alpha(seq: PrunedSequence, alpha) -> int:
    """Index of the sequence element active at a given penalty weight."""
    if alpha < 0:
        raise ValueError("alpha must be nonnegative")
    return bisect_right(seq.alphas, alpha) - 1


def sequence_to_csv(seq: PrunedSequence, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["size", "risk", "alpha"])
        for tree, alpha, err in zip(seq.subtrees, seq.alphas, seq.error_counts):
            writer.writerow([tree.n_leaves, repr(err / seq.n), repr(float(alpha))])


def check_nested(seq: PrunedSequence) -> bool:
    return all(is_pruned_subtree(b, a) for a, b in zip(seq.subtrees, seq.subtrees[1:]))
