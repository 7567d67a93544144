"""Self-contained oracle suite behind the `verify` CLI subcommand.

Each check pits a fast implementation against an exhaustive desk-scale
oracle and reports one pass/fail line.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .designs import Dataset
from .grow import GrowLimits, grow_maximal
from .oracle import (brute_force_best_subtree, catalan, class_count,
                     enumerate_classes, enumerate_shapes, exhaustive_select,
                     shattering_count)
from .penalties import LinearPenalty, select_tree
from .prune import check_nested, subtree_at_alpha, weakest_link

__all__ = ["run_verification", "CHECKS"]


def _random_dataset(rng, n, p) -> Dataset:
    X = rng.standard_normal((n, p))
    y = rng.integers(0, 2, size=n)
    if y.sum() == 0:
        y[0] = 1
    elif y.sum() == n:
        y[0] = 0
    return Dataset(X, y)


def check_catalan() -> tuple[bool, str]:
    for k in range(1, 8):
        if catalan(k) != len(enumerate_shapes(k)):
            return False, f"catalan({k}) != shape enumeration"
    return True, "catalan matches shape enumeration for k <= 7"


def check_class_counts() -> tuple[bool, str]:
    for p in range(2, 5):
        for k in range(1, 5):
            if len(enumerate_classes(p, k).classes) != class_count(p, k):
                return False, f"class enumeration mismatch at p={p}, k={k}"
    return True, "class enumeration length equals p^(k-1)*catalan(k) for p,k <= 4"


def check_entropy_bound(samples: int = 50) -> tuple[bool, str]:
    rng = np.random.default_rng(12345)
    classes = [c for k in range(1, 4) for c in enumerate_classes(2, k).classes]
    for _ in range(samples):
        n = int(rng.integers(1, 7))
        X = rng.standard_normal((n, 2))
        for desc in classes:
            count = shattering_count(desc, X)
            if math.log(count) > desc.size * math.log(2 * n) + 1e-12:
                return False, f"entropy bound violated for k={desc.size}, n={n}"
    return True, "ln(shattering count) <= k*ln(2n) on random samples"


def check_pruning_oracle(instances: int = 30, alphas_per: int = 20) -> tuple[bool, str]:
    rng = np.random.default_rng(99)
    for _ in range(instances):
        n = int(rng.integers(4, 13))
        data = _random_dataset(rng, n, 2)
        tree = grow_maximal(data, GrowLimits(max_leaves=6))
        seq = weakest_link(tree, data)
        if not check_nested(seq):
            return False, "weakest-link sequence not nested"
        for _ in range(alphas_per):
            alpha = Fraction(int(rng.integers(0, 40)), int(rng.integers(40, 120)))
            idx = subtree_at_alpha(seq, alpha)
            cost = Fraction(seq.error_counts[idx], n) + alpha * seq.sizes[idx]
            _, best = brute_force_best_subtree(tree, data, lambda k: alpha * k)
            if cost != best:
                return False, f"pruning suboptimal at alpha={alpha}"
    return True, "weakest-link sequence matches brute force at every alpha"


def check_subadditive(instances: int = 30) -> tuple[bool, str]:
    from .prune import best_in_sequence
    rng = np.random.default_rng(7)
    for _ in range(instances):
        n = int(rng.integers(4, 13))
        data = _random_dataset(rng, n, 2)
        tree = grow_maximal(data, GrowLimits(max_leaves=6))
        seq = weakest_link(tree, data)
        c = float(rng.uniform(0.02, 0.4))
        pen = lambda k: c * math.sqrt(k)
        _, cost = best_in_sequence(seq, pen)
        _, best = brute_force_best_subtree(tree, data, pen)
        if float(cost) != float(best):
            return False, f"sqrt-penalty cost {cost} != brute force {best}"
    return True, "concave-penalty selection matches brute force over all pruned subtrees"


def check_exhaustive_vs_heuristic(instances: int = 25) -> tuple[bool, str]:
    rng = np.random.default_rng(2024)
    equal = 0
    for _ in range(instances):
        data = _random_dataset(rng, 8, 2)
        spec = LinearPenalty(float(rng.uniform(0.05, 0.5)))
        _, cost_ex = exhaustive_select(data, spec, k_max=3)
        _, cost_h = select_tree(data, spec, GrowLimits(max_leaves=3))
        if cost_ex > cost_h + 1e-12:
            return False, f"exhaustive cost {cost_ex} beaten by heuristic {cost_h}"
        if abs(cost_ex - cost_h) <= 1e-12:
            equal += 1
    return True, f"exhaustive <= heuristic always (equal on {equal}/{instances})"


CHECKS = [
    ("counting-catalan", check_catalan),
    ("counting-classes", check_class_counts),
    ("entropy-bound", check_entropy_bound),
    ("pruning-oracle", check_pruning_oracle),
    ("subadditive-penalty", check_subadditive),
    ("exhaustive-vs-heuristic", check_exhaustive_vs_heuristic),
]


def run_verification(echo=print) -> bool:
    all_ok = True
    for name, fn in CHECKS:
        ok, detail = fn()
        all_ok &= ok
        echo(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return all_ok
