import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chi2

from treeselect import (Dataset, DesignSpec, TreeClassifier, empirical_risk,
                        is_pruned_subtree, leaf, loss_estimate, stump,
                        tree_from_text, tree_to_text)
from treeselect.tree import Internal, Leaf, descriptor_of, tree_from_class


def test_predict_stump():
    t = stump(1, 0.5, 0, 1)
    assert t.predict([0.7]) == 1
    assert t.predict([0.5]) == 0  # boundary goes Left: not strictly greater
    assert t.predict([0.3]) == 0


def test_predict_single_leaf():
    assert leaf(1).predict([123.0]) == 1


def test_predict_dimension_mismatch():
    t = stump(3, 0.0, 0, 1)
    with pytest.raises(ValueError):
        t.predict([1.0, 2.0])


def test_leaf_minus_internal_is_one():
    t = tree_from_text("node(1, 0.0, node(2, 1.0, leaf(0), leaf(1)), leaf(1))")
    assert t.n_leaves - t.n_internal == 1
    assert t.n_leaves == 3


def test_empirical_risk_constant_tree():
    d = Dataset(np.zeros((4, 2)) + np.arange(4)[:, None], np.array([0, 0, 1, 1]))
    assert empirical_risk(leaf(0), d) == 0.5


def test_empirical_risk_stump_example():
    X = np.column_stack([np.array([1.0, 2.0, 3.0, 4.0]), np.zeros(4)])
    d = Dataset(X, np.array([0, 1, 1, 0]))
    assert empirical_risk(stump(1, 2.5, 0, 1), d) == 0.5


def test_empirical_risk_matches_naive_recount():
    rng = np.random.default_rng(5)
    X = rng.standard_normal((30, 3))
    y = rng.integers(0, 2, 30)
    d = Dataset(X, y)
    t = tree_from_text("node(2, 0.1, leaf(0), node(1, -0.3, leaf(1), leaf(0)))")
    naive = sum(t.predict(row) != lab for row, lab in zip(X, y)) / 30
    assert empirical_risk(t, d) == naive


def test_loss_estimate_bayes_tree_design1():
    # the optimal rule for design 1 (q < 1/2) as a 3-leaf tree
    bayes = tree_from_text("node(1, 0.0, leaf(1), node(2, 0.0, leaf(1), leaf(0)))")
    spec = DesignSpec(1, 100, 2, 0.1, seed=0)
    risk, loss = loss_estimate(bayes, spec, 10 ** 5, seed=21)
    se = (0.1 * 0.9 / 10 ** 5) ** 0.5
    assert abs(loss) <= 3 * se


def test_loss_estimate_constant0_design1():
    spec = DesignSpec(1, 100, 2, 0.1, seed=0)
    risk, loss = loss_estimate(leaf(0), spec, 10 ** 5, seed=2)
    # P(Y=1) = 0.25*0.1 + 0.75*0.9 = 0.7
    assert risk == pytest.approx(0.7, abs=0.01)
    assert loss == pytest.approx(0.6, abs=0.01)


def test_loss_estimate_constant1_design4():
    spec = DesignSpec(4, 100, 3, 0.2, seed=0)
    risk, _ = loss_estimate(leaf(1), spec, 10 ** 5, seed=9)
    assert risk == pytest.approx(chi2.cdf(2.5, df=3), abs=0.01)


def test_pruned_subtree_basics():
    t = tree_from_text("node(1, 0.0, node(2, 1.0, leaf(0), leaf(1)), leaf(1))")
    assert is_pruned_subtree(leaf(0), t)            # root collapse
    assert is_pruned_subtree(t, t)                  # reflexive
    other = tree_from_text("node(1, 9.9, leaf(0), leaf(1))")
    assert not is_pruned_subtree(other, t)          # foreign threshold
    mid = tree_from_text("node(1, 0.0, leaf(1), leaf(1))")
    assert is_pruned_subtree(mid, t)
    assert not is_pruned_subtree(t, mid)


@st.composite
def random_trees(draw, max_depth=4):
    def build(depth):
        if depth == 0 or draw(st.booleans()):
            return ("leaf", draw(st.integers(0, 1)))
        var = draw(st.integers(1, 3))
        thr = draw(st.integers(-5, 5))  # integral thresholds keep equality exact
        return ("node", var, float(thr), build(depth - 1), build(depth - 1))

    spec = build(max_depth)
    nodes = []

    def freeze(s):
        idx = len(nodes)
        nodes.append(None)
        if s[0] == "leaf":
            nodes[idx] = Leaf(s[1])
        else:
            li = freeze(s[3])
            ri = freeze(s[4])
            nodes[idx] = Internal(s[1], s[2], li, ri)
        return idx

    freeze(spec)
    return TreeClassifier(tuple(nodes))


def _random_pruning(tree, rng):
    nodes = []

    def go(i, forced_leaf):
        idx = len(nodes)
        nodes.append(None)
        nd = tree.nodes[i]
        if isinstance(nd, Leaf) or forced_leaf or rng.random() < 0.3:
            nodes[idx] = Leaf(0)
        else:
            li = go(nd.left, False)
            ri = go(nd.right, False)
            nodes[idx] = Internal(nd.var, nd.threshold, li, ri)
        return idx

    go(tree.root, False)
    return TreeClassifier(tuple(nodes))


@settings(max_examples=60, deadline=None)
@given(random_trees(), st.integers(0, 10 ** 6))
def test_pruned_subtree_partial_order(tree, seed):
    rng = np.random.default_rng(seed)
    a = _random_pruning(tree, rng)
    b = _random_pruning(a, rng)
    assert is_pruned_subtree(tree, tree)
    assert is_pruned_subtree(a, tree)
    assert is_pruned_subtree(b, a)
    assert is_pruned_subtree(b, tree)  # transitivity
    # antisymmetry up to leaf labels: mutual pruning forces equal structure
    if is_pruned_subtree(tree, a):
        assert a.n_leaves == tree.n_leaves


@settings(max_examples=80, deadline=None)
@given(random_trees())
def test_serialization_round_trip(tree):
    back = tree_from_text(tree_to_text(tree))
    assert tree_to_text(back) == tree_to_text(tree)
    assert back.nodes == tree.nodes


def test_serialization_exact_floats():
    t = stump(2, 0.1 + 0.2, 0, 1)  # 0.30000000000000004 must survive
    back = tree_from_text(tree_to_text(t))
    assert back.nodes[0].threshold == t.nodes[0].threshold


def test_malformed_text_rejected():
    for bad in ["node(1, 0.5, leaf(0))", "tree(1)", "leaf(2, 3)", ""]:
        with pytest.raises(ValueError):
            tree_from_text(bad)


def test_descriptor_round_trip():
    t = tree_from_text("node(2, 0.5, leaf(0), node(1, 1.5, leaf(1), leaf(0)))")
    desc = descriptor_of(t)
    assert desc.variables == (2, 1)  # breadth-first internal order
    assert desc.size == 3
    rebuilt = tree_from_class(desc, [0.5, 1.5], [0, 1, 0])
    assert tree_to_text(rebuilt) == tree_to_text(t)
