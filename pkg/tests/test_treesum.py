from fractions import Fraction

import pytest

from sheafbetti.engine.exactalg import ONE, HalfLaurent, RatFun, delta, quantum_integer
from sheafbetti.engine.treesum import (
    LabeledRootedTree, TreeNode, aut_order, child_multisets, contribution, contribution_laurent,
    enumerate_trees, format_tree, is_balanced, rhs_tree_sum, subtrees,
)


def _subtree_counts(dmax):
    """Counts of subtrees by edge class from the Euler transform, independent of the enumerator."""
    subtree = [0] * (dmax + 1)
    forest = [1] + [0] * dmax
    weighted = [0] * (dmax + 1)
    for m in range(1, dmax + 1):
        subtree[m] = 1 + sum(forest[m - 3 * d0] for d0 in range(1, m // 3 + 1))
        weighted[m] = sum(d * subtree[d] for d in range(1, m + 1) if m % d == 0)
        forest[m] = sum(weighted[j] * forest[m - j] for j in range(1, m + 1)) // m
    return subtree


def test_small_tree_counts():
    assert [len(enumerate_trees(d)) for d in range(1, 8)] == [0, 0, 1, 1, 2, 5, 8]


def test_tree_counts_match_euler_transform():
    counts = _subtree_counts(12)
    for d in range(1, 13):
        assert len(enumerate_trees(d)) == counts[d] - 1


def test_trees_are_canonical_and_balanced():
    for d in range(3, 10):
        trees = enumerate_trees(d)
        assert len({tree.encoding() for tree in trees}) == len(trees)
        assert all(is_balanced(tree) and tree.degree == d for tree in trees)


def test_format_and_automorphisms():
    tree = LabeledRootedTree(TreeNode.circle(1, (TreeNode.square(1), TreeNode.square(1))))
    assert format_tree(tree) == 'C1(S1,S1)'
    assert aut_order(tree) == 2
    assert len(tree.edges()) == 2
    assert [format_tree(t) for t in enumerate_trees(5)] == ['C1(S1,S1)', 'C1(S2)']


def test_child_order_does_not_matter():
    left = TreeNode.circle(1, (TreeNode.square(2), TreeNode.square(1)))
    right = TreeNode.circle(1, (TreeNode.square(1), TreeNode.square(2)))
    assert left == right


def test_unbalanced_tree_is_detected():
    bad = LabeledRootedTree(TreeNode('circle', 1, (TreeNode.square(1),), 7))
    assert not is_balanced(bad)
    assert not is_balanced(LabeledRootedTree(TreeNode.square(3)))


def test_subtrees_and_multisets():
    assert [node.to_text() for node in subtrees(3)] == ['S3', 'C1']
    assert len(child_multisets(3)) == 4
    assert child_multisets(0) == ((),)


def test_single_circle_contributes_one(gv_table):
    (tree,) = enumerate_trees(3)
    assert contribution_laurent(tree, gv_table) == ONE
    assert contribution(tree, gv_table).is_polynomial()
    assert rhs_tree_sum(3, gv_table) == ONE


@pytest.mark.parametrize('d', [4, 5, 6])
def test_contributions_are_real_laurent_polynomials(d, gv_table):
    for tree in enumerate_trees(d):
        value = contribution_laurent(tree, gv_table)
        assert value.is_real()
        assert value.has_integral_exponents()


def _trees_by_text(d):
    return {format_tree(tree): tree for tree in enumerate_trees(d)}


def test_degree_four_contribution(gv_table):
    (tree,) = enumerate_trees(4)
    assert format_tree(tree) == 'C1(S1)'
    assert contribution(tree, gv_table) == quantum_integer(3) ** 2 * -3


def test_degree_five_contributions(gv_table):
    trees = _trees_by_text(5)
    assert contribution(trees['C1(S2)'], gv_table) == (
        RatFun(delta(6) ** 2 * Fraction(-3, 2), delta(2) ** 2) + RatFun(delta(6) ** 2 * 6, delta(1) ** 2))
    assert contribution(trees['C1(S1,S1)'], gv_table) == RatFun(delta(3) ** 4 * Fraction(9, 2), delta(1) ** 4)


def test_degree_six_contributions(gv_table):
    trees = _trees_by_text(6)
    assert set(trees) == {'C2', 'C1(C1)', 'C1(S3)', 'C1(S1,S2)', 'C1(S1,S1,S1)'}
    assert contribution(trees['C2'], gv_table) == HalfLaurent({18: -1, -18: -1, 0: Fraction(1, 2)})
    assert contribution(trees['C1(C1)'], gv_table) == HalfLaurent({18: 1, -18: 1, 0: -2})
    square_three = RatFun(delta(9) ** 2) * (
        RatFun(-1, delta(3) ** 2) - RatFun(HalfLaurent({2: 10, 0: 7, -2: 10}), delta(1) ** 2))
    assert contribution(trees['C1(S3)'], gv_table) == square_three
    squares_one_two = RatFun(delta(6) ** 2 * delta(3) ** 2 * 9, delta(1) ** 2) * (
        RatFun(Fraction(1, 2), delta(2) ** 2) - RatFun(2, delta(1) ** 2))
    assert contribution(trees['C1(S1,S2)'], gv_table) == squares_one_two
    star = trees['C1(S1,S1,S1)']
    assert aut_order(star) == 6
    assert contribution(star, gv_table) == RatFun(delta(3) ** 6 * Fraction(-9, 2), delta(1) ** 6)


def test_degree_six_sum_is_the_sum_of_contributions(gv_table):
    total = sum((contribution(tree, gv_table) for tree in enumerate_trees(6)), RatFun(0))
    assert total == rhs_tree_sum(6, gv_table)
