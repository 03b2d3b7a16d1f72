"""
Labeled rooted trees and their contributions to the sheaf/Gromov-Witten
relation on the projective plane.

A subtree hanging from an edge of class m is either a square of degree m
(a local P^2 curve, weighted by W_m) or a circle of elliptic degree d0 whose
children carry total class m - 3*d0. Trees are stored canonically: children
are sorted by their encodings, so isomorphic trees compare equal.
"""
from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial, prod

from sheafbetti.errors import ImaginaryResidue, NonPolynomialContribution, NotDivisible
from sheafbetti.engine.exactalg import DeltaQuotient, RatFun, ZERO, sin_factor
from sheafbetti.engine.localcurve import P2_K, connected_laurent
from sheafbetti.engine.wseries import w_parts

logger = logging.getLogger(__name__)

CIRCLE = 'circle'
SQUARE = 'square'

# E.beta = 3 * degree on P^2
E_DEGREE = 3


@dataclass(frozen=True)
class TreeNode:
    kind: str
    label: int
    children: tuple = ()
    degree: int = field(default=0, compare=False)

    @classmethod
    def square(cls, d1):
        return cls(SQUARE, d1, (), d1)

    @classmethod
    def circle(cls, d0, children=()):
        children = tuple(sorted(children, key=lambda child: child.encoding()))
        return cls(CIRCLE, d0, children, E_DEGREE * d0 + sum(c.degree for c in children))

    def encoding(self):
        if self.kind == SQUARE:
            return ('s', self.label)
        return ('c', self.label, tuple(child.encoding() for child in self.children))

    def to_text(self):
        if self.kind == SQUARE:
            return f"S{self.label}"
        if not self.children:
            return f"C{self.label}"
        return f"C{self.label}(" + ','.join(child.to_text() for child in self.children) + ')'

    def nodes(self):
        yield self
        for child in self.children:
            yield from child.nodes()


@dataclass(frozen=True)
class LabeledRootedTree:
    """A tree in RT_d; the root is always a circle."""

    root: TreeNode

    @property
    def degree(self):
        return self.root.degree

    def vertices(self):
        return list(self.root.nodes())

    def edges(self):
        """(parent, child) pairs; the edge class equals the child's subtree degree."""
        pairs = []
        for node in self.root.nodes():
            pairs.extend((node, child) for child in node.children)
        return pairs

    def circles(self):
        return [v for v in self.root.nodes() if v.kind == CIRCLE]

    def squares(self):
        return [v for v in self.root.nodes() if v.kind == SQUARE]

    def encoding(self):
        return self.root.encoding()

    def __repr__(self):
        return f"LabeledRootedTree('{format_tree(self)}')"


def format_tree(tree):
    """Nested-parentheses text form, e.g. C1(S1,S1); edge classes are the child degrees."""
    return tree.root.to_text()


def is_balanced(tree):
    """Re-derive every edge class from the labels and compare with the stored degrees."""
    root = tree.root
    if root.kind != CIRCLE:
        return False

    def check(node):
        if node.kind == SQUARE:
            return not node.children and node.degree == node.label and node.label > 0
        expected = E_DEGREE * node.label + sum(child.degree for child in node.children)
        return node.label > 0 and node.degree == expected and all(check(c) for c in node.children)

    return check(root)


@lru_cache(maxsize=None)
def subtrees(m):
    """Every canonical subtree whose parent edge has class m."""
    found = [TreeNode.square(m)]
    for d0 in range(1, m // E_DEGREE + 1):
        for kids in child_multisets(m - E_DEGREE * d0):
            found.append(TreeNode.circle(d0, kids))
    return tuple(found)


def _ordered_pool(n):
    return [(degree, index, node)
            for degree in range(1, n + 1)
            for index, node in enumerate(subtrees(degree))]


@lru_cache(maxsize=None)
def child_multisets(n):
    """Multisets of subtrees with total class n, each listed once."""
    if n == 0:
        return ((),)
    pool = _ordered_pool(n)
    out = []

    def extend(remaining, start, chosen):
        if remaining == 0:
            out.append(tuple(chosen))
            return
        for position in range(start, len(pool)):
            degree, _, node = pool[position]
            if degree > remaining:
                continue
            chosen.append(node)
            extend(remaining - degree, position, chosen)
            chosen.pop()

    extend(n, 0, [])
    return tuple(out)


@lru_cache(maxsize=None)
def enumerate_trees(d):
    """One representative per isomorphism class of degree-d trees with a circle."""
    trees = [LabeledRootedTree(node) for node in subtrees(d) if node.kind == CIRCLE]
    logger.debug('degree %s: %s rooted trees', d, len(trees))
    return tuple(sorted(trees, key=lambda tree: tree.encoding()))


def aut_order(tree):
    order = 1
    for node in tree.root.nodes():
        counts = Counter(child.encoding() for child in node.children)
        order *= prod(factorial(c) for c in counts.values())
    return order


def _subtree_factor(node, gv):
    if node.kind == SQUARE:
        return w_parts(node.label, gv)
    markings = tuple(E_DEGREE * child.degree for child in node.children)
    factor = DeltaQuotient(-connected_laurent(node.label, tuple(sorted(markings)), P2_K))
    for child in node.children:
        m = E_DEGREE * child.degree
        factor = factor * (sin_factor(m) / m) * _subtree_factor(child, gv)
    return factor


def contribution_laurent(tree, gv):
    quotient = _subtree_factor(tree.root, gv) / aut_order(tree)
    try:
        value = quotient.clear()
    except NotDivisible as exc:
        raise NonPolynomialContribution(
            'Tree contribution keeps a pole', tree=format_tree(tree), **exc.details) from exc
    if not value.is_real():
        raise ImaginaryResidue('Tree contribution has an imaginary part',
                               tree=format_tree(tree), value=value.to_text())
    return value


def contribution(tree, gv):
    """Cont_T as a reduced rational function; poles are asserted to cancel."""
    return RatFun(contribution_laurent(tree, gv))


@lru_cache(maxsize=None)
def rhs_tree_sum(d, gv):
    total = ZERO
    for tree in enumerate_trees(d):
        value = contribution_laurent(tree, gv)
        logger.debug('Cont %s = %s', format_tree(tree), value.to_text())
        total = total + value
    return total
