"""Independent ground truth: weighted rooted trees.

A weighted rooted tree has unlabeled inputs, one output at the root, and
a weight on each vertex with 0 <= w <= val - 3 at the root and
0 < w <= val - 3 elsewhere.  The class with n inputs and total weight k
spans the degree-2k cohomology of the (n+1)-pointed moduli space as a
permutation representation, so summing ch over the class reproduces the
recursion's Q_{n,k} from completely different combinatorics.

Trees are built through the decomposition: cutting the root of a tree
leaves a multiset of strictly-positive-root-weight trees together with
the pair (root inputs a, root weight b), 0 <= b <= a + r - 2 where r is
the number of children.  Enumeration recurses over exactly that data, so
each tree is produced once in canonical form.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache
from math import factorial

from .plethysm import h_plethysm
from .symfunc import SymPoly


@dataclass(frozen=True)
class WeightedRootedTree:
    root_weight: int
    root_inputs: int
    children: tuple = ()
    n_inputs: int = field(init=False, compare=False)
    weight: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "n_inputs",
                           self.root_inputs + sum(c.n_inputs for c in self.children))
        object.__setattr__(self, "weight",
                           self.root_weight + sum(c.weight for c in self.children))

    def valency(self) -> int:
        """Inputs + child edges + the output."""
        return self.root_inputs + len(self.children) + 1

    def sort_key(self):
        return (self.n_inputs, self.weight, self.root_inputs, self.root_weight,
                tuple(c.sort_key() for c in self.children))

    def validate(self, is_root: bool = True) -> None:
        lo = 0 if is_root else 1
        if not lo <= self.root_weight <= self.valency() - 3:
            raise ValueError(f"illegal weight {self.root_weight} at valency "
                             f"{self.valency()} vertex")
        keys = [c.sort_key() for c in self.children]
        if keys != sorted(keys, reverse=True):
            raise ValueError("children not in canonical order")
        for c in self.children:
            c.validate(is_root=False)

    def grouped_children(self) -> list:
        """Distinct children with multiplicities (canonical order)."""
        groups: list = []
        for c in self.children:
            if groups and groups[-1][0] == c:
                groups[-1][1] += 1
            else:
                groups.append([c, 1])
        return [(c, m) for c, m in groups]

    def to_json(self):
        return [self.root_weight, self.root_inputs,
                [c.to_json() for c in self.children]]

    @classmethod
    def from_json(cls, data) -> "WeightedRootedTree":
        b, a, kids = data
        children = tuple(sorted((cls.from_json(c) for c in kids),
                                key=lambda t: t.sort_key(), reverse=True))
        tree = cls(b, a, children)
        tree.validate()
        return tree


@cache
def _trees(n: int, k: int, positive_root: bool) -> tuple:
    if n < 0 or k < 0:
        return ()
    out = []
    min_b = 1 if positive_root else 0
    for s in range(n + 1):          # inputs carried by the children
        a = n - s
        for j in range(k + 1):      # weight carried by the children
            b = k - j
            if b < min_b:
                continue
            for children in _child_multisets(s, j, n, k):
                if b <= a + len(children) - 2:
                    out.append(WeightedRootedTree(b, a, children))
    out.sort(key=WeightedRootedTree.sort_key, reverse=True)
    return tuple(out)


def _candidate_children(s: int, j: int, n: int, k: int) -> tuple:
    """Positive-root-weight trees that could appear below a class-(n, k)
    root: total child budget (s, j), and strictly smaller class so the
    recursion is well founded (a child equal to the whole class is
    impossible anyway: it would force a root of valency 2)."""
    cands: list = []
    for n1 in range(min(s, n), 2, -1):
        for k1 in range(min(j, k), 0, -1):
            if (n1, k1) == (n, k):
                continue
            cands.extend(_trees(n1, k1, True))
    return tuple(cands)


def _child_multisets(s: int, j: int, n: int, k: int):
    """Multisets of positive-root-weight trees with total inputs s and
    total weight j, as tuples nonincreasing in canonical order."""
    if s == 0 and j == 0:
        yield ()
        return
    if s < 3 or j < 1:
        return
    cands = _candidate_children(s, j, n, k)

    def rec(rem_s: int, rem_j: int, start: int):
        if rem_s == 0 and rem_j == 0:
            yield ()
            return
        for idx in range(start, len(cands)):
            t = cands[idx]
            if t.n_inputs <= rem_s and t.weight <= rem_j:
                for rest in rec(rem_s - t.n_inputs, rem_j - t.weight, idx):
                    yield (t,) + rest

    yield from rec(s, j, 0)


def enumerate_trees(n: int, k: int, positive_root: bool = False) -> tuple:
    """All weighted rooted trees with n inputs and weight k, each once."""
    return _trees(n, k, positive_root)


def count_trees(n: int, k: int) -> int:
    return len(_trees(n, k, False))


def trees_to_json(n: int, k: int, positive_root: bool = False) -> list:
    """The whole class as nested [weight, inputs, children] arrays."""
    return [t.to_json() for t in _trees(n, k, positive_root)]


@cache
def stabilizer_order(tree: WeightedRootedTree) -> int:
    """Order of the stabilizer of a labeling: inputs at the root permute
    freely, equal child subtrees permute as blocks."""
    order = factorial(tree.root_inputs)
    for child, mult in tree.grouped_children():
        order *= stabilizer_order(child) ** mult * factorial(mult)
    return order


def dim_of_tree(tree: WeightedRootedTree) -> int:
    """dim U_T = n! / |Stab(T)|."""
    n_fact = factorial(tree.n_inputs)
    stab = stabilizer_order(tree)
    if n_fact % stab:
        raise ArithmeticError("stabilizer order does not divide n!")
    return n_fact // stab


_CH_MEMO: dict = {}


def ch_of_tree(tree: WeightedRootedTree, cap_n: int | None = None,
               cap_k: int | None = None) -> SymPoly:
    """Frobenius characteristic of the permutation representation spanned
    by the labelings of the tree: h_a times the product over distinct
    children of h_mult o ch(child).  The result is t-free; the weight
    lives in the (n, k) classification, not in the value."""
    if cap_n is None:
        cap_n = tree.n_inputs
    if cap_k is None:
        cap_k = tree.weight
    key = (tree, cap_n, cap_k)
    cached = _CH_MEMO.get(key)
    if cached is not None:
        return cached
    a = tree.root_inputs
    ch = SymPoly.one(cap_n, cap_k) if a == 0 else SymPoly.gen((a,), cap_n, cap_k)
    for child, mult in tree.grouped_children():
        ch = ch * h_plethysm(mult, ch_of_tree(child, cap_n, cap_k))
    _CH_MEMO[key] = ch
    return ch


def oracle_q(n: int, k: int, cap_n: int | None = None,
             cap_k: int | None = None) -> SymPoly:
    """Sum of ch(U_T) over the class with n inputs and weight k.

    Hard-capped at n <= 12: the class sizes grow too fast for this to be
    anything but a desk-scale validator.
    """
    if n > 12:
        raise ValueError("full enumeration with characters is capped at n = 12")
    if cap_n is None:
        cap_n = n
    if cap_k is None:
        cap_k = k
    total = SymPoly.zero(cap_n, cap_k)
    for tree in _trees(n, k, False):
        total = total + ch_of_tree(tree, cap_n, cap_k)
    return total


def oracle_q_dict(n: int, k: int) -> dict:
    """Partition -> coefficient dict of the oracle value (t-free)."""
    return {lam: c for (lam, _t), c in oracle_q(n, k).coeffs.items()}


# ---------------------------------------------------------------------------
# Shape statistics behind the leading asymptotics
# ---------------------------------------------------------------------------

# A shape is a rooted tree with inputs forgotten: a sorted tuple of child
# shapes.  With k+1 vertices every non-root vertex carries weight 1 and
# the root weight 0, so the weight decoration is forced and shapes are
# plain rooted trees.


@cache
def _shapes(vertices: int) -> tuple:
    if vertices == 1:
        return ((),)
    out = []
    cands: list = []
    for v in range(vertices - 1, 0, -1):
        cands.extend(_shapes(v))

    def rec(rem: int, start: int):
        if rem == 0:
            yield ()
            return
        for idx in range(start, len(cands)):
            s = cands[idx]
            size = _shape_size(s)
            if size <= rem:
                for rest in rec(rem - size, idx):
                    yield (s,) + rest

    out = [tuple(kids) for kids in rec(vertices - 1, 0)]
    return tuple(out)


@cache
def _shape_size(shape) -> int:
    return 1 + sum(_shape_size(c) for c in shape)


@cache
def _shape_aut(shape) -> int:
    order = 1
    i = 0
    while i < len(shape):
        j = i
        while j < len(shape) and shape[j] == shape[i]:
            j += 1
        order *= _shape_aut(shape[i]) ** (j - i) * factorial(j - i)
        i = j
    return order


def cayley_statistics(k: int) -> Fraction:
    """sum over rooted shapes with k+1 vertices of k!/|Aut|; equals the
    number of labeled trees on k+1 vertices, (k+1)^{k-1}."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    total = Fraction(0)
    for shape in _shapes(k + 1):
        total += Fraction(factorial(k), _shape_aut(shape))
    return total
