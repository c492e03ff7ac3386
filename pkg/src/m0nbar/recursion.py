"""Equivariant recursion for the graded character series.

Q+_n, Q_n and P_n are the Frobenius characteristics of the graded pieces
of the cohomology of the (n+1)- and n-pointed moduli of stable rational
curves, as t-polynomials of degree-n symmetric functions.  The build is
bottom-up in n:

  * Q+_1 = h_1, and for n >= 2,
      Q+_n = sum over lam |- n with l(lam) >= 3 of
             (t + ... + t^{l(lam)-2}) prod_j h_{r_j} o Q+_{n_j},
    the product over the distinct parts n_j of lam with multiplicities r_j.
  * Q_n is the same sum over all lam |- n with prefactor 1 (the degree-n
    piece of the plethystic exponential of Q+).
  * (1+t) P_n = Q_n - t (sum_{2<=i<n/2} Q_i Q_{n-i} + s_{(1,1)} o Q_{n/2}),
    with the middle term only for even n; the division by (1+t) is exact
    and the zero remainder is asserted.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import __version__
from .plethysm import exp_pleth, h_plethysm, sign2_plethysm
from .symfunc import IntegrityError, SymPoly, _mul_dicts


@dataclass
class RepTable:
    """Per-n character series Q+_n, Q_n, P_n with shared caps."""

    cap_n: int
    cap_k: int
    qplus: dict = field(default_factory=dict)   # n -> SymPoly
    q: dict = field(default_factory=dict)       # n -> SymPoly
    p: dict = field(default_factory=dict)       # n -> SymPoly
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.meta.setdefault("engine_version", __version__)
        self.meta.setdefault("created", time.strftime("%Y-%m-%dT%H:%M:%S"))


def _walk_partitions(n: int, blocks, on_leaf, max_part: int | None = None) -> None:
    """DFS over partitions of n grouped as (distinct part, multiplicity),
    parts descending, carrying the running H-basis product of blocks.

    blocks(m, d) must return the coefficient dict of h_m o Q+_d; parts
    whose block is zero (d = 2, or anything truncated away) prune the
    whole branch.  on_leaf(prod, length) consumes a finished partition.
    max_part bounds the largest part (partitions of length >= 3 have
    largest part <= n - 2, which is what the Q+ build needs so it never
    touches the not-yet-known Q+_n itself).
    """

    cap_n = blocks.cap_n
    cap_k = blocks.cap_k

    def rec(remaining: int, biggest: int, prod: dict, length: int) -> None:
        if remaining == 0:
            on_leaf(prod, length)
            return
        for d in range(min(biggest, remaining), 0, -1):
            for m in range(1, remaining // d + 1):
                blk = blocks(m, d)
                if not blk:
                    break  # h_m o 0 = 0, and truncation only worsens with m
                cur = _mul_dicts(prod, blk, cap_n, cap_k)
                if not cur:
                    break
                rec(remaining - m * d, d - 1, cur, length + m)

    rec(n, n if max_part is None else max_part, {((), 0): 1}, 0)


class _BlockCache:
    """h_m o Q+_d blocks for one table build (raw coefficient dicts)."""

    def __init__(self, table: RepTable):
        self.table = table
        self.cap_n = table.cap_n
        self.cap_k = table.cap_k
        self._cache: dict = {}

    def __call__(self, m: int, d: int) -> dict:
        key = (m, d)
        blk = self._cache.get(key)
        if blk is None:
            qp = self.table.qplus[d]
            blk = {} if qp.is_zero() else h_plethysm(m, qp).coeffs
            self._cache[key] = blk
        return blk


def qplus_up_to(cap_n: int, cap_k: int) -> RepTable:
    """Fill Q+_n for all n <= cap_n (t-degrees truncated at cap_k)."""
    if cap_n < 1:
        raise ValueError("cap_n must be >= 1")
    table = RepTable(cap_n, cap_k)
    table.qplus[1] = SymPoly.gen((1,), cap_n, cap_k)
    blocks = _BlockCache(table)
    for n in range(2, cap_n + 1):
        acc: dict = {}

        def on_leaf(prod: dict, length: int) -> None:
            for i in range(1, length - 1):
                for (lam, k), c in prod.items():
                    if k + i > cap_k:
                        continue
                    key = (lam, k + i)
                    acc[key] = acc.get(key, 0) + c

        _walk_partitions(n, blocks, on_leaf, max_part=n - 2)
        table.qplus[n] = SymPoly("H", cap_n, cap_k, acc)
    return table


def q_from_qplus(table: RepTable) -> RepTable:
    """Fill Q_n = sum_{lam |- n} prod_j h_{r_j} o Q+_{n_j} for n <= cap_n."""
    blocks = _BlockCache(table)
    for n in range(1, table.cap_n + 1):
        acc: dict = {}

        def on_leaf(prod: dict, length: int) -> None:
            for key, c in prod.items():
                acc[key] = acc.get(key, 0) + c

        _walk_partitions(n, blocks, on_leaf)
        table.q[n] = SymPoly("H", table.cap_n, table.cap_k, acc)
    return table


def divide_by_one_plus_t(f: SymPoly, complete: bool = True) -> SymPoly:
    """Exact division by (1 + t) in the t-grading.

    With complete=True the input is a genuine polynomial in t (its
    natural degree fits within cap_k) and a nonzero remainder, i.e. a
    nonzero value at t = -1, raises IntegrityError.  With complete=False
    the input is a truncation and the series quotient by 1/(1+t) is
    returned up to cap_k.
    """
    by_lam: dict = {}
    for (lam, k), c in f.coeffs.items():
        by_lam.setdefault(lam, {})[k] = c
    out: dict = {}
    for lam, row in by_lam.items():
        top = max(row)
        kmax = top if complete else f.cap_k
        prev = 0
        for k in range(kmax + 1):
            prev = row.get(k, 0) - prev
            if prev != 0:
                out[(lam, k)] = prev
        if complete:
            # quotient has degree top - 1; the slot at top is the remainder
            if out.pop((lam, top), 0) != 0:
                raise IntegrityError(
                    f"nonzero remainder dividing by (1+t) at {lam}")
    return SymPoly(f.basis, f.cap_n, f.cap_k, out)


def p_from_q(table: RepTable, n: int) -> SymPoly:
    """P_n from the wall-crossing relation, by exact division by (1+t)."""
    if n < 3:
        raise ValueError("P_n is defined for n >= 3")
    rhs = table.q[n]
    correction = SymPoly.zero(table.cap_n, table.cap_k)
    for i in range(2, (n + 1) // 2):
        correction = correction + table.q[i] * table.q[n - i]
    if n % 2 == 0:
        correction = correction + sign2_plethysm(table.q[n // 2])
    rhs = rhs - correction.t_shift(1)
    return divide_by_one_plus_t(rhs, complete=table.cap_k >= n - 2)


def p_fill(table: RepTable) -> RepTable:
    """Fill P_n for 3 <= n <= cap_n (P_1, P_2 are the series edge terms)."""
    table.p[1] = SymPoly.gen((1,), table.cap_n, table.cap_k)
    table.p[2] = SymPoly.gen((2,), table.cap_n, table.cap_k)
    for n in range(3, table.cap_n + 1):
        table.p[n] = p_from_q(table, n)
    return table


def build_tables(cap_n: int, cap_k: int) -> RepTable:
    """Q+, Q and P in one pass."""
    table = qplus_up_to(cap_n, cap_k)
    q_from_qplus(table)
    p_fill(table)
    return table


def qplus_series(table: RepTable) -> SymPoly:
    """Q+ as a single series: h_1 + sum_{n>=2} Q+_n."""
    total = SymPoly.zero(table.cap_n, table.cap_k)
    for n in sorted(table.qplus):
        total = total + table.qplus[n]
    return total


def q_series(table: RepTable) -> SymPoly:
    """Q as a single series: 1 + h_1 + sum_{n>=2} Q_n."""
    total = SymPoly.one(table.cap_n, table.cap_k)
    for n in sorted(table.q):
        total = total + table.q[n]
    return total


@dataclass
class IdentityReport:
    ok: bool
    mismatches: list

    def __bool__(self):
        return self.ok


def verify_exponential_identity(table: RepTable) -> IdentityReport:
    """Check Exp(t Q+) = t^2 Exp(Q+) + (1 - t)(1 + t + h_1 t) within caps."""
    qp = qplus_series(table)
    lhs = exp_pleth(qp.t_shift(1))
    low = SymPoly("H", table.cap_n, table.cap_k, {
        ((), 0): 1, ((), 2): -1, ((1,), 1): 1, ((1,), 2): -1,
    })
    rhs = exp_pleth(qp).t_shift(2) + low
    diff = lhs - rhs
    mismatches = [(lam, k, c) for (lam, k), c in diff.terms()]
    return IdentityReport(not mismatches, mismatches)


def duality_holds(table: RepTable, n: int) -> bool:
    """Q_{n,k} = Q_{n,n-2-k} and Q+_{n,k} = Q+_{n,n-1-k}.

    Meaningful only when the caps retain the full t-range for degree n.
    """
    if table.cap_k < n - 2:
        raise ValueError("caps truncate the t-range needed for duality")
    q = table.q[n]
    qp = table.qplus[n]
    for k in range(0, n - 1):
        if q.slice_nk(n, k) != q.slice_nk(n, n - 2 - k):
            return False
    for k in range(1, n):
        if qp.slice_nk(n, k) != qp.slice_nk(n, n - 1 - k):
            return False
    return True


def phi_from_rank(table: RepTable) -> dict:
    """Poincare polynomials of the (n+1)-pointed spaces from the rank
    homomorphism: phi_n(t) = n! * rk(Q_n), as lists of ints."""
    from math import factorial

    from .symfunc import rank_specialize

    out = {}
    for n, qn in sorted(table.q.items()):
        rk = rank_specialize(qn)
        top = max((k for (_m, k) in rk.coeffs), default=0)
        row = []
        for k in range(top + 1):
            v = rk[(n, k)] * factorial(n)
            if v != int(v):
                raise IntegrityError(f"non-integral Betti number at n={n}, k={k}")
            row.append(int(v))
        while row and row[-1] == 0:
            row.pop()
        out[n] = row
    return out
