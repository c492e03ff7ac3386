"""Plethysm on the truncated ring: h_r o (-), Exp and Log.

h_r o F is computed through the power-sum basis: expand h_r over
partitions of r with z-coefficients, substitute p_i into F per part,
multiply, and convert back.  Every intermediate product truncates
eagerly at the ambient caps, which is loss-free for the final truncated
answer.

Exp(F) = sum_r h_r o F and Log is its inverse via the Moebius formula
Log(F) = sum_{r>=1} (mu(r)/r) log(p_r o F).
"""

from __future__ import annotations

from fractions import Fraction

from .partitions import mobius
from .symfunc import (
    IntegrityError,
    SymPoly,
    _mul_dicts,
    to_h_basis,
    to_p_basis,
)

# Shared across all callers; keyed by (r, content of F incl. caps).  Plain
# dict reads/writes are atomic under the GIL, which is all the concurrency
# model requires of it.
_PLETHYSM_MEMO: dict = {}


def trunc(f: SymPoly, cap_n: int, cap_k: int) -> SymPoly:
    """Truncate to tighter caps (the caps travel with the value)."""
    return f.truncate(cap_n, cap_k)


def p_substitute(f: SymPoly, m: int) -> SymPoly:
    """p_m o F: every p_i -> p_{i m} and t^k -> t^{k m}, truncated.

    Input is converted to the power-sum basis if needed.
    """
    if m < 1:
        raise ValueError("m must be positive")
    fp = to_p_basis(f)
    if m == 1:
        return fp
    out = {}
    for (lam, k), c in fp.coeffs.items():
        if sum(lam) * m > fp.cap_n or k * m > fp.cap_k:
            continue
        out[(tuple(p * m for p in lam), k * m)] = c
    return SymPoly("P", fp.cap_n, fp.cap_k, out)


def _min_weight(f: SymPoly) -> int:
    """Smallest n + k over the support (0 for a constant term)."""
    return min((sum(lam) + k for (lam, k) in f.coeffs), default=0)


def h_plethysm(r: int, f: SymPoly) -> SymPoly:
    """h_r o F in the H basis.

    h_0 o F = 1 for every F; h_1 is the identity.  For integral F the
    result must come out integral, and a non-integral coefficient raises
    IntegrityError.
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    if r == 0:
        return SymPoly.one(f.cap_n, f.cap_k)
    if r == 1:
        return to_h_basis(f)
    if f.is_zero():
        return SymPoly.zero(f.cap_n, f.cap_k)

    memo_key = (r, f.content_key())
    cached = _PLETHYSM_MEMO.get(memo_key)
    if cached is not None:
        return cached

    integral = f.is_integral()
    fp = to_p_basis(f)
    cap_n, cap_k = fp.cap_n, fp.cap_k
    psubs: dict = {}

    def psub(i: int) -> dict:
        if i not in psubs:
            psubs[i] = p_substitute(fp, i).coeffs
        return psubs[i]

    acc: dict = {}

    def add(prod: dict, denom: int) -> None:
        inv = Fraction(1, denom)
        for key, c in prod.items():
            val = acc.get(key, 0) + c * inv
            if val == 0:
                acc.pop(key, None)
            else:
                acc[key] = val

    # Partitions of r by distinct part descending; the running product of
    # p_i-substituted copies is shared across branches, and the running
    # denominator accumulates z_lam = prod_i i^{m_i} m_i!.
    def rec(remaining: int, max_part: int, prod: dict, denom: int) -> None:
        if remaining == 0:
            add(prod, denom)
            return
        if not prod:
            return
        for i in range(min(max_part, remaining), 0, -1):
            cur = prod
            d = denom
            for m in range(1, remaining // i + 1):
                cur = _mul_dicts(cur, psub(i), cap_n, cap_k)
                d *= i * m
                rec(remaining - i * m, i - 1, cur, d)
                if not cur:
                    break

    rec(r, r, {((), 0): 1}, 1)
    result = to_h_basis(SymPoly("P", cap_n, cap_k, acc))
    if integral:
        result = result.integerized()
    _PLETHYSM_MEMO[memo_key] = result
    return result


def additive_expansion(r: int, summands: list[SymPoly]) -> SymPoly:
    """h_r o (F_1 + ... + F_m) by the distinct-summand expansion, folding
    h_r o (F + G) = sum_{i} (h_{r-i} o F)(h_i o G) over the list."""
    if not summands:
        return h_plethysm(r, SymPoly.zero(1, 0))
    cap_n, cap_k = summands[0].caps()
    # row[i] = h_i o (partial sum)
    row = [h_plethysm(i, summands[0]) for i in range(r + 1)]
    for g in summands[1:]:
        hg = [h_plethysm(i, g) for i in range(r + 1)]
        new = []
        for i in range(r + 1):
            term = SymPoly.zero(cap_n, cap_k)
            for a in range(i + 1):
                term = term + row[a] * hg[i - a]
            new.append(term)
        row = new
    return row[r]


def sign2_plethysm(f: SymPoly) -> SymPoly:
    """s_{(1,1)} o F = F^2 - h_2 o F."""
    fh = to_h_basis(f)
    return fh * fh - h_plethysm(2, f)


def exp_pleth_by_sum(f: SymPoly) -> SymPoly:
    """Exp(F) = sum_{r>=0} h_r o F, summed term by term.

    Reference route; exp_pleth computes the same series through the
    power-sum exponential, which shares work across all r.
    """
    if f.coeff((), 0) != 0:
        raise ValueError("Exp requires a series without constant term")
    out = SymPoly.one(f.cap_n, f.cap_k)
    if f.is_zero():
        return out
    w0 = _min_weight(f)
    rmax = (f.cap_n + f.cap_k) // w0
    for r in range(1, rmax + 1):
        out = out + h_plethysm(r, f)
    return out


def _exp_pure_t(coeffs: dict, cap_k: int) -> dict:
    """exp(sum_r (p_r o f0)/r) for a pure-t series f0, as a t-indexed dict."""
    theta: dict = {}
    for ((_lam, k), c) in coeffs.items():
        r = 1
        while r * k <= cap_k:
            theta[r * k] = theta.get(r * k, 0) + k * c
            r += 1
    g = {0: 1}
    for w in range(1, cap_k + 1):
        acc = 0
        for v, lv in theta.items():
            if 0 < v <= w and (w - v) in g:
                acc += lv * g[w - v]
        if acc:
            g[w] = acc // w if isinstance(acc, int) and acc % w == 0 \
                else Fraction(acc) / w
    return {((), k): c for k, c in g.items() if c != 0}


def exp_pleth(f: SymPoly) -> SymPoly:
    """Plethystic exponential Exp(F) = exp(sum_{r>=1} (p_r o F)/r)
    = sum_{r>=0} h_r o F, for F without constant term.

    Evaluated as an ordinary exponential graded by x-degree: with
    L = sum_r (p_r o F)/r, the slices satisfy n G_n = sum_m (theta L)_m
    G_{n-m}, where theta scales a degree-d term by d, so theta L needs no
    denominators.  A pure-t component of F exponentiates separately and
    multiplies in (Exp is a homomorphism).
    """
    if f.coeff((), 0) != 0:
        raise ValueError("Exp requires a series without constant term")
    cap_n, cap_k = f.cap_n, f.cap_k
    if f.is_zero():
        return SymPoly.one(cap_n, cap_k)
    integral = f.is_integral()
    fp = to_p_basis(f)
    pure_t = {key: c for key, c in fp.coeffs.items() if not key[0]}

    theta_l: dict = {}
    for (lam, k), c in fp.coeffs.items():
        d = sum(lam)
        if d == 0:
            continue
        r = 1
        while r * d <= cap_n and r * k <= cap_k:
            key = (tuple(p * r for p in lam), r * k)
            theta_l[key] = theta_l.get(key, 0) + d * c
            r += 1
    l_slices: dict = {}
    for (lam, k), c in theta_l.items():
        l_slices.setdefault(sum(lam), {})[(lam, k)] = c

    g_slices = {0: {((), 0): 1}}
    for n in range(1, cap_n + 1):
        acc: dict = {}
        for m in range(1, n + 1):
            lm = l_slices.get(m)
            gm = g_slices.get(n - m)
            if not lm or not gm:
                continue
            for key, c in _mul_dicts(lm, gm, cap_n, cap_k).items():
                acc[key] = acc.get(key, 0) + c
        slc: dict = {}
        for key, c in acc.items():
            if c == 0:
                continue
            if isinstance(c, int) and c % n == 0:
                slc[key] = c // n
            else:
                slc[key] = Fraction(c) / n
        if slc:
            g_slices[n] = slc

    total: dict = {}
    for slc in g_slices.values():
        total.update(slc)
    out = to_h_basis(SymPoly("P", cap_n, cap_k, total))
    if pure_t:
        rest = _exp_pure_t(pure_t, cap_k)
        out = out * SymPoly("H", cap_n, cap_k, rest)
    if integral:
        out = out.integerized()
    return out


def _series_log(fp: SymPoly) -> dict:
    """Ordinary series log of a P-basis value with constant term 1.

    Works on total-weight slices via w A_w = w X_w - sum_v v A_v X_{w-v}.
    Returns a raw P-basis coefficient dict.
    """
    cap_n, cap_k = fp.cap_n, fp.cap_k
    capw = cap_n + cap_k
    x_slices: dict = {}
    for (lam, k), c in fp.coeffs.items():
        x_slices.setdefault(sum(lam) + k, {})[(lam, k)] = c
    if x_slices.get(0) != {((), 0): 1}:
        raise ValueError("series log requires constant term exactly 1")
    a_slices: dict = {}
    for w in range(1, capw + 1):
        acc = {key: w * c for key, c in x_slices.get(w, {}).items()}
        for v in range(1, w):
            av, xv = a_slices.get(v), x_slices.get(w - v)
            if not av or not xv:
                continue
            for key, c in _mul_dicts(av, xv, cap_n, cap_k).items():
                acc[key] = acc.get(key, 0) - v * c
        slc = {}
        for key, c in acc.items():
            if c == 0:
                continue
            if isinstance(c, int):
                slc[key] = c // w if c % w == 0 else Fraction(c, w)
            else:
                slc[key] = c / w
        if slc:
            a_slices[w] = slc
    out: dict = {}
    for slc in a_slices.values():
        out.update(slc)
    return out


def log_pleth(f: SymPoly) -> SymPoly:
    """Plethystic logarithm: the inverse of Exp on series with constant
    term 1, via Log(F) = sum_{r>=1} (mu(r)/r) log(p_r o F)."""
    if f.coeff((), 0) != 1:
        raise ValueError("Log requires constant term 1")
    fp = to_p_basis(f)
    cap_n, cap_k = fp.cap_n, fp.cap_k
    w0 = _min_weight(SymPoly("P", cap_n, cap_k,
                             {k: c for k, c in fp.coeffs.items() if k != ((), 0)}))
    if w0 == 0:  # f == 1
        return SymPoly.zero(cap_n, cap_k)
    acc: dict = {}
    for r in range(1, (cap_n + cap_k) // w0 + 1):
        mu_r = mobius(r)
        if mu_r == 0:
            continue
        scale = Fraction(mu_r, r)
        for key, c in _series_log(p_substitute(fp, r)).items():
            val = acc.get(key, 0) + scale * c
            if val == 0:
                acc.pop(key, None)
            else:
                acc[key] = val
    return to_h_basis(SymPoly("P", cap_n, cap_k, acc))
