import pytest

from m0nbar.plethysm import h_plethysm, log_pleth
from m0nbar.recursion import (
    build_tables,
    divide_by_one_plus_t,
    duality_holds,
    p_from_q,
    phi_from_rank,
    q_series,
    qplus_series,
    verify_exponential_identity,
)
from m0nbar.symfunc import IntegrityError, SymPoly, schur_slice

CAPS = (15, 13)


def H(lam, caps, t=0, c=1):
    return SymPoly.gen(lam, *caps, t=t, c=c)


# ---------------------------------------------------------------------------
# Printed low-degree values
# ---------------------------------------------------------------------------


def test_qplus_base_cases(table15):
    caps = table15.caps() if hasattr(table15, "caps") else (table15.cap_n, table15.cap_k)
    assert table15.qplus[1] == H((1,), caps)
    assert table15.qplus[2].is_zero()


def test_qplus_degree_three(table15):
    caps = (table15.cap_n, table15.cap_k)
    assert table15.qplus[3] == H((3,), caps, t=1)


def test_qplus_degree_five(table15):
    caps = (table15.cap_n, table15.cap_k)
    expected = SymPoly("H", *caps, {((5,), 1): 1, ((5,), 2): 1, ((5,), 3): 1,
                                    ((3, 2), 2): 1})
    assert table15.qplus[5] == expected


def test_q_low_degrees(table15):
    caps = (table15.cap_n, table15.cap_k)
    assert table15.q[1] == H((1,), caps)
    assert table15.q[2] == H((2,), caps)
    assert table15.q[3] == SymPoly("H", *caps, {((3,), 0): 1, ((3,), 1): 1})
    q4 = SymPoly("H", *caps, {((4,), 0): 1, ((4,), 1): 1, ((4,), 2): 1,
                              ((3, 1), 1): 1})
    assert table15.q[4] == q4
    q5 = SymPoly("H", *caps, {((5,), k): 1 for k in range(4)})
    q5 = q5 + SymPoly("H", *caps, {((4, 1), 1): 1, ((4, 1), 2): 1,
                                   ((3, 2), 1): 1, ((3, 2), 2): 1})
    assert table15.q[5] == q5


def test_p_low_degrees(table15):
    caps = (table15.cap_n, table15.cap_k)
    assert table15.p[3] == H((3,), caps)
    # P_4 = h_4 + t * (Schur-positive degree-4 class) with trivial mult 1
    p41 = schur_slice(table15.p[4], 4, 1)
    assert all(c > 0 for c in p41.values())
    assert p41.get((4,)) == 1
    assert table15.p[4].slice_nk(4, 0) == {(4,): 1}


def test_p_top_degree_is_trivial(table15):
    for n in range(3, 16):
        assert table15.p[n].slice_nk(n, 0) == {(n,): 1}
        assert table15.p[n].t_degrees()[-1] == n - 3 or n == 3


# ---------------------------------------------------------------------------
# Closed formulas for k <= 3
# ---------------------------------------------------------------------------


def _add(acc, parts, c=1):
    lam = tuple(sorted((p for p in parts if p), reverse=True))
    acc[lam] = acc.get(lam, 0) + c


def _mul_h_dict(acc, other):
    out = {}
    for lam1, c1 in acc.items():
        for lam2, c2 in other.items():
            lam = tuple(sorted(lam1 + lam2, reverse=True))
            out[lam] = out.get(lam, 0) + c1 * c2
    return out


def _h2_of_ha(a):
    f = h_plethysm(2, SymPoly.gen((a,), 2 * a, 0))
    return {lam: c for (lam, _t), c in f.coeffs.items()}


def _h3_of_ha(a):
    f = h_plethysm(3, SymPoly.gen((a,), 3 * a, 0))
    return {lam: c for (lam, _t), c in f.coeffs.items()}


def closed_q1(n):
    acc = {}
    _add(acc, (n,))
    for a in range(1, n):
        b = n - a
        if b >= 3:
            _add(acc, (a, b))
    return acc


def closed_q2(n):
    acc = {}
    _add(acc, (n,))
    for a in range(1, n):
        b = n - a
        if b >= 4:
            _add(acc, (a, b))
    for a in range(2, n):
        b = n - a
        if b >= 3:
            _add(acc, (a, b))
    for a in range(3, n + 1):
        for b in range(2, n + 1):
            c = n - a - b
            if c >= 1:
                _add(acc, (a, b, c))
    for a in range(3, n // 2 + 1):
        b = n - 2 * a
        if b >= 0:
            for lam, coeff in _mul_h_dict(_h2_of_ha(a), {(b,) if b else (): 1}).items():
                acc[lam] = acc.get(lam, 0) + coeff
    for a in range(3, n + 1):
        for b in range(a + 1, n + 1):
            c = n - a - b
            if c >= 0:
                _add(acc, (a, b, c))
    return {k: v for k, v in acc.items() if v}


def closed_q3(n):
    acc = {}
    _add(acc, (n,))
    two_vertex = [(1, 5), (2, 4), (3, 3)]
    for a_min, b_min in two_vertex:
        for a in range(a_min, n):
            b = n - a
            if b >= b_min:
                _add(acc, (a, b))
    chains = [(2, 2, 3), (1, 2, 4), (3, 3, 1)]
    for amin, bmin, cmin in chains:
        for a in range(amin, n):
            for b in range(bmin, n):
                c = n - a - b
                if c >= cmin:
                    _add(acc, (a, b, c))
    # root + two children of different weights
    for a in range(3, n):
        for b in range(4, n):
            c = n - a - b
            if c >= 0:
                _add(acc, (a, b, c))
    # twins of weight 1 under a root of weight 1
    for a in range(3, n // 2 + 1):
        b = n - 2 * a
        if b >= 1:
            for lam, cf in _mul_h_dict(_h2_of_ha(a), {(b,): 1}).items():
                acc[lam] = acc.get(lam, 0) + cf
    for a in range(3, n):
        for b in range(a + 1, n):
            c = n - a - b
            if c >= 1:
                _add(acc, (a, b, c))
    # chains of length four
    for a in range(1, n):
        for b in range(2, n):
            for c in range(2, n):
                d = n - a - b - c
                if d >= 3:
                    _add(acc, (a, b, c, d))
    # twin grandchildren
    for a in range(3, n // 2 + 1):
        for b in range(1, n):
            c = n - 2 * a - b
            if c >= 1:
                for lam, cf in _mul_h_dict(_h2_of_ha(a), {tuple(sorted((b, c), reverse=True)): 1}).items():
                    acc[lam] = acc.get(lam, 0) + cf
    for a in range(3, n):
        for b in range(a + 1, n):
            for c in range(1, n):
                d = n - a - b - c
                if d >= 1:
                    _add(acc, (a, b, c, d))
    for a in range(2, n):
        for b in range(3, n):
            for c in range(3, n):
                d = n - a - b - c
                if d >= 0:
                    _add(acc, (a, b, c, d))
    for a in range(3, n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                d = n - a - b - c
                if d >= 0:
                    _add(acc, (a, b, c, d))
    # twins + a distinct leaf
    for a in range(3, n // 2 + 1):
        for b in range(3, n):
            if b == a:
                continue
            c = n - 2 * a - b
            if c >= 0:
                for lam, cf in _mul_h_dict(_h2_of_ha(a), {(b,) if c == 0 else tuple(sorted((b, c), reverse=True)): 1}).items():
                    acc[lam] = acc.get(lam, 0) + cf
    # triplets
    for a in range(3, n // 3 + 1):
        b = n - 3 * a
        if b >= 0:
            for lam, cf in _mul_h_dict(_h3_of_ha(a), {(b,) if b else (): 1}).items():
                acc[lam] = acc.get(lam, 0) + cf
    return {k: v for k, v in acc.items() if v}


def test_closed_formulas_match_recursion(table15):
    for n in range(2, 13):
        assert table15.q[n].slice_nk(n, 0) == {(n,): 1}
    for n in range(3, 13):
        assert table15.q[n].slice_nk(n, 1) == closed_q1(n), n
    for n in range(4, 13):
        assert table15.q[n].slice_nk(n, 2) == closed_q2(n), n
    for n in range(5, 13):
        assert table15.q[n].slice_nk(n, 3) == closed_q3(n), n


def test_vanishing_beyond_graded_range(table15):
    for n in range(2, 13):
        assert all(k <= n - 2 for k in table15.q[n].t_degrees())
        assert all(1 <= k <= n - 2 for k in table15.qplus[n].t_degrees()) or n <= 2


# ---------------------------------------------------------------------------
# Structural checks
# ---------------------------------------------------------------------------


def test_duality(table15):
    for n in range(2, 13):
        assert duality_holds(table15, n)


def test_duality_guard_on_truncated_caps():
    table = build_tables(8, 3)
    with pytest.raises(ValueError):
        duality_holds(table, 8)


def test_truncated_build_agrees_with_truncation():
    full = build_tables(8, 6)
    short = build_tables(8, 3)
    for n in range(1, 9):
        assert short.q[n] == full.q[n].truncate(8, 3)
        assert short.qplus[n] == full.qplus[n].truncate(8, 3)
        if n >= 3:
            assert short.p[n] == full.p[n].truncate(8, 3)


def test_schur_positivity_and_domination(table15):
    for n in range(2, 13):
        for k in range(0, n - 1):
            q_sl = schur_slice(table15.q[n], n, k)
            assert all(c >= 0 for c in q_sl.values()), (n, k)
            p_sl = schur_slice(table15.p[n], n, k) if n >= 3 else {}
            assert all(c >= 0 for c in p_sl.values()), (n, k)
            # the n-pointed piece embeds into the (n+1)-pointed one
            for lam, c in p_sl.items():
                assert q_sl.get(lam, 0) >= c, (n, k, lam)


def test_vanishing_rule(table15):
    # s_lam with l(lam) > k+1 or lam_1 < 3 does not occur, for n >= 3
    for n in range(3, 11):
        for k in range(0, n - 1):
            for lam, c in schur_slice(table15.q[n], n, k).items():
                if c:
                    assert len(lam) <= k + 1, (n, k, lam)
                    assert lam[0] >= 3, (n, k, lam)


def test_exponential_identity_small_caps():
    rep = verify_exponential_identity(build_tables(1, 1))
    assert rep.ok
    rep8 = verify_exponential_identity(build_tables(8, 6))
    assert rep8.ok


def test_log_of_q_is_qplus(table12):
    assert log_pleth(q_series(table12)) == qplus_series(table12)


def test_divide_by_one_plus_t_detects_remainder():
    f = SymPoly("H", 4, 4, {((2,), 0): 1, ((2,), 1): 2})  # (1+t)+t: remainder
    with pytest.raises(IntegrityError):
        divide_by_one_plus_t(f, complete=True)
    g = SymPoly("H", 4, 4, {((2,), 0): 1, ((2,), 1): 1})
    assert divide_by_one_plus_t(g, complete=True) == SymPoly.gen((2,), 4, 4)


def test_p_from_q_requires_n_at_least_three(table15):
    with pytest.raises(ValueError):
        p_from_q(table15, 2)


def test_degenerate_caps_build():
    tiny = build_tables(2, 0)
    assert tiny.qplus[1].coeffs == {((1,), 0): 1}
    assert tiny.q[2].coeffs == {((2,), 0): 1}
    assert tiny.p[2].coeffs == {((2,), 0): 1}


def test_phi_from_rank(table15):
    phi = phi_from_rank(table15)
    assert phi[3] == [1, 1]
    assert phi[4] == [1, 5, 1]
    assert phi[5] == [1, 16, 16, 1]
    # palindromic (smooth projective), positive
    for n in range(2, 14):
        row = phi[n]
        assert row == row[::-1]
        assert all(c > 0 for c in row)
