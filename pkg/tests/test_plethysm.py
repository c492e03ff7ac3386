import random
from fractions import Fraction

import pytest

from m0nbar.partitions import partitions_of
from m0nbar.plethysm import (
    additive_expansion,
    exp_pleth,
    exp_pleth_by_sum,
    h_plethysm,
    log_pleth,
    p_substitute,
    sign2_plethysm,
    trunc,
)
from m0nbar.symfunc import SymPoly, schur_to_h_dict, to_schur

CAPS = (10, 8)


def H(lam, t=0, c=1, caps=CAPS):
    return SymPoly.gen(lam, *caps, t=t, c=c)


def random_sympoly(rng, caps=CAPS, max_deg=4, terms=5, tmax=2, allow_const_t=False):
    coeffs = {}
    for _ in range(terms):
        n = rng.randint(0 if allow_const_t else 1, max_deg)
        lam = rng.choice(partitions_of(n))
        t = rng.randint(1 if n == 0 else 0, tmax)
        c = rng.randint(-2, 3)
        if c:
            coeffs[(lam, t)] = coeffs.get((lam, t), 0) + c
    return SymPoly("H", *caps, coeffs)


def e_plethysm(r, f):
    """e_r o F through e_r = s_{(1^r)}: expand in the h basis and compose
    multiplicatively.  Independent route used as the oracle for the
    sign-twist identity."""
    result = SymPoly.zero(f.cap_n, f.cap_k)
    for mu, c in schur_to_h_dict((1,) * r).items():
        term = SymPoly.one(f.cap_n, f.cap_k).scale(c)
        for part in mu:
            term = term * h_plethysm(part, f)
        result = result + term
    return result


# ---------------------------------------------------------------------------
# p substitution
# ---------------------------------------------------------------------------


def test_p_substitute_examples():
    p1 = SymPoly.gen((1,), *CAPS, basis="P")
    assert p_substitute(p1, 3) == SymPoly.gen((3,), *CAPS, basis="P")
    tp2 = SymPoly.gen((2,), *CAPS, basis="P", t=1)
    assert p_substitute(tp2, 2) == SymPoly.gen((4,), *CAPS, basis="P", t=2)
    f = SymPoly("P", *CAPS, {((2, 1), 1): Fraction(1, 2)})
    assert p_substitute(f, 1) == f


# ---------------------------------------------------------------------------
# h_r o (-)
# ---------------------------------------------------------------------------


def test_h_plethysm_identity_and_unit():
    for r in range(0, 9):
        assert h_plethysm(r, H((1,))) == (H((r,)) if r else SymPoly.one(*CAPS))
    f = random_sympoly(random.Random(0))
    assert h_plethysm(0, f) == SymPoly.one(*CAPS)
    assert h_plethysm(1, f) == f


def test_h_plethysm_t_twist():
    # h_r o (t F) = t^r (h_r o F)
    f = H((3,), t=1)
    assert h_plethysm(2, f) == h_plethysm(2, H((3,))).t_shift(2)
    g = H((2,))
    assert h_plethysm(3, g.t_shift(1)) == h_plethysm(3, g).t_shift(3)


def test_h2_of_h2_schur_expansion():
    got = to_schur(h_plethysm(2, H((2,))))
    assert got.coeffs == {((4,), 0): 1, ((2, 2), 0): 1}


def test_three_vertex_characteristic_shape():
    # h_{n-2a} * (h_2 o h_a) is integral and its trivial multiplicity is 1
    for n, a in ((8, 3), (10, 4)):
        f = H((n - 2 * a,)) * h_plethysm(2, H((a,)))
        f = f.integerized()
        from m0nbar.symfunc import mult_lambda

        assert mult_lambda(f, (n,)) == 1


def test_plethysm_memo_returns_same_object():
    f = random_sympoly(random.Random(2))
    assert h_plethysm(3, f) is h_plethysm(3, f)


def test_sign_twist_identity():
    # h_r o (-F) = (-1)^r e_r o F
    rng = random.Random(4)
    for r in (1, 2, 3):
        f = random_sympoly(rng, max_deg=3, terms=4)
        lhs = h_plethysm(r, -f)
        rhs = e_plethysm(r, f).scale((-1) ** r)
        assert lhs == rhs, r


# ---------------------------------------------------------------------------
# additive expansion
# ---------------------------------------------------------------------------


def test_additive_expansion_r2_two_summands():
    f, g = H((2,)), H((3,), t=1)
    expected = h_plethysm(2, f) + f * g + h_plethysm(2, g)
    assert additive_expansion(2, [f, g]) == expected


def test_additive_expansion_r1_is_sum():
    f, g, h = H((1,)), H((2,), t=1), H((3,))
    assert additive_expansion(1, [f, g, h]) == f + g + h


def test_additive_expansion_single_summand():
    assert additive_expansion(3, [H((1,))]) == H((3,))


def test_additive_expansion_matches_direct():
    rng = random.Random(12)
    for r in (2, 3, 4):
        parts = [random_sympoly(rng, max_deg=3, terms=3) for _ in range(3)]
        total = parts[0] + parts[1] + parts[2]
        assert additive_expansion(r, parts) == h_plethysm(r, total), r


# ---------------------------------------------------------------------------
# sign-square plethysm
# ---------------------------------------------------------------------------


def test_sign2_of_h1():
    assert sign2_plethysm(H((1,))) == H((1, 1)) - H((2,))


def test_sign2_of_zero():
    assert sign2_plethysm(SymPoly.zero(*CAPS)).is_zero()


def test_sign2_of_h2_is_s31():
    got = to_schur(sign2_plethysm(H((2,))))
    assert got.coeffs == {((3, 1), 0): 1}


# ---------------------------------------------------------------------------
# Exp and Log
# ---------------------------------------------------------------------------


def test_exp_of_h1():
    expected = SymPoly("H", *CAPS, {((), 0): 1,
                                    **{((r,), 0): 1 for r in range(1, 11)}})
    assert exp_pleth(H((1,))) == expected


def test_exp_of_minus_h1_is_alternating_elementary():
    got = exp_pleth(-H((1,)))
    expected = SymPoly.one(*CAPS)
    for r in range(1, 11):
        e_r = SymPoly("H", *CAPS,
                      {(mu, 0): c for mu, c in schur_to_h_dict((1,) * r).items()})
        expected = expected + e_r.scale((-1) ** r)
    assert got == expected


def test_exp_of_zero():
    assert exp_pleth(SymPoly.zero(*CAPS)) == SymPoly.one(*CAPS)


def test_exp_rejects_constant_term():
    with pytest.raises(ValueError):
        exp_pleth(SymPoly.one(*CAPS))


def test_exp_is_homomorphism():
    rng = random.Random(31)
    caps = (7, 6)
    for _ in range(4):
        f = random_sympoly(rng, caps=caps, max_deg=3, terms=4)
        g = random_sympoly(rng, caps=caps, max_deg=3, terms=4)
        assert exp_pleth(f + g) == exp_pleth(f) * exp_pleth(g)


def test_exp_fast_route_equals_h_sum_route():
    rng = random.Random(41)
    caps = (6, 5)
    for _ in range(5):
        f = random_sympoly(rng, caps=caps, max_deg=3, terms=5, allow_const_t=True)
        assert exp_pleth(f) == exp_pleth_by_sum(f)


def test_exp_of_pure_t_series():
    # Exp(t) = 1/(1-t)
    f = SymPoly("H", *CAPS, {((), 1): 1})
    expected = SymPoly("H", *CAPS, {((), k): 1 for k in range(CAPS[1] + 1)})
    assert exp_pleth(f) == expected
    assert log_pleth(expected) == f


def test_log_inverts_exp():
    rng = random.Random(6)
    for _ in range(5):
        f = random_sympoly(rng, caps=(6, 5), max_deg=3, terms=5)
        assert log_pleth(exp_pleth(f)) == f


def test_log_of_h_series_is_h1():
    series = SymPoly("H", *CAPS, {((), 0): 1,
                                  **{((r,), 0): 1 for r in range(1, 11)}})
    assert log_pleth(series) == H((1,))


def test_log_rejects_bad_constant():
    with pytest.raises(ValueError):
        log_pleth(SymPoly.zero(*CAPS))


# ---------------------------------------------------------------------------
# truncation
# ---------------------------------------------------------------------------


def test_trunc_examples():
    series = SymPoly("H", *CAPS, {((), 0): 1,
                                  **{((r,), 0): 1 for r in range(1, 11)}})
    got = trunc(series, 3, 0)
    assert got == SymPoly("H", 3, 0, {((), 0): 1, ((1,), 0): 1,
                                      ((2,), 0): 1, ((3,), 0): 1})
    f = random_sympoly(random.Random(8))
    assert trunc(f, *CAPS) == f


def test_trunc_commutes_with_plethysm():
    # (h_r o F)|caps = (h_r o F|caps)|caps
    rng = random.Random(19)
    big = (8, 6)
    small = (5, 4)
    for r in (2, 3, 4):
        f = random_sympoly(rng, caps=big, max_deg=3, terms=5)
        lhs = trunc(h_plethysm(r, f), *small)
        f_small = trunc(f, *small).with_caps(*big)
        rhs = trunc(h_plethysm(r, f_small), *small)
        assert lhs == rhs, r
