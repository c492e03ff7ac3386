from fractions import Fraction
from math import comb

import pytest

from m0nbar.concavity import (
    asymptotic_report,
    check_equiv_lc,
    check_log_concave,
    check_mult_lc,
    check_mult_lc_all,
    check_ultra_log_concave,
    find_ultra_witness,
    lc_ratio,
    leading_ratio,
)


def test_log_concave_basic_verdicts():
    rep = check_log_concave([1, 2, 4, 2, 1], "p7")
    assert rep.ok
    assert rep.verdicts == ("holds", "strict", "holds")
    assert check_log_concave([1, 1]).ok  # no interior index: vacuous
    rep = check_log_concave([1, 2, 5])
    assert not rep.ok and rep.first_failure == 1
    assert check_log_concave([2, 2, 2]).verdicts == ("holds",)


def test_report_json_shape():
    rep = check_log_concave([1, 3, 2], "demo")
    data = rep.to_json_dict()
    assert data["sequence"] == "demo"
    assert data["first_failure"] is None
    assert data["verdicts"] == ["strict"]


def test_ultra_log_concave():
    # constant sequence against C(5, i): (1, 1/5, 1/10) fails at index 1
    rep = check_ultra_log_concave([1, 1, 1], 5)
    assert not rep.ok and rep.first_failure == 1
    # a binomial row normalizes to all ones: equality throughout
    row = [comb(6, i) for i in range(7)]
    rep = check_ultra_log_concave(row, 6)
    assert rep.ok and set(rep.verdicts) == {"holds"}


def test_p7_at_k2_example(inv45):
    _qp, _q, p = inv45
    row = [p[(7, k)] for k in range(5)]
    assert row == [1, 2, 4, 2, 1]
    assert row[2] ** 2 == 16
    assert row[2] ** 2 >= row[1] * row[3] == 4


def test_mult_lc_single_partition(table15):
    out = check_mult_lc(table15, 8, (7, 1))
    assert out["p"].ok and out["q"].ok
    # degenerate labels give all-zero rows, vacuously log-concave
    out = check_mult_lc(table15, 8, (2, 2, 2, 2))
    assert out["p"].ok and out["q"].ok


def test_mult_lc_trivial_label_is_invariant_row(table15, inv45):
    # lam = (n) reduces to the quotient Betti rows
    from m0nbar.concavity import mult_sequences

    _qp, q, p = inv45
    for n in (6, 9):
        p_row, q_row = mult_sequences(table15, n, (n,))
        assert p_row == [p[(n, k)] for k in range(n - 2)]
        assert q_row == [q[(n, k)] for k in range(n - 1)]


def test_mult_lc_all(table15):
    result = check_mult_lc_all(table15, 8)
    assert result["verdict"] == "holds"
    assert result["conjecture"] == "mult_lc"
    assert result["sequences_checked"] == 2 * 22  # two rows per partition of 8


def test_equiv_lc_weak_and_strong(table15):
    weak = check_equiv_lc(table15, 7, strong=False)
    strong = check_equiv_lc(table15, 7, strong=True)
    assert weak["verdict"] == "holds"
    assert strong["verdict"] == "holds"
    # weak tuples are a subset of strong tuples
    assert weak["tuples_checked"] <= strong["tuples_checked"]
    assert weak["mode"] == "weak" and strong["mode"] == "strong"
    assert strong["witness"] is None


def test_equiv_lc_q_side(table15):
    assert check_equiv_lc(table15, 6, strong=True, side="q")["verdict"] == "holds"


def test_equiv_lc_boundary_vacuous(table15):
    # n = 5: the containment of H^0 (x) H^4 in H^2 (x) H^2 appears among
    # the strong tuples; boundary tuples with V_{-1} are vacuous
    result = check_equiv_lc(table15, 5, strong=True)
    assert result["verdict"] == "holds"
    assert result["tuples_checked"] >= 3


def test_equiv_lc_rejects_bad_side(table15):
    with pytest.raises(ValueError):
        check_equiv_lc(table15, 5, side="x")


def test_lc_ratio():
    assert lc_ratio([1, 2, 3], 1) == Fraction(4, 3)
    assert lc_ratio([1, 2, 3], 0) is None
    assert lc_ratio([0, 2, 0], 1) is None


def test_leading_ratio_and_report(inv45):
    _qp, q, p = inv45
    rows = asymptotic_report(1, [20, 40], q, p)
    assert [r["n"] for r in rows] == [20, 40]
    for row in rows:
        assert row["q_limit"] == Fraction(4, 3)
        assert row["ultra_q_limit"] == Fraction(2, 3)
        assert row["q_ratio"] is not None
    r20 = leading_ratio(q, 20, 1)
    assert r20 == Fraction(q[(20, 1)], 20)  # c_1 = 1


def test_ultra_witness_found(inv45):
    _qp, q, _p = inv45
    witness = find_ultra_witness(q, 45)
    assert witness == {"n": 6, "k": 1, "ratio": "6/7"}


def test_p_equality_pattern_k1(inv45):
    # at k = 1 the quotient rows satisfy the inequality for all n, with
    # equality exactly at odd n
    _qp, _q, p = inv45
    for n in range(5, 42):
        lhs = p[(n, 1)] ** 2
        rhs = p[(n, 0)] * p[(n, 2)]
        assert lhs >= rhs, n
        if n % 2 == 1:
            assert lhs == rhs, n
        else:
            assert lhs > rhs, n
