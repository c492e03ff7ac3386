"""Fast integer-series path on Z[[q,t]].

Everything here works with BiSeries (never SymPoly), which is what makes
large n reachable.  The invariant character series fq+ and fq satisfy

    fq+ = q + sum_{r>=3} (t + ... + t^{r-2}) (h_r o fq+),
    Exp(t fq+) = t^2 Exp(fq+) + (1 - t)(1 + t + qt),
    fq  = Exp(fq+),

and the quotient Poincare polynomials fp_n follow from

    (1+t) fp_n = fq_n - (1/2) t (sum_{h=2}^{n-2} fq_h fq_{n-h} - fq_{n/2}^[2])

with fq_{n/2} = 0 for odd n and f^[2](t) = f(t^2).

fq+ is built degree by degree from the Exponential identity, maintaining
A = Exp(known part) and B = Exp(t * known part) incrementally; the
per-partition Recursive form is equivalent (and is exercised against
this build in the test suite) but enumerates p(n) partitions per degree,
which is hopeless at the n ~ 300 this module must reach.
"""

from __future__ import annotations

from fractions import Fraction
from math import comb, factorial

from .partitions import mobius, partitions_of, z_of
from .series import BiSeries, _norm
from .symfunc import IntegrityError

# ---------------------------------------------------------------------------
# plethysm and Exp/Log on Z[[q,t]]
# ---------------------------------------------------------------------------


def bracket_power(f: BiSeries, m: int) -> BiSeries:
    """f^[m](q, t) = f(q^m, t^m)."""
    return f.bracket_power(m)


def h_plethysm_qt(r: int, f: BiSeries) -> BiSeries:
    """h_r o f = sum_{lam |- r} z_lam^{-1} f^[lam_1] ... f^[lam_l]."""
    if r < 0:
        raise ValueError("r must be nonnegative")
    if r == 0:
        return BiSeries(f.cap_n, f.cap_k, {(0, 0): 1})
    integral = all(isinstance(c, int) for c in f.coeffs.values())
    acc = BiSeries(f.cap_n, f.cap_k, {})
    for lam in partitions_of(r):
        prod = BiSeries(f.cap_n, f.cap_k, {(0, 0): 1})
        for part in lam:
            prod = prod * f.bracket_power(part)
            if prod.is_zero():
                break
        acc = acc + prod.scale(Fraction(1, z_of(lam)))
    if integral and any(not isinstance(c, int) for c in acc.coeffs.values()):
        raise IntegrityError("h_r o f lost integrality on integral input")
    return acc


def _weight_slices(coeffs: dict) -> dict:
    out: dict = {}
    for (n, k), c in coeffs.items():
        out.setdefault(n + k, {})[(n, k)] = c
    return out


def _slice_mul(a: dict, b: dict, cap_n: int, cap_k: int) -> dict:
    out: dict = {}
    for (n1, k1), x in a.items():
        for (n2, k2), y in b.items():
            n, k = n1 + n2, k1 + k2
            if n > cap_n or k > cap_k:
                continue
            out[(n, k)] = out.get((n, k), 0) + x * y
    return out


def exp_qt(f: BiSeries) -> BiSeries:
    """Plethystic exponential Exp(f) = exp(sum_{r>=1} f^[r] / r).

    Computed by the total-weight Euler recursion w G_w = sum_v (theta
    L)_v G_{w-v}, where theta L = sum_r theta(f^[r]) / r has integer
    coefficients whenever f does.
    """
    if f[(0, 0)] != 0:
        raise ValueError("Exp requires a series without constant term")
    cap_n, cap_k = f.cap_n, f.cap_k
    theta_l: dict = {}
    for (n, k), a in f.coeffs.items():
        w = n + k
        r = 1
        while r * n <= cap_n and r * k <= cap_k:
            key = (r * n, r * k)
            theta_l[key] = theta_l.get(key, 0) + w * a
            r += 1
    l_sl = _weight_slices(theta_l)
    g_sl = {0: {(0, 0): 1}}
    out = {(0, 0): 1}
    for w in range(1, cap_n + cap_k + 1):
        acc: dict = {}
        for v in range(1, w + 1):
            lv = l_sl.get(v)
            gv = g_sl.get(w - v)
            if not lv or not gv:
                continue
            for key, c in _slice_mul(lv, gv, cap_n, cap_k).items():
                acc[key] = acc.get(key, 0) + c
        slc: dict = {}
        for key, c in acc.items():
            if c == 0:
                continue
            if isinstance(c, int) and c % w == 0:
                c = c // w
            else:
                c = _norm(Fraction(c) / w)
            slc[key] = c
            out[key] = c
        if slc:
            g_sl[w] = slc
    return BiSeries(cap_n, cap_k, out)


def exp_qt_product_form(f: BiSeries) -> BiSeries:
    """Second route for Exp of an integral series:
    Exp(f) = prod_{(n,k) != (0,0)} (1 - q^n t^k)^{-a_{n,k}}."""
    if f[(0, 0)] != 0:
        raise ValueError("Exp requires a series without constant term")
    cap_n, cap_k = f.cap_n, f.cap_k
    result = BiSeries(cap_n, cap_k, {(0, 0): 1})
    for (n, k), a in sorted(f.coeffs.items()):
        if not isinstance(a, int):
            raise ValueError("product form needs integer exponents")
        jmax = min(cap_n // n if n else cap_n + cap_k,
                   cap_k // k if k else cap_n + cap_k)
        terms = {}
        for j in range(jmax + 1):
            c = comb(a + j - 1, j) if a > 0 else (-1) ** j * comb(-a, j)
            if c:
                terms[(j * n, j * k)] = c
        result = result * BiSeries(cap_n, cap_k, terms)
    return result


def _series_log_qt(x: BiSeries) -> dict:
    """Ordinary series log of x with constant term 1, by total-weight
    slices: w A_w = w X_w - sum_v v A_v X_{w-v}."""
    cap_n, cap_k = x.cap_n, x.cap_k
    x_sl = _weight_slices(x.coeffs)
    if x_sl.get(0) != {(0, 0): 1}:
        raise ValueError("series log requires constant term exactly 1")
    a_sl: dict = {}
    out: dict = {}
    for w in range(1, cap_n + cap_k + 1):
        acc = {key: w * c for key, c in x_sl.get(w, {}).items()}
        for v in range(1, w):
            av, xv = a_sl.get(v), x_sl.get(w - v)
            if not av or not xv:
                continue
            for key, c in _slice_mul(av, xv, cap_n, cap_k).items():
                acc[key] = acc.get(key, 0) - v * c
        slc: dict = {}
        for key, c in acc.items():
            if c == 0:
                continue
            if isinstance(c, int) and c % w == 0:
                c = c // w
            else:
                c = _norm(Fraction(c) / w)
            slc[key] = c
            out[key] = c
        if slc:
            a_sl[w] = slc
    return out


def log_qt(f: BiSeries) -> BiSeries:
    """Plethystic logarithm on Z[[q,t]]:
    Log(f) = sum_{r>=1} (mu(r)/r) log(f^[r])."""
    if f[(0, 0)] != 1:
        raise ValueError("Log requires constant term 1")
    cap_n, cap_k = f.cap_n, f.cap_k
    w0 = min((n + k for (n, k) in f.coeffs if (n, k) != (0, 0)), default=0)
    if w0 == 0:
        return BiSeries(cap_n, cap_k, {})
    acc: dict = {}
    for r in range(1, (cap_n + cap_k) // w0 + 1):
        mu_r = mobius(r)
        if mu_r == 0:
            continue
        scale = Fraction(mu_r, r)
        for key, c in _series_log_qt(f.bracket_power(r)).items():
            val = acc.get(key, 0) + scale * c
            if val == 0:
                acc.pop(key, None)
            else:
                acc[key] = val
    return BiSeries(cap_n, cap_k, acc)


# ---------------------------------------------------------------------------
# The invariant recursion
# ---------------------------------------------------------------------------


def qplus_inv_up_to(cap_n: int, cap_k: int) -> BiSeries:
    """fq+ up to the caps: fq+_1 = 1 and, degree by degree, the unique
    solution of Exp(t fq+) = t^2 Exp(fq+) + (1-t)(1+t+qt).

    At each n the q^n slices A_n of A = Exp(fq+_{<n}) and B_n of
    B = Exp(t fq+_{<n}) give fq+_n = (t A_n - t^{-1} B_n) / (1 - t),
    an exact division whose remainder is asserted to vanish.
    """
    if cap_n < 1:
        raise ValueError("cap_n must be >= 1")
    # B is consumed shifted down by one power of t, and the remainder
    # check at a complete degree n needs B_n up to t^n = t^{cap_k + 2}.
    kp = cap_k + 2
    a = exp_qt(BiSeries(cap_n, kp, {(1, 0): 1}))
    b = exp_qt(BiSeries(cap_n, kp, {(1, 1): 1}))
    out = {(1, 0): 1}
    for n in range(2, cap_n + 1):
        an = a.q_slice(n)
        bn = b.q_slice(n)
        if bn and bn[0] != 0:
            raise IntegrityError(f"Exp(t fq+) not divisible by t at q^{n}")
        num = [0] * (max(len(an) + 1, len(bn)) + 1)
        for k, c in enumerate(an):
            num[k + 1] += c
        for k, c in enumerate(bn):
            if k >= 1:
                num[k - 1] -= c
        complete = n - 2 <= cap_k
        if complete and sum(num) != 0:
            raise IntegrityError(f"nonzero remainder dividing by (1-t) at q^{n}")
        row = []
        partial = 0
        for k in range(min(len(num), cap_k + 1)):
            partial += num[k]
            row.append(partial)
        slice_coeffs = {}
        for k, c in enumerate(row):
            if c != 0:
                if complete and k > n - 2:
                    raise IntegrityError(f"fq+_{n} exceeds t-degree {n - 2}")
                out[(n, k)] = c
                slice_coeffs[(n, k)] = c
        if n < cap_n:
            slc = BiSeries(cap_n, kp, slice_coeffs)
            a = a * exp_qt(slc)
            b = b * exp_qt(BiSeries(cap_n, kp,
                                    {(m, k + 1): c for (m, k), c in slice_coeffs.items()}))
    return BiSeries(cap_n, cap_k, out)


def q_inv_up_to(cap_n: int, cap_k: int, qplus: BiSeries | None = None) -> BiSeries:
    """fq = Exp(fq+) up to the caps."""
    if qplus is None:
        qplus = qplus_inv_up_to(cap_n, cap_k)
    return exp_qt(qplus)


def _p_row(n: int, q: BiSeries) -> list:
    """fp_n as a dense t-polynomial from the wall-crossing relation."""
    cap_k = q.cap_k
    qrow = {m: q.q_slice(m) for m in range(2, n - 1)}
    conv = [0] * (cap_k + 1)
    for h in range(2, n - 1):
        qa, qb = qrow[h], qrow[n - h]
        for i, x in enumerate(qa):
            if x == 0:
                continue
            for j, y in enumerate(qb):
                if i + j <= cap_k:
                    conv[i + j] += x * y
    if n % 2 == 0:
        half = q.q_slice(n // 2)
        for k, c in enumerate(half):
            if 2 * k <= cap_k:
                conv[2 * k] -= c
    num = [0] * (cap_k + 2)
    for k, c in enumerate(q.q_slice(n)):
        num[k] += c
    for k, c in enumerate(conv):
        if c % 2 != 0:
            raise IntegrityError(f"odd convolution coefficient at q^{n} t^{k + 1}")
        if k + 1 < len(num):
            num[k + 1] -= c // 2
    complete = n - 2 <= cap_k
    if complete and sum((-1) ** k * c for k, c in enumerate(num)) != 0:
        raise IntegrityError(f"nonzero remainder dividing by (1+t) at q^{n}")
    row = []
    prev = 0
    for k in range(min(len(num), cap_k + 1)):
        prev = num[k] - prev
        row.append(prev)
    if complete:
        for k in range(n - 2, len(row)):
            if row[k] != 0:
                raise IntegrityError(f"fp_{n} exceeds t-degree {n - 3}")
    while row and row[-1] == 0:
        row.pop()
    return row


def p_inv(n: int, q: BiSeries) -> list:
    """Poincare polynomial of the n-pointed quotient as a coefficient list."""
    if n < 3:
        return [1]
    if q.cap_n < n:
        raise ValueError("fq table does not reach this n")
    return _p_row(n, q)


def p_inv_up_to(cap_n: int, cap_k: int, q: BiSeries | None = None) -> BiSeries:
    """fp up to the caps (fp_n rows for n >= 3; 1 + q + q^2 below)."""
    if q is None:
        q = q_inv_up_to(cap_n, cap_k)
    out = {(0, 0): 1}
    if cap_n >= 1:
        out[(1, 0)] = 1
    if cap_n >= 2:
        out[(2, 0)] = 1
    for n in range(3, cap_n + 1):
        for k, c in enumerate(_p_row(n, q)):
            if c != 0:
                out[(n, k)] = c
    return BiSeries(cap_n, cap_k, out)


# ---------------------------------------------------------------------------
# Rank specialization: the classical characterization of phi
# ---------------------------------------------------------------------------


def _tp_add(a: list, b: list) -> list:
    out = [Fraction(0)] * max(len(a), len(b))
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    return out


def _tp_scale(a: list, c) -> list:
    return [c * x for x in a]


def _tp_mul(a: list, b: list) -> list:
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _qs_mul(a: dict, b: dict, cap: int) -> dict:
    out: dict = {}
    for n1, x in a.items():
        for n2, y in b.items():
            if n1 + n2 > cap:
                continue
            cur = out.get(n1 + n2)
            prod = _tp_mul(x, y)
            out[n1 + n2] = _tp_add(cur, prod) if cur else prod
    return out


def _qs_log1p(phi: dict, cap: int) -> dict:
    """log(1 + phi) for phi with no q^0 term, by n A_n = n phi_n -
    sum m A_m phi_{n-m}."""
    a: dict = {}
    for n in range(1, cap + 1):
        acc = _tp_scale(phi.get(n, []), Fraction(n))
        for m in range(1, n):
            if m in a and (n - m) in phi:
                acc = _tp_add(acc, _tp_scale(_tp_mul(a[m], phi[n - m]), -m))
        if any(acc):
            a[n] = _tp_scale(acc, Fraction(1, n))
    return a


def _qs_exp(ell: dict, cap: int) -> dict:
    """exp(L) for L with no q^0 term, by n B_n = sum m L_m B_{n-m}."""
    b: dict = {0: [Fraction(1)]}
    for n in range(1, cap + 1):
        acc: list = []
        for m in range(1, n + 1):
            if m in ell and (n - m) in b:
                acc = _tp_add(acc, _tp_scale(_tp_mul(ell[m], b[n - m]), m))
        if any(acc):
            b[n] = _tp_scale(acc, Fraction(1, n))
    return b


def solve_phi(cap_n: int) -> dict:
    """Poincare polynomials phi_n of the (n+1)-pointed spaces by solving

        exp(t log(1 + phi)) = t^2 (1 + phi) + (1 - t)(1 + t + qt)

    order by order in q, where phi = q + sum_{n>=2} (phi_n / n!) q^n.
    Returns {n: [integer coefficients of phi_n]}.
    """
    phi_hat: dict = {1: [Fraction(1)]}
    for n in range(2, cap_n + 1):
        w = _qs_log1p(phi_hat, n)
        tw = {m: [Fraction(0)] + row for m, row in w.items()}
        lhs = _qs_exp(tw, n)
        resid = lhs.get(n, [])
        # placeholder phi_hat_n = 0, so [q^n]RHS = 0 for n >= 2 and the
        # correction is resid / (t^2 - t)
        if resid and resid[0] != 0:
            raise IntegrityError(f"phi residual not divisible by t at q^{n}")
        y = resid[1:]  # divided by t
        # divide by (t - 1): g_k = g_{k-1} - y_k, exactness asserted
        g: list = []
        prev = Fraction(0)
        for c in y:
            prev = prev - c
            g.append(prev)
        if g and g[-1] != 0:
            raise IntegrityError(f"phi residual not divisible by (t-1) at q^{n}")
        if g:
            g.pop()
        phi_hat[n] = g
    out = {1: [1]}
    for n in range(2, cap_n + 1):
        row = []
        for c in phi_hat.get(n, []):
            v = c * factorial(n)
            if v.denominator != 1:
                raise IntegrityError(f"non-integral phi_{n}")
            row.append(int(v))
        while row and row[-1] == 0:
            row.pop()
        out[n] = row
    return out


def manin_phi(cap_n: int, rep_table=None) -> dict:
    """phi_n for n <= cap_n, cross-checked against the rank
    specialization of the equivariant table when one is supplied."""
    phi = solve_phi(cap_n)
    if rep_table is not None:
        from .recursion import phi_from_rank

        by_rank = phi_from_rank(rep_table)
        for n in range(1, min(cap_n, rep_table.cap_n) + 1):
            if rep_table.cap_k >= n - 2 and by_rank.get(n) != phi.get(n):
                raise IntegrityError(
                    f"phi routes disagree at n={n}: "
                    f"rank={by_rank.get(n)} vs functional={phi.get(n)}")
    return phi


def euler_check(cap_n: int) -> bool:
    """Verify (1 + chi) log(1 + chi) = 2 chi - q to order q^cap_n, where
    chi is the Euler-characteristic specialization t = 1 of phi."""
    phi = solve_phi(cap_n)
    chi = {n: [Fraction(sum(row), factorial(n))] for n, row in phi.items() if row}
    w = _qs_log1p(chi, cap_n)
    one_plus_chi = dict(chi)
    one_plus_chi[0] = [Fraction(1)]
    lhs = _qs_mul(one_plus_chi, w, cap_n)
    for n in range(1, cap_n + 1):
        left = lhs.get(n, [Fraction(0)])
        right = 2 * chi.get(n, [Fraction(0)])[0] - (1 if n == 1 else 0)
        if left[0] != right or any(left[1:]):
            return False
    return True


# ---------------------------------------------------------------------------
# Asymptotic coefficients
# ---------------------------------------------------------------------------


def asymptotic_c(k: int) -> Fraction:
    """c_k = (k+1)^{k-1} / k!, the leading coefficient of fq_{n,k} k!/n^k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return Fraction(k + 1) ** (k - 1) / factorial(k)


def asymptotic_d(k: int) -> Fraction:
    """d_k = (k+1)^{k-2} / k!, the leading coefficient of fp_{n,k} k!/n^k."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return Fraction(k + 1) ** (k - 2) / factorial(k)


def d_by_convolution(k: int) -> Fraction:
    """d_k = c_k - (1/2) sum_{j=0}^{k-1} c_j c_{k-1-j} (must agree with
    the closed formula)."""
    c = [asymptotic_c(j) for j in range(k + 1)]
    return c[k] - Fraction(1, 2) * sum(c[j] * c[k - 1 - j] for j in range(k))


def c_series(order: int) -> list:
    """Truncated solution of the functional equation c = exp(t c);
    must reproduce asymptotic_c coefficientwise."""
    c = [Fraction(1)]
    for k in range(1, order + 1):
        tc = [Fraction(0)] + c  # t * c, known to degree k
        e = [Fraction(1)] + [Fraction(0)] * k
        for w in range(1, k + 1):
            acc = Fraction(0)
            for v in range(1, w + 1):
                if v < len(tc):
                    acc += v * tc[v] * e[w - v]
            e[w] = acc / w
        c.append(e[k])
    return c
