"""Log-concavity battery: plain, ultra, multiplicity and equivariant.

A conjecture that fails produces a report, never a crash; only genuine
engine inconsistencies raise.  Reports serialize to JSON so runs can be
diffed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb

from .invariants import asymptotic_c
from .recursion import RepTable
from .series import BiSeries
from .symfunc import SymPoly, internal_product, schur_slice
from .partitions import partitions_of


@lru_cache(maxsize=4096)
def _schur_view(poly: SymPoly, n: int, k: int) -> tuple:
    """Schur expansion of one graded piece, cached across the battery
    (the H-basis tables are the stored values; S views are derived)."""
    return tuple(sorted(schur_slice(poly, n, k).items()))


@dataclass
class ConcavityReport:
    """Per-index verdicts for one log-concavity check.

    verdicts[i] covers the interior index k = i + 1 and is one of
    "strict" (a_k^2 > a_{k-1} a_{k+1}), "holds" (equality) or "fails".
    """

    name: str
    verdicts: tuple = ()
    first_failure: int | None = None
    meta: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.first_failure is None

    def __bool__(self):
        return self.ok

    def to_json_dict(self) -> dict:
        return {
            "sequence": self.name,
            "verdicts": list(self.verdicts),
            "first_failure": self.first_failure,
            **self.meta,
        }


def check_log_concave(seq, name: str = "") -> ConcavityReport:
    """a_k^2 >= a_{k-1} a_{k+1} at every interior index, exactly."""
    verdicts = []
    first = None
    for k in range(1, len(seq) - 1):
        lhs = seq[k] * seq[k]
        rhs = seq[k - 1] * seq[k + 1]
        if lhs > rhs:
            verdicts.append("strict")
        elif lhs == rhs:
            verdicts.append("holds")
        else:
            verdicts.append("fails")
            if first is None:
                first = k
    return ConcavityReport(name, tuple(verdicts), first,
                           {"length": len(seq)})


def check_ultra_log_concave(seq, n_binom: int, name: str = "") -> ConcavityReport:
    """Log-concavity of (a_i / C(n_binom, i)), in exact rationals."""
    normalized = [Fraction(a, comb(n_binom, i)) for i, a in enumerate(seq)]
    report = check_log_concave(normalized, name)
    report.meta["n_binom"] = n_binom
    return report


def mult_sequences(table: RepTable, n: int, lam) -> tuple[list, list]:
    """Multiplicity of the irreducible labeled by lam across the graded
    pieces: (P_{n,k})_{k=0..n-3} and (Q_{n,k})_{k=0..n-2}."""
    lam = tuple(lam)
    p_row = [dict(_schur_view(table.p[n], n, k)).get(lam, 0)
             for k in range(n - 2)]
    q_row = [dict(_schur_view(table.q[n], n, k)).get(lam, 0)
             for k in range(n - 1)]
    return p_row, q_row


def check_mult_lc(table: RepTable, n: int, lam) -> dict:
    """Log-concavity of the multiplicity sequences for one lam."""
    p_row, q_row = mult_sequences(table, n, lam)
    return {
        "p": check_log_concave(p_row, f"mult_{list(lam)}_P_{n}"),
        "q": check_log_concave(q_row, f"mult_{list(lam)}_Q_{n}"),
    }


def check_mult_lc_all(table: RepTable, n: int) -> dict:
    """check_mult_lc over every lam |- n; returns {"ok": ..., "failures": [...]}."""
    failures = []
    checked = 0
    for lam in partitions_of(n):
        result = check_mult_lc(table, n, lam)
        checked += 2
        for side in ("p", "q"):
            if not result[side].ok:
                failures.append(result[side].to_json_dict())
    return {"conjecture": "mult_lc", "n": n, "verdict": "holds" if not failures else "fails",
            "sequences_checked": checked, "failures": failures}


# ---------------------------------------------------------------------------
# Equivariant log-concavity
# ---------------------------------------------------------------------------


def _graded_slices(poly: SymPoly, n: int, kmax: int) -> list:
    return [poly.slice_k(k) for k in range(kmax + 1)]


def _dominates(big: SymPoly, small: SymPoly) -> bool:
    """Every Schur coefficient of small is <= that of big."""
    for key, c in small.coeffs.items():
        if big.coeffs.get(key, 0) < c:
            return False
    return True


def check_equiv_lc(table: RepTable, n: int, strong: bool = False,
                   side: str = "p") -> dict:
    """Containment V_i (x) V_l in V_j (x) V_k for the graded pieces.

    Weak mode checks consecutive triples (j = k, i = k-1, l = k+1);
    strong mode all i <= j <= k <= l with i + l = j + k.  Out-of-range
    indices are the zero representation and hold vacuously.  side "p"
    checks the n-pointed pieces (the conjectured statement); side "q"
    exposes the same check on the (n+1)-pointed ones.
    """
    if side not in ("p", "q"):
        raise ValueError("side must be 'p' or 'q'")
    poly = table.p[n] if side == "p" else table.q[n]
    kmax = (n - 3) if side == "p" else (n - 2)
    if table.cap_k < kmax:
        raise ValueError("caps truncate the graded range for this n")
    slices = _graded_slices(poly, n, kmax)
    tensors: dict = {}

    def tensor(i: int, j: int) -> SymPoly | None:
        if not 0 <= i <= kmax or not 0 <= j <= kmax:
            return None
        key = (min(i, j), max(i, j))
        if key not in tensors:
            tensors[key] = internal_product(slices[key[0]], slices[key[1]])
        return tensors[key]

    tuples = []
    for j in range(kmax + 1):
        for k in range(j, kmax + 1):
            dmax = (kmax - k) if strong else 1
            for d in range(1, dmax + 1):
                if not strong and j != k:
                    continue
                tuples.append((j - d, j, k, k + d))

    def cost(tup) -> int:
        # tensor size scales with the Schur support of the factors; the
        # full battery can abort early with the cheap tuples done first
        i, j, k, l = tup
        sizes = [len(slices[x].coeffs) for x in (i, j, k, l) if 0 <= x <= kmax]
        return max(sizes, default=0)

    tuples.sort(key=cost)
    witness = None
    checked = 0
    for (i, j, k, l) in tuples:
        checked += 1
        inner = tensor(j, k)
        outer = tensor(i, l)
        if outer is None or outer.is_zero():
            continue  # vacuous: one factor is zero
        if not _dominates(inner, outer):
            witness = [i, j, k, l]
            break
    return {
        "conjecture": "equiv_lc",
        "n": n,
        "mode": "strong" if strong else "weak",
        "side": side,
        "verdict": "holds" if witness is None else "fails",
        "tuples_checked": checked,
        "witness": witness,
    }


# ---------------------------------------------------------------------------
# Asymptotic ratio reporting and witness search
# ---------------------------------------------------------------------------


def lc_ratio(seq, k: int) -> Fraction | None:
    """a_k^2 / (a_{k-1} a_{k+1}) as an exact rational, None at a zero."""
    if k < 1 or k + 1 >= len(seq):
        return None
    denom = seq[k - 1] * seq[k + 1]
    if denom == 0:
        return None
    return Fraction(seq[k] * seq[k], denom)


def asymptotic_report(k: int, n_list, q: BiSeries, p: BiSeries) -> list:
    """Ratio table for one k across n: plain ratios for the two
    coefficient families and their binomial-normalized versions, next to
    the limiting values they approach."""
    q_limit = (1 + Fraction(1, k * k + 2 * k)) ** k
    p_limit = (1 + Fraction(1, k * k + 2 * k)) ** (k - 1)
    ultra_q_limit = Fraction(k, k + 1) * q_limit
    ultra_p_limit = Fraction(k, k + 1) * p_limit
    rows = []
    for n in n_list:
        qrow = [q[(n, j)] for j in range(k + 2)]
        prow = [p[(n, j)] for j in range(k + 2)]
        uq = [Fraction(c, comb(n - 2, j)) for j, c in enumerate(qrow)]
        up = [Fraction(c, comb(n - 3, j)) for j, c in enumerate(prow)]
        rows.append({
            "n": n,
            "k": k,
            "q_ratio": lc_ratio(qrow, k),
            "p_ratio": lc_ratio(prow, k),
            "ultra_q_ratio": lc_ratio(uq, k),
            "ultra_p_ratio": lc_ratio(up, k),
            "q_limit": q_limit,
            "p_limit": p_limit,
            "ultra_q_limit": ultra_q_limit,
            "ultra_p_limit": ultra_p_limit,
        })
    return rows


def leading_ratio(q: BiSeries, n: int, k: int) -> Fraction:
    """fq_{n,k} (k!)^2 / ((k+1)^{k-1} n^k): tends to 1 as n grows."""
    from math import factorial

    return Fraction(q[(n, k)] * factorial(k)) / (asymptotic_c(k) * n ** k)


def find_ultra_witness(q: BiSeries, max_n: int, k: int = 1) -> dict | None:
    """First n <= max_n where the binomial-normalized row of fq fails
    log-concavity at index k."""
    for n in range(k + 3, max_n + 1):
        row = [Fraction(q[(n, j)], comb(n - 2, j)) for j in range(k + 2)]
        ratio = lc_ratio(row, k)
        if ratio is not None and ratio < 1:
            return {"n": n, "k": k, "ratio": str(ratio)}
    return None
