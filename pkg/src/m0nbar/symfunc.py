"""The truncated graded ring of symmetric functions with a t-grading.

A SymPoly is a sparse exact element of Z[[t, h_1, h_2, ...]] (or its
rational extension in the power-sum basis), truncated to a maximal
x-degree cap_n and t-degree cap_k.  Keys are (partition, t-exponent)
pairs; the basis tag says whether the partition indexes h_lambda,
p_lambda or s_lambda.

Multiplication is supported in the multiplicative bases H and P, where
it is multiset union on partition keys.  Basis changes go h <-> p by the
classical z_lambda expansion and Newton's identity, and h -> s by
inverting the unitriangular Jacobi-Trudi expansion of Schur functions in
the h's.

Coefficients are arbitrary-precision ints in H and S, Fractions in P.
A Fraction that clears to an integer is always stored as int, so
integrality of a value is observable as `all ints`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cache, lru_cache
from math import factorial

from .partitions import Partition, partitions_of, z_of
from .series import BiSeries, _norm


class CapMismatchError(ValueError):
    """Binary operation on values with different truncation caps."""


class IntegrityError(RuntimeError):
    """Engine self-contradiction: non-integral coefficient, nonzero
    remainder in an exact division, or a failed cross-check."""


Key = tuple[Partition, int]


def merge_parts(a: Partition, b: Partition) -> Partition:
    """Multiset union of two partitions, re-sorted descending."""
    return tuple(sorted(a + b, reverse=True))


def key_order(key: Key):
    """Canonical order: |lam| ascending, descending-lex on lam, then t."""
    lam, k = key
    return (sum(lam), tuple(-p for p in lam), k)


@dataclass(frozen=True)
class SymPoly:
    basis: str  # "H", "P" or "S"
    cap_n: int
    cap_k: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.basis not in ("H", "P", "S"):
            raise ValueError(f"unknown basis {self.basis!r}")
        clean = {}
        for (lam, k), c in self.coeffs.items():
            if sum(lam) > self.cap_n or k > self.cap_k or k < 0:
                continue
            c = _norm(c)
            if c != 0:
                clean[(lam, k)] = c
        object.__setattr__(self, "coeffs", clean)

    # -- constructors --------------------------------------------------

    @classmethod
    def zero(cls, cap_n: int, cap_k: int, basis: str = "H") -> "SymPoly":
        return cls(basis, cap_n, cap_k, {})

    @classmethod
    def one(cls, cap_n: int, cap_k: int, basis: str = "H") -> "SymPoly":
        return cls(basis, cap_n, cap_k, {((), 0): 1})

    @classmethod
    def gen(cls, lam, cap_n: int, cap_k: int, basis: str = "H",
            t: int = 0, c=1) -> "SymPoly":
        """c * b_lam * t^k for the basis element b in {h, p, s}."""
        return cls(basis, cap_n, cap_k, {(tuple(lam), t): c})

    # -- accessors -------------------------------------------------------

    def caps(self) -> tuple[int, int]:
        return (self.cap_n, self.cap_k)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, lam, t: int = 0):
        return self.coeffs.get((tuple(lam), t), 0)

    def terms(self):
        """Terms in the canonical serialization order."""
        return sorted(self.coeffs.items(), key=lambda item: key_order(item[0]))

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs.values())

    def x_degrees(self) -> list[int]:
        return sorted({sum(lam) for (lam, _k) in self.coeffs})

    def t_degrees(self) -> list[int]:
        return sorted({k for (_lam, k) in self.coeffs})

    def slice_nk(self, n: int, k: int) -> dict:
        """x-degree-n, t-degree-k component as a bare partition -> coeff dict."""
        return {lam: c for (lam, kk), c in self.coeffs.items()
                if kk == k and sum(lam) == n}

    def slice_k(self, k: int, drop_t: bool = True) -> "SymPoly":
        """The t^k component, re-tagged at t-exponent 0 (or kept at k)."""
        t = 0 if drop_t else k
        return SymPoly(self.basis, self.cap_n, self.cap_k,
                       {(lam, t): c for (lam, kk), c in self.coeffs.items() if kk == k})

    def content_key(self):
        """Hashable canonical content, usable as a memoization key."""
        return (self.basis, self.cap_n, self.cap_k, tuple(self.terms()))

    def __eq__(self, other):
        return (isinstance(other, SymPoly)
                and self.basis == other.basis
                and self.caps() == other.caps()
                and self.coeffs == other.coeffs)

    def __hash__(self):
        cached = self.__dict__.get("_hash")
        if cached is None:
            cached = hash(self.content_key())
            object.__setattr__(self, "_hash", cached)
        return cached

    def __repr__(self):
        body = " + ".join(f"{c}*{self.basis.lower()}{list(lam)}t^{k}"
                          for (lam, k), c in self.terms()[:8])
        more = "..." if len(self.coeffs) > 8 else ""
        return f"SymPoly[{self.basis};caps={self.caps()}]({body}{more})"

    # -- additive structure ------------------------------------------------

    def _check_compatible(self, other: "SymPoly") -> None:
        if self.caps() != other.caps():
            raise CapMismatchError(f"cap mismatch: {self.caps()} vs {other.caps()}")
        if self.basis != other.basis:
            raise ValueError(f"basis mismatch: {self.basis} vs {other.basis}")

    def __add__(self, other: "SymPoly") -> "SymPoly":
        self._check_compatible(other)
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0) + c
        return SymPoly(self.basis, self.cap_n, self.cap_k, out)

    def __neg__(self) -> "SymPoly":
        return SymPoly(self.basis, self.cap_n, self.cap_k,
                       {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: "SymPoly") -> "SymPoly":
        return self + (-other)

    def scale(self, c) -> "SymPoly":
        return SymPoly(self.basis, self.cap_n, self.cap_k,
                       {k: c * v for k, v in self.coeffs.items()})

    def t_shift(self, i: int) -> "SymPoly":
        """Multiply by t^i (terms beyond cap_k are truncated away)."""
        return SymPoly(self.basis, self.cap_n, self.cap_k,
                       {(lam, k + i): c for (lam, k), c in self.coeffs.items()})

    def times_tpoly(self, tpoly: dict) -> "SymPoly":
        """Multiply by sum_i tpoly[i] * t^i."""
        out: dict = {}
        for (lam, k), c in self.coeffs.items():
            for i, a in tpoly.items():
                if k + i <= self.cap_k:
                    key = (lam, k + i)
                    out[key] = out.get(key, 0) + a * c
        return SymPoly(self.basis, self.cap_n, self.cap_k, out)

    # -- multiplication ------------------------------------------------

    def __mul__(self, other: "SymPoly") -> "SymPoly":
        """Product in a multiplicative basis: h_lam h_mu = h_{lam u mu}.

        S-basis inputs are converted to H first.
        """
        left = to_h_basis(self) if self.basis == "S" else self
        right = to_h_basis(other) if other.basis == "S" else other
        left._check_compatible(right)
        out = _mul_dicts(left.coeffs, right.coeffs, left.cap_n, left.cap_k)
        return SymPoly(left.basis, left.cap_n, left.cap_k, out)

    def truncate(self, cap_n: int, cap_k: int) -> "SymPoly":
        if cap_n > self.cap_n or cap_k > self.cap_k:
            raise CapMismatchError("truncation caps must not exceed current caps")
        return SymPoly(self.basis, cap_n, cap_k, dict(self.coeffs))

    def with_caps(self, cap_n: int, cap_k: int) -> "SymPoly":
        """Re-tag with larger caps (content unchanged)."""
        if cap_n < self.cap_n or cap_k < self.cap_k:
            raise CapMismatchError("use truncate to shrink caps")
        return SymPoly(self.basis, cap_n, cap_k, dict(self.coeffs))

    def integerized(self) -> "SymPoly":
        """Assert all coefficients integral; raise IntegrityError otherwise."""
        if not self.is_integral():
            bad = next(k for k, c in self.coeffs.items() if not isinstance(c, int))
            raise IntegrityError(f"non-integral coefficient at {bad}: {self.coeffs[bad]}")
        return self

    # -- serialization ---------------------------------------------------

    def to_json_dict(self) -> dict:
        terms = [{"lambda": list(lam), "t": k, "c": _coeff_str(c)}
                 for (lam, k), c in self.terms()]
        return {"basis": self.basis, "cap_n": self.cap_n, "cap_k": self.cap_k,
                "terms": terms}

    @classmethod
    def from_json_dict(cls, data: dict) -> "SymPoly":
        coeffs = {(tuple(t["lambda"]), t["t"]): _coeff_from_str(t["c"])
                  for t in data["terms"]}
        return cls(data["basis"], data["cap_n"], data["cap_k"], coeffs)


def _coeff_str(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def _coeff_from_str(s: str):
    if "/" in s:
        num, den = s.split("/")
        return _norm(Fraction(int(num), int(den)))
    return int(s)


def _mul_dicts(a: dict, b: dict, cap_n: int, cap_k: int) -> dict:
    """Truncated product of two (partition, t) -> coeff dicts in a
    multiplicative basis."""
    if len(a) > len(b):
        a, b = b, a
    out: dict = {}
    for (lam1, k1), c1 in a.items():
        n1 = sum(lam1)
        for (lam2, k2), c2 in b.items():
            k = k1 + k2
            if k > cap_k or n1 + sum(lam2) > cap_n:
                continue
            key = (merge_parts(lam1, lam2), k)
            out[key] = out.get(key, 0) + c1 * c2
    return out


def mul(f: SymPoly, g: SymPoly) -> SymPoly:
    return f * g


# ---------------------------------------------------------------------------
# h <-> p conversion
# ---------------------------------------------------------------------------

@cache
def _h_to_p_part(n: int) -> dict:
    """h_n = sum_{lam |- n} z_lam^{-1} p_lam."""
    return {lam: Fraction(1, z_of(lam)) for lam in partitions_of(n)}


@cache
def _p_to_h_part(n: int) -> dict:
    """p_n in the h basis via Newton's identity
    p_n = n h_n - sum_{i=1}^{n-1} h_i p_{n-i}."""
    if n == 0:
        return {(): 1}
    acc = {(n,): n}
    for i in range(1, n):
        for mu, c in _p_to_h_part(n - i).items():
            key = merge_parts((i,), mu)
            acc[key] = acc.get(key, 0) - c
    return {k: v for k, v in acc.items() if v != 0}


def _fold_parts(lam: Partition, part_expansion) -> dict:
    out = {(): 1}
    for part in lam:
        step = part_expansion(part)
        new: dict = {}
        for mu, a in out.items():
            for nu, b in step.items():
                key = merge_parts(mu, nu)
                new[key] = new.get(key, 0) + a * b
        out = new
    return out


@lru_cache(maxsize=65536)
def _h_lam_to_p(lam: Partition) -> dict:
    return _fold_parts(lam, _h_to_p_part)


@lru_cache(maxsize=65536)
def _p_lam_to_h(lam: Partition) -> dict:
    return _fold_parts(lam, _p_to_h_part)


def _convert(f: SymPoly, expand, new_basis: str) -> SymPoly:
    out: dict = {}
    for (lam, k), c in f.coeffs.items():
        for mu, s in expand(lam).items():
            key = (mu, k)
            val = out.get(key, 0) + c * s
            if val == 0:
                out.pop(key, None)
            else:
                out[key] = val
    return SymPoly(new_basis, f.cap_n, f.cap_k, out)


def to_p_basis(f: SymPoly) -> SymPoly:
    """Expand into power sums (rational coefficients)."""
    if f.basis == "P":
        return f
    if f.basis == "S":
        f = to_h_basis(f)
    return _convert(f, _h_lam_to_p, "P")


def to_h_basis(f: SymPoly) -> SymPoly:
    """Expand into complete homogeneous functions.

    Integrality is not asserted here: P -> H of an arbitrary rational
    input may legitimately stay rational.
    """
    if f.basis == "H":
        return f
    if f.basis == "S":
        out: dict = {}
        for (lam, k), c in f.coeffs.items():
            for mu, s in schur_to_h_dict(lam).items():
                key = (mu, k)
                out[key] = out.get(key, 0) + c * s
        return SymPoly("H", f.cap_n, f.cap_k, out)
    return _convert(f, _p_lam_to_h, "H")


# ---------------------------------------------------------------------------
# Schur basis
# ---------------------------------------------------------------------------

@cache
def schur_to_h_dict(lam: Partition) -> dict:
    """h-expansion of s_lam by the Jacobi-Trudi determinant
    s_lam = det(h_{lam_i - i + j})_{1<=i,j<=l(lam)}.

    Computed by minor expansion along rows with memoization on the
    remaining column set.
    """
    ell = len(lam)
    if ell == 0:
        return {(): 1}

    memo: dict = {}

    def minor(cols: tuple[int, ...]) -> dict:
        if not cols:
            return {(): 1}
        if cols in memo:
            return memo[cols]
        i = ell - len(cols)
        acc: dict = {}
        for pos, c in enumerate(cols):
            m = lam[i] - i + c
            if m < 0:
                continue
            rest = minor(cols[:pos] + cols[pos + 1:])
            sign = -1 if pos % 2 else 1
            for mu, s in rest.items():
                key = merge_parts((m,), mu) if m > 0 else mu
                val = acc.get(key, 0) + sign * s
                if val == 0:
                    acc.pop(key, None)
                else:
                    acc[key] = val
        memo[cols] = acc
        return acc

    return minor(tuple(range(ell)))


def schur_to_h(lam, cap_n: int, cap_k: int, t: int = 0) -> SymPoly:
    """s_lam * t^k as an H-basis SymPoly."""
    lam = tuple(lam)
    return SymPoly("H", cap_n, cap_k,
                   {(mu, t): c for mu, c in schur_to_h_dict(lam).items()})


def _h_slice_to_s(coeffs: dict) -> dict:
    """Schur expansion of a single homogeneous h-basis slice.

    Inverts the unitriangular h-expansion of the Schur functions: the
    ascending-lex smallest surviving h-key is the dominance-minimal
    remaining Schur label, with the same coefficient.
    """
    work = dict(coeffs)
    out: dict = {}
    while work:
        lam = min(work)
        c = work.pop(lam)
        if c == 0:
            continue
        out[lam] = c
        for mu, s in schur_to_h_dict(lam).items():
            if mu == lam:
                continue
            work[mu] = work.get(mu, 0) - c * s
    return out


def to_schur(f: SymPoly) -> SymPoly:
    """Schur expansion of an H-basis (or convertible) value."""
    f = to_h_basis(f)
    out: dict = {}
    slices: dict = {}
    for (lam, k), c in f.coeffs.items():
        slices.setdefault((sum(lam), k), {})[lam] = c
    for (_n, k), slc in slices.items():
        for lam, c in _h_slice_to_s(slc).items():
            out[(lam, k)] = c
    return SymPoly("S", f.cap_n, f.cap_k, out)


def schur_slice(f: SymPoly, n: int, k: int) -> dict:
    """Schur coefficients {lam: mult} of the (x-degree n, t-degree k) piece."""
    f = to_h_basis(f)
    return _h_slice_to_s(f.slice_nk(n, k))


def mult_lambda(f: SymPoly, lam, k: int = 0):
    """Multiplicity of s_lam t^k in f."""
    lam = tuple(lam)
    return schur_slice(f, sum(lam), k).get(lam, 0)


@cache
def specht_dim(lam: Partition) -> int:
    """Dimension of the irreducible S_n-module labeled by lam, by the
    branching recursion over removable corners."""
    lam = tuple(p for p in lam if p > 0)
    if len(lam) <= 1:
        return 1
    total = 0
    for i in range(len(lam)):
        if i == len(lam) - 1 or lam[i] > lam[i + 1]:
            smaller = lam[:i] + (lam[i] - 1,) + lam[i + 1:]
            total += specht_dim(tuple(p for p in smaller if p > 0))
    return total


# ---------------------------------------------------------------------------
# Internal (Kronecker) product
# ---------------------------------------------------------------------------

def internal_product(f: SymPoly, g: SymPoly) -> SymPoly:
    """Frobenius characteristic of the inner tensor product.

    Both inputs must be x-homogeneous of the same degree; t-exponents
    add (graded tensor product).  Computed in the power-sum basis where
    p_lam * p_mu = delta_{lam,mu} z_lam p_lam; the result is returned in
    the Schur basis with integrality asserted for integral inputs.
    """
    if f.caps() != g.caps():
        raise CapMismatchError(f"cap mismatch: {f.caps()} vs {g.caps()}")
    if f.is_zero() or g.is_zero():
        return SymPoly.zero(f.cap_n, f.cap_k, "S")
    deg_f, deg_g = f.x_degrees(), g.x_degrees()
    if len(deg_f) != 1 or len(deg_g) != 1 or deg_f != deg_g:
        raise ValueError(f"internal product needs equal homogeneous degrees, "
                         f"got {deg_f} and {deg_g}")
    check_integral = f.is_integral() and g.is_integral()
    fp, gp = to_p_basis(f), to_p_basis(g)
    by_part: dict = {}
    for (mu, k), c in gp.coeffs.items():
        by_part.setdefault(mu, []).append((k, c))
    out: dict = {}
    for (mu, k1), a in fp.coeffs.items():
        for k2, b in by_part.get(mu, ()):
            k = k1 + k2
            if k > f.cap_k:
                continue
            key = (mu, k)
            out[key] = out.get(key, 0) + z_of(mu) * a * b
    result = to_schur(to_h_basis(SymPoly("P", f.cap_n, f.cap_k, out)))
    if check_integral:
        result = result.integerized()
    return result


# ---------------------------------------------------------------------------
# The two ring homomorphisms out of Lambda[[t]]
# ---------------------------------------------------------------------------

def inv_project(f: SymPoly) -> BiSeries:
    """Trivial-representation projection: t -> t and h_n -> q^n.

    On ch of a representation this reads off the dimension of the
    invariant subspace in each (n, k) graded piece.
    """
    f = to_h_basis(f)
    out: dict = {}
    for (lam, k), c in f.coeffs.items():
        key = (sum(lam), k)
        out[key] = out.get(key, 0) + c
    return BiSeries(f.cap_n, f.cap_k, out)


def rank_specialize(f: SymPoly) -> BiSeries:
    """Rank homomorphism: h_n -> q^n / n!.

    Sends ch of an S_n-representation V in t-degree k to
    dim(V) q^n t^k / n!.
    """
    f = to_h_basis(f)
    out: dict = {}
    for (lam, k), c in f.coeffs.items():
        key = (sum(lam), k)
        w = Fraction(1)
        for part in lam:
            w /= factorial(part)
        out[key] = out.get(key, 0) + c * w
    return BiSeries(f.cap_n, f.cap_k, out)
