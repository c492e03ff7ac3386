"""Truncated bivariate power series in q and t with exact coefficients.

BiSeries is the value type for everything living in Z[[q,t]] (or Q[[q,t]]
for rank images): the images of the trivial-multiplicity projection and of
the rank homomorphism, and the fast integer recursion for the quotient
Poincare polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction


def _norm(c):
    """Collapse Fractions with denominator 1 to int."""
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


@dataclass(frozen=True)
class BiSeries:
    """Sparse exact series sum c_{n,k} q^n t^k truncated at (cap_n, cap_k)."""

    cap_n: int
    cap_k: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (n, k), c in self.coeffs.items():
            if n > self.cap_n or k > self.cap_k or n < 0 or k < 0:
                continue
            c = _norm(c)
            if c != 0:
                clean[(n, k)] = c
        object.__setattr__(self, "coeffs", clean)

    # -- basic accessors ---------------------------------------------------

    def __getitem__(self, key: tuple[int, int]):
        return self.coeffs.get(key, 0)

    def q_slice(self, n: int) -> list:
        """Coefficient of q^n as a dense t-polynomial (list of coefficients)."""
        top = max((k for (m, k) in self.coeffs if m == n), default=-1)
        out = [0] * (top + 1)
        for (m, k), c in self.coeffs.items():
            if m == n:
                out[k] = c
        return out

    def is_zero(self) -> bool:
        return not self.coeffs

    def terms(self):
        """Terms in canonical (n, k) order."""
        return sorted(self.coeffs.items())

    def __eq__(self, other):
        return (
            isinstance(other, BiSeries)
            and self.cap_n == other.cap_n
            and self.cap_k == other.cap_k
            and self.coeffs == other.coeffs
        )

    # -- ring operations ---------------------------------------------------

    def _check_caps(self, other: "BiSeries") -> None:
        if (self.cap_n, self.cap_k) != (other.cap_n, other.cap_k):
            raise ValueError(
                f"cap mismatch: {(self.cap_n, self.cap_k)} vs {(other.cap_n, other.cap_k)}"
            )

    def __add__(self, other: "BiSeries") -> "BiSeries":
        self._check_caps(other)
        out = dict(self.coeffs)
        for key, c in other.coeffs.items():
            out[key] = out.get(key, 0) + c
        return BiSeries(self.cap_n, self.cap_k, out)

    def __neg__(self) -> "BiSeries":
        return BiSeries(self.cap_n, self.cap_k, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other: "BiSeries") -> "BiSeries":
        return self + (-other)

    def scale(self, c) -> "BiSeries":
        return BiSeries(self.cap_n, self.cap_k, {k: c * v for k, v in self.coeffs.items()})

    def __mul__(self, other: "BiSeries") -> "BiSeries":
        self._check_caps(other)
        out: dict = {}
        for (n1, k1), a in self.coeffs.items():
            for (n2, k2), b in other.coeffs.items():
                n, k = n1 + n2, k1 + k2
                if n > self.cap_n or k > self.cap_k:
                    continue
                key = (n, k)
                out[key] = out.get(key, 0) + a * b
        return BiSeries(self.cap_n, self.cap_k, out)

    def bracket_power(self, m: int) -> "BiSeries":
        """f^[m](q, t) = f(q^m, t^m), truncated to the caps."""
        if m < 1:
            raise ValueError("m must be >= 1")
        if m == 1:
            return self
        out = {}
        for (n, k), c in self.coeffs.items():
            if n * m <= self.cap_n and k * m <= self.cap_k:
                out[(n * m, k * m)] = c
        return BiSeries(self.cap_n, self.cap_k, out)

    def truncate(self, cap_n: int, cap_k: int) -> "BiSeries":
        if cap_n > self.cap_n or cap_k > self.cap_k:
            raise ValueError("truncation caps must not exceed current caps")
        return BiSeries(cap_n, cap_k, dict(self.coeffs))

    # -- serialization -----------------------------------------------------

    def to_json_dict(self) -> dict:
        terms = [
            {"q": n, "t": k, "c": _coeff_str(c)}
            for (n, k), c in self.terms()
        ]
        return {"cap_n": self.cap_n, "cap_k": self.cap_k, "terms": terms}

    @classmethod
    def from_json_dict(cls, data: dict) -> "BiSeries":
        coeffs = {
            (term["q"], term["t"]): _coeff_from_str(term["c"])
            for term in data["terms"]
        }
        return cls(data["cap_n"], data["cap_k"], coeffs)


def _coeff_str(c) -> str:
    if isinstance(c, Fraction):
        return f"{c.numerator}/{c.denominator}"
    return str(c)


def _coeff_from_str(s: str):
    if "/" in s:
        num, den = s.split("/")
        return _norm(Fraction(int(num), int(den)))
    return int(s)
