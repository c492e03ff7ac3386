"""Integer partitions and small number-theoretic helpers.

Partitions are plain tuples of positive integers in nonincreasing order;
the empty tuple is the unique partition of 0.  Everything downstream
(symmetric functions, tree enumeration, caches) indexes by these tuples,
so the canonical enumeration order here fixes the byte layout of every
serialized artifact.
"""

from __future__ import annotations

from functools import cache
from math import factorial

Partition = tuple[int, ...]


def check_partition(lam: Partition) -> None:
    """Raise ValueError unless ``lam`` is a nonincreasing tuple of positive ints."""
    if any(p < 1 for p in lam):
        raise ValueError(f"partition parts must be positive: {lam}")
    if any(lam[i] < lam[i + 1] for i in range(len(lam) - 1)):
        raise ValueError(f"partition parts must be nonincreasing: {lam}")


@cache
def partitions_of(n: int) -> tuple[Partition, ...]:
    """All partitions of n, each once, in descending lexicographic order.

    partitions_of(0) == ((),).
    """
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return ((),)
    out: list[Partition] = []

    def rec(remaining: int, max_part: int, prefix: tuple[int, ...]) -> None:
        if remaining == 0:
            out.append(prefix)
            return
        for part in range(min(max_part, remaining), 0, -1):
            rec(remaining - part, part, prefix + (part,))

    rec(n, n, ())
    return tuple(out)


def z_of(lam: Partition) -> int:
    """Order of the centralizer of a permutation of cycle type ``lam``.

    z_lam = prod_i i^{m_i} * m_i! where m_i is the multiplicity of the
    part i.  z of the empty partition is 1.
    """
    z = 1
    count = 1
    for i, part in enumerate(lam):
        count = count + 1 if i > 0 and lam[i - 1] == part else 1
        z *= part * count
    return z


def multiplicities(lam: Partition) -> tuple[tuple[int, int], ...]:
    """Distinct parts of ``lam`` with their multiplicities, largest part first."""
    groups: list[tuple[int, int]] = []
    for part in lam:
        if groups and groups[-1][0] == part:
            groups[-1] = (part, groups[-1][1] + 1)
        else:
            groups.append((part, 1))
    return tuple(groups)


def pad(lam: Partition, n: int) -> Partition:
    """The padded partition (n - |lam|, lam_1, ..., lam_l).

    Requires n >= |lam| + lam_1 so the result is nonincreasing.
    """
    total = sum(lam)
    if lam and n - total < lam[0]:
        raise ValueError(f"cannot pad {lam} to size {n}: first part would grow")
    if n < total:
        raise ValueError(f"cannot pad {lam} to size {n}: too small")
    return (n - total,) + tuple(lam)


def parts_factorial(lam: Partition) -> int:
    """lam! = product of the factorials of the parts (exact big integer)."""
    out = 1
    for part in lam:
        out *= factorial(part)
    return out


@cache
def mobius(r: int) -> int:
    """Moebius function of r >= 1 by trial factorization."""
    if r < 1:
        raise ValueError("r must be positive")
    out = 1
    d = 2
    while d * d <= r:
        if r % d == 0:
            r //= d
            if r % d == 0:
                return 0
            out = -out
        else:
            d += 1
    if r > 1:
        out = -out
    return out
