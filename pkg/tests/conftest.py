import pytest

from m0nbar import invariants
from m0nbar.recursion import build_tables


@pytest.fixture(scope="session")
def table15():
    """Equivariant tables at caps (15, 13): full t-range for every n <= 15."""
    return build_tables(15, 13)


@pytest.fixture(scope="session")
def table12():
    return build_tables(12, 10)


@pytest.fixture(scope="session")
def inv45():
    """(fq+, fq, fp) at caps (45, 43)."""
    qplus = invariants.qplus_inv_up_to(45, 43)
    q = invariants.q_inv_up_to(45, 43, qplus)
    p = invariants.p_inv_up_to(45, 43, q)
    return qplus, q, p
