"""Exact-arithmetic engine for the S_n-equivariant cohomology series of
moduli of stable rational curves and the Betti numbers of their
unordered-point quotients, with log-concavity diagnostics."""

__version__ = "0.1.0"

from .partitions import mobius, pad, partitions_of, parts_factorial, z_of
from .series import BiSeries
from .symfunc import (
    CapMismatchError,
    IntegrityError,
    SymPoly,
    internal_product,
    inv_project,
    mult_lambda,
    rank_specialize,
    schur_to_h,
    to_h_basis,
    to_p_basis,
    to_schur,
)
from .plethysm import (
    additive_expansion,
    exp_pleth,
    h_plethysm,
    log_pleth,
    p_substitute,
    sign2_plethysm,
    trunc,
)
from .recursion import (
    RepTable,
    build_tables,
    p_from_q,
    q_from_qplus,
    qplus_up_to,
    verify_exponential_identity,
)

__all__ = [
    "BiSeries",
    "CapMismatchError",
    "IntegrityError",
    "RepTable",
    "SymPoly",
    "additive_expansion",
    "build_tables",
    "exp_pleth",
    "h_plethysm",
    "internal_product",
    "inv_project",
    "log_pleth",
    "mobius",
    "mult_lambda",
    "p_from_q",
    "p_substitute",
    "pad",
    "parts_factorial",
    "partitions_of",
    "q_from_qplus",
    "qplus_up_to",
    "rank_specialize",
    "schur_to_h",
    "sign2_plethysm",
    "to_h_basis",
    "to_p_basis",
    "to_schur",
    "trunc",
    "verify_exponential_identity",
    "z_of",
]
