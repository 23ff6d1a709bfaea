"""Generalized Dedekind eta functions eta_chi, their cusp orders, and exact
eta-quotient decomposition on Gamma_0(N)."""

from .analytic import (
    TailBoundError,
    UnimodularMatrix,
    estimate_multiplier,
    eta_chi_order_numeric,
    eval_series,
    g2_constant_term,
    zeta_shifted,
)
from .characters import DirChar, char_from_spec, enumerate_primitive_chars, gauss_sum, principal
from .cusps import Cusp, cusp_equivalent, enumerate_cusps, eta_chi_cusp_order, width
from .decompose import (
    DecompositionProblem,
    DecompositionResult,
    LevelClass,
    build_basis,
    decompose,
    sturm_bound,
    supported_level,
    verify_quotient,
)
from .eisenstein import e2_series, e2t_series
from .eta import EtaQuotientExpr, eta_chi_moebius_expand, eta_chi_series, eta_series, expand_quotient
from .exactfield import CycNum
from .qseries import QSeries

__version__ = "0.1.0"

__all__ = [
    "CycNum",
    "QSeries",
    "DirChar",
    "char_from_spec",
    "principal",
    "gauss_sum",
    "enumerate_primitive_chars",
    "e2_series",
    "e2t_series",
    "EtaQuotientExpr",
    "eta_series",
    "eta_chi_series",
    "eta_chi_moebius_expand",
    "expand_quotient",
    "Cusp",
    "enumerate_cusps",
    "cusp_equivalent",
    "width",
    "eta_chi_cusp_order",
    "UnimodularMatrix",
    "TailBoundError",
    "zeta_shifted",
    "g2_constant_term",
    "eta_chi_order_numeric",
    "eval_series",
    "estimate_multiplier",
    "LevelClass",
    "DecompositionProblem",
    "DecompositionResult",
    "supported_level",
    "sturm_bound",
    "build_basis",
    "decompose",
    "verify_quotient",
]
