"""Exact p-adic exponential sums, Igusa local zeta functions, and
verification checks over a catalog of worked polynomials."""

from .catalog import CatalogEntry, get_entry, load_catalog
from .charsum import MultChar, VarietySpec, characters, gauss_coefficient
from .counting import BudgetError, CountTensor, count_tensor, sparse_ord_counts
from .cyclo import Cyclo
from .expsum import ExpSumValue, exp_sum, exp_sum_direct, s_f_composite
from .polys import IntPolynomial, ZConstraint, parse_polynomial
from .resolution import Divisor, ResolutionData, Stratum, Witness
from .zeta import RationalZeta, SeriesPrefix, denef_rational, poles, zeta_series_empirical

__version__ = "0.1.0"

__all__ = [
    "BudgetError",
    "CatalogEntry",
    "CountTensor",
    "Cyclo",
    "Divisor",
    "ExpSumValue",
    "IntPolynomial",
    "MultChar",
    "RationalZeta",
    "ResolutionData",
    "SeriesPrefix",
    "Stratum",
    "VarietySpec",
    "Witness",
    "ZConstraint",
    "characters",
    "count_tensor",
    "denef_rational",
    "exp_sum",
    "exp_sum_direct",
    "gauss_coefficient",
    "get_entry",
    "load_catalog",
    "parse_polynomial",
    "poles",
    "s_f_composite",
    "sparse_ord_counts",
    "zeta_series_empirical",
    "__version__",
]
