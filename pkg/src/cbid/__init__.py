"""Exact and randomized verification of Chaundy-Bullard type identities."""

from .derivation import (
    DerivationCheck,
    apply_operator,
    check_derivation,
    derive_inverse_identity,
    invert_variables,
    leibniz_expand,
)
from .errors import (
    ArityError,
    BadPrimeError,
    CBIDError,
    DegenerateSamplingError,
    ParameterError,
    PoleError,
)
from .identities import (
    FAMILIES,
    Identity,
    TermInfo,
    VerificationReport,
    build,
    build_base_n,
    build_cb,
    build_gkp,
    build_homogeneous,
    build_inverse_n,
    build_knuth3,
    build_ks27,
    build_n_powers,
    build_s2_one,
    build_three_param,
    build_transformed,
    mutate,
    same_terms,
    verify_exact,
)
from .pit import FuzzConfig, fuzz_verify
from .poly import SparsePoly
from .ratfunc import RationalFunction, rf_sum
from .textfmt import format_poly, format_rf, latex_rf, parse, parse_poly

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
