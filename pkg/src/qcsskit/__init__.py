"""Quasi-complementary sequence sets built from finite-field characters."""

from .charsum import (
    PolynomialOverField,
    additive_charsum,
    gauss_sum,
    mixed_charsum,
    weil_audit,
)
from .characters import (
    AdditiveCharacter,
    MultiplicativeCharacter,
    UnitRootExponent,
    additive_exponent,
    combine_exponents,
    multiplicative_exponent,
    to_complex,
)
from .codebook import (
    BoundReport,
    Codebook,
    density_regime,
    i_max,
    induce_codebook,
    levenshtein_bounds,
    monotonicity_check,
    scaling_report,
    welch_bound,
)
from .constructions import (
    AdditiveIndex,
    ConstructionParams,
    MixedIndex,
    build_family,
    build_matrix,
    correlation_via_charsum,
    enumerate_indices,
    expected_parameters,
    format_matrix,
    make_params,
    parse_matrix,
)
from .correlation import (
    CorrelationProfile,
    QcssFamily,
    SequenceMatrix,
    correlation_profile,
    delta_opt,
    matrix_corr,
    periodic_corr,
    tightness_rho,
)
from .errors import BudgetExceeded, QcssError
from .field import FieldSpec, arith, build_field, discrete_log, trace

__version__ = "0.1.0"
