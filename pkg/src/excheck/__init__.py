"""excheck: exact verification of exchange properties of set functions.

Decides (with witnesses) the one-item and multi-item exchange axioms of
discrete concavity, valuated-matroid and generalized-matroid conditions,
validates conjugate duality on concrete instances, and checks demand-side
substitutes conditions, all in exact rational arithmetic over dense
bitmask-indexed tables.
"""

from .checkers import (
    ExchangeCertificate,
    Verdict,
    Witness,
    check_family,
    check_local,
    check_multiple_exchange,
    check_single_exchange,
    check_valuated_matroid,
    find_base_exchange,
    find_exchange_set,
    is_generalized_matroid,
    maximizer_exchange,
)
from .core import (
    MAX_GROUND_SIZE,
    PriceVector,
    SetFamily,
    SetFunction,
    SlicePair,
    effective_domain,
    shift_by_price,
    slice_pair,
    with_value,
)
from .duality import (
    BigMPair,
    DualityReport,
    big_m_vectors,
    check_submodular_pair,
    conjugate,
    conjugate_argmax,
    fenchel_gap,
)
from .econ import (
    DemandSet,
    EquivalenceReport,
    PriceSampler,
    SampledVerdict,
    check_gs_at,
    check_gs_sampled,
    check_nc_at,
    check_nc_sampled,
    check_si_at,
    check_si_sampled,
    check_snc,
    demand,
    equivalence_report,
)
from .errors import EmptySliceError, InputError, InternalCheckError
from .generators import (
    EnumerationSpec,
    MatroidSpec,
    enumerate_functions,
    gen_modular_plus_concave,
    gen_rank_valuation,
    gen_weighted_matroid,
    mutate,
)
from .sets import elements_of, mask_from_elements
from .values import NEG_INF, ExtValue, NegInfinity, is_finite, parse_rational

__version__ = "0.1.0"

__all__ = [
    "BigMPair",
    "DemandSet",
    "DualityReport",
    "EmptySliceError",
    "EnumerationSpec",
    "EquivalenceReport",
    "ExchangeCertificate",
    "ExtValue",
    "InputError",
    "InternalCheckError",
    "MAX_GROUND_SIZE",
    "MatroidSpec",
    "NEG_INF",
    "NegInfinity",
    "PriceSampler",
    "PriceVector",
    "SampledVerdict",
    "SetFamily",
    "SetFunction",
    "SlicePair",
    "Verdict",
    "Witness",
    "big_m_vectors",
    "check_family",
    "check_gs_at",
    "check_gs_sampled",
    "check_local",
    "check_multiple_exchange",
    "check_nc_at",
    "check_nc_sampled",
    "check_si_at",
    "check_si_sampled",
    "check_single_exchange",
    "check_snc",
    "check_submodular_pair",
    "check_valuated_matroid",
    "conjugate",
    "conjugate_argmax",
    "demand",
    "effective_domain",
    "elements_of",
    "enumerate_functions",
    "equivalence_report",
    "fenchel_gap",
    "find_base_exchange",
    "find_exchange_set",
    "gen_modular_plus_concave",
    "gen_rank_valuation",
    "gen_weighted_matroid",
    "is_finite",
    "is_generalized_matroid",
    "mask_from_elements",
    "maximizer_exchange",
    "mutate",
    "parse_rational",
    "shift_by_price",
    "slice_pair",
    "with_value",
]
