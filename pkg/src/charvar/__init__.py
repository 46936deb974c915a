"""Cartan retraction and Kempf-Ness balancing for free-group representations."""

__version__ = "0.1.0"

from .characters import (
    FreeWord,
    TraceVector,
    evaluate_word,
    parse_word,
    reduce_word,
    sl2_triple,
    trace_coordinates,
    word_list,
)
from .groups import (
    CartanPair,
    GroupDescriptor,
    GroupElement,
    RepresentationTuple,
    cartan_decompose,
    cartan_involution,
    contains,
    in_maximal_compact,
    sample_compact,
    sample_group,
    sample_tuple,
)
from .kempfness import (
    BalanceReport,
    FlowOptions,
    KNResidual,
    Verdict,
    balance_flow,
    conjugate_by_exp,
    is_minimal_candidate,
    kn_residual,
    minimality_certificate,
    orbit_norm,
)
from .linalg import (
    EigenSystem,
    exp_hermitian,
    frobenius_inner,
    hermitian_eig,
    log_posdef,
    polar_decompose,
    posdef_power,
)
from .retraction import (
    RetractionPath,
    check_equivariance,
    retract_element,
    retract_tuple,
    retraction_path,
)
