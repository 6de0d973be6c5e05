"""Exact computation of Hirzebruch genera and their vertical (fibrewise) versions."""

from .bordism import (
    BordismElement,
    PontryaginCharacter,
    character_product,
    cpn_character,
    element_character,
    elements_equal,
    evaluate_element,
    express_in_generator_basis,
    generator_basis,
    genus_eval,
    parse_element,
)
from .errors import DomainError, InvariantViolation, UsageError, ValidationError, VGeneraError
from .multiseq import (
    BUILTIN_GENERA,
    CHERN,
    PONTRYAGIN,
    GenusSpec,
    MultiplicativeSequence,
    cp_values_from_f,
    g_from_f,
    genus_from_spec,
    kappa_polynomials,
)
from .partitions import Partition, partitions_of
from .polynomial import GradedPoly
from .scalars import QScalar
from .series import (
    TruncatedSeries,
    builtin_series,
    e_from_log,
    f_from_e,
    log_from_cp_values,
    series_compose,
    series_div,
    series_mul,
    series_reverse,
)
from .vertical import (
    FormalFibration,
    base_symbol,
    check_multiplicativity,
    reverse_orientation,
    umkehr,
    vertical_class,
    vertical_genus,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
