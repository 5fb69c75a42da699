"""Systems, symmetry generators, charts and Hamiltonians keyed by Weyl type."""

from .catalog import (
    DivisorRow,
    HamiltonianDef,
    NormalizationError,
    PV_PI_PRINTED,
    SystemDef,
    Unavailable,
    b_specialization,
    build_vector_field,
    charts,
    check_normalization,
    divisor_for,
    dump,
    dump_components,
    generator,
    generators,
    hamiltonian,
    invariant_divisors,
    load_dump,
    normalization_residual,
    normalization_text,
    poisson_structure,
    reading_a,
    reading_b,
)
from .types import D3_PRINTED_ALPHAS, DEGENERATE_ALPHAS, TYPES, UnknownWeylType, WeylType, get_type

__all__ = [
    "D3_PRINTED_ALPHAS",
    "DEGENERATE_ALPHAS",
    "DivisorRow",
    "HamiltonianDef",
    "NormalizationError",
    "PV_PI_PRINTED",
    "SystemDef",
    "TYPES",
    "Unavailable",
    "UnknownWeylType",
    "WeylType",
    "b_specialization",
    "build_vector_field",
    "charts",
    "check_normalization",
    "divisor_for",
    "dump",
    "dump_components",
    "generator",
    "generators",
    "get_type",
    "hamiltonian",
    "invariant_divisors",
    "load_dump",
    "normalization_residual",
    "normalization_text",
    "poisson_structure",
    "reading_a",
    "reading_b",
]
