"""Exact-arithmetic study of fat point schemes in projective space.

The package computes Hilbert functions, multiplicities and regularity
indices of fat point schemes over the rationals, evaluates the Segre-type
upper bound coming from subsets of points on low-dimensional flats, and
provides constructive machinery (flat distributions, hyperplane-product
certificates) together with seeded generators and a batch verification
harness.
"""

from fatpoints.linalg import (
    MODULAR_PRIMES,
    Matrix,
    RrefResult,
    in_span,
    kernel_basis,
    rank,
    rank_mod_p,
    rref,
    set_modular_filter,
)
from fatpoints.geometry import (
    Flat,
    LinearForm,
    ProjPoint,
    coordinate_change_to_origin,
    degeneracy_index,
    extend_flat_avoiding,
    flat_contains,
    general_position_on,
    hyperplane_containing_avoiding,
    span,
)
from fatpoints.schemes import (
    FatPointScheme,
    Form,
    MonomialBasis,
    artinian_quotient_regularity,
    condition_matrix,
    hilbert_function,
    ideal_basis,
    in_fat_ideal,
    monomial_bound_check,
    multiplicity,
    regularity_index,
)
from fatpoints.segre import SegreReport, max_multiplicity_on_flats, segre_T, segre_bound
from fatpoints.constructions import (
    Certificate,
    Distribution,
    Verdict,
    build_certificate,
    cover_threshold,
    distribute_flats,
    removal_recursion_check,
    segre_verdict,
    verify_certificate,
)
from fatpoints.generators import PatternSpec, generate
from fatpoints.harness import BatchReport, batch_check, load_scheme, save_scheme

__all__ = [
    "MODULAR_PRIMES",
    "Matrix",
    "RrefResult",
    "in_span",
    "kernel_basis",
    "rank",
    "rank_mod_p",
    "rref",
    "set_modular_filter",
    "Flat",
    "LinearForm",
    "ProjPoint",
    "coordinate_change_to_origin",
    "degeneracy_index",
    "extend_flat_avoiding",
    "flat_contains",
    "general_position_on",
    "hyperplane_containing_avoiding",
    "span",
    "FatPointScheme",
    "Form",
    "MonomialBasis",
    "artinian_quotient_regularity",
    "condition_matrix",
    "hilbert_function",
    "ideal_basis",
    "in_fat_ideal",
    "monomial_bound_check",
    "multiplicity",
    "regularity_index",
    "SegreReport",
    "max_multiplicity_on_flats",
    "segre_T",
    "segre_bound",
    "Certificate",
    "Distribution",
    "Verdict",
    "build_certificate",
    "cover_threshold",
    "distribute_flats",
    "removal_recursion_check",
    "segre_verdict",
    "verify_certificate",
    "PatternSpec",
    "generate",
    "BatchReport",
    "batch_check",
    "load_scheme",
    "save_scheme",
]

__version__ = "0.1.0"
