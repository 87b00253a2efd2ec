"""Separating sets of multisymmetric invariants, with exact verification."""

from .catalog import (
    CatalogId,
    asymptotic_ratio_constant,
    build_counterexample_S3,
    build_M,
    build_S,
    build_T,
    count_M,
    count_S,
    m0_of,
)
from .fields import FieldSpec, Residue, char_ok_for, pow_nonneg
from .invariants import (
    Invariant,
    InvariantSet,
    admissible_tuples,
    eval_invariant,
    eval_row_monomial,
    expand_invariant,
    expand_set,
    is_elementary_set,
    multidegree,
    satisfies_condition_c,
    sigma,
    tr,
)
from .orbits import Point, apply_perm, canonical_form, same_orbit
from .partitions import Permutation, SetPartition, fixes, meet, min_block, parti, refines, stabilizer_order
from .separation import (
    BudgetExceeded,
    DomainSpec,
    MinimalityReport,
    SeparationReport,
    fingerprint,
    separates,
    verify_expansion_theorem,
    verify_minimal,
    verify_separating,
)

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "CatalogId",
    "DomainSpec",
    "FieldSpec",
    "Invariant",
    "InvariantSet",
    "MinimalityReport",
    "Permutation",
    "Point",
    "Residue",
    "SeparationReport",
    "SetPartition",
    "admissible_tuples",
    "apply_perm",
    "asymptotic_ratio_constant",
    "build_M",
    "build_S",
    "build_T",
    "build_counterexample_S3",
    "canonical_form",
    "char_ok_for",
    "count_M",
    "count_S",
    "eval_invariant",
    "eval_row_monomial",
    "expand_invariant",
    "expand_set",
    "fingerprint",
    "fixes",
    "is_elementary_set",
    "m0_of",
    "meet",
    "min_block",
    "multidegree",
    "parti",
    "pow_nonneg",
    "refines",
    "same_orbit",
    "satisfies_condition_c",
    "separates",
    "sigma",
    "stabilizer_order",
    "tr",
    "verify_expansion_theorem",
    "verify_minimal",
    "verify_separating",
]
