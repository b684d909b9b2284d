"""Exact arithmetic for weight-0 Weil numbers over finite fields with CM by cyclotomic fields.

Covers cyclotomic prime splitting, explicit Weil numbers from slope data,
Brauer invariants of endomorphism algebras, searches for auxiliary primes l,
Artin-type primitive-root experiments and a semisimple motive-category model.
"""
from .modmath import (
    BadModulus,
    NotCoprime,
    factorize,
    is_prime,
    is_rth_power_residue,
    multiplicative_order,
    primality,
    totient,
    valuation,
)
from .cyclotomic import (
    CyclotomicField,
    NotFound,
    PrimeSplitting,
    RingElement,
    UnsupportedConductor,
    describe_field,
    find_prime_generator,
    split_prime,
    valuation_vector,
)
from .weil import (
    DivisibilityError,
    Explicit,
    InfinityType,
    NotIntegral,
    SlopeVector,
    WeilElement,
    center_degree,
    construct_weil,
    enumerate_weil,
    kernel_basis,
    slope_of,
    torsion_order,
)
from .brauer import (
    InvariantProfile,
    LocalFieldData,
    cyclic_invariant,
    division_rank,
    is_commutative,
    reciprocity_check,
    tate_invariants,
)
from .lsearch import SearchTask, condition_b, condition_c, condition_d, make_task, search
from .experiments import AbelianField, MTask, enumerate_M, power_obstruction, wieferich_search
from .category import (
    MotiveObject,
    SimpleClass,
    UnsupportedLevel,
    dual,
    simple_from_weil,
    tensor,
    torsion_character_check,
    unit,
)

__version__ = "0.1.0"

__all__ = [
    "AbelianField",
    "BadModulus",
    "CyclotomicField",
    "DivisibilityError",
    "Explicit",
    "InfinityType",
    "InvariantProfile",
    "LocalFieldData",
    "MTask",
    "MotiveObject",
    "NotCoprime",
    "NotFound",
    "NotIntegral",
    "PrimeSplitting",
    "RingElement",
    "SearchTask",
    "SimpleClass",
    "SlopeVector",
    "UnsupportedConductor",
    "UnsupportedLevel",
    "WeilElement",
    "center_degree",
    "condition_b",
    "condition_c",
    "condition_d",
    "construct_weil",
    "cyclic_invariant",
    "describe_field",
    "division_rank",
    "dual",
    "enumerate_M",
    "enumerate_weil",
    "factorize",
    "find_prime_generator",
    "is_commutative",
    "is_prime",
    "is_rth_power_residue",
    "kernel_basis",
    "make_task",
    "multiplicative_order",
    "power_obstruction",
    "primality",
    "reciprocity_check",
    "search",
    "simple_from_weil",
    "slope_of",
    "split_prime",
    "tate_invariants",
    "tensor",
    "torsion_character_check",
    "torsion_order",
    "totient",
    "unit",
    "valuation",
    "valuation_vector",
    "wieferich_search",
]
