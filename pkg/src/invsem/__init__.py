"""invsem: a verifiable workbench for finite inverse semigroups."""

from .core import (
    ElementSet,
    FiniteSemigroup,
    IdempotentsDontCommute,
    InverseSemigroup,
    NotAssociative,
    NotRegular,
    TooLarge,
    direct_product,
    dom,
    generated_subsemigroup,
    natural_leq,
    principal_left_ideal,
    ran,
    validate,
)

__version__ = "0.1.0"

__all__ = [
    "ElementSet",
    "FiniteSemigroup",
    "IdempotentsDontCommute",
    "InverseSemigroup",
    "NotAssociative",
    "NotRegular",
    "TooLarge",
    "direct_product",
    "dom",
    "generated_subsemigroup",
    "natural_leq",
    "principal_left_ideal",
    "ran",
    "validate",
]
