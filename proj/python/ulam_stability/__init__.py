"""Ulam stability constants and shadowing for linear recurrences.

    >>> import ulam_stability as us
    >>> spec = us.Spec([5, -6])
    >>> us.best_constant(us.characteristic_roots(spec)).value  # doctest: +ELLIPSIS
    0.4999...
"""

from ._core import (
    ConstantResult,
    RootSet,
    Spec,
    UlamError,
    best_constant,
    characteristic_roots,
    classical_constant,
    closed_form_small_order,
    load_spec,
    parse_spec,
    reference_sum,
    residuals,
    roots_from_list,
    shadow,
    sharpness,
    simulate,
)

__all__ = [
    "ConstantResult",
    "RootSet",
    "Spec",
    "UlamError",
    "best_constant",
    "characteristic_roots",
    "classical_constant",
    "closed_form_small_order",
    "load_spec",
    "parse_spec",
    "reference_sum",
    "residuals",
    "roots_from_list",
    "shadow",
    "sharpness",
    "simulate",
]
