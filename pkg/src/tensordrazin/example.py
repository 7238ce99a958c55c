"""Embedded fixtures for the worked (2x3)x(2x3) example.

Tensors are transcribed slice by slice: ``slices[(k, l)]`` is the matrix
``X(:, :, k, l)`` (1-based ``k, l``), so the row multi-index comes first.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .scalar import RATIONAL, parse_scalar
from .tensor import EinsteinTensor

__all__ = [
    "from_slices",
    "example_A", "example_B", "example_C", "example_D", "example_D_pattern",
    "example_problem", "perturbed_D",
    "EXPECTED_AD", "EXPECTED_DD", "EXPECTED_ZD", "EXPECTED_SD",
    "expected", "PRINTED_NORMS",
]


def from_slices(row_dims, col_dims, slices: dict) -> EinsteinTensor:
    """Build a 4th-order tensor from its ``(:, :, k, l)`` slices; missing slices are zero."""
    arr = np.empty(tuple(row_dims) + tuple(col_dims), dtype=object)
    arr.fill(Fraction(0))
    for (k, l), rows in slices.items():
        arr[:, :, k - 1, l - 1] = np.array(
            [[parse_scalar(v) for v in row] for row in rows], dtype=object)
    return EinsteinTensor(arr, row_dims, col_dims, RATIONAL)


_A = {
    (1, 1): [[1, 0, 0], [0, 0, 0]],
    (2, 1): [[0, 0, 0], [1, 0, 0]],
    (1, 2): [[0, 1, 0], [0, 0, 0]],
    (2, 2): [[0, 0, 0], [0, 1, 0]],
    (1, 3): [[0, 0, 1], [1, 0, 0]],
    (2, 3): [[0, 0, 0], [0, 0, 0]],
}
_B = {
    (2, 1): [[0, 0], ["1/4", 0], [0, 0]],
    (1, 2): [["1/4", 0], [0, 0], [0, 0]],
    (2, 2): [[0, 0], [0, "1/4"], [0, 0]],
}
_C = {
    (1, 1): [["1/4", 0, "1/4"], [0, 0, 0]],
    (2, 1): [[0, "1/4", 0], [0, 0, 0]],
    (1, 2): [[0, 0, 0], [0, "1/4", 0]],
    (2, 2): [[0, 0, 0], ["1/4", 0, "1/4"]],
    (3, 2): [["1/4", "1/4", "1/4"], ["1/4", 0, "1/4"]],
}
# D = pattern / 2; the perturbation study uses pattern / a
_D_PATTERN = {
    (1, 1): [[1, 0], [0, 0], [0, 0]],
    (2, 1): [[0, 0], [1, 0], [0, 0]],
    (3, 1): [[0, 0], [0, 0], [1, 0]],
    (1, 2): [[0, 1], [1, 0], [0, 0]],
    (2, 2): [[0, 0], [0, 1], [0, 1]],
    (3, 2): [[0, 0], [1, 0], [0, 1]],
}

_AD = {
    (1, 1): [[1, 0, 0], [0, 0, 0]],
    (2, 1): [[0, 0, 0], [1, 0, 0]],
    (1, 2): [[0, 1, 0], [0, 0, 0]],
    (2, 2): [[0, 0, 0], [0, 1, 0]],
    (1, 3): [[0, 0, 1], [-1, 0, 0]],
    (2, 3): [[0, 0, 0], [0, 0, 0]],
}
_DD = {
    (1, 1): [[2, 0], [0, 0], [0, 0]],
    (2, 1): [[0, 0], [2, 0], [0, 0]],
    (3, 1): [[0, 0], [0, 0], [2, 0]],
    (1, 2): [[0, 2], [-2, 0], [0, 0]],
    (2, 2): [[0, 0], [2, 2], [0, -2]],
    (3, 2): [[0, 0], [2, 0], [0, 2]],
}
_ZD = {
    (1, 1): [["128/65", 0], ["-16/65", 0], [0, 0]],
    (2, 1): [["16/65", 0], ["128/65", 0], [0, 0]],
    (3, 1): [[0, 0], [0, 0], [2, 0]],
    (1, 2): [["-63/260", 2], ["-439/260", "1/4"], [0, "-1/4"]],
    (2, 2): [["2/65", 0], ["146/65", 2], [0, -2]],
    (3, 2): [[0, 0], [-2, 0], [0, 2]],
}
_SD = {
    (1, 1): [[1, 0, 0], [0, 0, 0]],
    (2, 1): [["1/65", "8/65", "1/65"], ["64/65", 0, 0]],
    (1, 2): [["8/65", "64/65", "8/65"], ["-8/65", 0, 0]],
    (2, 2): [["-8/65", "1/65", "-8/65"], ["8/65", 1, 0]],
    (1, 3): [["-1/65", "-8/65", "64/65"], ["-64/65", 0, 0]],
    (2, 3): [[0, 0, 0], [0, 0, 0]],
}

A_DIMS = (2, 3)
D_DIMS = (3, 2)


def example_A() -> EinsteinTensor:
    return from_slices(A_DIMS, A_DIMS, _A)


def example_B() -> EinsteinTensor:
    return from_slices(D_DIMS, A_DIMS, _B)


def example_C() -> EinsteinTensor:
    return from_slices(A_DIMS, D_DIMS, _C)


def example_D_pattern() -> EinsteinTensor:
    return from_slices(D_DIMS, D_DIMS, _D_PATTERN)


def example_D() -> EinsteinTensor:
    return example_D_pattern().scale(Fraction(1, 2))


def perturbed_D(a) -> EinsteinTensor:
    """The pattern with every nonzero entry replaced by ``1/a``."""
    return example_D_pattern().scale(1 / a)


def example_problem():
    from .modified.problem import ModifiedProblem
    return ModifiedProblem(example_A(), example_B(), example_C(), example_D())


EXPECTED_AD = (A_DIMS, A_DIMS, _AD)
EXPECTED_DD = (D_DIMS, D_DIMS, _DD)
EXPECTED_ZD = (D_DIMS, D_DIMS, _ZD)
EXPECTED_SD = (A_DIMS, A_DIMS, _SD)


def expected(name: str) -> EinsteinTensor:
    """Printed value of ``"AD"``, ``"DD"``, ``"ZD"`` or ``"SD"``."""
    table = {"AD": EXPECTED_AD, "DD": EXPECTED_DD, "ZD": EXPECTED_ZD, "SD": EXPECTED_SD}
    rd, cd, slices = table[name]
    return from_slices(rd, cd, slices)


# printed rational approximations of ||S^D - A^D||, ||A^D||, ||A^D Y||
PRINTED_NORMS = {
    "SD_minus_AD": Fraction(341, 972),
    "AD": Fraction(2158, 881),
    "AD_Y": Fraction(253, 765),
}
