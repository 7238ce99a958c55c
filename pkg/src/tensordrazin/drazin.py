"""Drazin inverse, group inverse, index and spectral projectors of square tensors.

Everything is computed on the matricization. The Drazin inverse is
``A^k (A^(2k+1))^+ A^k`` with ``k = ind(A)``; in the rational domain the
result is exact.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .scalar import ScalarDomain
from .tensor import DimensionError, EinsteinTensor, dematricize, identity, zero

__all__ = [
    "DrazinResult",
    "NotGroupInvertibleError",
    "index_of",
    "drazin",
    "group_inverse",
    "nilpotency_degree",
]


class NotGroupInvertibleError(ArithmeticError):
    def __init__(self, index: int):
        super().__init__(f"tensor has index {index} > 1 and no group inverse")
        self.index = index


@dataclass(frozen=True)
class DrazinResult:
    drazin: EinsteinTensor
    index: int
    projector_pi: EinsteinTensor
    projector_e: EinsteinTensor

    def astype(self, domain: ScalarDomain) -> "DrazinResult":
        return DrazinResult(self.drazin.astype(domain), self.index,
                            self.projector_pi.astype(domain), self.projector_e.astype(domain))


def _require_square(A: EinsteinTensor, what: str):
    if not A.square:
        raise DimensionError(f"{what} needs a square tensor, got {A.shape}")


def _matrix_power(M: np.ndarray, l: int) -> np.ndarray:
    P = linalg.eye_like(M.shape[0], M)
    for _ in range(l):
        P = linalg.matmul(P, M)
    return P


def _index_from_matrix(M: np.ndarray, tol: float | None) -> int:
    n = M.shape[0]
    prev = n
    P = linalg.eye_like(n, M)
    scale = None if linalg.is_exact(M) else max(1.0, float(np.max(np.abs(M))))
    for l in range(n + 1):
        P = linalg.matmul(P, M)
        t = tol
        if t is None and scale is not None:
            # powers grow like scale**l; keep the zero test relative
            t = linalg.zero_tolerance(P)
        r = linalg.rank(P, t).rank
        if r == prev:
            return l
        prev = r
    return n  # unreachable: rank stabilizes within n steps


def index_of(A: EinsteinTensor, tol: float | None = None) -> int:
    """Smallest ``l`` with ``rank(A^l) == rank(A^(l+1))``; 0 iff invertible."""
    _require_square(A, "index_of")
    return _index_from_matrix(A.matrix, tol)


def drazin(A: EinsteinTensor, tol: float | None = None) -> DrazinResult:
    _require_square(A, "drazin")
    M = A.matrix
    k = _index_from_matrix(M, tol)
    Ak = _matrix_power(M, k)
    A2k1 = _matrix_power(M, 2 * k + 1)
    X = linalg.matmul(linalg.matmul(Ak, linalg.pseudoinverse(A2k1, tol)), Ak)
    XD = dematricize(X, A.shape, A.domain)
    I = identity(A.row_dims, A.domain)
    if k == 0:
        # invertible: the spectral projector is exactly zero
        pi = zero(A.shape, A.domain)
        e = I
    else:
        e = A @ XD
        pi = I - e
    return DrazinResult(XD, k, pi, e)


def group_inverse(A: EinsteinTensor, tol: float | None = None) -> EinsteinTensor:
    res = drazin(A, tol)
    if res.index > 1:
        raise NotGroupInvertibleError(res.index)
    return res.drazin


def nilpotency_degree(X: EinsteinTensor, max_l: int | None = None) -> int | None:
    """Smallest ``l <= max_l`` with ``X^l == 0``, or ``None``."""
    _require_square(X, "nilpotency_degree")
    if max_l is None:
        max_l = X.shape.rows
    scale = max(1.0, X.max_abs())
    P = X
    for l in range(1, max_l + 1):
        if P.is_zero(scale ** l):
            return l
        P = P @ X
    return None
