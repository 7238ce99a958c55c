"""Dense matrix kernels shared by the exact and the float domain.

Matrices are 2-D numpy arrays: ``dtype=object`` holding ``Fraction`` entries
(exact) or ``float64``. Exact elimination pivots on the first nonzero entry;
float elimination uses partial pivoting and treats entries below
``max(rows, cols) * eps * max|M|`` as zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import math

import numpy as np

__all__ = [
    "RankProfile",
    "SingularMatrixError",
    "is_exact",
    "eye_like",
    "zero_tolerance",
    "rref",
    "rank",
    "inverse",
    "solve",
    "full_rank_factorization",
    "pseudoinverse",
    "matmul",
]

EPS = np.finfo(float).eps


class SingularMatrixError(ArithmeticError):
    def __init__(self, n: int, rank: int):
        super().__init__(f"matrix of order {n} is singular (rank {rank}, deficit {n - rank})")
        self.n = n
        self.rank = rank


@dataclass(frozen=True)
class RankProfile:
    rank: int
    pivot_columns: tuple[int, ...]


def is_exact(M: np.ndarray) -> bool:
    return M.dtype == object


def _integer_scaled(M: np.ndarray) -> tuple[np.ndarray, int]:
    """``M = N / d`` with an integer object array ``N``."""
    flat = M.reshape(-1)
    d = math.lcm(*(x.denominator for x in flat)) if flat.size else 1
    N = np.empty(M.shape, dtype=object)
    N.reshape(-1)[:] = [x.numerator * (d // x.denominator) for x in flat]
    return N, d


def _rational_matmul(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    # integer products avoid a gcd per multiply-add; one normalization per entry
    NX, dx = _integer_scaled(X)
    NY, dy = _integer_scaled(Y)
    P = NX @ NY
    d = dx * dy
    out = np.empty(P.shape, dtype=object)
    out.reshape(-1)[:] = [Fraction(int(v), d) for v in P.reshape(-1)]
    return out


def matmul(X: np.ndarray, Y: np.ndarray) -> np.ndarray:
    if is_exact(X):
        return _rational_matmul(X, Y)
    return X @ Y


def eye_like(n: int, M: np.ndarray) -> np.ndarray:
    if is_exact(M):
        out = np.empty((n, n), dtype=object)
        out.fill(Fraction(0))
        for i in range(n):
            out[i, i] = Fraction(1)
        return out
    return np.eye(n)


def _zeros_like(rows: int, cols: int, M: np.ndarray) -> np.ndarray:
    if is_exact(M):
        out = np.empty((rows, cols), dtype=object)
        out.fill(Fraction(0))
        return out
    return np.zeros((rows, cols))


def zero_tolerance(M: np.ndarray, scale: float | None = None) -> float:
    if is_exact(M) or M.size == 0:
        return 0.0
    if scale is None:
        scale = float(np.max(np.abs(M)))
    return max(M.shape) * EPS * scale


def rref(M: np.ndarray, tol: float | None = None) -> tuple[np.ndarray, tuple[int, ...]]:
    """Reduced row echelon form and the pivot columns."""
    R = np.array(M, dtype=object if is_exact(M) else float, copy=True)
    rows, cols = R.shape
    exact = is_exact(R)
    if tol is None:
        tol = zero_tolerance(R)
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        if exact:
            p = next((i for i in range(r, rows) if R[i, c] != 0), None)
        else:
            i = r + int(np.argmax(np.abs(R[r:, c])))
            p = i if abs(R[i, c]) > tol else None
        if p is None:
            if not exact:
                R[r:, c] = 0.0
            continue
        if p != r:
            R[[r, p]] = R[[p, r]]
        R[r] = R[r] / R[r, c]
        for i in range(rows):
            if i != r and R[i, c] != 0:
                R[i] = R[i] - R[i, c] * R[r]
        if not exact:
            R[r + 1:, c] = 0.0
        pivots.append(c)
        r += 1
    if not exact:
        R[r:] = 0.0
    return R, tuple(pivots)


def rank(M: np.ndarray, tol: float | None = None) -> RankProfile:
    _, pivots = rref(M, tol)
    return RankProfile(len(pivots), pivots)


def solve(M: np.ndarray, rhs: np.ndarray, tol: float | None = None) -> np.ndarray:
    """Solve ``M X = rhs`` for square nonsingular ``M``."""
    n, m = M.shape
    if n != m:
        raise ValueError(f"solve needs a square matrix, got {M.shape}")
    rhs = np.asarray(rhs)
    vector = rhs.ndim == 1
    if vector:
        rhs = rhs.reshape(-1, 1)
    if tol is None:
        tol = zero_tolerance(M)
    aug = np.hstack([M, rhs])
    R, pivots = rref(aug, tol)
    if pivots[:n] != tuple(range(n)) or (len(pivots) > n):
        raise SingularMatrixError(n, sum(1 for p in pivots if p < n))
    X = R[:, n:]
    return X.reshape(-1) if vector else X


def inverse(M: np.ndarray, tol: float | None = None) -> np.ndarray:
    n, m = M.shape
    if n != m:
        raise ValueError(f"inverse needs a square matrix, got {M.shape}")
    if tol is None:
        tol = zero_tolerance(M)
    R, pivots = rref(np.hstack([M, eye_like(n, M)]), tol)
    rk = sum(1 for p in pivots if p < n)
    if rk < n:
        raise SingularMatrixError(n, rk)
    return R[:, n:]


def full_rank_factorization(M: np.ndarray, tol: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """``M = F G`` with ``F`` the pivot columns of ``M`` and ``G`` the nonzero rows of its RREF."""
    R, pivots = rref(M, tol)
    r = len(pivots)
    F = np.array(M[:, list(pivots)], dtype=M.dtype).reshape(M.shape[0], r)
    G = np.array(R[:r, :], dtype=M.dtype).reshape(r, M.shape[1])
    return F, G


def pseudoinverse(M: np.ndarray, tol: float | None = None) -> np.ndarray:
    """Moore-Penrose inverse ``G^T (G G^T)^-1 (F^T F)^-1 F^T`` (real transpose)."""
    rows, cols = M.shape
    F, G = full_rank_factorization(M, tol)
    if F.shape[1] == 0:
        return _zeros_like(cols, rows, M)
    FtF = matmul(F.T, F)
    GGt = matmul(G, G.T)
    return matmul(matmul(G.T, inverse(GGt)), matmul(inverse(FtF), F.T))
