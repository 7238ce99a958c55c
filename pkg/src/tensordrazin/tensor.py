"""Dense even-order tensors under the Einstein product.

A tensor in ``C^{I_1 x..x I_N x J_1 x..x J_M}`` is stored as a numpy array of
shape ``row_dims + col_dims`` (row-major over the concatenated multi-index).
Its matricization is the ``prod(I) x prod(J)`` reshape; the Einstein product
is the matrix product of matricizations, mapped back.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .linalg import matmul
from .scalar import (
    FLOAT64,
    RATIONAL,
    ScalarDomain,
    coerce,
    domain_named,
    format_scalar,
    parse_scalar,
    to_float,
)

__all__ = [
    "Shape",
    "DimensionError",
    "EinsteinTensor",
    "einstein_product",
    "identity",
    "zero",
    "diagonal",
    "power",
    "matricize",
    "dematricize",
    "tensor_sum",
    "load_tensor",
    "save_tensor",
    "tensor_to_dict",
    "tensor_from_dict",
]


class DimensionError(ValueError):
    """Raised when tensor shapes do not chain or do not agree."""


@dataclass(frozen=True)
class Shape:
    row_dims: tuple[int, ...]
    col_dims: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "row_dims", tuple(int(d) for d in self.row_dims))
        object.__setattr__(self, "col_dims", tuple(int(d) for d in self.col_dims))
        if not self.row_dims or not self.col_dims:
            raise DimensionError("row and column dimension lists must be non-empty")
        if any(d < 1 for d in self.row_dims + self.col_dims):
            raise DimensionError(f"dimensions must be positive, got {self}")

    @property
    def rows(self) -> int:
        return math.prod(self.row_dims)

    @property
    def cols(self) -> int:
        return math.prod(self.col_dims)

    @property
    def square(self) -> bool:
        return self.row_dims == self.col_dims

    @property
    def full(self) -> tuple[int, ...]:
        return self.row_dims + self.col_dims

    def __str__(self):
        rd = "x".join(map(str, self.row_dims))
        cd = "x".join(map(str, self.col_dims))
        return f"({rd})x({cd})"


class EinsteinTensor:
    """Immutable dense tensor with split row/column multi-dimensions."""

    __slots__ = ("shape", "domain", "_data")

    def __init__(self, data, row_dims: Sequence[int], col_dims: Sequence[int],
                 domain: ScalarDomain = RATIONAL):
        shape = Shape(tuple(row_dims), tuple(col_dims))
        arr = np.asarray(data, dtype=object if domain.exact else float)
        if arr.size != shape.rows * shape.cols:
            raise DimensionError(
                f"{arr.size} entries given for shape {shape} "
                f"({shape.rows * shape.cols} expected)")
        arr = arr.reshape(shape.full)
        if domain.exact:
            arr = _as_fractions(arr)
        else:
            arr = np.array(arr, dtype=float)
        arr.flags.writeable = False
        self.shape = shape
        self.domain = domain
        self._data = arr

    @classmethod
    def _wrap(cls, arr: np.ndarray, shape: Shape, domain: ScalarDomain) -> "EinsteinTensor":
        # trusted constructor: arr already has the right dtype and element types
        obj = cls.__new__(cls)
        arr = arr.reshape(shape.full)
        arr.flags.writeable = False
        obj.shape = shape
        obj.domain = domain
        obj._data = arr
        return obj

    @classmethod
    def from_matrix(cls, matrix, row_dims, col_dims, domain: ScalarDomain | None = None):
        matrix = np.asarray(matrix)
        if domain is None:
            domain = RATIONAL if matrix.dtype == object else FLOAT64
        return dematricize(matrix, Shape(tuple(row_dims), tuple(col_dims)), domain)

    # -- accessors -------------------------------------------------------

    @property
    def row_dims(self) -> tuple[int, ...]:
        return self.shape.row_dims

    @property
    def col_dims(self) -> tuple[int, ...]:
        return self.shape.col_dims

    @property
    def data(self) -> np.ndarray:
        """Read-only view of shape ``row_dims + col_dims``."""
        return self._data

    @property
    def matrix(self) -> np.ndarray:
        """Read-only matricization (``prod(row_dims) x prod(col_dims)``)."""
        return self._data.reshape(self.shape.rows, self.shape.cols)

    @property
    def square(self) -> bool:
        return self.shape.square

    def entry(self, *idx: int):
        """Entry at a 1-based full multi-index ``(i1, .., iN, j1, .., jM)``."""
        if len(idx) != len(self.shape.full):
            raise IndexError(f"expected {len(self.shape.full)} indices")
        return self._data[tuple(i - 1 for i in idx)]

    def flat_entries(self) -> list:
        return list(self._data.reshape(-1))

    def max_abs(self) -> float:
        if self._data.size == 0:
            return 0.0
        return max(abs(to_float(x)) for x in self._data.reshape(-1))

    # -- predicates ------------------------------------------------------

    def is_zero(self, scale: float = 1.0) -> bool:
        if self.domain.exact:
            return all(x == 0 for x in self._data.reshape(-1))
        return self.max_abs() <= self.domain.tol * max(1.0, scale)

    def equals(self, other: "EinsteinTensor", scale: float = 1.0) -> bool:
        if self.shape != other.shape:
            return False
        return (self - other).is_zero(scale)

    def __eq__(self, other):
        if not isinstance(other, EinsteinTensor):
            return NotImplemented
        return (self.shape == other.shape and self.domain == other.domain
                and bool(np.all(self._data == other._data)))

    __hash__ = None

    # -- arithmetic ------------------------------------------------------

    def _check_same(self, other: "EinsteinTensor", op: str):
        if not isinstance(other, EinsteinTensor):
            raise TypeError(f"cannot {op} EinsteinTensor and {type(other).__name__}")
        if self.shape != other.shape:
            raise DimensionError(f"cannot {op} tensors of shapes {self.shape} and {other.shape}")
        if self.domain != other.domain:
            raise DimensionError(f"cannot {op} {self.domain.name} and {other.domain.name} tensors")

    def __add__(self, other):
        self._check_same(other, "add")
        return EinsteinTensor._wrap(self._data + other._data, self.shape, self.domain)

    def __sub__(self, other):
        self._check_same(other, "subtract")
        return EinsteinTensor._wrap(self._data - other._data, self.shape, self.domain)

    def __neg__(self):
        return EinsteinTensor._wrap(-self._data, self.shape, self.domain)

    def scale(self, s) -> "EinsteinTensor":
        s = coerce(s, self.domain)
        return EinsteinTensor._wrap(self._data * s, self.shape, self.domain)

    def __mul__(self, s):
        if isinstance(s, EinsteinTensor):
            raise TypeError("use @ for the Einstein product")
        return self.scale(s)

    __rmul__ = __mul__

    def __matmul__(self, other):
        return einstein_product(self, other)

    def __pow__(self, l: int):
        return power(self, l)

    def astype(self, domain: ScalarDomain) -> "EinsteinTensor":
        if domain == self.domain:
            return self
        if domain.exact:
            return EinsteinTensor(self._data, self.row_dims, self.col_dims, domain)
        flat = np.array([to_float(x) for x in self._data.reshape(-1)], dtype=float)
        return EinsteinTensor._wrap(flat, self.shape, domain)

    def transpose_matrix(self) -> "EinsteinTensor":
        """Tensor whose matricization is the transpose of this one's."""
        return dematricize(self.matrix.T.copy(), Shape(self.col_dims, self.row_dims), self.domain)

    def __repr__(self):
        return f"EinsteinTensor(shape={self.shape}, domain={self.domain.name})"


def _as_fractions(arr: np.ndarray) -> np.ndarray:
    out = np.empty(arr.shape, dtype=object)
    flat_in = arr.reshape(-1)
    flat_out = out.reshape(-1)
    for i, x in enumerate(flat_in):
        flat_out[i] = x if type(x) is Fraction else coerce(x, RATIONAL)
    return out


def einstein_product(A: EinsteinTensor, B: EinsteinTensor) -> EinsteinTensor:
    if A.col_dims != B.row_dims:
        raise DimensionError(
            f"Einstein product needs A.col_dims == B.row_dims, got {A.col_dims} and {B.row_dims}")
    if A.domain != B.domain:
        raise DimensionError(f"cannot multiply {A.domain.name} and {B.domain.name} tensors")
    if A.domain.exact:
        prod = matmul(A.matrix, B.matrix)
    else:
        prod = A.matrix @ B.matrix
    return EinsteinTensor._wrap(prod, Shape(A.row_dims, B.col_dims), A.domain)



def identity(dims: Sequence[int], domain: ScalarDomain = RATIONAL) -> EinsteinTensor:
    n = math.prod(dims)
    return diagonal(dims, [domain.one()] * n, domain)


def zero(shape: Shape | tuple, domain: ScalarDomain = RATIONAL) -> EinsteinTensor:
    if not isinstance(shape, Shape):
        shape = Shape(*shape)
    arr = np.empty((shape.rows, shape.cols), dtype=domain.dtype)
    arr.fill(domain.zero())
    return EinsteinTensor._wrap(arr, shape, domain)


def diagonal(dims: Sequence[int], values: Sequence, domain: ScalarDomain = RATIONAL) -> EinsteinTensor:
    dims = tuple(dims)
    n = math.prod(dims)
    if len(values) != n:
        raise DimensionError(f"diagonal needs {n} values, got {len(values)}")
    arr = zero(Shape(dims, dims), domain).matrix.copy()
    for i, v in enumerate(values):
        arr[i, i] = coerce(v, domain)
    return EinsteinTensor._wrap(arr, Shape(dims, dims), domain)


def power(A: EinsteinTensor, l: int) -> EinsteinTensor:
    if not A.square:
        raise DimensionError(f"power needs a square tensor, got {A.shape}")
    if l < 0:
        raise ValueError("negative powers are not defined")
    result = identity(A.row_dims, A.domain)
    base = A
    # binary powering; the product is associative
    while l:
        if l & 1:
            result = result @ base
        l >>= 1
        if l:
            base = base @ base
    return result


def matricize(A: EinsteinTensor) -> np.ndarray:
    return A.matrix.copy()


def dematricize(M, shape: Shape, domain: ScalarDomain | None = None) -> EinsteinTensor:
    M = np.asarray(M)
    if M.ndim != 2 or M.shape != (shape.rows, shape.cols):
        raise DimensionError(f"matrix of shape {M.shape} does not match tensor shape {shape}")
    if domain is None:
        domain = RATIONAL if M.dtype == object else FLOAT64
    return EinsteinTensor(M, shape.row_dims, shape.col_dims, domain)


def tensor_sum(terms: Iterable[EinsteinTensor], like: EinsteinTensor) -> EinsteinTensor:
    """Sum of ``terms``; the empty sum is the zero tensor shaped like ``like``."""
    total = zero(like.shape, like.domain)
    for t in terms:
        total = total + t
    return total


# -- file format ---------------------------------------------------------

def tensor_to_dict(T: EinsteinTensor, sparse: bool = False) -> dict:
    out = {
        "row_dims": list(T.row_dims),
        "col_dims": list(T.col_dims),
        "domain": T.domain.name,
    }
    if sparse:
        entries = []
        for idx in np.ndindex(*T.shape.full):
            v = T.data[idx]
            if v != 0:
                entries.append({"idx": [i + 1 for i in idx], "value": format_scalar(v)})
        out["entries"] = entries
    else:
        out["entries"] = [format_scalar(v) for v in T.flat_entries()]
    return out


def tensor_from_dict(obj: dict) -> EinsteinTensor:
    try:
        row_dims = [int(d) for d in obj["row_dims"]]
        col_dims = [int(d) for d in obj["col_dims"]]
        domain = domain_named(obj.get("domain", "rational"))
        entries = obj["entries"]
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed tensor record: {exc}") from exc
    shape = Shape(tuple(row_dims), tuple(col_dims))
    size = shape.rows * shape.cols
    if entries and isinstance(entries[0], dict):
        arr = np.empty(shape.full, dtype=domain.dtype)
        arr.fill(domain.zero())
        for e in entries:
            idx = tuple(int(i) - 1 for i in e["idx"])
            if len(idx) != len(shape.full) or any(
                    not 0 <= i < d for i, d in zip(idx, shape.full)):
                raise ValueError(f"index {e['idx']} out of range for shape {shape}")
            arr[idx] = parse_scalar(e["value"], domain)
        return EinsteinTensor(arr, row_dims, col_dims, domain)
    if len(entries) == 0 and size:
        return zero(shape, domain)
    if len(entries) != size:
        raise ValueError(f"{len(entries)} dense entries given, {size} expected for {shape}")
    values = [parse_scalar(v, domain) for v in entries]
    return EinsteinTensor(np.array(values, dtype=domain.dtype), row_dims, col_dims, domain)


def save_tensor(T: EinsteinTensor, path: str | Path, sparse: bool = False) -> None:
    Path(path).write_text(json.dumps(tensor_to_dict(T, sparse=sparse), indent=1) + "\n")


def load_tensor(path: str | Path) -> EinsteinTensor:
    return tensor_from_dict(json.loads(Path(path).read_text()))
