"""Exact Drazin inverses of even-order tensors under the Einstein product."""

from .drazin import DrazinResult, NotGroupInvertibleError, drazin, group_inverse, index_of, nilpotency_degree
from .scalar import FLOAT64, RATIONAL, ScalarDomain, parse_scalar, format_scalar
from .tensor import (
    DimensionError,
    EinsteinTensor,
    Shape,
    dematricize,
    einstein_product,
    identity,
    load_tensor,
    matricize,
    power,
    save_tensor,
    zero,
)

__version__ = "0.1.0"
