"""The quadruple (A, B, C, D) and every quantity derived from it.

Notation follows the usual block-update convention::

    S = A - C D^D B      (modified tensor)
    Z = D - B A^D C      (generalized Schur complement)
    Y = C D^D B,  R = B A^D C,  H = B A^D,  K = A^D C,  F = D^D B,  E = C D^D
    T = A^D + K Z^D H

Drazin inverses are computed lazily and cached, so a caller that only needs
the dual (Z-side) quantities never pays for ``Z^D``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache

from ..drazin import DrazinResult, drazin, nilpotency_degree
from ..scalar import ScalarDomain
from ..tensor import DimensionError, EinsteinTensor, identity

__all__ = ["ModifiedProblem", "DerivedQuantities", "derive"]


@dataclass(frozen=True)
class ModifiedProblem:
    A: EinsteinTensor
    B: EinsteinTensor
    C: EinsteinTensor
    D: EinsteinTensor

    def __post_init__(self):
        A, B, C, D = self.A, self.B, self.C, self.D
        if not A.square:
            raise DimensionError(f"A must be square, got {A.shape}")
        if not D.square:
            raise DimensionError(f"D must be square, got {D.shape}")
        if C.row_dims != A.row_dims or C.col_dims != D.row_dims:
            raise DimensionError(
                f"C must be {A.row_dims}x{D.row_dims}, got {C.row_dims}x{C.col_dims}")
        if B.row_dims != D.row_dims or B.col_dims != A.row_dims:
            raise DimensionError(
                f"B must be {D.row_dims}x{A.row_dims}, got {B.row_dims}x{B.col_dims}")
        domains = {A.domain, B.domain, C.domain, D.domain}
        if len(domains) != 1:
            raise DimensionError("A, B, C, D must share one scalar domain")

    @property
    def domain(self) -> ScalarDomain:
        return self.A.domain

    def astype(self, domain: ScalarDomain) -> "ModifiedProblem":
        return ModifiedProblem(self.A.astype(domain), self.B.astype(domain),
                               self.C.astype(domain), self.D.astype(domain))

    def swapped(self) -> "ModifiedProblem":
        """The problem (D, C, B, A): its modified tensor is Z and its Schur complement is S."""
        return ModifiedProblem(self.D, self.C, self.B, self.A)

    def transposed(self) -> "ModifiedProblem":
        """Transpose every matricization; swaps left/right roles in every formula."""
        return ModifiedProblem(self.A.transpose_matrix(), self.C.transpose_matrix(),
                               self.B.transpose_matrix(), self.D.transpose_matrix())


class DerivedQuantities:
    """All symbols of the modified problem, computed on demand."""

    def __init__(self, problem: ModifiedProblem, *, a_drazin: DrazinResult | None = None,
                 d_drazin: DrazinResult | None = None):
        self.problem = problem
        if a_drazin is not None:
            self.__dict__["a_result"] = a_drazin
        if d_drazin is not None:
            self.__dict__["d_result"] = d_drazin

    # inputs
    @property
    def A(self):
        return self.problem.A

    @property
    def B(self):
        return self.problem.B

    @property
    def C(self):
        return self.problem.C

    @property
    def D(self):
        return self.problem.D

    @property
    def domain(self):
        return self.problem.domain

    # Drazin data of A and D
    @cached_property
    def a_result(self) -> DrazinResult:
        return drazin(self.A)

    @cached_property
    def d_result(self) -> DrazinResult:
        return drazin(self.D)

    @property
    def AD(self):
        return self.a_result.drazin

    @property
    def Api(self):
        return self.a_result.projector_pi

    @property
    def Ae(self):
        return self.a_result.projector_e

    @property
    def index_A(self) -> int:
        return self.a_result.index

    @property
    def DD(self):
        return self.d_result.drazin

    @property
    def Dpi(self):
        return self.d_result.projector_pi

    @property
    def De(self):
        return self.d_result.projector_e

    @property
    def index_D(self) -> int:
        return self.d_result.index

    @cached_property
    def I(self):
        return identity(self.A.row_dims, self.domain)

    @cached_property
    def I_D(self):
        return identity(self.D.row_dims, self.domain)

    # products
    @cached_property
    def H(self):
        return self.B @ self.AD

    @cached_property
    def K(self):
        return self.AD @ self.C

    @cached_property
    def F(self):
        return self.DD @ self.B

    @cached_property
    def E(self):
        return self.C @ self.DD

    @cached_property
    def Y(self):
        return self.C @ self.F

    @cached_property
    def R(self):
        return self.B @ self.K

    @cached_property
    def S(self):
        return self.A - self.Y

    @cached_property
    def Z(self):
        return self.D - self.R

    @cached_property
    def z_result(self) -> DrazinResult:
        return drazin(self.Z)

    @property
    def ZD(self):
        return self.z_result.drazin

    @property
    def Zpi(self):
        return self.z_result.projector_pi

    @property
    def Ze(self):
        return self.z_result.projector_e

    @property
    def index_Z(self) -> int:
        return self.z_result.index

    @cached_property
    def T(self):
        return self.AD + self.K @ self.ZD @ self.H

    @cached_property
    def SAe(self):
        """A^e S A^e."""
        return self.Ae @ self.S @ self.Ae

    @cached_property
    def SAeD(self):
        """Drazin inverse of A^e S A^e, computed directly."""
        return drazin(self.SAe).drazin

    @cached_property
    def SApi(self):
        return self.S @ self.Api

    @cached_property
    def ApiS(self):
        return self.Api @ self.S

    @cached_property
    def t(self) -> int | None:
        """Nilpotency degree of S A^pi."""
        return nilpotency_degree(self.SApi)

    @cached_property
    def r(self) -> int | None:
        """Nilpotency degree of A^pi S."""
        return nilpotency_degree(self.ApiS)

    @cached_property
    def u(self) -> int | None:
        """Nilpotency degree of Z D^pi."""
        return nilpotency_degree(self.Z @ self.Dpi)

    @cached_property
    def v(self) -> int | None:
        """Nilpotency degree of D^pi Z."""
        return nilpotency_degree(self.Dpi @ self.Z)

    @cached_property
    def dual(self) -> "DerivedQuantities":
        """Quantities of the swapped problem (A<->D, B<->C): there S is Z and Y is R."""
        return DerivedQuantities(self.problem.swapped(), a_drazin=self.d_result,
                                 d_drazin=self.a_result)

    def pow(self, name: str, i: int) -> EinsteinTensor:
        """Cached power of one of the named tensors (``"T"``, ``"S"``, ``"A"``, ``"SAeD"``)."""
        return self._powers(name, i)

    @cached_property
    def _powers(self):
        @lru_cache(maxsize=None)
        def _p(name, i):
            if i == 0:
                return self.I
            if i == 1:
                return getattr(self, name)
            return _p(name, i - 1) @ getattr(self, name)
        return _p


def derive(problem: ModifiedProblem, *, a_drazin: DrazinResult | None = None,
           d_drazin: DrazinResult | None = None) -> DerivedQuantities:
    """Assemble the derived quantities; precomputed Drazin data of A or D may be supplied."""
    return DerivedQuantities(problem, a_drazin=a_drazin, d_drazin=d_drazin)
