"""Hypothesis checkers for the S^D / Z^D formula family.

Each condition is a named predicate on :class:`DerivedQuantities`. In the
float domain a product "vanishes" when its entries are below the domain
tolerance times the product of its factors' magnitudes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import Callable, Iterable

from ..tensor import EinsteinTensor
from .problem import DerivedQuantities

__all__ = [
    "HypothesisError",
    "CONDITIONS",
    "ConditionReport",
    "condition_holds",
    "check_conditions",
    "require",
    "failed_conditions",
]


class HypothesisError(ValueError):
    """A formula was asked for outside its hypotheses."""

    def __init__(self, formula: str, failed: list[str], texts: dict[str, str] | None = None):
        self.formula = formula
        self.failed = list(failed)
        texts = texts or {}
        detail = "; ".join(texts.get(name) or CONDITIONS[name].negation for name in self.failed)
        super().__init__(f"{formula}: hypotheses fail: {detail}")


def _scale(*factors: EinsteinTensor) -> float:
    return math.prod(max(1.0, f.max_abs()) for f in factors)


def _vanishes(*factors: EinsteinTensor) -> bool:
    prod = factors[0]
    for f in factors[1:]:
        prod = prod @ f
    return prod.is_zero(_scale(*factors))


def _same(lhs: tuple, rhs: tuple) -> bool:
    def mul(fs):
        out = fs[0]
        for f in fs[1:]:
            out = out @ f
        return out
    return (mul(lhs) - mul(rhs)).is_zero(max(_scale(*lhs), _scale(*rhs)))


@dataclass(frozen=True)
class _Condition:
    text: str
    negation: str
    test: Callable[[DerivedQuantities], bool]


def _c(text, negation, test):
    return _Condition(text, negation, test)


def _dual(name):
    return lambda q: CONDITIONS[name].test(q.dual)


CONDITIONS: dict[str, _Condition] = {
    # group-inverse equivalences
    "spae_T_left": _c("S_{A^e}∗T = A∗A^D", "S_{A^e}∗T ≠ A∗A^D",
                      lambda q: _same((q.SAe, q.T), (q.Ae,))),
    "T_spae_right": _c("T∗S_{A^e} = A∗A^D", "T∗S_{A^e} ≠ A∗A^D",
                       lambda q: _same((q.T, q.SAe), (q.Ae,))),
    "lemma27_c1": _c("K∗D^π∗Z^D∗H = K∗D^D∗Z^π∗H", "K∗D^π∗Z^D∗H ≠ K∗D^D∗Z^π∗H",
                     lambda q: _same((q.K, q.Dpi, q.ZD, q.H), (q.K, q.DD, q.Zpi, q.H))),
    "lemma27_c4": _c("K∗Z^π∗D^D∗H = K∗Z^D∗D^π∗H", "K∗Z^π∗D^D∗H ≠ K∗Z^D∗D^π∗H",
                     lambda q: _same((q.K, q.Zpi, q.DD, q.H), (q.K, q.ZD, q.Dpi, q.H))),
    # annihilation conditions
    "cond_SApiYAe_zero": _c("S∗A^π∗Y∗A^e = 0", "S∗A^π∗Y∗A^e ≠ 0",
                            lambda q: _vanishes(q.S, q.Api, q.Y, q.Ae)),
    "cond_SAeYApi_zero": _c("S∗A^e∗Y∗A^π = 0", "S∗A^e∗Y∗A^π ≠ 0",
                            lambda q: _vanishes(q.S, q.Ae, q.Y, q.Api)),
    "cond_AeYApiS_zero": _c("A^e∗Y∗A^π∗S = 0", "A^e∗Y∗A^π∗S ≠ 0",
                            lambda q: _vanishes(q.Ae, q.Y, q.Api, q.S)),
    "cond_ApiYAeS_zero": _c("A^π∗Y∗A^e∗S = 0", "A^π∗Y∗A^e∗S ≠ 0",
                            lambda q: _vanishes(q.Api, q.Y, q.Ae, q.S)),
    "cond_SApiY_zero": _c("S∗A^π∗Y = 0", "S∗A^π∗Y ≠ 0",
                          lambda q: _vanishes(q.S, q.Api, q.Y)),
    "cond_YApiS_zero": _c("Y∗A^π∗S = 0", "Y∗A^π∗S ≠ 0",
                          lambda q: _vanishes(q.Y, q.Api, q.S)),
    "cond_ApiY_zero": _c("A^π∗Y = 0", "A^π∗Y ≠ 0", lambda q: _vanishes(q.Api, q.Y)),
    "cond_YApi_zero": _c("Y∗A^π = 0", "Y∗A^π ≠ 0", lambda q: _vanishes(q.Y, q.Api)),
    "cond_ApiC_zero": _c("A^π∗C = 0", "A^π∗C ≠ 0", lambda q: _vanishes(q.Api, q.C)),
    "cond_BApi_zero": _c("B∗A^π = 0", "B∗A^π ≠ 0", lambda q: _vanishes(q.B, q.Api)),
    "cond_CDpiZDB_zero": _c("C∗D^π∗Z^D∗B = 0", "C∗D^π∗Z^D∗B ≠ 0",
                            lambda q: _vanishes(q.C, q.Dpi, q.ZD, q.B)),
    "cond_CDDZpiB_zero": _c("C∗D^D∗Z^π∗B = 0", "C∗D^D∗Z^π∗B ≠ 0",
                            lambda q: _vanishes(q.C, q.DD, q.Zpi, q.B)),
    "cond_CZpiB_zero": _c("C∗Z^π∗B = 0", "C∗Z^π∗B ≠ 0",
                          lambda q: _vanishes(q.C, q.Zpi, q.B)),
    "cond_KZpiH_zero": _c("K∗Z^π∗H = 0", "K∗Z^π∗H ≠ 0",
                          lambda q: _vanishes(q.K, q.Zpi, q.H)),
    "cond_KDpiZinvH_zero": _c("Z invertible and K∗D^π∗Z^{-1}∗H = 0",
                              "Z singular or K∗D^π∗Z^{-1}∗H ≠ 0",
                              lambda q: q.index_Z == 0 and _vanishes(q.K, q.Dpi, q.ZD, q.H)),
    "cond_CDpiZinvB_zero": _c("Z invertible and C∗D^π∗Z^{-1}∗B = 0",
                              "Z singular or C∗D^π∗Z^{-1}∗B ≠ 0",
                              lambda q: q.index_Z == 0 and _vanishes(q.C, q.Dpi, q.ZD, q.B)),
    "dpi_eq_zpi": _c("D^π = Z^π", "D^π ≠ Z^π", lambda q: _same((q.Dpi,), (q.Zpi,))),
    "zd_split": _c("Z^D = Z^D∗D^π − Z^π∗D^D", "Z^D ≠ Z^D∗D^π − Z^π∗D^D",
                   lambda q: (q.ZD - q.ZD @ q.Dpi + q.Zpi @ q.DD).is_zero(
                       _scale(q.ZD, q.Dpi) + _scale(q.Zpi, q.DD))),
    "cond_Y_zero": _c("Y = 0", "Y ≠ 0", lambda q: q.Y.is_zero()),
    "d_is_identity": _c("D = I", "D ≠ I", lambda q: q.D == q.I_D),
    "a_invertible": _c("A invertible", "A singular", lambda q: q.index_A == 0),
    "d_invertible": _c("D invertible", "D singular", lambda q: q.index_D == 0),
    "z_invertible": _c("Z invertible", "Z singular", lambda q: q.index_Z == 0),
    "t_nilpotent": _c("S∗A^π nilpotent", "S∗A^π not nilpotent", lambda q: q.t is not None),
    "r_nilpotent": _c("A^π∗S nilpotent", "A^π∗S not nilpotent", lambda q: q.r is not None),
}

# Z-side duals: the S-side predicates evaluated on the swapped problem,
# where A -> D, Y -> R, S -> Z.
CONDITIONS.update({
    "cond_ZDpiRDe_zero": _c("Z∗D^π∗R∗D^e = 0", "Z∗D^π∗R∗D^e ≠ 0", _dual("cond_SApiYAe_zero")),
    "cond_ZDeRDpi_zero": _c("Z∗D^e∗R∗D^π = 0", "Z∗D^e∗R∗D^π ≠ 0", _dual("cond_SAeYApi_zero")),
    "cond_DeRDpiZ_zero": _c("D^e∗R∗D^π∗Z = 0", "D^e∗R∗D^π∗Z ≠ 0", _dual("cond_AeYApiS_zero")),
    "cond_DpiRDeZ_zero": _c("D^π∗R∗D^e∗Z = 0", "D^π∗R∗D^e∗Z ≠ 0", _dual("cond_ApiYAeS_zero")),
    "cond_ZDpiR_zero": _c("Z∗D^π∗R = 0", "Z∗D^π∗R ≠ 0", _dual("cond_SApiY_zero")),
    "cond_RDpiZ_zero": _c("R∗D^π∗Z = 0", "R∗D^π∗Z ≠ 0", _dual("cond_YApiS_zero")),
    "u_nilpotent": _c("Z∗D^π nilpotent", "Z∗D^π not nilpotent", lambda q: q.u is not None),
    "v_nilpotent": _c("D^π∗Z nilpotent", "D^π∗Z not nilpotent", lambda q: q.v is not None),
})


def condition_holds(q: DerivedQuantities, name: str) -> bool:
    return bool(CONDITIONS[name].test(q))


def failed_conditions(q: DerivedQuantities, names: Iterable[str]) -> list[str]:
    return [n for n in names if not condition_holds(q, n)]


def require(q: DerivedQuantities, formula: str, names: Iterable[str]) -> None:
    failed = failed_conditions(q, names)
    if failed:
        raise HypothesisError(formula, failed)


@dataclass(frozen=True)
class ConditionReport:
    spae_T_left: bool
    T_spae_right: bool
    lemma27_c1: bool
    lemma27_c4: bool
    cond_SApiYAe_zero: bool
    cond_SAeYApi_zero: bool
    cond_AeYApiS_zero: bool
    cond_ApiYAeS_zero: bool
    cond_SApiY_zero: bool
    cond_YApiS_zero: bool
    cond_ApiY_zero: bool
    cond_YApi_zero: bool
    cond_ApiC_zero: bool
    cond_BApi_zero: bool
    cond_CDpiZDB_zero: bool
    cond_CDDZpiB_zero: bool
    cond_CZpiB_zero: bool
    cond_KZpiH_zero: bool
    cond_KDpiZinvH_zero: bool
    cond_CDpiZinvB_zero: bool
    dpi_eq_zpi: bool
    cond_Y_zero: bool
    zd_split: bool
    d_is_identity: bool
    a_invertible: bool
    d_invertible: bool
    z_invertible: bool
    t_nilpotent: bool
    r_nilpotent: bool
    cond_ZDpiRDe_zero: bool
    cond_ZDeRDpi_zero: bool
    cond_DeRDpiZ_zero: bool
    cond_DpiRDeZ_zero: bool
    cond_ZDpiR_zero: bool
    cond_RDpiZ_zero: bool
    u_nilpotent: bool
    v_nilpotent: bool
    t: int | None
    r: int | None
    u: int | None
    v: int | None
    index_A: int
    index_D: int

    def verdicts(self) -> dict[str, bool]:
        return {f.name: getattr(self, f.name) for f in fields(self)
                if f.name in CONDITIONS}

    def holds(self, names: Iterable[str]) -> bool:
        return all(getattr(self, n) for n in names)

    def lines(self) -> list[str]:
        out = []
        for name, ok in self.verdicts().items():
            text = CONDITIONS[name].text if ok else CONDITIONS[name].negation
            out.append(f"{name:22s} {'true ' if ok else 'false'}  {text}")
        for name in ("t", "r", "u", "v", "index_A", "index_D"):
            out.append(f"{name:22s} {getattr(self, name)}")
        return out

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def check_conditions(q: DerivedQuantities) -> ConditionReport:
    verdicts = {name: condition_holds(q, name) for name in CONDITIONS}
    return ConditionReport(**verdicts, t=q.t, r=q.r, u=q.u, v=q.v,
                           index_A=q.index_A, index_D=q.index_D)
