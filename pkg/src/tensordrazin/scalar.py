"""Scalar domains: exact rationals (``fractions.Fraction``) and binary64 floats.

Every tensor carries one of the two :class:`ScalarDomain` values below. The
rational domain never approximates; the float domain only uses its tolerance
inside zero/rank tests.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational as _RationalABC

__all__ = [
    "DomainKind",
    "ScalarDomain",
    "RATIONAL",
    "FLOAT64",
    "SingularScalarError",
    "rat_add",
    "rat_sub",
    "rat_mul",
    "rat_div",
    "to_float",
    "parse_scalar",
    "format_scalar",
    "coerce",
    "domain_named",
]

DEFAULT_FLOAT_TOL = 1e-12


class SingularScalarError(ZeroDivisionError):
    """Division by an exact zero."""


class DomainKind(enum.Enum):
    RATIONAL = "rational"
    FLOAT64 = "float64"


@dataclass(frozen=True)
class ScalarDomain:
    kind: DomainKind
    tol: float = 0.0

    def __post_init__(self):
        if self.tol < 0:
            raise ValueError("tolerance must be nonnegative")
        if self.kind is DomainKind.RATIONAL and self.tol != 0:
            raise ValueError("the rational domain is exact; its tolerance must be 0")

    @property
    def exact(self) -> bool:
        return self.kind is DomainKind.RATIONAL

    @property
    def name(self) -> str:
        return self.kind.value

    @property
    def dtype(self):
        return object if self.exact else float

    def zero(self):
        return Fraction(0) if self.exact else 0.0

    def one(self):
        return Fraction(1) if self.exact else 1.0

    def is_zero(self, value, scale: float = 1.0) -> bool:
        if self.exact:
            return value == 0
        return abs(value) <= self.tol * max(1.0, scale)


RATIONAL = ScalarDomain(DomainKind.RATIONAL, 0.0)
FLOAT64 = ScalarDomain(DomainKind.FLOAT64, DEFAULT_FLOAT_TOL)


def domain_named(name: str) -> ScalarDomain:
    if name == "rational":
        return RATIONAL
    if name in ("float64", "float"):
        return FLOAT64
    raise ValueError(f"unknown scalar domain {name!r}")


def rat_add(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(a) + Fraction(b)


def rat_sub(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(a) - Fraction(b)


def rat_mul(a: Fraction, b: Fraction) -> Fraction:
    return Fraction(a) * Fraction(b)


def rat_div(a: Fraction, b: Fraction) -> Fraction:
    if b == 0:
        raise SingularScalarError(f"division of {a} by zero")
    return Fraction(a) / Fraction(b)


def to_float(a) -> float:
    """Nearest binary64 value of ``a``; saturates to +-inf on overflow."""
    if isinstance(a, float):
        return a
    a = Fraction(a)
    try:
        # int / int true division is correctly rounded
        return a.numerator / a.denominator
    except OverflowError:
        return math.inf if a.numerator > 0 else -math.inf


def parse_scalar(text, domain: ScalarDomain = RATIONAL):
    """Parse ``"p/q"``, ``"p"`` or a decimal literal into ``domain``.

    A leading unicode minus sign (U+2212) is accepted as well as ``-``.
    """
    if isinstance(text, bool):
        raise TypeError("booleans are not scalars")
    if isinstance(text, (int, float, Fraction)):
        return coerce(text, domain)
    s = str(text).strip().replace("−", "-")
    if not s:
        raise ValueError("empty scalar literal")
    if domain.exact:
        try:
            return Fraction(s)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad rational literal {text!r}") from exc
    if "/" in s:
        return to_float(Fraction(s))
    return float(s)


def format_scalar(value) -> str:
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, _RationalABC):
        return str(Fraction(value))
    return repr(float(value))


def coerce(value, domain: ScalarDomain):
    if domain.exact:
        if isinstance(value, float):
            if not math.isfinite(value):
                raise ValueError("non-finite value in the rational domain")
            return Fraction(value)
        return Fraction(value)
    return to_float(value) if isinstance(value, Fraction) else float(value)
