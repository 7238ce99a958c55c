"""Residuals, norms, the perturbation bound and the random-perturbation experiment.

Two tensor norms are provided. ``spectral_norm`` is the largest singular value
of the matricization. ``frobenius_norm`` is the Euclidean norm of the entries
(the 2-norm of the tensor viewed as a vector). The printed norm values of the
worked example are Frobenius values, so the bound check defaults to that norm.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .drazin import DrazinResult, drazin, index_of
from .scalar import FLOAT64, to_float
from .tensor import DimensionError, EinsteinTensor, power

__all__ = [
    "NORMS",
    "spectral_norm",
    "frobenius_norm",
    "tensor_norm",
    "ResidualReport",
    "drazin_residuals",
    "BoundInapplicableError",
    "BoundCheck",
    "perturbation_bound_check",
    "PerturbationRow",
    "TrialRecord",
    "ExperimentResult",
    "DEFAULT_EPSILONS",
    "run_perturbation_trials",
    "run_perturbation_experiment",
]

DEFAULT_EPSILONS = (10.0, 1e-1, 1e-3, 1e-5)


def _float_matrix(X: EinsteinTensor) -> np.ndarray:
    M = X.matrix
    if X.domain.exact:
        M = np.array([[to_float(v) for v in row] for row in M], dtype=float)
    return np.asarray(M, dtype=float)


def spectral_norm(X: EinsteinTensor, rtol: float = 1e-12, max_iter: int = 10000) -> float:
    """Largest singular value of the matricization, by power iteration on ``M^T M``.

    The start vector is all ones, so the result is deterministic.
    """
    M = _float_matrix(X)
    if M.size == 0 or not np.any(M):
        return 0.0
    # scale first so tiny residuals do not underflow in M^T M
    s = float(np.max(np.abs(M)))
    M = M / s
    G = M.T @ M
    v = np.ones(G.shape[0])
    lam = 0.0
    for _ in range(max_iter):
        w = G @ v
        nw = float(np.linalg.norm(w))
        if nw == 0.0:
            # the all-ones vector lies in the kernel; restart off it
            v = np.arange(1, G.shape[0] + 1, dtype=float)
            v /= np.linalg.norm(v)
            continue
        new = float(v @ w) / float(v @ v)
        v = w / nw
        if abs(new - lam) <= rtol * abs(new):
            lam = new
            break
        lam = new
    return s * math.sqrt(max(lam, 0.0))


def frobenius_norm(X: EinsteinTensor) -> float:
    """Euclidean norm of all entries; exact sum of squares for rational input."""
    if X.domain.exact:
        return math.sqrt(to_float(sum((v * v for v in X.flat_entries()), Fraction(0))))
    return float(np.linalg.norm(X.data.reshape(-1)))


NORMS = {"spectral": spectral_norm, "frobenius": frobenius_norm}


def tensor_norm(X: EinsteinTensor, kind: str = "spectral") -> float:
    try:
        return NORMS[kind](X)
    except KeyError:
        raise ValueError(f"unknown norm {kind!r}; choose from {sorted(NORMS)}") from None


@dataclass(frozen=True)
class ResidualReport:
    r1: float  # ||X S X - X||
    r2: float  # ||S X - X S||
    r3: float  # ||S^k X S - S^k||
    index_used: int
    norm_kind: str = "spectral"
    exact_zero: bool = False

    def max(self) -> float:
        return max(self.r1, self.r2, self.r3)


def drazin_residuals(S: EinsteinTensor, X: EinsteinTensor, k: int | None = None,
                     norm: str = "spectral") -> ResidualReport:
    """Residuals of the three defining equations of ``X = S^D``.

    ``k`` defaults to ``ind(S)`` (at least 1). Exact inputs are evaluated
    exactly and only then converted for the norm.
    """
    if not S.square or X.shape != S.shape:
        raise DimensionError(f"need square S and X of one shape, got {S.shape}, {X.shape}")
    if k is None:
        k = max(1, index_of(S))
    if k < 1:
        raise ValueError("k must be at least 1")
    Sk = power(S, k)
    e1 = X @ S @ X - X
    e2 = S @ X - X @ S
    e3 = Sk @ X @ S - Sk
    exact_zero = S.domain.exact and all(e.is_zero() for e in (e1, e2, e3))
    return ResidualReport(tensor_norm(e1, norm), tensor_norm(e2, norm), tensor_norm(e3, norm),
                          k, norm, exact_zero)


# -- perturbation bound ----------------------------------------------------

class BoundInapplicableError(ArithmeticError):
    pass


@dataclass(frozen=True)
class BoundCheck:
    lhs: float
    rhs: float
    holds: bool
    norm_SD_minus_AD: float
    norm_AD: float
    norm_ADY: float
    identity_holds: bool          # S^D - A^D = -S^D E A^D = -A^D E S^D with E = S - A = -Y
    literal_minus_Y_holds: bool   # S^D - A^D = -S^D Y A^D = -A^D Y S^D taken literally
    norm_kind: str


def perturbation_bound_check(q, norm: str = "frobenius") -> BoundCheck:
    """Relative error bound for ``S = A + E`` with the core perturbation ``E = -Y``.

    ``q`` is a ``DerivedQuantities``. In the exact domain the structural
    identities are checked exactly first; the bound is only asserted when
    ``E = A^e E A^e`` and ``||A^D Y|| < 1``.
    """
    SD = drazin(q.S).drazin
    AD, Y = q.AD, q.Y
    E = q.S - q.A  # = -Y
    dif = SD - AD
    scale = max(1.0, SD.max_abs()) * max(1.0, Y.max_abs()) * max(1.0, AD.max_abs())
    core = (q.Ae @ E @ q.Ae).equals(E, scale)
    identity_holds = (dif.equals(-(SD @ E @ AD), scale) and dif.equals(-(AD @ E @ SD), scale))
    literal = (dif.equals(-(SD @ Y @ AD), scale) and dif.equals(-(AD @ Y @ SD), scale))
    if not core:
        raise BoundInapplicableError("perturbation is not confined to the core: A^e Y A^e != Y")
    if not identity_holds:
        raise BoundInapplicableError("S^D - A^D != -S^D E A^D for E = S - A")
    nady = tensor_norm(AD @ Y, norm)
    if nady >= 1:
        raise BoundInapplicableError(f"||A^D Y|| = {nady:.6g} >= 1")
    nad = tensor_norm(AD, norm)
    ndif = tensor_norm(dif, norm)
    lhs = ndif / nad if nad else 0.0
    rhs = nady / (1 - nady)
    return BoundCheck(lhs, rhs, lhs <= rhs + 1e-12, ndif, nad, nady, identity_holds, literal, norm)


# -- random perturbation experiment ---------------------------------------

@dataclass(frozen=True)
class TrialRecord:
    epsilon: float
    trial: int
    c: float
    formula: ResidualReport | None
    direct: ResidualReport | None
    skipped: str | None = None


@dataclass(frozen=True)
class PerturbationRow:
    epsilon: float
    method: str          # "formula" or "direct"
    r1: float
    r2: float
    r3: float
    trials: int
    aggregation: str     # "max" or "mean"
    skipped: int = 0


@dataclass
class ExperimentResult:
    rows: list[PerturbationRow]
    trials: list[TrialRecord] = field(default_factory=list)

    def table(self, aggregation: str = "max") -> list[PerturbationRow]:
        return [r for r in self.rows if r.aggregation == aggregation]

    def to_csv(self, aggregation: str | None = None, delimiter: str = ",") -> str:
        buf = io.StringIO()
        w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
        w.writerow(["epsilon", "method", "r1", "r2", "r3", "trials", "skipped", "aggregation"])
        for r in self.rows:
            if aggregation is None or r.aggregation == aggregation:
                w.writerow([repr(r.epsilon), r.method, f"{r.r1:.4e}", f"{r.r2:.4e}",
                            f"{r.r3:.4e}", r.trials, r.skipped, r.aggregation])
        return buf.getvalue()

    def to_text(self, aggregation: str = "max") -> str:
        lines = [f"{'':9s}{'epsilon':>10s}{'r1':>14s}{'r2':>14s}{'r3':>14s}",
                 "-" * 61]
        for r in self.table(aggregation):
            label = "X_formula" if r.method == "formula" else "X_direct"
            lines.append(f"{label:9s}{r.epsilon:>10.0e}{r.r1:>14.4e}{r.r2:>14.4e}{r.r3:>14.4e}")
            if r.method == "direct":
                lines.append("-" * 61)
        skipped = [t for t in self.trials if t.skipped]
        lines.append(f"aggregation: {aggregation} over trials; skipped trials: {len(skipped)}")
        for t in skipped:
            lines.append(f"  skipped eps={t.epsilon:g} trial={t.trial}: {t.skipped}")
        return "\n".join(lines)

    def as_dict(self) -> dict:
        return {"rows": [asdict(r) for r in self.rows],
                "trials": [asdict(t) for t in self.trials]}


def _draw_c(rng: np.random.Generator) -> float:
    while True:
        c = float(rng.uniform(-1.0, 1.0))
        if abs(c) >= 1e-6:
            return c


def run_perturbation_trials(base=None, epsilons: Sequence[float] = DEFAULT_EPSILONS,
                            trials: int = 32, seed: int = 42, d_pattern: EinsteinTensor | None = None,
                            formula: str = "thm33a", norm: str = "spectral") -> list[TrialRecord]:
    """Per-trial residuals for ``D = pattern / a`` with ``a = c * epsilon``.

    The formula method evaluates ``formula`` in float64 with the exact
    ``A^D`` of the base problem rounded once (the updating use case: ``A^D``
    is known, ``S^D`` is wanted). The direct method is ``drazin`` of the float
    ``S``. Trial streams depend only on ``(seed, epsilon index, trial)``.
    """
    from .example import example_D_pattern, example_problem
    from .modified.conditions import HypothesisError
    from .modified.formulas import evaluate_formula
    from .modified.problem import ModifiedProblem, derive

    if trials < 1:
        raise ValueError("trials must be positive")
    if base is None:
        base = example_problem()
        pattern = example_D_pattern() if d_pattern is None else d_pattern
    else:
        pattern = base.D if d_pattern is None else d_pattern
    exact_a: DrazinResult = drazin(base.A)
    a_float = exact_a.astype(FLOAT64)
    Af, Bf, Cf = base.A.astype(FLOAT64), base.B.astype(FLOAT64), base.C.astype(FLOAT64)
    Pf = pattern.astype(FLOAT64)

    records = []
    for ei, eps in enumerate(epsilons):
        for t in range(trials):
            rng = np.random.default_rng([seed, ei, t])
            c = _draw_c(rng)
            a = c * float(eps)
            prob = ModifiedProblem(Af, Bf, Cf, Pf.scale(1.0 / a))
            q = derive(prob, a_drazin=a_float)
            try:
                X1 = evaluate_formula(q, formula)
            except HypothesisError as exc:
                records.append(TrialRecord(float(eps), t, c, None, None, skipped=str(exc)))
                continue
            direct = drazin(q.S)
            k = max(1, direct.index)
            records.append(TrialRecord(
                float(eps), t, c,
                drazin_residuals(q.S, X1, k, norm),
                drazin_residuals(q.S, direct.drazin, k, norm)))
    return records


def _aggregate(records: Iterable[TrialRecord], eps: float, trials: int) -> list[PerturbationRow]:
    done = [r for r in records if r.epsilon == eps and r.skipped is None]
    skipped = sum(1 for r in records if r.epsilon == eps and r.skipped is not None)
    rows = []
    for agg, fn in (("max", max), ("mean", lambda xs: sum(xs) / len(xs))):
        for method in ("formula", "direct"):
            reps = [getattr(r, method) for r in done]
            if reps:
                vals = [fn([getattr(x, k) for x in reps]) for k in ("r1", "r2", "r3")]
            else:
                vals = [math.nan] * 3
            rows.append(PerturbationRow(eps, method, *vals, trials=trials, aggregation=agg,
                                        skipped=skipped))
    return rows


def run_perturbation_experiment(base=None, epsilons: Sequence[float] = DEFAULT_EPSILONS,
                                trials: int = 32, seed: int = 42, **kw) -> ExperimentResult:
    """Aggregated Table-1 style rows (max and mean) plus every trial record."""
    records = run_perturbation_trials(base, epsilons, trials, seed, **kw)
    rows = []
    for eps in epsilons:
        rows.extend(_aggregate(records, float(eps), trials))
    return ExperimentResult(rows, records)
