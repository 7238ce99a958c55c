"""Random rational instances with a prescribed block structure.

Instances are built in a basis where ``A = diag(A1, N)`` (``A1`` invertible,
``N`` strictly upper triangular) and ``D = diag(D1, M)``. The update is
arranged so that ``C D^D B = U V``; zero patterns on the blocks of ``U`` and
``V`` then switch individual hypotheses on. Finally everything is conjugated
by random unimodular integer matrices so no structure is visible in the
entries. Each recipe is retried until the target formula's hypotheses hold.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, replace
from fractions import Fraction

import numpy as np

from .. import linalg
from ..scalar import RATIONAL
from ..tensor import EinsteinTensor, Shape, dematricize
from .conditions import condition_holds
from .problem import ModifiedProblem, derive

__all__ = [
    "Recipe",
    "RECIPES",
    "GenerationError",
    "generate_instance",
    "generate_free_instance",
    "generate_pq_pair",
    "core_nilpotent_instance",
    "random_tensor",
    "random_square_tensor",
    "formula_conditions",
]

A_DIMS = ((2, 2), (2, 3), (5,), (3, 2), (4,))
D_DIMS = ((2,), (3,), (1, 2), (3, 1))


class GenerationError(RuntimeError):
    pass


def _fr_matrix(rows, cols, fill=0):
    out = np.empty((rows, cols), dtype=object)
    out.fill(Fraction(fill))
    return out


def _rand_entry(rng: random.Random, lo=-3, hi=3):
    return Fraction(rng.randint(lo, hi))


def _rand_matrix(rng, rows, cols, lo=-3, hi=3):
    M = _fr_matrix(rows, cols)
    for i in range(rows):
        for j in range(cols):
            M[i, j] = _rand_entry(rng, lo, hi)
    return M


def _rand_invertible(rng, n):
    while True:
        M = _rand_matrix(rng, n, n)
        if n == 0 or linalg.rank(M).rank == n:
            return M


def _rand_strict_upper(rng, n, density=0.7):
    M = _fr_matrix(n, n)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                M[i, j] = _rand_entry(rng, -2, 2)
    return M


def _unimodular(rng, n):
    """Random integer matrix with determinant +-1, returned with its inverse."""
    L = _fr_matrix(n, n)
    U = _fr_matrix(n, n)
    for i in range(n):
        L[i, i] = U[i, i] = Fraction(1)
        for j in range(i):
            L[i, j] = _rand_entry(rng, -1, 1)
        for j in range(i + 1, n):
            U[i, j] = _rand_entry(rng, -1, 1)
    Q = L @ U
    return Q, linalg.inverse(Q)


def _blockdiag(X, Y):
    n, m = X.shape[0], Y.shape[0]
    out = _fr_matrix(n + m, n + m)
    out[:n, :n] = X
    out[n:, n:] = Y
    return out


@dataclass(frozen=True)
class Recipe:
    """Structural switches, all in the canonical basis.

    ``y21`` / ``y12`` zero the off-diagonal blocks of ``Y``; ``y22`` is
    ``"any"``, ``"zero"`` or ``"upper"`` (strictly upper, keeping ``N - Y22``
    nilpotent). ``left`` forces ``A^pi C = 0``, ``right`` forces ``B A^pi = 0``,
    ``kguard`` forces ``A^D C D^pi = 0``.
    """

    d_modes: tuple[str, ...] = ("invertible",)
    a_singular: bool = True
    y21: bool = False
    y12: bool = False
    y22: str = "any"
    left: bool = False
    right: bool = False
    kguard: bool = False
    dual: bool = False


_Y21 = Recipe(d_modes=("invertible", "singular"), y21=True, y22="upper")
_Y12 = Recipe(d_modes=("invertible", "singular"), y12=True, y22="upper")
_APIY = Recipe(d_modes=("invertible", "singular"), y21=True, y22="zero")
_YAPI = Recipe(d_modes=("invertible", "singular"), y12=True, y22="zero")
_LEFT = Recipe(d_modes=("invertible", "singular"), left=True, kguard=True)
_RIGHT = Recipe(d_modes=("invertible", "singular"), right=True, kguard=True)

RECIPES: dict[str, Recipe] = {
    "lemma22a": _Y21, "lemma23b": _Y21,
    "lemma22b": _Y12, "lemma23a": _Y12,
    "cor_one_a": _APIY, "cor_one_b": _YAPI,
    "thm31a": _Y21, "thm31a_alt1": _Y21, "thm31a_alt2": _Y21, "thm32b": _Y21,
    "thm31b": _Y12, "thm32a": _Y12,
    "thm33a": _APIY, "thm33b": _YAPI,
    "cor34a": _Y21, "cor34b": _Y12, "cor36": _Y21,
    "cor35a": _APIY, "cor35a_alt": _APIY, "cor35b": _YAPI,
    "cor33a": _APIY, "cor33b": _YAPI,
    # D nilpotent gives Y = 0; the guard keeps K Z^D H = 0 so T = A^D
    "cor37": Recipe(d_modes=("nilpotent",), kguard=True),
    "di1a": replace(_APIY, d_modes=("identity",)),
    "di1b": replace(_YAPI, d_modes=("identity",)),
    "di1b_alt": replace(_YAPI, d_modes=("identity",)),
    "di2a": replace(_LEFT, d_modes=("identity",)),
    "di2b": replace(_RIGHT, d_modes=("identity",)),
    "di2b_alt": replace(_RIGHT, d_modes=("identity",)),
    "di3": Recipe(d_modes=("identity",), left=True, right=True),
    "z11a": _LEFT, "z11b": _RIGHT, "z11b_alt": _RIGHT,
    "z12": Recipe(d_modes=("invertible", "singular"), left=True, right=True, kguard=True),
    "smw": Recipe(d_modes=("invertible",), a_singular=False),
    "zero_update": Recipe(d_modes=("nilpotent",)),
    # Z-side duals: the S-side recipe applied to the swapped problem
    "d21a": replace(_Y21, dual=True), "d21b": replace(_Y12, dual=True),
    "d22a": replace(_Y12, dual=True), "d22b": replace(_Y21, dual=True),
    "d23": replace(_APIY, dual=True), "d24": replace(_YAPI, dual=True),
    # any quadruple with a group-invertible A^e S A^e
    "group_inverse_SAe": Recipe(d_modes=("invertible", "singular", "nilpotent")),
}


def formula_conditions(name: str) -> tuple[str, ...]:
    from .formulas import _DUAL_CONDITIONS, FORMULAS
    if name in _DUAL_CONDITIONS:
        return _DUAL_CONDITIONS[name]
    if name == "group_inverse_SAe":
        return ("lemma27_c1",)
    return FORMULAS[name].conditions


def _canonical(rng: random.Random, recipe: Recipe, n: int, m: int, d_mode: str):
    """Block-structured (A0, B0, C0, D0) in the canonical basis."""
    s = rng.randint(1, min(3, n - 1)) if recipe.a_singular else 0
    r = n - s
    A0 = _blockdiag(_rand_invertible(rng, r), _rand_strict_upper(rng, s))

    if d_mode == "invertible":
        p = m
    elif d_mode == "singular":
        p = rng.randint(1, m - 1) if m > 1 else 1
    elif d_mode == "identity":
        p = m
    elif d_mode == "nilpotent":
        p = 0
    else:
        raise ValueError(f"unknown D mode {d_mode!r}")
    sd = m - p
    if d_mode == "identity":
        D1 = linalg.eye_like(p, A0)
    else:
        D1 = _rand_invertible(rng, p)
    D0 = _blockdiag(D1, _rand_strict_upper(rng, sd))

    U = _rand_matrix(rng, n, p)
    V = _rand_matrix(rng, p, n)
    inner = list(range(p))
    rng.shuffle(inner)
    cut = rng.randint(0, p)
    g1, g2 = inner[:cut], inner[cut:]

    def upper_split(cols):
        # u_j v_j^T strictly upper inside the nilpotent block
        for j in cols:
            if s < 2:
                U[r:, j] = 0
                continue
            c = rng.randint(1, s - 1)
            U[r + c:, j] = 0
            V[j, r:r + c] = 0

    if recipe.y21:
        U[r:, g2] = 0
        V[g1, :r] = 0
        if recipe.y22 == "zero":
            V[g1, r:] = 0
        elif recipe.y22 == "upper":
            upper_split(g1)
    elif recipe.y12:
        U[:r, g2] = 0
        V[g1, r:] = 0
        if recipe.y22 == "zero":
            U[r:, g2] = 0
        elif recipe.y22 == "upper":
            upper_split(g2)
    elif recipe.y22 == "zero":
        U[r:, :] = 0
    if recipe.left:
        U[r:, :] = 0
    if recipe.right:
        V[:, r:] = 0

    C_extra = _rand_matrix(rng, n, sd)
    B_extra = _rand_matrix(rng, sd, n)
    if recipe.left:
        C_extra[r:, :] = 0
    if recipe.right:
        B_extra[:, r:] = 0
    if recipe.kguard:
        C_extra[:r, :] = 0

    C0 = _fr_matrix(n, m)
    C0[:, :p] = U
    C0[:, p:] = C_extra
    B0 = _fr_matrix(m, n)
    B0[:p, :] = D1 @ V if p else B0[:p, :]
    B0[p:, :] = B_extra
    return A0, B0, C0, D0


def _build(rng, recipe, a_dims, d_dims, d_mode) -> ModifiedProblem:
    n, m = Shape(a_dims, a_dims).rows, Shape(d_dims, d_dims).rows
    A0, B0, C0, D0 = _canonical(rng, recipe, n, m, d_mode)
    Q, Qi = _unimodular(rng, n)
    W, Wi = _unimodular(rng, m)
    A = Q @ A0 @ Qi
    C = Q @ C0 @ Wi
    B = W @ B0 @ Qi
    D = W @ D0 @ Wi
    return ModifiedProblem(
        dematricize(A, Shape(a_dims, a_dims), RATIONAL),
        dematricize(B, Shape(d_dims, a_dims), RATIONAL),
        dematricize(C, Shape(a_dims, d_dims), RATIONAL),
        dematricize(D, Shape(d_dims, d_dims), RATIONAL),
    )


def generate_instance(kind: str, seed: int, *, a_dims=None, d_dims=None,
                      max_tries: int = 200) -> ModifiedProblem:
    """A rational quadruple on which formula ``kind`` is applicable.

    Deterministic in ``seed``. Dimensions are drawn from small defaults
    unless given. Candidates are re-drawn until every hypothesis of
    ``kind`` holds.
    """
    try:
        recipe = RECIPES[kind]
    except KeyError:
        raise ValueError(f"no recipe for {kind!r}") from None
    rng = random.Random(seed)
    conds = formula_conditions(kind)
    for attempt in range(max_tries):
        ad = a_dims or rng.choice(A_DIMS)
        dd = d_dims or rng.choice(D_DIMS)
        mode = recipe.d_modes[attempt % len(recipe.d_modes)]
        if recipe.dual:
            # build the S-side structure on (D, C, B, A), then swap back
            p = _build(rng, recipe, dd, ad, mode)
            prob = p.swapped()
        else:
            prob = _build(rng, recipe, ad, dd, mode)
        q = derive(prob)
        # a zero update makes most formulas collapse to A^D; skip it when avoidable
        update = q.R if recipe.dual else q.Y
        if update.is_zero() and "nilpotent" not in recipe.d_modes and attempt < max_tries // 2:
            continue
        if all(condition_holds(q, c) for c in conds):
            return prob
    raise GenerationError(f"no {kind} instance after {max_tries} tries (seed {seed})")


def generate_free_instance(seed: int, d_mode: str = "singular", *, a_dims=None,
                           d_dims=None) -> ModifiedProblem:
    """A quadruple with singular ``A`` and the given D mode and no hypothesis filtering."""
    rng = random.Random(seed)
    ad = a_dims or rng.choice(A_DIMS)
    dd = d_dims or rng.choice(D_DIMS)
    return _build(rng, Recipe(d_modes=(d_mode,)), ad, dd, d_mode)


def generate_pq_pair(seed: int, dims=None) -> tuple[EinsteinTensor, EinsteinTensor]:
    """Square P, Q with P Q = 0: ``P = W[[P11, 0], [P21, 0]]W^-1`` and ``Q = W[[0, 0], [Q21, Q22]]W^-1``."""
    rng = random.Random(seed)
    dims = dims or rng.choice(A_DIMS)
    n = Shape(dims, dims).rows
    a = rng.randint(1, n - 1)
    P0 = _fr_matrix(n, n)
    Q0 = _fr_matrix(n, n)
    P0[:a, :a] = _rand_matrix(rng, a, a, -2, 2)
    P0[a:, :a] = _rand_matrix(rng, n - a, a, -2, 2)
    Q0[a:, :a] = _rand_matrix(rng, n - a, a, -2, 2)
    Q0[a:, a:] = _rand_matrix(rng, n - a, n - a, -2, 2)
    W, Wi = _unimodular(rng, n)
    shape = Shape(dims, dims)
    return (dematricize(W @ P0 @ Wi, shape, RATIONAL),
            dematricize(W @ Q0 @ Wi, shape, RATIONAL))


def core_nilpotent_instance(seed: int, dims=None):
    """``A = Q diag(C, N) Q^-1`` together with the known ``A^D = Q diag(C^-1, 0) Q^-1`` and index."""
    rng = random.Random(seed)
    dims = dims or rng.choice(((2,), (3,), (2, 2), (2, 3), (1, 5)))
    n = Shape(dims, dims).rows
    s = rng.randint(0, n)
    C = _rand_invertible(rng, n - s)
    N = _rand_strict_upper(rng, s)
    Q, Qi = _unimodular(rng, n)
    A = Q @ _blockdiag(C, N) @ Qi
    AD = Q @ _blockdiag(linalg.inverse(C) if n - s else C, _fr_matrix(s, s)) @ Qi
    k, P = 0, linalg.eye_like(s, N)
    while s and any(x != 0 for x in P.reshape(-1)):
        P = P @ N
        k += 1
    shape = Shape(dims, dims)
    return dematricize(A, shape, RATIONAL), dematricize(AD, shape, RATIONAL), k


def random_tensor(rng: random.Random, row_dims, col_dims, lo=-3, hi=3,
                  density: float = 1.0) -> EinsteinTensor:
    shape = Shape(tuple(row_dims), tuple(col_dims))
    M = _fr_matrix(shape.rows, shape.cols)
    for i in range(shape.rows):
        for j in range(shape.cols):
            if rng.random() < density:
                M[i, j] = _rand_entry(rng, lo, hi)
    return dematricize(M, shape, RATIONAL)


def random_square_tensor(rng: random.Random, dims, **kw) -> EinsteinTensor:
    return random_tensor(rng, dims, dims, **kw)
