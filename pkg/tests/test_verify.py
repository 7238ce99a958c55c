
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tensordrazin.drazin import drazin
from tensordrazin.example import PRINTED_NORMS, example_problem
from tensordrazin.modified.generate import generate_instance
from tensordrazin.modified.problem import ModifiedProblem, derive
from tensordrazin.scalar import FLOAT64
from tensordrazin.tensor import DimensionError, EinsteinTensor, identity, zero
from tensordrazin.verify import (BoundInapplicableError, drazin_residuals, frobenius_norm,
                                 perturbation_bound_check, run_perturbation_experiment,
                                 spectral_norm, tensor_norm)


def test_spectral_norm_trivial():
    assert spectral_norm(identity((2, 3))) == pytest.approx(1.0)
    assert spectral_norm(zero(((2,), (2,)))) == 0.0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10 ** 6), st.floats(-50, 50).filter(lambda c: abs(c) > 1e-3))
def test_spectral_norm_matches_svd_and_scales(seed, c):
    rng = np.random.default_rng(seed)
    X = EinsteinTensor(rng.standard_normal(24), (2, 3), (4,), FLOAT64)
    ref = np.linalg.norm(X.matrix, 2)
    assert spectral_norm(X) == pytest.approx(ref, rel=1e-6)
    assert spectral_norm(X.scale(c)) == pytest.approx(abs(c) * spectral_norm(X), rel=1e-10)


def test_frobenius_exact_path():
    X = EinsteinTensor([3, 4, 0, 0], (2,), (2,))
    assert frobenius_norm(X) == 5.0
    with pytest.raises(ValueError):
        tensor_norm(X, "nuclear")


def test_example_norms_are_frobenius(example_q):
    q = example_q
    SD = drazin(q.S).drazin
    values = {"SD_minus_AD": SD - q.AD, "AD": q.AD, "AD_Y": q.AD @ q.Y}
    for key, T in values.items():
        printed = float(PRINTED_NORMS[key])
        assert frobenius_norm(T) == pytest.approx(printed, rel=1e-3)
    # the spectral norm of the matricization does not reproduce the printed values
    assert spectral_norm(values["AD"]) == pytest.approx((1 + 5 ** 0.5) / 2)
    assert abs(spectral_norm(values["SD_minus_AD"]) - float(PRINTED_NORMS["SD_minus_AD"])) > 1e-2


def test_exact_residuals_are_zero(example_q):
    SD = drazin(example_q.S).drazin
    rep = drazin_residuals(example_q.S, SD)
    assert rep.exact_zero and rep.max() == 0.0


def test_zero_candidate_has_r3_positive():
    S = EinsteinTensor([[1, 1], [0, 0]], (2,), (2,))
    rep = drazin_residuals(S, zero(S.shape), 1)
    assert rep.r3 == pytest.approx(spectral_norm(S))
    assert rep.r1 == 0.0


def test_residual_shape_errors():
    with pytest.raises(DimensionError):
        drazin_residuals(identity((2,)), identity((3,)))
    with pytest.raises(ValueError):
        drazin_residuals(identity((2,)), identity((2,)), 0)


def test_float_example_residuals(example_q):
    qf = derive(example_q.problem.astype(FLOAT64))
    from tensordrazin.modified.formulas import evaluate_formula
    rep = drazin_residuals(qf.S, evaluate_formula(qf, "thm33a"))
    assert rep.max() <= 1e-13


def test_bound_on_example(example_q):
    b = perturbation_bound_check(example_q)
    assert b.holds
    assert b.lhs == pytest.approx(0.1432, abs=2e-3)
    assert b.rhs == pytest.approx(0.4942, abs=2e-3)
    assert b.identity_holds
    # with E = -Y the exact identity reads S^D - A^D = +S^D Y A^D
    assert not b.literal_minus_Y_holds


def test_structural_identity_sign(example_q):
    q = example_q
    SD = drazin(q.S).drazin
    assert SD - q.AD == SD @ q.Y @ q.AD == q.AD @ q.Y @ SD
    assert SD - q.AD != -(SD @ q.Y @ q.AD)


@pytest.mark.parametrize("seed", range(5))
def test_structural_identity_on_generated(seed):
    q = derive(generate_instance("thm33a", seed))
    SD = drazin(q.S).drazin
    if q.Ae @ q.Y @ q.Ae == q.Y:
        assert SD - q.AD == SD @ q.Y @ q.AD


def test_bound_zero_update():
    p = example_problem()
    q = derive(ModifiedProblem(p.A, zero(p.B.shape), p.C, p.D))
    b = perturbation_bound_check(q)
    assert b.lhs == 0.0 and b.rhs == 0.0 and b.holds


def test_bound_inapplicable_when_norm_large():
    p = example_problem()
    q = derive(ModifiedProblem(p.A, p.B.scale(40), p.C, p.D))
    with pytest.raises(BoundInapplicableError):
        perturbation_bound_check(q)


def test_experiment_deterministic_and_small():
    a = run_perturbation_experiment(trials=2, seed=7)
    b = run_perturbation_experiment(trials=2, seed=7)
    assert a.rows == b.rows
    assert all(r.r1 <= 1e-12 for r in a.table() if r.method == "formula")


def test_experiment_single_trial_layout():
    res = run_perturbation_experiment(epsilons=[1e-1], trials=1, seed=1)
    assert len(res.table("max")) == 2 and len(res.table("mean")) == 2
    assert res.table("max") == [r for r in res.rows if r.aggregation == "max"]
    csv = res.to_csv()
    assert csv.splitlines()[0].startswith("epsilon,method,r1,r2,r3,trials,skipped")
    assert "X_formula" in res.to_text()


def test_experiment_records_skips():
    # an unavailable hypothesis must be recorded, not dropped
    res = run_perturbation_experiment(epsilons=[1.0], trials=2, seed=0, formula="di3")
    assert all(t.skipped for t in res.trials)
    assert res.table()[0].skipped == 2
    assert "skipped trials: 2" in res.to_text()
