import pytest

from tensordrazin.drazin import drazin
from tensordrazin.modified.conditions import HypothesisError
from tensordrazin.modified.formulas import (DUALS, FORMULAS, SPECIALIZATIONS, UnknownFormulaError,
                                            auto_formula, evaluate_formula, group_inverse_SAe,
                                            pq_additive_drazin, sd_specializations, sd_thm33a,
                                            zd_dual_formulas)
from tensordrazin.modified.generate import (RECIPES, generate_free_instance, generate_instance,
                                            generate_pq_pair)
from tensordrazin.modified.problem import ModifiedProblem, derive
from tensordrazin.scalar import FLOAT64
from tensordrazin.tensor import DimensionError, EinsteinTensor, identity, zero

S_SIDE = [n for n in RECIPES if n not in DUALS and n != "group_inverse_SAe"]


@pytest.mark.parametrize("name", S_SIDE)
@pytest.mark.parametrize("seed", [100, 101, 102])
def test_formula_equals_direct(name, seed):
    q = derive(generate_instance(name, seed))
    assert evaluate_formula(q, name) == drazin(q.S).drazin


@pytest.mark.parametrize("name", sorted(DUALS))
@pytest.mark.parametrize("seed", [100, 101, 102])
def test_dual_equals_direct_z(name, seed):
    q = derive(generate_instance(name, seed))
    assert zd_dual_formulas(q, name) == drazin(q.Z).drazin


def test_example_thm33a(example_q):
    assert sd_thm33a(example_q) == drazin(example_q.S).drazin


def test_violation_raises_with_condition_text():
    for seed in range(50):
        q = derive(generate_free_instance(seed, "singular"))
        try:
            evaluate_formula(q, "thm31a")
        except HypothesisError as exc:
            if "cond_SApiYAe_zero" in exc.failed:
                assert "S∗A^π∗Y∗A^e ≠ 0" in str(exc)
                return
    pytest.fail("no counterexample generated")


def test_unknown_formula():
    q = derive(generate_free_instance(0))
    with pytest.raises(UnknownFormulaError):
        evaluate_formula(q, "thm99")
    with pytest.raises(UnknownFormulaError):
        sd_specializations(q, "thm31a")


def test_supplied_degree_must_annihilate():
    q = derive(generate_instance("lemma22a", 5))
    t = q.t
    X = evaluate_formula(q, "lemma22a", degree=t + 2)
    assert X == drazin(q.S).drazin
    if t > 1:
        with pytest.raises(ValueError):
            evaluate_formula(q, "lemma22a", degree=t - 1)
    # an index-bounded formula only accepts ind(A) itself
    qa = derive(generate_instance("cor_one_a", 5))
    with pytest.raises(ValueError):
        evaluate_formula(qa, "cor_one_a", degree=qa.index_A + 1)


def test_empty_sums_when_degree_is_one(example_q):
    # the worked example has S A^pi = 0, so t = 1 and the sum over 0..t-2 is empty
    q = example_q
    assert q.t == 1
    assert evaluate_formula(q, "thm31a") == q.T - q.Api @ q.Y @ q.pow("T", 2)
    assert evaluate_formula(q, "lemma22a") == q.SAeD - q.Api @ q.Y @ q.pow("SAeD", 2)


def test_cor37_needs_group_inverse_condition():
    # the Z^D split alone does not give the closed form
    name = "cor37"
    assert "spae_T_left" in FORMULAS[name].conditions
    bad = 0
    for seed in range(40):
        q = derive(generate_free_instance(seed, "nilpotent"))
        if not q.problem.C.is_zero() and not (q.T - q.Api @ q.Y @ q.pow("T", 2)) == drazin(q.S).drazin:
            bad += 1
            with pytest.raises(HypothesisError):
                evaluate_formula(q, name)
    assert bad > 0


@pytest.mark.parametrize("seed", range(10))
def test_pq_additive(seed):
    P, Q = generate_pq_pair(seed)
    assert pq_additive_drazin(P, Q) == drazin(P + Q).drazin
    lo = max(drazin(P).index, drazin(Q).index)
    assert pq_additive_drazin(P, Q, lo) == drazin(P + Q).drazin


def test_pq_trivial_and_errors():
    P, Q = generate_pq_pair(3)
    Z = zero(P.shape)
    assert pq_additive_drazin(P, Z) == drazin(P).drazin
    N = EinsteinTensor([[0, 1], [0, 0]], (2,), (2,))
    assert pq_additive_drazin(N, zero(N.shape)) == zero(N.shape)
    with pytest.raises(HypothesisError):
        pq_additive_drazin(N, N.transpose_matrix())
    with pytest.raises(ValueError):
        pq_additive_drazin(P, Q, 99)
    with pytest.raises(DimensionError):
        pq_additive_drazin(P, identity((7,)))


@pytest.mark.parametrize("seed", range(6))
def test_group_inverse_SAe(seed):
    q = derive(generate_instance("group_inverse_SAe", seed))
    T = group_inverse_SAe(q)
    SAe = q.SAe
    assert SAe @ T @ SAe == SAe and T @ SAe @ T == T and SAe @ T == T @ SAe


def test_transposed_problem_swaps_a_and_b_variants():
    q = derive(generate_instance("thm33a", 7))
    qt = derive(q.problem.transposed())
    assert evaluate_formula(qt, "thm33b") == drazin(q.S).drazin.transpose_matrix()


def test_auto_prefers_closed_forms():
    p = generate_free_instance(2, "invertible")
    q = derive(ModifiedProblem(p.A, p.B, zero(p.C.shape), p.D))
    name, X = auto_formula(q)
    assert name == "zero_update"
    assert X == q.AD


def test_auto_falls_back_to_direct():
    for seed in range(80):
        q = derive(generate_free_instance(seed, "singular"))
        name, X = auto_formula(q)
        if name == "direct":
            assert X == drazin(q.S).drazin
            return
    pytest.skip("every random instance admitted a formula")


def test_specialization_registry_complete():
    assert set(SPECIALIZATIONS) <= set(FORMULAS)
    assert set(RECIPES) >= set(SPECIALIZATIONS)


def test_float_formula_close_to_exact(example_q):
    qf = derive(example_q.problem.astype(FLOAT64))
    X = evaluate_formula(qf, "thm33a")
    exact = drazin(example_q.S).drazin.astype(FLOAT64)
    assert (X - exact).max_abs() < 1e-12
