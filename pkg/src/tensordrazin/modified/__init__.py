"""Drazin inverses of the modified tensor S = A - C D^D B and of its Schur complement."""

from .conditions import (
    CONDITIONS,
    ConditionReport,
    HypothesisError,
    check_conditions,
    condition_holds,
)
from .formulas import (
    AUTO_PRIORITY,
    DUALS,
    FORMULAS,
    SPECIALIZATIONS,
    UnknownFormulaError,
    applicable_formulas,
    auto_formula,
    evaluate_formula,
    group_inverse_SAe,
    pq_additive_drazin,
    sd_cor_one_condition_a,
    sd_cor_one_condition_b,
    sd_lemma22a,
    sd_lemma22b,
    sd_lemma23a,
    sd_lemma23b,
    sd_specializations,
    sd_thm31a,
    sd_thm31a_alt1,
    sd_thm31a_alt2,
    sd_thm31b,
    sd_thm32a,
    sd_thm32b,
    sd_thm33a,
    sd_thm33b,
    zd_dual_formulas,
)
from .problem import DerivedQuantities, ModifiedProblem, derive
