"""Finite-matrix workbench for involutive Stone algebras, De Morgan
matrices and analytic multiple-conclusion calculi."""

from ._kernels import BACKEND
from .algebra import (
    ALGEBRA_NAMES,
    FiniteAlgebra,
    Verdict,
    all_subuniverses,
    check_axioms,
    check_identity,
    check_quasi_identity,
    make_named_algebra,
    nabla_lift,
    subuniverse_generated,
)
from .calculus import (
    DERIVABLE,
    UNDERIVABLE,
    Rule,
    RuleSet,
    builtin_ruleset,
    derives,
    derives_analytic,
    is_sound,
    or_transform,
    parse_ruleset,
    resolve_calculus,
    single_conclusion_derives,
)
from .formula import Formula, Sequent, parse_formula, parse_sequent
from .harness import run_paper_checks
from .matrix import (
    LogicalMatrix,
    builtin_matrix,
    leibniz_congruence,
    matrix_isomorphism,
    matrix_nabla_lift,
    mc_semantic_consequence,
    reduce,
    semantic_consequence,
)

__version__ = "0.1.0"
