"""Exact toolkit for relational marginal problems on small domains.

Two families of statistics over finite relational structures (fragment
sampling at a fixed width, and injective-substitution frequencies), the
congruent-copy expansion that adapts them across domain sizes, max-entropy
models fitted to marginal targets by exact enumeration, marginal polytopes
with realizability diagnostics, and estimation error bounds with the
experiments that verify them.
"""

from .data import (
    CanonicalForm,
    GlobalExample,
    GroundAtom,
    LocalExample,
    as_local,
    canonicalize,
    format_facts,
    fragment,
    is_isomorphic,
    local_class,
    parse_facts,
    read_facts,
    write_facts,
)
from .errors import (
    CapExceededError,
    DomainError,
    FactsSyntaxError,
    FormulaSyntaxError,
    InfeasibleError,
    NotRealizableError,
    ToolkitError,
    VocabularyError,
)
from .estimation import (
    ErrorReport,
    ExperimentConfig,
    adjusted_estimate,
    disjoint_sample_estimator,
    effective_sample_size,
    expected_error_bound,
    random_structure,
    run_error_experiment,
    sample_subexample,
)
from .expansion import (
    congruent,
    expand,
    expansion_diff_bound,
    gamma,
    mixture_residual,
    noisy_expand,
    required_expansion_level,
)
from .logic import (
    apply_substitution,
    constants_of,
    evaluate,
    format_formula,
    free_vars,
    holds,
    is_proper,
    merge_vocabulary,
    parse_formula,
    unsatisfied_rules,
    vars_of,
    vocabulary_of,
)
from .maxent import (
    DualityReport,
    ExplicitDistribution,
    MaxEntModel,
    distribution_statistic,
    dual_objective,
    log_likelihood_duality_check,
    model_distribution,
    model_probability,
    primal_solve_oracle,
    shrink_distribution,
    solve_maxent,
    total_variation,
)
from .polytope import (
    EtaVerdict,
    MarginalPolytope,
    RealizabilityVerdict,
    eta_interior,
    hull_distance,
    interiority_margin,
    is_member,
    polytope_vertices,
    realizability_check,
)
from .stats import (
    MODEL_B,
    MarginalConstraint,
    ModelA,
    ModelB,
    ModelKind,
    format_constraints,
    formula_width,
    marginal_distribution_a,
    monte_carlo_estimate,
    parse_constraints,
    parse_formulas,
    prob_model_a,
    prob_model_b,
    read_constraints,
    read_formulas,
    statistic,
)
from .verify import (
    CheckResult,
    SuiteResult,
    available_suites,
    run_suite,
    run_verification,
)
from .worlds import DEFAULT_ATOM_CAP, WorldSpace, enumerate_worlds

__version__ = "0.1.0"

__all__ = [
    "CanonicalForm",
    "GlobalExample",
    "GroundAtom",
    "LocalExample",
    "as_local",
    "canonicalize",
    "format_facts",
    "fragment",
    "is_isomorphic",
    "local_class",
    "parse_facts",
    "read_facts",
    "write_facts",
    "CapExceededError",
    "DomainError",
    "FactsSyntaxError",
    "FormulaSyntaxError",
    "InfeasibleError",
    "NotRealizableError",
    "ToolkitError",
    "VocabularyError",
    "ErrorReport",
    "ExperimentConfig",
    "adjusted_estimate",
    "disjoint_sample_estimator",
    "effective_sample_size",
    "expected_error_bound",
    "random_structure",
    "run_error_experiment",
    "sample_subexample",
    "congruent",
    "expand",
    "expansion_diff_bound",
    "gamma",
    "mixture_residual",
    "noisy_expand",
    "required_expansion_level",
    "apply_substitution",
    "constants_of",
    "evaluate",
    "format_formula",
    "free_vars",
    "holds",
    "is_proper",
    "merge_vocabulary",
    "parse_formula",
    "unsatisfied_rules",
    "vars_of",
    "vocabulary_of",
    "DualityReport",
    "ExplicitDistribution",
    "MaxEntModel",
    "distribution_statistic",
    "dual_objective",
    "log_likelihood_duality_check",
    "model_distribution",
    "model_probability",
    "primal_solve_oracle",
    "shrink_distribution",
    "solve_maxent",
    "total_variation",
    "EtaVerdict",
    "MarginalPolytope",
    "RealizabilityVerdict",
    "eta_interior",
    "hull_distance",
    "interiority_margin",
    "is_member",
    "polytope_vertices",
    "realizability_check",
    "MODEL_B",
    "MarginalConstraint",
    "ModelA",
    "ModelB",
    "ModelKind",
    "format_constraints",
    "formula_width",
    "marginal_distribution_a",
    "monte_carlo_estimate",
    "parse_constraints",
    "parse_formulas",
    "prob_model_a",
    "prob_model_b",
    "read_constraints",
    "read_formulas",
    "statistic",
    "CheckResult",
    "SuiteResult",
    "available_suites",
    "run_suite",
    "run_verification",
    "DEFAULT_ATOM_CAP",
    "WorldSpace",
    "enumerate_worlds",
    "__version__",
]
