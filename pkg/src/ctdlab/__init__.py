"""Finite model checking for conditional obligation (ob-function) semantics."""

from .axioms import (
    PRESETS,
    AxiomConfig,
    AxiomId,
    AxiomSystem,
    AxiomUnavailableError,
    Violation,
    check_axiom,
    check_cx,
    satisfies,
    system,
)
from .closure import (
    Derivation,
    MembershipPremise,
    OughtPremise,
    check_derivation,
    derive,
    grades_anomaly,
    least_model,
)
from .dsl import ParseError, parse
from .lemmas import REGISTRY, verify_lemma
from .runner import run
from .search import (
    BudgetExhausted,
    SearchBudget,
    classify_all,
    count_models,
    enumerate_models,
    find_independence_witness,
)
from .sets import Family, ObModel, StateSet
from .zoo import avoid_none, avoid_only, canon2, canon2_II, classify, no_obligations

__version__ = "0.1.0"

__all__ = [
    "PRESETS", "AxiomConfig", "AxiomId", "AxiomSystem", "AxiomUnavailableError", "Violation",
    "check_axiom", "check_cx", "satisfies", "system",
    "Derivation", "MembershipPremise", "OughtPremise", "check_derivation", "derive",
    "grades_anomaly", "least_model",
    "ParseError", "parse", "REGISTRY", "verify_lemma", "run",
    "BudgetExhausted", "SearchBudget", "classify_all", "count_models", "enumerate_models",
    "find_independence_witness",
    "Family", "ObModel", "StateSet",
    "avoid_none", "avoid_only", "canon2", "canon2_II", "classify", "no_obligations",
]
