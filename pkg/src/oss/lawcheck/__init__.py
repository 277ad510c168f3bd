"""Law suites and the finite counterexample search."""
from .laws import (  # noqa: F401
    LawReport,
    SHIPPED,
    check_antisymmetry,
    check_capability,
    check_declared_capabilities,
    check_fact1,
    check_fact2,
    check_fact3,
    check_functoriality,
    check_idempotent_module,
    check_module_axioms,
    check_monad_laws,
    check_semiring_axioms,
    law_suite,
    mutant_bind,
    run_all,
    shipped_instances,
)
from .search import (  # noqa: F401
    FiniteOrderedSemiring,
    ProbeResult,
    SearchResult,
    as_table,
    canonical_form,
    classify,
    enumerate_finite_semirings,
    probe,
    search_counterexample,
)
