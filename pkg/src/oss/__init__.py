"""Free modules over ordered semirings, the heavier-higher order, and least
solutions of unguarded recursive systems."""
from .errors import *  # noqa: F401,F403
from .fileformat import format_system, parse_distribution, parse_file, parse_system
from .freemod import (
    HHResult,
    Subdistribution,
    WeightedMap,
    add,
    bind,
    delta,
    empty,
    hh_compare,
    hh_equiv,
    hh_leq,
    is_subdistribution,
    mass,
    pushforward,
    scale,
)
from .poset import FinPoset, build_poset, chain, discrete, enumerate_upsets, upward_closure
from .semiring import (
    Bool2,
    Capabilities,
    Natural,
    Product,
    Rational,
    RVector,
    Semiring,
    TableSemiring,
    Tropical,
    invert,
    make_instance,
    parse_semiring,
    subtract,
)
from .solver import (
    SolveReport,
    UnguardedSystem,
    kleene_iterates,
    least_check,
    solve,
    solve_eliminate,
    solve_kleene,
    verify_solution,
)

__version__ = "0.1.0"
