"""Least solutions of unguarded recursive weighted systems.

A system over states ``x_1..x_n`` and outputs ``Y`` reads

    x_i = a_i1 x_1 + ... + a_in x_n + theta_i

with ``a_ij`` in the semiring and ``theta_i`` a subdistribution over ``Y``.
Two solvers are provided: exact Gaussian-style elimination for cancellative,
difference-ordered division semirings, and Kleene iteration from the
all-empty assignment for semirings whose bounded chains have suprema.
"""
from __future__ import annotations

import dataclasses
from fractions import Fraction
from typing import Hashable, Mapping, Sequence

from . import freemod
from .errors import (
    BadParams,
    CapabilityMissing,
    DimensionMismatch,
    InconsistentRow,
    MassViolation,
    MaxIterExceeded,
    UnknownElement,
)
from .freemod import WeightedMap, add, empty, pointwise_leq, scale
from .poset import FinPoset, discrete
from .semiring import Semiring, parse_semiring

DEFAULT_MAX_ITER = 10**6


@dataclasses.dataclass(frozen=True, eq=False)
class UnguardedSystem:
    semiring: Semiring
    states: tuple
    outputs: FinPoset
    coeffs: tuple  # n x n, coeffs[i][j] = weight of x_j in the equation for x_i
    constants: tuple  # WeightedMap over outputs, one per state

    def __post_init__(self):
        P = self.semiring
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "coeffs", tuple(tuple(r) for r in self.coeffs))
        object.__setattr__(self, "constants", tuple(self.constants))
        n = len(self.states)
        if len(set(self.states)) != n:
            raise BadParams("state names must be distinct")
        if len(self.coeffs) != n or any(len(r) != n for r in self.coeffs):
            raise DimensionMismatch(f"coefficient matrix must be {n}x{n}")
        if len(self.constants) != n:
            raise DimensionMismatch(f"expected {n} constant maps, got {len(self.constants)}")
        clash = set(self.states) & set(self.outputs.elements)
        if clash:
            raise BadParams(f"states and outputs overlap: {sorted(map(str, clash))}")
        for row in self.coeffs:
            for a in row:
                P.check(a)
        for x, theta in zip(self.states, self.constants):
            if theta.semiring != P:
                raise BadParams(f"constant for {x} is over {theta.semiring.name}")
            for y in theta:
                if y not in self.outputs:
                    raise UnknownElement(f"{y!r} in the equation for {x} is not an output")
        for i, x in enumerate(self.states):
            m = P.add(P.sum(self.coeffs[i]), freemod.mass(self.constants[i]))
            if P.leq(m, P.one) is not True:
                raise MassViolation(
                    f"row {x} has mass {P.format(m)}, which is not <= 1 in {P.name}", state=x
                )

    @classmethod
    def from_rows(
        cls,
        semiring: Semiring,
        states: Sequence[Hashable],
        outputs: FinPoset | Sequence[Hashable],
        rows: Mapping[Hashable, WeightedMap],
    ) -> UnguardedSystem:
        """Build a system from one weighted map over ``states + outputs`` per state."""
        if not isinstance(outputs, FinPoset):
            outputs = discrete(list(outputs))
        states = tuple(states)
        idx = {x: i for i, x in enumerate(states)}
        zero = semiring.zero
        coeffs = [[zero] * len(states) for _ in states]
        constants = []
        for i, x in enumerate(states):
            row = rows.get(x, empty(semiring))
            const = {}
            for k, w in row.items():
                if k in idx:
                    coeffs[i][idx[k]] = w
                elif k in outputs:
                    const[k] = w
                else:
                    raise UnknownElement(f"{k!r} in the equation for {x} is neither state nor output")
            constants.append(WeightedMap(semiring, const))
        return cls(semiring, states, outputs, coeffs, constants)

    def __eq__(self, other):
        if not isinstance(other, UnguardedSystem):
            return NotImplemented
        return (
            self.semiring == other.semiring
            and self.states == other.states
            and self.outputs == other.outputs
            and self.coeffs == other.coeffs
            and self.constants == other.constants
        )

    def __hash__(self):
        return hash((self.semiring, self.states, self.coeffs))

    @property
    def n(self) -> int:
        return len(self.states)

    def row(self, i: int) -> WeightedMap:
        entries = {x: a for x, a in zip(self.states, self.coeffs[i])}
        entries.update(self.constants[i].items())
        return WeightedMap(self.semiring, entries)

    def row_mass(self, i: int):
        return freemod.mass(self.row(i))

    def apply(self, v: Sequence[WeightedMap]) -> tuple:
        """One step of the system operator: ``(a_i1 v_1 + ... + a_in v_n + theta_i)_i``."""
        P = self.semiring
        zero = P.zero
        out = []
        for i in range(self.n):
            acc = self.constants[i]
            for a, vj in zip(self.coeffs[i], v):
                if a != zero and vj:
                    acc = add(acc, scale(a, vj))
            out.append(acc)
        return tuple(out)


@dataclasses.dataclass
class Residual:
    rows_equal: list
    max_deviation: object
    ok: bool

    def __bool__(self):
        return self.ok


def verify_solution(sys: UnguardedSystem, candidate: Sequence[WeightedMap], tol=None) -> Residual:
    """Substitute ``candidate`` into every equation and compare both sides.

    ``ok`` is exact equality on every row, or (with ``tol``) a maximum
    entrywise deviation strictly below ``tol``.
    """
    if len(candidate) != sys.n:
        raise DimensionMismatch(f"expected {sys.n} candidate maps, got {len(candidate)}")
    for c in candidate:
        for y in c:
            if y not in sys.outputs:
                raise UnknownElement(f"candidate mentions {y!r}, which is not an output")
    P = sys.semiring
    rhs = sys.apply(candidate)
    equal = [r == c for r, c in zip(rhs, candidate)]
    dev = 0
    for r, c in zip(rhs, candidate):
        for y in r.support | c.support:
            d = P.distance(r(y), c(y))
            if d > dev:
                dev = d
    ok = all(equal) or (tol is not None and dev < tol)
    return Residual(equal, dev, ok)


@dataclasses.dataclass
class SolveReport:
    semiring: Semiring
    states: tuple
    solution: tuple
    method: str
    converged: bool = True
    iterations: int | None = None
    pivot_trace: list = dataclasses.field(default_factory=list)
    residual_ok: bool = False
    max_residual: object = 0
    probability_preserved: dict = dataclasses.field(default_factory=dict)
    tol: object = None

    def solution_of(self, state) -> WeightedMap:
        return self.solution[self.states.index(state)]

    def to_json(self) -> dict:
        fmt = self.semiring.format
        doc = {
            "semiring": self.semiring.name,
            "method": self.method,
            "converged": self.converged,
            "iterations": self.iterations,
            "solution": {
                str(x): {str(y): fmt(w) for y, w in sorted(theta.items(), key=lambda kv: str(kv[0]))}
                for x, theta in zip(self.states, self.solution)
            },
            "residual_ok": self.residual_ok,
            "probability_preserved": {str(x): v for x, v in self.probability_preserved.items()},
            "max_residual": str(self.max_residual),
        }
        if self.tol is not None:
            doc["tol"] = str(self.tol)
        if self.method == "eliminate":
            doc["pivot_trace"] = [[str(x), case] for x, case in self.pivot_trace]
        return doc

    @classmethod
    def from_json(cls, doc: Mapping) -> SolveReport:
        P = parse_semiring(doc["semiring"])
        states = tuple(doc["solution"])
        solution = tuple(
            WeightedMap(P, {y: P.parse(w) for y, w in doc["solution"][x].items()}) for x in states
        )
        return cls(
            semiring=P,
            states=states,
            solution=solution,
            method=doc["method"],
            converged=doc["converged"],
            iterations=doc["iterations"],
            pivot_trace=[(x, c) for x, c in doc.get("pivot_trace", [])],
            residual_ok=doc["residual_ok"],
            probability_preserved=dict(doc["probability_preserved"]),
            max_residual=_number(doc.get("max_residual", "0")),
            tol=Fraction(doc["tol"]) if doc.get("tol") is not None else None,
        )


def _number(text: str):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        return float(text)


def _probability_flags(sys: UnguardedSystem, solution) -> dict:
    P = sys.semiring
    flags = {}
    for i, x in enumerate(sys.states):
        if sys.row_mass(i) == P.one:
            flags[x] = freemod.mass(solution[i]) == P.one
        else:
            flags[x] = None
    return flags


def solve_eliminate(sys: UnguardedSystem) -> SolveReport:
    """Exact least solution by eliminating the highest-index state first.

    For pivot ``a = a_kk``: if ``a = 1`` the state is trapped and gets the
    empty map; otherwise ``b = (1 - a)^-1`` (``b = 1`` when ``a = 0``) and
    ``x_k = b a_k1 x_1 + ... + b a_k(k-1) x_(k-1) + b theta_k`` is substituted
    into the earlier rows, giving ``c_ij = a_ij + a_ik b a_kj``.
    """
    P = sys.semiring
    P.require("cancellative", "difference_ordered", "division")
    zero, one = P.zero, P.one
    n = sys.n
    A = [list(r) for r in sys.coeffs]
    C = list(sys.constants)
    back: list = [None] * n
    trace = []
    for k in reversed(range(n)):
        akk = A[k][k]
        if P.leq(akk, one) is not True:
            raise InconsistentRow(f"pivot for {sys.states[k]} is not <= 1")
        if akk == one:
            if C[k] or any(A[k][j] != zero for j in range(k)):
                raise InconsistentRow(
                    f"{sys.states[k]} has self-weight 1 but other nonzero terms"
                )
            trace.append((sys.states[k], "one"))
            back[k] = ([zero] * k, empty(P))
            continue
        if akk == zero:
            trace.append((sys.states[k], "zero"))
            b = one
        else:
            trace.append((sys.states[k], "interior"))
            b = P.invert(P.subtract(akk, one))
        coef = [P.mul(b, A[k][j]) for j in range(k)]
        const = scale(b, C[k])
        back[k] = (coef, const)
        for i in range(k):
            aik = A[i][k]
            if aik == zero:
                continue
            row = A[i]
            for j in range(k):
                if coef[j] != zero:
                    row[j] = P.add(row[j], P.mul(aik, coef[j]))
            if const:
                C[i] = add(C[i], scale(aik, const))
    solution: list = []
    for k in range(n):
        coef, const = back[k]
        acc = const
        for j in range(k):
            if coef[j] != zero and solution[j]:
                acc = add(acc, scale(coef[j], solution[j]))
        solution.append(acc)
    solution = tuple(solution)
    res = verify_solution(sys, solution)
    return SolveReport(
        semiring=P,
        states=sys.states,
        solution=solution,
        method="eliminate",
        converged=True,
        pivot_trace=trace,
        residual_ok=res.ok,
        max_residual=res.max_deviation,
        probability_preserved=_probability_flags(sys, solution),
    )


def kleene_iterates(sys: UnguardedSystem):
    """Yield ``L^0(0), L^1(0), L^2(0), ...`` forever."""
    v = tuple(empty(sys.semiring) for _ in range(sys.n))
    while True:
        yield v
        v = sys.apply(v)


def _require_kleene(P: Semiring):
    if not P.capabilities.kleene:
        raise CapabilityMissing(f"{P.name} has no suprema of bounded chains; Kleene iteration unsupported")


def solve_kleene(
    sys: UnguardedSystem,
    tol=None,
    max_iter: int = DEFAULT_MAX_ITER,
    strict: bool = False,
) -> SolveReport:
    """Iterate the system operator from the all-empty assignment.

    Stops at an exact fixed point, or once the largest entrywise change
    between consecutive iterates drops below ``tol``.  ``tol=None`` demands
    an exact fixed point and is only accepted for semirings where iteration
    is known to stabilise.  On budget exhaustion the last iterate (a sound
    lower bound) is returned with ``converged=False``, or
    :class:`MaxIterExceeded` is raised when ``strict``.
    """
    P = sys.semiring
    _require_kleene(P)
    if tol is None and not P.exact_iteration:
        raise BadParams(f"a tolerance is required for Kleene iteration over {P.name}")
    if tol is not None and tol < 0:
        raise BadParams("tolerance must be nonnegative")
    bound = set()
    for theta in sys.constants:
        bound |= theta.support
    v = tuple(empty(P) for _ in range(sys.n))
    supports = [frozenset()] * sys.n
    converged = False
    m = 0
    last = v
    while m < max_iter:
        w = sys.apply(v)
        m += 1
        for i in range(sys.n):
            if not pointwise_leq(v[i], w[i]):
                raise AssertionError(f"Kleene iterate {m} decreased at {sys.states[i]}")
            s = w[i].support
            if not s <= bound:
                raise AssertionError("iterate support escaped the constants' supports")
            supports[i] = s
        if w == v:
            converged = True
            m = max(m - 1, 1)
            last = v
            break
        last = w
        if tol is not None:
            change = 0
            for vi, wi in zip(v, w):
                for y in wi:
                    d = P.distance(vi(y), wi(y))
                    if d > change:
                        change = d
            if change < tol:
                converged = True
                break
        v = w
    res = verify_solution(sys, last, tol=tol)
    report = SolveReport(
        semiring=P,
        states=sys.states,
        solution=last,
        method="kleene",
        converged=converged,
        iterations=m,
        residual_ok=res.ok,
        max_residual=res.max_deviation,
        probability_preserved=_probability_flags(sys, last),
        tol=tol,
    )
    if not converged and strict:
        raise MaxIterExceeded(f"no convergence within {max_iter} iterations", report)
    return report


@dataclasses.dataclass
class LeastCheck:
    ok: bool
    iteration: int | None = None
    iterate: tuple | None = None

    def __bool__(self):
        return self.ok


def least_check(
    sys: UnguardedSystem,
    candidate: Sequence[WeightedMap],
    trials: int = 50,
    require_solution: bool = True,
) -> LeastCheck:
    """Check that the Kleene iterates ``1..trials`` lie pointwise below ``candidate``."""
    _require_kleene(sys.semiring)
    if require_solution and not verify_solution(sys, candidate).ok:
        return LeastCheck(False, None, None)
    it = kleene_iterates(sys)
    next(it)
    for m in range(1, trials + 1):
        v = next(it)
        if not all(pointwise_leq(vi, ci) for vi, ci in zip(v, candidate)):
            return LeastCheck(False, m, v)
    return LeastCheck(True)


def solve(sys: UnguardedSystem, method: str = "auto", tol=None, max_iter: int = DEFAULT_MAX_ITER):
    """Dispatch on ``method``; ``auto`` prefers elimination when it is available."""
    P = sys.semiring
    caps = P.capabilities
    if method == "auto":
        method = (
            "eliminate"
            if caps.cancellative and caps.difference_ordered and caps.division
            else "kleene"
        )
    if method == "eliminate":
        return solve_eliminate(sys)
    if method == "kleene":
        return solve_kleene(sys, tol=tol, max_iter=max_iter)
    raise BadParams(f"unknown method {method!r}")
