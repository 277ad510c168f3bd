"""Executable axiom suites for semirings, free modules and the heavier-higher order.

Every check returns a :class:`LawReport`.  Finite carriers are checked
exhaustively where the law quantifies over carrier elements only; everything
else runs on ``samples`` seeded random cases.
"""
from __future__ import annotations

import dataclasses
from itertools import product as iproduct
from typing import Callable

from .. import freemod
from ..freemod import WeightedMap, add, bind, delta, empty, hh_equiv, hh_leq, pushforward, scale
from ..generators import (
    DEFAULT_SEED,
    random_hh_pair,
    random_leq_scalars,
    random_map,
    random_monotone_family,
    random_poset,
    rng_for,
)
from ..poset import FinPoset, build_poset, chain, discrete
from ..semiring import Semiring, make_instance

DEFAULT_SAMPLES = 1000
MAX_FAILURES = 20


@dataclasses.dataclass
class LawReport:
    law: str
    instance: str
    cases: int = 0
    failures: list = dataclasses.field(default_factory=list)  # first MAX_FAILURES witnesses
    failed: int = 0

    @property
    def passed(self) -> bool:
        return self.failed == 0 and not self.failures

    def fail(self, witness) -> None:
        self.failed += 1
        if len(self.failures) < MAX_FAILURES:
            self.failures.append(witness)

    def to_json(self) -> dict:
        return {
            "law": self.law,
            "instance": self.instance,
            "cases": self.cases,
            "passed": self.passed,
            "failed": self.failed,
            "failures": [_jsonable(f) for f in self.failures],
        }

    @classmethod
    def from_json(cls, doc) -> LawReport:
        return cls(doc["law"], doc["instance"], doc["cases"], list(doc["failures"]), doc.get("failed", 0))


def _jsonable(x):
    if isinstance(x, WeightedMap):
        return x.format()
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, frozenset, set)):
        items = sorted(x, key=str) if isinstance(x, (frozenset, set)) else x
        return [_jsonable(v) for v in items]
    if isinstance(x, (bool, int, str)) or x is None:
        return x
    return str(x)


# ---------------------------------------------------------------------------
# fixtures

def diamond() -> FinPoset:
    return build_poset("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])


def standard_posets() -> list[FinPoset]:
    return [
        chain(["a", "b"]),
        chain(["a", "b", "c"]),
        discrete(["a", "b", "c"]),
        diamond(),
        build_poset("abc", [("a", "c"), ("b", "c")]),
    ]


def _pick_poset(rng, poset):
    if poset is not None:
        return poset
    if rng.random() < 0.5:
        return rng.choice(standard_posets())
    return random_poset(rng, rng.randint(1, 5))


def _elements(P: Semiring, rng, samples: int, arity: int):
    """Exhaustive tuples on finite carriers, seeded samples otherwise."""
    if P.finite:
        return list(iproduct(P.elements(), repeat=arity))
    return [tuple(P.sample(rng) for _ in range(arity)) for _ in range(samples)]


# ---------------------------------------------------------------------------
# semiring-level laws

def check_semiring_axioms(P: Semiring, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED) -> LawReport:
    rng = rng_for(seed, "semiring", P.name)
    rep = LawReport("semiring-axioms", P.name)
    add_, mul, leq, zero, one = P.add, P.mul, P.leq, P.zero, P.one
    for r, s, t in _elements(P, rng, samples, 3):
        rep.cases += 1
        bad = []
        if add_(add_(r, s), t) != add_(r, add_(s, t)):
            bad.append("add-assoc")
        if add_(r, s) != add_(s, r):
            bad.append("add-comm")
        if add_(r, zero) != r:
            bad.append("add-unit")
        if mul(mul(r, s), t) != mul(r, mul(s, t)):
            bad.append("mul-assoc")
        if mul(r, one) != r or mul(one, r) != r:
            bad.append("mul-unit")
        if mul(zero, r) != zero or mul(r, zero) != zero:
            bad.append("annihilation")
        if mul(r, add_(s, t)) != add_(mul(r, s), mul(r, t)):
            bad.append("left-distrib")
        if mul(add_(s, t), r) != add_(mul(s, r), mul(t, r)):
            bad.append("right-distrib")
        if leq(r, r) is not True:
            bad.append("reflexive")
        if leq(zero, r) is not True:
            bad.append("zero-bottom")
        if leq(r, s) is True and leq(s, r) is True and r != s:
            bad.append("antisymmetric")
        if leq(r, s) is True and leq(s, t) is True and leq(r, t) is not True:
            bad.append("transitive")
        if leq(r, s) is True:
            if leq(add_(r, t), add_(s, t)) is not True:
                bad.append("add-monotone")
            if leq(mul(r, t), mul(s, t)) is not True or leq(mul(t, r), mul(t, s)) is not True:
                bad.append("mul-monotone")
        if bad:
            rep.fail({"r": P.format(r), "s": P.format(s), "t": P.format(t), "laws": bad})
    return rep


def _leq_pairs(P: Semiring, rng, samples: int):
    if P.finite:
        return [(r, s) for r in P.elements() for s in P.elements() if P.leq(r, s)]
    pairs = []
    for _ in range(samples):
        r = P.sample(rng)
        s = P.add(r, P.sample(rng)) if rng.random() < 0.7 else P.sample(rng)
        pairs.append((r, s))
    return pairs


def check_capability(
    P: Semiring, capability: str, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED
) -> LawReport:
    """Validate one capability flag against its defining axiom.

    Failure is data: violating tuples are listed in the report.
    """
    rng = rng_for(seed, "capability", P.name, capability)
    rep = LawReport(capability, P.name)
    fmt = P.format
    if capability == "cancellative":
        if P.finite:
            triples = list(iproduct(P.elements(), repeat=3))
        else:
            triples = []
            for _ in range(samples):
                r, s = P.sample(rng), P.sample(rng)
                t = P.add(s, P.sample(rng)) if rng.random() < 0.5 else P.sample(rng)
                triples.append((r, s, t))
        for r, s, t in triples:
            rep.cases += 1
            if P.leq(P.add(r, s), P.add(r, t)) is True and P.leq(s, t) is not True:
                rep.fail((fmt(r), fmt(s), fmt(t)))
    elif capability == "difference_ordered":
        for r, s in _leq_pairs(P, rng, samples):
            if P.leq(r, s) is not True:
                continue
            rep.cases += 1
            if P.finite:
                ts = [t for t in P.elements() if P.add(r, t) == s]
                if not ts:
                    rep.fail((fmt(r), fmt(s), "no difference"))
                elif len(ts) > 1 and P.capabilities.cancellative:
                    rep.fail((fmt(r), fmt(s), "difference not unique"))
            else:
                try:
                    t = P._subtract(r, s)
                except Exception as exc:  # noqa: BLE001 - any failure is a witness
                    rep.fail((fmt(r), fmt(s), f"subtract raised {exc!r}"))
                    continue
                if not P.contains(t) or P.add(r, t) != s:
                    rep.fail((fmt(r), fmt(s), "re-addition failed"))
    elif capability == "idempotent":
        elems = P.elements() if P.finite else [P.sample(rng) for _ in range(samples)]
        for r in elems:
            rep.cases += 1
            if P.add(r, r) != r:
                rep.fail((fmt(r),))
    elif capability == "division":
        elems = P.elements() if P.finite else [P.sample(rng) for _ in range(samples)]
        for r in elems:
            if r == P.zero:
                continue
            rep.cases += 1
            if P.finite:
                if not any(P.mul(r, s) == P.one == P.mul(s, r) for s in P.elements()):
                    rep.fail((fmt(r), "no inverse"))
                continue
            try:
                s = P._invert(r)
            except Exception as exc:  # noqa: BLE001
                rep.fail((fmt(r), f"invert raised {exc!r}"))
                continue
            if not P.contains(s) or P.mul(r, s) != P.one or P.mul(s, r) != P.one:
                rep.fail((fmt(r), "inverse check failed"))
    elif capability in ("omega_continuous", "bounded_chains"):
        _check_chains(P, capability, rng, samples, rep)
    else:
        raise ValueError(f"unknown capability {capability!r}")
    return rep


def _check_chains(P, capability, rng, samples, rep):
    if P.finite:
        # finite chains stabilise, so continuity reduces to monotonicity
        E = P.elements()
        for r, s, t in iproduct(E, repeat=3):
            if P.leq(r, s) is not True:
                continue
            rep.cases += 1
            if (
                P.leq(P.add(r, t), P.add(s, t)) is not True
                or P.leq(P.mul(r, t), P.mul(s, t)) is not True
                or P.leq(P.mul(t, r), P.mul(t, s)) is not True
            ):
                rep.fail((P.format(r), P.format(s), P.format(t)))
        return
    if capability == "omega_continuous":
        # an infinite carrier here always has an unbounded chain
        rep.cases += 1
        rep.fail(("unbounded chain has no supremum in", P.name))
        return
    length = 24
    for _ in range(max(1, samples // 10)):
        rep.cases += 1
        chain_, sup = P.sample_chain(rng, length)
        if not all(P.leq(a, b) is True for a, b in zip(chain_, chain_[1:])):
            rep.fail(("chain not increasing", [P.format(c) for c in chain_[:3]]))
            continue
        if not all(P.leq(c, sup) is True for c in chain_):
            rep.fail(("sup is not an upper bound", P.format(sup)))
            continue
        a = P.sample(rng)
        slack = 2 ** -(length - 3)
        for op in (P.add, P.mul, lambda x, y: P.mul(y, x)):
            first = P.distance(op(a, chain_[0]), op(a, sup))
            base = max(first, P.distance(chain_[0], sup))
            last = P.distance(op(a, chain_[-1]), op(a, sup))
            if base != float("inf") and last > base * slack:
                rep.fail(("operation does not preserve the supremum", P.format(a), P.format(sup)))
                break


def check_declared_capabilities(P: Semiring, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED) -> list[LawReport]:
    return [check_capability(P, c, samples, seed) for c in P.capabilities.declared()]


# ---------------------------------------------------------------------------
# module, monad and functor laws

def check_module_axioms(P: Semiring, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED) -> LawReport:
    rng = rng_for(seed, "module", P.name)
    rep = LawReport("module-axioms", P.name)
    keys = "abcde"
    for _ in range(samples):
        rep.cases += 1
        theta, phi, psi = (random_map(P, keys, rng) for _ in range(3))
        r, s = P.sample(rng), P.sample(rng)
        bad = []
        if scale(P.zero, theta) != empty(P):
            bad.append("0x=0")
        if scale(P.one, theta) != theta:
            bad.append("1x=x")
        if scale(P.mul(r, s), theta) != scale(r, scale(s, theta)):
            bad.append("(rs)x=r(sx)")
        if scale(P.add(r, s), theta) != add(scale(r, theta), scale(s, theta)):
            bad.append("(r+s)x=rx+sx")
        if add(theta, empty(P)) != theta:
            bad.append("x+0=x")
        if add(theta, phi) != add(phi, theta):
            bad.append("x+y=y+x")
        if add(add(theta, phi), psi) != add(theta, add(phi, psi)):
            bad.append("(x+y)+z=x+(y+z)")
        if bad:
            rep.fail({"theta": theta, "r": P.format(r), "s": P.format(s), "laws": bad})
    return rep


def check_monad_laws(P: Semiring, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED, bind_fn: Callable = bind) -> LawReport:
    rng = rng_for(seed, "monad", P.name)
    rep = LawReport("monad-laws", P.name)
    keys = "abcd"
    unit = lambda x: delta(P, x)  # noqa: E731
    for _ in range(samples):
        rep.cases += 1
        f = {k: random_map(P, keys, rng, 3) for k in keys}
        g = {k: random_map(P, keys, rng, 3) for k in keys}
        theta = random_map(P, keys, rng)
        x = rng.choice(keys)
        bad = []
        if bind_fn(f, delta(P, x)) != f[x]:
            bad.append("left-unit")
        if bind_fn(unit, theta) != theta:
            bad.append("right-unit")
        lhs = bind_fn(g, bind_fn(f, theta))
        rhs = bind_fn(lambda y: bind_fn(g, f[y]), theta)
        if lhs != rhs:
            bad.append("associativity")
        if bad:
            rep.fail({"theta": theta, "x": x, "laws": bad})
    return rep


def check_functoriality(P: Semiring, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED) -> LawReport:
    rng = rng_for(seed, "functor", P.name)
    rep = LawReport("functoriality", P.name)
    keys = "abcde"
    for _ in range(samples):
        rep.cases += 1
        theta = random_map(P, keys, rng)
        h = {k: rng.choice(keys) for k in keys}
        g = {k: rng.choice(keys) for k in keys}
        bad = []
        if pushforward(lambda x: x, theta) != theta:
            bad.append("identity")
        if pushforward(lambda x: g[h[x]], theta) != pushforward(g, pushforward(h, theta)):
            bad.append("composition")
        if freemod.mass(pushforward(h, theta)) != freemod.mass(theta):
            bad.append("mass")
        if bad:
            rep.fail({"theta": theta, "h": h, "g": g, "laws": bad})
    return rep


# ---------------------------------------------------------------------------
# the three facts behind the free ordered module construction

def check_fact1(P: Semiring, poset: FinPoset | None = None, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED) -> LawReport:
    """delta is monotone: ``x <= y`` implies ``delta_x ⊑ delta_y``."""
    rng = rng_for(seed, "fact1", P.name)
    rep = LawReport("fact1", P.name)
    if poset is not None and samples is None:
        cases = [(poset, x, y) for x, y in poset.related_pairs()]
    else:
        cases = []
        for _ in range(samples):
            Y = _pick_poset(rng, poset)
            x, y = rng.choice(Y.related_pairs())
            cases.append((Y, x, y))
    for Y, x, y in cases:
        rep.cases += 1
        if not hh_leq(delta(P, x), delta(P, y), Y):
            rep.fail({"x": x, "y": y, "poset": repr(Y)})
    return rep


def check_fact2(P: Semiring, poset: FinPoset | None = None, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED) -> LawReport:
    """The quotient is an ordered module: addition and scaling are monotone."""
    rng = rng_for(seed, "fact2", P.name)
    rep = LawReport("fact2", P.name)
    for _ in range(samples):
        rep.cases += 1
        Y = _pick_poset(rng, poset)
        t1, t2 = random_hh_pair(P, Y, rng)
        phi = random_map(P, Y.elements, rng)
        p, q = random_leq_scalars(P, rng)
        bad = []
        if not hh_leq(t1, t2, Y):
            bad.append("generator produced an unrelated pair")
        elif not hh_leq(add(t1, phi), add(t2, phi), Y):
            bad.append("(i) addition")
        if P.leq(p, q) is True and not hh_leq(scale(p, phi), scale(q, phi), Y):
            bad.append("(ii) scaling")
        if bad:
            rep.fail({"theta1": t1, "theta2": t2, "phi": phi, "p": P.format(p), "q": P.format(q), "laws": bad})
    return rep


def mutant_bind(f, theta: WeightedMap) -> WeightedMap:
    """A deliberately broken bind that forgets the weights of ``theta``.

    Each support point contributes ``f(x)`` once, so the result is neither
    homogeneous nor additive: merging two points loses weight.
    """
    P = theta.semiring
    flattened = WeightedMap(P, {x: P.one for x in theta})
    return bind(f, flattened)


def check_fact3(
    P: Semiring,
    source: FinPoset | None = None,
    target: FinPoset | None = None,
    samples=DEFAULT_SAMPLES,
    seed=DEFAULT_SEED,
    bind_fn: Callable = bind,
) -> LawReport:
    """Homomorphic extensions of monotone maps are monotone.

    ``f`` maps the source poset monotonically into the free module over
    the target (ordered by ⊑); when ``target`` is omitted the source doubles
    as target and ``f`` may push weight upward along it.
    """
    rng = rng_for(seed, "fact3", P.name)
    rep = LawReport("fact3", P.name)
    for _ in range(samples):
        rep.cases += 1
        X = _pick_poset(rng, source)
        if target is None:
            Z = X
            f = random_monotone_family(P, X, rng)
        else:
            Z = target
            f = _monotone_into(P, X, Z, rng)
        t1, t2 = random_hh_pair(P, X, rng)
        if not hh_leq(t1, t2, X):
            rep.fail({"theta1": t1, "theta2": t2, "laws": ["generator produced an unrelated pair"]})
            continue
        res = hh_leq(bind_fn(f, t1), bind_fn(f, t2), Z)
        if not res:
            rep.fail({"theta1": t1, "theta2": t2, "f": f, "witness": res.witness})
    return rep


def _monotone_into(P, X: FinPoset, Z: FinPoset, rng) -> dict:
    # f(x) = sum of random maps over Z attached to everything below x
    g = {x: random_map(P, Z.elements, rng, 2) for x in X.elements}
    return {
        x: freemod.total(P, [g[w] for w in X.elements if X.leq(w, x)]) for x in X.elements
    }


def check_antisymmetry(P: Semiring, poset: FinPoset | None = None, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED) -> LawReport:
    """Look for distinct maps that ⊑ cannot tell apart.

    Every equivalent-but-distinct pair is recorded as a failure.  For
    ``bool2`` the pair ``delta_1``, ``delta_0 + delta_1`` over ``0 < 1`` is
    always checked first.
    """
    rng = rng_for(seed, "antisymmetry", P.name)
    rep = LawReport("antisymmetry", P.name)
    if P.name == "bool2":
        Y = chain([0, 1])
        d1 = delta(P, 1)
        d01 = add(delta(P, 0), d1)
        rep.cases += 1
        if hh_equiv(d1, d01, Y) and d1 != d01:
            rep.fail({"theta1": d1, "theta2": d01, "poset": repr(Y)})
    for _ in range(samples):
        rep.cases += 1
        Y = _pick_poset(rng, poset)
        how = rng.randrange(3)
        if how == 0:
            t1, t2 = random_hh_pair(P, Y, rng)
        elif how == 1:
            t1 = random_map(P, Y.elements, rng)
            t2 = add(t1, random_map(P, Y.elements, rng, 1)) if rng.random() < 0.5 else t1
        else:
            small = [P.one, P.add(P.one, P.one)]
            t1 = WeightedMap(P, {x: rng.choice(small) for x in rng.sample(Y.elements, rng.randint(0, len(Y)))})
            t2 = WeightedMap(P, {x: rng.choice(small) for x in rng.sample(Y.elements, rng.randint(0, len(Y)))})
        if t1 != t2 and hh_equiv(t1, t2, Y):
            rep.fail({"theta1": t1, "theta2": t2, "poset": repr(Y)})
    return rep


def check_idempotent_module(P: Semiring, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED) -> LawReport:
    """Over an idempotent semiring, ``θ1 ⊑ θ2`` iff ``θ1 + θ2 ≡ θ2``."""
    rng = rng_for(seed, "idempotent-module", P.name)
    rep = LawReport("idempotent-module", P.name)
    for _ in range(samples):
        rep.cases += 1
        Y = _pick_poset(rng, None)
        if rng.random() < 0.5:
            t1, t2 = random_hh_pair(P, Y, rng)
        else:
            t1, t2 = random_map(P, Y.elements, rng), random_map(P, Y.elements, rng)
        if bool(hh_leq(t1, t2, Y)) != hh_equiv(add(t1, t2), t2, Y):
            rep.fail({"theta1": t1, "theta2": t2, "poset": repr(Y)})
    return rep


# ---------------------------------------------------------------------------

SHIPPED = ("rational", "natural", "bool2", "tropical", "rvector(2)", "product(rational,bool2)")


def shipped_instances() -> list[Semiring]:
    from ..semiring import parse_semiring

    return [parse_semiring(s) for s in SHIPPED]


def law_suite(P: Semiring, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED) -> list[LawReport]:
    """Module, monad and functor laws plus the three monotonicity laws for one instance."""
    return [
        check_module_axioms(P, samples, seed),
        check_monad_laws(P, samples, seed),
        check_functoriality(P, samples, seed),
        check_fact1(P, None, samples, seed),
        check_fact2(P, None, samples, seed),
        check_fact3(P, None, None, samples, seed),
    ]


def run_all(instances=None, samples=DEFAULT_SAMPLES, seed=DEFAULT_SEED) -> list[LawReport]:
    instances = instances or shipped_instances()
    reports = []
    for P in instances:
        reports.append(check_semiring_axioms(P, samples, seed))
        reports.extend(check_declared_capabilities(P, samples, seed))
        reports.extend(law_suite(P, samples, seed))
    return reports


__all__ = [
    "LawReport",
    "check_semiring_axioms",
    "check_capability",
    "check_declared_capabilities",
    "check_module_axioms",
    "check_monad_laws",
    "check_functoriality",
    "check_fact1",
    "check_fact2",
    "check_fact3",
    "check_antisymmetry",
    "check_idempotent_module",
    "mutant_bind",
    "law_suite",
    "run_all",
    "shipped_instances",
    "make_instance",
]
