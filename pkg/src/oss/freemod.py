"""Finitely supported weighted maps: the free P-module and its orders.

A :class:`WeightedMap` is an immutable finitely supported function from
hashable keys to semiring elements.  Zero weights are pruned eagerly, so
two maps are equal exactly when their supports and weights coincide.
Maps are called like functions: ``theta(x)`` returns the weight of ``x``,
``zero`` outside the support.
"""
from __future__ import annotations

from typing import Callable, Hashable, Iterable, Mapping, NamedTuple

from .errors import MassViolation, PartialFunction, SemiringMismatch, UnknownElement
from .poset import FinPoset
from .semiring import Semiring


class WeightedMap:
    __slots__ = ("semiring", "_w", "_hash")

    def __init__(self, semiring: Semiring, entries: Mapping | Iterable[tuple] = ()):
        zero = semiring.zero
        items = entries.items() if isinstance(entries, Mapping) else entries
        w = {}
        for k, v in items:
            if k in w:
                v = semiring.add(w[k], v)
            if v == zero:
                w.pop(k, None)
            else:
                w[k] = v
        self.semiring = semiring
        self._w = w
        self._hash = None

    @classmethod
    def _trusted(cls, semiring, w: dict) -> WeightedMap:
        # caller guarantees ``w`` has no zero weights and is not shared
        obj = cls.__new__(cls)
        obj.semiring = semiring
        obj._w = w
        obj._hash = None
        return obj

    def __call__(self, x):
        return self._w.get(x, self.semiring.zero)

    def items(self):
        return self._w.items()

    def weights(self):
        return self._w.values()

    @property
    def support(self) -> frozenset:
        return frozenset(self._w)

    def __iter__(self):
        return iter(self._w)

    def __len__(self):
        return len(self._w)

    def __bool__(self):
        return bool(self._w)

    def __contains__(self, x):
        return x in self._w

    def __eq__(self, other):
        if not isinstance(other, WeightedMap):
            return NotImplemented
        return self.semiring == other.semiring and self._w == other._w

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.semiring, frozenset(self._w.items())))
        return self._hash

    def __add__(self, other):
        if not isinstance(other, WeightedMap):
            return NotImplemented
        return add(self, other)

    def __rmul__(self, r):
        return scale(r, self)

    def __repr__(self):
        return f"WeightedMap({self.semiring.name}, {self.format()})"

    def format(self) -> str:
        if not self._w:
            return "0"
        fmt = self.semiring.format
        return " + ".join(f"{fmt(v)}*{k}" for k, v in self._w.items())

    def restrict(self, keys: Iterable) -> WeightedMap:
        keys = set(keys)
        return WeightedMap._trusted(self.semiring, {k: v for k, v in self._w.items() if k in keys})


def _same(a: WeightedMap, b: WeightedMap) -> Semiring:
    if a.semiring != b.semiring:
        raise SemiringMismatch(f"{a.semiring.name} vs {b.semiring.name}")
    return a.semiring


def empty(P: Semiring) -> WeightedMap:
    return WeightedMap._trusted(P, {})


def delta(P: Semiring, x: Hashable) -> WeightedMap:
    """The unit of the monad: weight ``one`` on ``x``."""
    return WeightedMap._trusted(P, {x: P.one})


def add(theta1: WeightedMap, theta2: WeightedMap) -> WeightedMap:
    P = _same(theta1, theta2)
    if not theta2._w:
        return theta1
    if not theta1._w:
        return theta2
    w = dict(theta1._w)
    zero = P.zero
    for k, v in theta2._w.items():
        if k in w:
            s = P.add(w[k], v)
            if s == zero:
                del w[k]
            else:
                w[k] = s
        else:
            w[k] = v
    return WeightedMap._trusted(P, w)


def total(P: Semiring, maps: Iterable[WeightedMap]) -> WeightedMap:
    acc = empty(P)
    for m in maps:
        acc = add(acc, m)
    return acc


def scale(r, theta: WeightedMap) -> WeightedMap:
    """Left scalar action ``r * theta``."""
    P = theta.semiring
    if r == P.zero:
        return empty(P)
    if r == P.one:
        return theta
    zero = P.zero
    w = {}
    for k, v in theta._w.items():
        p = P.mul(r, v)
        if p != zero:
            w[k] = p
    return WeightedMap._trusted(P, w)


def pushforward(h: Callable | Mapping, theta: WeightedMap) -> WeightedMap:
    """Image of ``theta`` along ``h``: the weight of ``y`` sums the fibre over ``y``."""
    P = theta.semiring
    w: dict = {}
    for x, v in theta._w.items():
        y = _apply(h, x)
        w[y] = P.add(w[y], v) if y in w else v
    return WeightedMap(P, w)


def _apply(f, x):
    try:
        return f[x] if isinstance(f, Mapping) else f(x)
    except (KeyError, IndexError) as exc:
        raise PartialFunction(f"function undefined on support element {x!r}") from exc


def bind(f: Callable | Mapping, theta: WeightedMap) -> WeightedMap:
    """The homomorphic extension of ``f``: ``sum_x theta(x) * f(x)``."""
    P = theta.semiring
    acc = empty(P)
    for x, v in theta._w.items():
        fx = _apply(f, x)
        if not isinstance(fx, WeightedMap):
            raise TypeError(f"bind expects f({x!r}) to be a WeightedMap, got {type(fx).__name__}")
        acc = add(acc, scale(v, fx))
    return acc


def mass(theta: WeightedMap):
    return theta.semiring.sum(theta._w.values())


def is_subdistribution(theta: WeightedMap) -> bool:
    P = theta.semiring
    return P.leq(mass(theta), P.one) is True


def Subdistribution(theta: WeightedMap) -> WeightedMap:
    """Validate that ``theta`` has mass comparable to and at most ``one``."""
    if not is_subdistribution(theta):
        P = theta.semiring
        raise MassViolation(f"mass {P.format(mass(theta))} is not <= 1 in {P.name}")
    return theta


def pointwise_leq(theta1: WeightedMap, theta2: WeightedMap) -> bool:
    P = _same(theta1, theta2)
    return all(P.leq(v, theta2(x)) is True for x, v in theta1._w.items())


class HHResult(NamedTuple):
    """Outcome of a heavier-higher comparison; truthy iff it holds.

    ``witness`` is an up-set of the ambient poset on which the required
    inequality fails (or the two sums are incomparable).
    """

    holds: bool
    witness: frozenset | None = None

    def __bool__(self):
        return self.holds


def _check_keys(theta: WeightedMap, Y: FinPoset):
    for x in theta._w:
        if x not in Y.index:
            raise UnknownElement(f"support element {x!r} is not in the poset")


def hh_leq(theta1: WeightedMap, theta2: WeightedMap, Y: FinPoset) -> HHResult:
    """Decide ``theta1 ⊑ theta2`` in the heavier-higher order over ``Y``.

    Only up-sets of the subposet induced on the union of the supports are
    checked; each of them is the trace of its ambient upward closure, and
    sums outside the supports are zero.
    """
    P = _same(theta1, theta2)
    _check_keys(theta1, Y)
    _check_keys(theta2, Y)
    w1, w2 = theta1._w, theta2._w
    support = list(dict.fromkeys([*w1, *w2]))
    zero = P.zero
    for V in Y.iter_upsets(support):
        s1 = P.sum(w1.get(x, zero) for x in V)
        s2 = P.sum(w2.get(x, zero) for x in V)
        if P.leq(s1, s2) is not True:
            return HHResult(False, Y.upward_closure(V))
    return HHResult(True, None)


def hh_equiv(theta1: WeightedMap, theta2: WeightedMap, Y: FinPoset) -> bool:
    return bool(hh_leq(theta1, theta2, Y)) and bool(hh_leq(theta2, theta1, Y))


def hh_compare(theta1: WeightedMap, theta2: WeightedMap, Y: FinPoset):
    """Classify a pair as equivalent, left-below, right-below or incomparable.

    Returns ``(relation, forward, backward)`` with the two :class:`HHResult`.
    """
    fwd = hh_leq(theta1, theta2, Y)
    bwd = hh_leq(theta2, theta1, Y)
    if fwd and bwd:
        rel = "equivalent"
    elif fwd:
        rel = "left-below"
    elif bwd:
        rel = "right-below"
    else:
        rel = "incomparable"
    return rel, fwd, bwd
