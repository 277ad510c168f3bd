"""Finite posets used as output alphabets, with up-set enumeration."""
from __future__ import annotations

from itertools import combinations
from typing import Hashable, Iterable, Iterator, Sequence

from .errors import CycleDetected, TooLarge, UnknownElement

DEFAULT_UPSET_CAP = 20


class FinPoset:
    """An immutable finite partial order.

    The order is stored as a dense reflexive, transitively closed boolean
    matrix ``le[i][j]`` (True iff ``elements[i] <= elements[j]``).
    """

    __slots__ = ("elements", "index", "le", "_above", "upset_cap")

    def __init__(self, elements: Sequence[Hashable], le, upset_cap: int = DEFAULT_UPSET_CAP):
        self.elements = tuple(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        self.le = tuple(tuple(row) for row in le)
        # strict upper sets, by index
        self._above = tuple(
            frozenset(j for j in range(len(self.elements)) if j != i and self.le[i][j])
            for i in range(len(self.elements))
        )
        self.upset_cap = upset_cap

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __eq__(self, other):
        return (
            isinstance(other, FinPoset)
            and set(self.elements) == set(other.elements)
            and all(
                self.leq(x, y) == other.leq(x, y) for x in self.elements for y in self.elements
            )
        )

    def __hash__(self):
        return hash(frozenset(self.elements))

    def __repr__(self):
        rel = [f"{x}<{y}" for x, y in self.cover_pairs()]
        return f"FinPoset({list(self.elements)}, {rel})"

    def _idx(self, x) -> int:
        try:
            return self.index[x]
        except (KeyError, TypeError):
            raise UnknownElement(f"{x!r} is not an element of the poset") from None

    def leq(self, x, y) -> bool:
        return self.le[self._idx(x)][self._idx(y)]

    def above(self, x) -> frozenset:
        """Strict upper set of ``x``."""
        return frozenset(self.elements[j] for j in self._above[self._idx(x)])

    def cover_pairs(self) -> list[tuple]:
        pairs = []
        for i, up in enumerate(self._above):
            for j in up:
                if not any(j in self._above[k] for k in up):
                    pairs.append((self.elements[i], self.elements[j]))
        return pairs

    def related_pairs(self) -> list[tuple]:
        """All pairs ``(x, y)`` with ``x <= y``, including the reflexive ones."""
        return [
            (x, y)
            for i, x in enumerate(self.elements)
            for j, y in enumerate(self.elements)
            if self.le[i][j]
        ]

    # -- closure and up-sets ---------------------------------------------
    def upward_closure(self, subset: Iterable) -> frozenset:
        idx = {self._idx(x) for x in subset}
        out = set(idx)
        for i in idx:
            out |= self._above[i]
        return frozenset(self.elements[i] for i in out)

    def is_upward_closed(self, subset: Iterable) -> bool:
        s = frozenset(subset)
        return self.upward_closure(s) == s

    def iter_upsets(self, restrict_to: Iterable | None = None) -> Iterator[frozenset]:
        """Lazily yield the up-sets of the subposet induced on ``restrict_to``.

        Elements are visited maximal-first; an element may join the current
        set only when everything strictly above it (within the restriction)
        already has.
        """
        if restrict_to is None:
            idx = list(range(len(self.elements)))
        else:
            idx = list(dict.fromkeys(self._idx(x) for x in restrict_to))
        if len(idx) > self.upset_cap:
            raise TooLarge(
                f"{len(idx)} elements exceed the up-set enumeration cap of {self.upset_cap}"
            )
        members = set(idx)
        above = {i: self._above[i] & members for i in idx}
        order = sorted(idx, key=lambda i: len(above[i]))
        chosen: set[int] = set()
        els = self.elements

        def walk(k):
            if k == len(order):
                yield frozenset(els[i] for i in chosen)
                return
            i = order[k]
            yield from walk(k + 1)
            if above[i] <= chosen:
                chosen.add(i)
                yield from walk(k + 1)
                chosen.discard(i)

        yield from walk(0)

    def enumerate_upsets(self, restrict_to: Iterable | None = None) -> list[frozenset]:
        return list(self.iter_upsets(restrict_to))

    def subposet(self, subset: Iterable) -> FinPoset:
        keep = [self._idx(x) for x in dict.fromkeys(subset)]
        return FinPoset(
            [self.elements[i] for i in keep],
            [[self.le[i][j] for j in keep] for i in keep],
            self.upset_cap,
        )


def build_poset(
    elements: Sequence[Hashable],
    generators: Iterable[tuple] = (),
    upset_cap: int = DEFAULT_UPSET_CAP,
) -> FinPoset:
    """Build a poset from strict generator pairs ``(a, b)`` meaning ``a < b``."""
    elements = list(dict.fromkeys(elements))
    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    le = [[i == j for j in range(n)] for i in range(n)]
    for pair in generators:
        a, b = pair
        for v in (a, b):
            if v not in index:
                raise UnknownElement(f"generator endpoint {v!r} is not a declared element")
        if a == b:
            raise CycleDetected(f"generator {a!r} < {b!r} is a cycle of length 1")
        le[index[a]][index[b]] = True
    for k in range(n):
        for i in range(n):
            if le[i][k]:
                row_k = le[k]
                row_i = le[i]
                for j in range(n):
                    if row_k[j]:
                        row_i[j] = True
    for i in range(n):
        for j in range(i + 1, n):
            if le[i][j] and le[j][i]:
                raise CycleDetected(
                    f"generators force {elements[i]!r} <= {elements[j]!r} <= {elements[i]!r}"
                )
    return FinPoset(elements, le, upset_cap)


def chain(elements: Sequence[Hashable]) -> FinPoset:
    return build_poset(elements, list(zip(elements, elements[1:])))


def discrete(elements: Sequence[Hashable]) -> FinPoset:
    return build_poset(elements)


def upward_closure(P: FinPoset, subset: Iterable) -> frozenset:
    return P.upward_closure(subset)


def enumerate_upsets(P: FinPoset, restrict_to: Iterable | None = None) -> list[frozenset]:
    return P.enumerate_upsets(restrict_to)


def naturally_labelled_posets(n: int) -> Iterator[FinPoset]:
    """Every poset on ``0..n-1`` whose order extends the natural order of labels.

    Each isomorphism class of ``n``-element posets appears at least once.
    Built by adding element ``k`` above an arbitrary down-set of the poset on
    ``0..k-1``.
    """

    def grow(k, le):
        if k == n:
            yield FinPoset(range(n), le)
            return
        base = FinPoset(range(k), le)
        # down-sets of base are complements of up-sets
        for up in base.iter_upsets():
            down = [i for i in range(k) if i not in up]
            new = [list(row) + [False] for row in le]
            for i in down:
                new[i][k] = True
            new.append([False] * k + [True])
            yield from grow(k + 1, new)

    yield from grow(0, [])


def all_subsets(items: Sequence) -> Iterator[frozenset]:
    for r in range(len(items) + 1):
        for combo in combinations(items, r):
            yield frozenset(combo)
