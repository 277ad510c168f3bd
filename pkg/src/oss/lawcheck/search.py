"""Exhaustive search over small finite ordered semirings.

Whether the heavier-higher construction yields free ordered modules beyond
the cancellative/difference-ordered and idempotent cases is an open
question.  This module enumerates every ordered semiring on at most four
elements (up to relabelling that fixes 0 and 1), classifies each one, and
probes monotonicity of homomorphic extensions exhaustively on small posets.

Findings are evidence at finite scale only, not an answer to the question.
"""
from __future__ import annotations

import dataclasses
from itertools import permutations, product as iproduct
from typing import Iterator

import numpy as np

from ..errors import BadParams, SizeTooLarge
from ..freemod import WeightedMap, bind, hh_leq
from ..poset import discrete, naturally_labelled_posets
from ..semiring import Bool2, Semiring, TableSemiring
from .laws import check_semiring_axioms

MAX_SIZE = 4
MAX_POSET = 4

CLASS_CANCELLATIVE = "cancellative-difference-ordered"
CLASS_IDEMPOTENT = "idempotent"
CLASS_PRODUCT = "product"
CLASS_OTHER = "other"


class FiniteOrderedSemiring(TableSemiring):
    """A table semiring whose constructor rejects any axiom violation."""

    def __init__(self, add_table, mul_table, order, name=None):
        super().__init__(add_table, mul_table, order, name)
        n = self.size
        if any(len(t) != n or any(len(r) != n for r in t) for t in (self.add_table, self.mul_table, self.order)):
            raise BadParams("tables must all be size x size")
        rep = check_semiring_axioms(self)
        if not rep.passed:
            raise BadParams(f"not an ordered semiring: {rep.failures[0]}")

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "size": self.size,
            "add": [list(r) for r in self.add_table],
            "mul": [list(r) for r in self.mul_table],
            "order": [[int(v) for v in r] for r in self.order],
        }


def as_table(P: Semiring, name: str | None = None) -> FiniteOrderedSemiring:
    """Re-encode a finite instance on ``0..n-1`` with zero -> 0 and one -> 1."""
    rest = [e for e in P.elements() if e not in (P.zero, P.one)]
    els = [P.zero] + ([P.one] if P.one != P.zero else []) + rest
    ix = {e: i for i, e in enumerate(els)}
    add = [[ix[P.add(a, b)] for b in els] for a in els]
    mul = [[ix[P.mul(a, b)] for b in els] for a in els]
    order = [[P.leq(a, b) is True for b in els] for a in els]
    return FiniteOrderedSemiring(add, mul, order, name or P.name)


# ---------------------------------------------------------------------------
# enumeration

def _relabel(tables, perm):
    add, mul, order = tables
    n = len(add)
    inv = [0] * n
    for old, new in enumerate(perm):
        inv[new] = old
    A = tuple(tuple(perm[add[inv[i]][inv[j]]] for j in range(n)) for i in range(n))
    M = tuple(tuple(perm[mul[inv[i]][inv[j]]] for j in range(n)) for i in range(n))
    O = tuple(tuple(order[inv[i]][inv[j]] for j in range(n)) for i in range(n))
    return A, M, O


def canonical_form(add, mul, order) -> tuple:
    """Lexicographically least relabelling that keeps 0 and 1 fixed."""
    n = len(add)
    fixed = list(range(min(n, 2)))
    best = None
    for rest in permutations(range(len(fixed), n)):
        perm = fixed + list(rest)
        cand = _relabel((add, mul, order), perm)
        if best is None or cand < best:
            best = cand
    return best


def _add_tables(n) -> Iterator[list]:
    free = [(i, j) for i in range(1, n) for j in range(i, n)]
    for vals in iproduct(range(n), repeat=len(free)):
        T = [[0] * n for _ in range(n)]
        for i in range(n):
            T[0][i] = T[i][0] = i
        for (i, j), v in zip(free, vals):
            T[i][j] = T[j][i] = v
        if all(T[T[a][b]][c] == T[a][T[b][c]] for a in range(n) for b in range(n) for c in range(n)):
            yield T


def _mul_tables(n) -> Iterator[list]:
    free = [(i, j) for i in range(2, n) for j in range(2, n)]
    for vals in iproduct(range(n), repeat=len(free)):
        T = [[0] * n for _ in range(n)]
        for i in range(n):
            T[1][i] = T[i][1] = i
        T[0] = [0] * n
        for i in range(n):
            T[i][0] = 0
        for (i, j), v in zip(free, vals):
            T[i][j] = v
        if all(T[T[a][b]][c] == T[a][T[b][c]] for a in range(n) for b in range(n) for c in range(n)):
            yield T


def _orders(n) -> list:
    """Partial orders on ``0..n-1`` with 0 as bottom, as boolean matrices."""
    others = range(1, n)
    pairs = [(i, j) for i in others for j in others if i != j]
    out = []
    for bits in iproduct((False, True), repeat=len(pairs)):
        rel = {p for p, b in zip(pairs, bits) if b}
        if any((j, i) in rel for i, j in rel):
            continue
        if any((i, k) not in rel for i, j in rel for j2, k in rel if j == j2 and i != k):
            continue
        O = [[i == j or i == 0 or (i, j) in rel for j in range(n)] for i in range(n)]
        out.append(O)
    return out


def _distributive(A, M, n):
    r = range(n)
    return all(
        M[a][A[b][c]] == A[M[a][b]][M[a][c]] and M[A[b][c]][a] == A[M[b][a]][M[c][a]]
        for a in r
        for b in r
        for c in r
    )


def _monotone(A, M, O, n):
    r = range(n)
    for a in r:
        for b in r:
            if not O[a][b]:
                continue
            for c in r:
                if not (O[A[a][c]][A[b][c]] and O[M[a][c]][M[b][c]] and O[M[c][a]][M[c][b]]):
                    return False
    return True


def enumerate_finite_semirings(max_size: int = 3) -> Iterator[FiniteOrderedSemiring]:
    """Yield every ordered semiring with at most ``max_size`` elements.

    Structures are pruned up to relabellings fixing 0 and 1; each yielded
    structure has passed the exhaustive axiom check in its constructor.
    """
    if max_size > MAX_SIZE:
        raise SizeTooLarge(f"enumeration is limited to carriers of size <= {MAX_SIZE}")
    for n in range(1, max_size + 1):
        if n == 1:
            yield FiniteOrderedSemiring([[0]], [[0]], [[True]], name="trivial")
            continue
        orders = _orders(n)
        seen = set()
        k = 0
        for A in _add_tables(n):
            for M in _mul_tables(n):
                if not _distributive(A, M, n):
                    continue
                for O in orders:
                    if not _monotone(A, M, O, n):
                        continue
                    canon = canonical_form(A, M, O)
                    if canon in seen:
                        continue
                    seen.add(canon)
                    yield FiniteOrderedSemiring(*canon, name=f"fin{n}.{k}")
                    k += 1


def product_table(a: TableSemiring, b: TableSemiring) -> TableSemiring:
    pairs = [(0, 0), (a.one, b.one)]
    pairs += [p for p in iproduct(range(a.size), range(b.size)) if p not in pairs]
    ix = {p: i for i, p in enumerate(pairs)}
    add = [[ix[(a.add(p[0], q[0]), b.add(p[1], q[1]))] for q in pairs] for p in pairs]
    mul = [[ix[(a.mul(p[0], q[0]), b.mul(p[1], q[1]))] for q in pairs] for p in pairs]
    order = [[a.order[p[0]][q[0]] and b.order[p[1]][q[1]] for q in pairs] for p in pairs]
    return TableSemiring(add, mul, order, name=f"{a.name}x{b.name}")


def classify(S: TableSemiring, catalog: dict[int, list] | None = None) -> str:
    """Which known sufficient condition for monotone extensions ``S`` meets, if any.

    "product" means ``S`` is isomorphic to a direct product of two smaller
    structures that themselves fall in one of the classes.
    """
    caps = S.capabilities
    if caps.cancellative and caps.difference_ordered:
        return CLASS_CANCELLATIVE
    if caps.idempotent:
        return CLASS_IDEMPOTENT
    if catalog:
        target = canonical_form(S.add_table, S.mul_table, S.order)
        for p in range(2, S.size):
            if S.size % p:
                continue
            for a in catalog.get(p, []):
                if classify(a, catalog) == CLASS_OTHER:
                    continue
                for b in catalog.get(S.size // p, []):
                    if classify(b, catalog) == CLASS_OTHER:
                        continue
                    prod = product_table(a, b)
                    if canonical_form(prod.add_table, prod.mul_table, prod.order) == target:
                        return CLASS_PRODUCT
    return CLASS_OTHER


# ---------------------------------------------------------------------------
# probing

@dataclasses.dataclass
class ProbeResult:
    cases: int = 0
    violations: int = 0
    witnesses: list = dataclasses.field(default_factory=list)


def probe(S: TableSemiring, max_poset: int = MAX_POSET, max_support: int = 3, max_witnesses: int = 5) -> ProbeResult:
    """Exhaustively test monotonicity of homomorphic extensions over ``S``.

    For every poset ``X`` with at most ``max_poset`` elements, every pair
    ``θ1 ⊑ θ2`` of maps with weights in ``S`` and support at most
    ``max_support``, and every monotone ``g: X -> S``, compare
    ``bind(f, θ1)`` and ``bind(f, θ2)`` for ``f(x) = g(x) * delta_*``.
    Monotone maps into any free module reduce to this case: the weight a
    free-module-valued ``f`` puts on a fixed up-set is a monotone ``X -> S``.
    The table computation is vectorised; each reported witness is re-checked
    through :func:`freemod.bind` and :func:`freemod.hh_leq`.
    """
    if max_poset > MAX_POSET:
        raise SizeTooLarge(f"posets are limited to {MAX_POSET} elements")
    E = list(S.elements())
    addT = np.array(S.add_table, dtype=np.int64)
    mulT = np.array(S.mul_table, dtype=np.int64)
    leqT = np.array(S.order, dtype=bool)
    out = ProbeResult()
    for k in range(1, max_poset + 1):
        thetas = np.array(
            [v for v in iproduct(E, repeat=k) if sum(1 for c in v if c != 0) <= max_support],
            dtype=np.int64,
        )
        m = len(thetas)
        for X in naturally_labelled_posets(k):
            upsets = [sorted(U) for U in X.iter_upsets()]
            sums = np.zeros((m, len(upsets)), dtype=np.int64)
            for u, U in enumerate(upsets):
                acc = np.zeros(m, dtype=np.int64)
                for x in U:
                    acc = addT[acc, thetas[:, x]]
                sums[:, u] = acc
            related = leqT[sums[:, None, :], sums[None, :, :]].all(axis=2)
            pairs = [(x, y) for x, y in X.related_pairs() if x != y]
            gs = np.array(
                [g for g in iproduct(E, repeat=k) if all(leqT[g[x], g[y]] for x, y in pairs)],
                dtype=np.int64,
            )
            ext = np.zeros((m, len(gs)), dtype=np.int64)
            for x in range(k):
                ext = addT[ext, mulT[thetas[:, x][:, None], gs[None, :, x]]]
            ok = leqT[ext[:, None, :], ext[None, :, :]]
            bad = related[:, :, None] & ~ok
            out.cases += int(related.sum()) * len(gs)
            nbad = int(bad.sum())
            if not nbad:
                continue
            out.violations += nbad
            for i, j, gi in np.argwhere(bad)[: max(0, max_witnesses - len(out.witnesses))]:
                out.witnesses.append(_confirm(S, X, thetas[i], thetas[j], gs[gi]))
    return out


def _confirm(S, X, v1, v2, g) -> dict:
    t1 = WeightedMap(S, {x: int(w) for x, w in enumerate(v1)})
    t2 = WeightedMap(S, {x: int(w) for x, w in enumerate(v2)})
    f = {x: WeightedMap(S, {"*": int(w)}) for x, w in enumerate(g)}
    Z = discrete(["*"])
    if not hh_leq(t1, t2, X) or hh_leq(bind(f, t1), bind(f, t2), Z):
        raise AssertionError("vectorised probe disagrees with the library")
    return {
        "poset": [[x, y] for x, y in X.related_pairs() if x != y],
        "size": len(X),
        "f": [int(w) for w in g],
        "theta1": [int(w) for w in v1],
        "theta2": [int(w) for w in v2],
        "ext1": S.format(bind(f, t1)("*")),
        "ext2": S.format(bind(f, t2)("*")),
    }


@dataclasses.dataclass
class SearchResult:
    max_size: int
    max_poset: int
    max_support: int
    structures: list

    @property
    def findings(self) -> list:
        return [s for s in self.structures if s["violations"]]

    @property
    def certificate(self) -> bool:
        """True when every probed structure came out violation-free."""
        return not self.findings

    def to_json(self) -> dict:
        return {
            "max_size": self.max_size,
            "max_poset": self.max_poset,
            "max_support": self.max_support,
            "structures": self.structures,
            "findings": self.findings,
            "exhausted_without_violation": self.certificate,
        }

    @classmethod
    def from_json(cls, doc) -> SearchResult:
        return cls(doc["max_size"], doc["max_poset"], doc["max_support"], list(doc["structures"]))


def _key(S: TableSemiring) -> tuple:
    return canonical_form(S.add_table, S.mul_table, [[bool(v) for v in r] for r in S.order])


def _known_aliases() -> dict:
    """Canonical forms of the shipped finite instances, by name."""
    return {_key(as_table(P)): P.name for P in (Bool2(),)}


def search_counterexample(
    max_size: int = 3,
    max_poset: int = 4,
    max_support: int = 3,
    max_witnesses: int = 5,
    probe_all: bool = True,
) -> SearchResult:
    """Probe every small ordered semiring for non-monotone homomorphic extensions.

    With ``probe_all=False`` only structures outside the known classes are
    probed; by default every structure is probed, so the known classes act
    as a control group that must stay violation-free.
    """
    if max_size > MAX_SIZE or max_poset > MAX_POSET:
        raise SizeTooLarge(f"search is limited to size <= {MAX_SIZE} and posets <= {MAX_POSET}")
    catalog: dict[int, list] = {}
    for S in enumerate_finite_semirings(max_size):
        catalog.setdefault(S.size, []).append(S)
    aliases = _known_aliases()
    records = []
    for S in (s for n in sorted(catalog) for s in catalog[n]):
        cls_ = classify(S, catalog)
        rec = S.to_json() | {
            "alias": aliases.get(_key(S)),
            "class": cls_,
            "capabilities": S.capabilities.declared(),
            "probed": False,
            "cases": 0,
            "violations": 0,
            "witnesses": [],
        }
        if probe_all or cls_ == CLASS_OTHER:
            res = probe(S, max_poset, max_support, max_witnesses)
            rec.update(probed=True, cases=res.cases, violations=res.violations, witnesses=res.witnesses)
        records.append(rec)
    return SearchResult(max_size, max_poset, max_support, records)
