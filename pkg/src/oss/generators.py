"""Seeded random generators for posets, weighted maps and systems."""
from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .freemod import WeightedMap, add, delta, empty, hh_leq, pushforward, scale, total
from .poset import FinPoset, build_poset
from .semiring import Rational, RVector, Semiring
from .solver import UnguardedSystem

DEFAULT_SEED = 0xC0FFEE


def rng_for(seed: int = DEFAULT_SEED, *salt) -> random.Random:
    return random.Random(repr((seed,) + salt))


def random_poset(rng: random.Random, n: int, p: float = 0.35, prefix: str = "y") -> FinPoset:
    els = [f"{prefix}{i}" for i in range(n)]
    gens = [(els[i], els[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return build_poset(els, gens)


def random_map(P: Semiring, keys: Sequence, rng: random.Random, max_support: int = 4) -> WeightedMap:
    if not keys:
        return empty(P)
    k = rng.randint(0, min(max_support, len(keys)))
    return WeightedMap(P, {x: P.sample(rng) for x in rng.sample(list(keys), k)})


def random_above(Y: FinPoset, x, rng: random.Random):
    return rng.choice([x, *sorted(Y.above(x), key=str)])


def random_hh_pair(P: Semiring, Y: FinPoset, rng: random.Random, max_support: int = 4):
    """A pair ``(theta1, theta2)`` with ``theta1 ⊑ theta2`` over ``Y``.

    Mixes four constructions: adding a random map, moving weight upward along
    the order, both, and rejection-filtering independent random pairs.
    """
    keys = Y.elements
    theta1 = random_map(P, keys, rng, max_support)
    how = rng.randrange(4)
    if how == 0:
        return theta1, add(theta1, random_map(P, keys, rng, 2))
    if how == 1:
        moves = {x: random_above(Y, x, rng) for x in theta1}
        return theta1, pushforward(moves, theta1)
    if how == 2:
        moves = {x: random_above(Y, x, rng) for x in theta1}
        return theta1, add(pushforward(moves, theta1), random_map(P, keys, rng, 2))
    for _ in range(20):
        theta2 = random_map(P, keys, rng, max_support)
        if hh_leq(theta1, theta2, Y):
            return theta1, theta2
    return theta1, add(theta1, random_map(P, keys, rng, 2))


def random_leq_scalars(P: Semiring, rng: random.Random):
    p = P.sample(rng)
    return p, P.add(p, P.sample(rng))


def random_monotone_family(P: Semiring, X: FinPoset, rng: random.Random, max_support: int = 2) -> dict:
    """A map ``f: X -> O_P(X)`` monotone for the heavier-higher order on ``X``.

    ``f(x) = sum_{z <= x} g(z) + c * delta_x``: the first term only grows
    along the order and the second pushes weight upward with ``x``.
    """
    g = {z: random_map(P, X.elements, rng, max_support) for z in X.elements}
    c = P.sample(rng)
    f = {}
    for x in X.elements:
        below = [g[z] for z in X.elements if X.leq(z, x)]
        f[x] = add(total(P, below), scale(c, delta(P, x)))
    return f


def _row_weights(rng: random.Random, width: int, density: float) -> list[int]:
    return [rng.randint(1, 4) if rng.random() < density else 0 for _ in range(width)]


def random_rational_system(
    rng: random.Random,
    n: int | None = None,
    n_out: int | None = None,
    stochastic: bool = False,
    density: float = 0.5,
) -> UnguardedSystem:
    """A random rational system; rows have mass exactly 1 when ``stochastic``."""
    P = Rational()
    n = n if n is not None else rng.randint(1, 5)
    n_out = n_out if n_out is not None else rng.randint(1, 4)
    states = [f"x{i + 1}" for i in range(n)]
    outs = [f"d{i + 1}" for i in range(n_out)]
    targets = states + outs
    rows = {}
    for x in states:
        ws = _row_weights(rng, len(targets), density)
        if not any(ws):
            ws[rng.randrange(len(targets))] = 1
        denom = sum(ws) if stochastic else sum(ws) + rng.randint(0, 4)
        rows[x] = WeightedMap(P, {t: Fraction(w, denom) for t, w in zip(targets, ws)})
    return UnguardedSystem.from_rows(P, states, outs, rows)


def random_rvector_system(rng: random.Random, dim: int, n: int, n_out: int, density: float = 0.5):
    """A random system over ``rvector(dim)`` together with its ``dim`` rational slices."""
    P = RVector(dim)
    Q = Rational()
    states = [f"x{i + 1}" for i in range(n)]
    outs = [f"d{i + 1}" for i in range(n_out)]
    targets = states + outs
    pattern = {x: [rng.random() < density for _ in targets] for x in states}
    for x in states:
        if not any(pattern[x]):
            pattern[x][rng.randrange(len(targets))] = True
    exact = rng.random() < 0.5
    comps = []
    for _ in range(dim):
        rows = {}
        for x in states:
            ws = [rng.randint(1, 4) if on else 0 for on in pattern[x]]
            denom = sum(ws) if exact else sum(ws) + rng.randint(1, 4)
            rows[x] = {t: Fraction(w, denom) for t, w in zip(targets, ws) if w}
        comps.append(rows)
    vrows = {
        x: WeightedMap(P, {t: tuple(comps[c][x][t] for c in range(dim)) for t in comps[0][x]})
        for x in states
    }
    system = UnguardedSystem.from_rows(P, states, outs, vrows)
    slices = [
        UnguardedSystem.from_rows(Q, states, outs, {x: WeightedMap(Q, comps[c][x]) for x in states})
        for c in range(dim)
    ]
    return system, slices
