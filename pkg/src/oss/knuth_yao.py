"""The Knuth-Yao fair die built from fair coin flips, as an unguarded system."""
from __future__ import annotations

from fractions import Fraction as F

from .freemod import WeightedMap
from .poset import discrete
from .semiring import Rational
from .solver import UnguardedSystem

STATES = ("x1", "x2", "x3", "x4", "x5", "x6")
FACES = ("d1", "d2", "d3", "d4", "d5", "d6")

HALF = F(1, 2)

TRANSITIONS = {
    "x1": {"x2": HALF, "x3": HALF},
    "x2": {"x4": HALF, "x5": HALF},
    "x3": {"x1": HALF, "x6": HALF},
    "x4": {"d1": HALF, "d2": HALF},
    "x5": {"d3": HALF, "d4": HALF},
    "x6": {"d5": HALF, "d6": HALF},
}

# probability of eventually emitting each face from each state
EXPECTED = {
    "x1": (F(1, 6),) * 6,
    "x2": (F(1, 4), F(1, 4), F(1, 4), F(1, 4), F(0), F(0)),
    "x3": (F(1, 12), F(1, 12), F(1, 12), F(1, 12), F(1, 3), F(1, 3)),
    "x4": (HALF, HALF, F(0), F(0), F(0), F(0)),
    "x5": (F(0), F(0), HALF, HALF, F(0), F(0)),
    "x6": (F(0), F(0), F(0), F(0), HALF, HALF),
}

SOURCE = """\
# Knuth-Yao: a fair six-sided die from fair coin flips
semiring rational
outputs { d1 d2 d3 d4 d5 d6 }
states { x1 x2 x3 x4 x5 x6 }
x1 = 1/2*x2 + 1/2*x3
x2 = 1/2*x4 + 1/2*x5
x3 = 1/2*x1 + 1/2*x6
x4 = 1/2*d1 + 1/2*d2
x5 = 1/2*d3 + 1/2*d4
x6 = 1/2*d5 + 1/2*d6
"""


def build_system() -> UnguardedSystem:
    P = Rational()
    rows = {x: WeightedMap(P, TRANSITIONS[x]) for x in STATES}
    return UnguardedSystem.from_rows(P, STATES, discrete(FACES), rows)


def expected_solution() -> tuple:
    P = Rational()
    return tuple(WeightedMap(P, dict(zip(FACES, EXPECTED[x]))) for x in STATES)
