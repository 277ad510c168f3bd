"""Ordered semirings, their capability flags, and the concrete instances.

Every instance is an immutable object exposing ``zero``, ``one``, ``add``,
``mul`` and a tri-valued ``leq``:

* ``True``  -- the pair is comparable and ``a <= b``
* ``False`` -- the pair is comparable and ``b < a``
* ``None``  -- the pair is incomparable

``None`` is falsy, so ``if P.leq(a, b):`` reads as "does a <= b hold".
Code that needs to distinguish "greater" from "incomparable" must test
``is None`` explicitly.
"""
from __future__ import annotations

import dataclasses
import math
import re
from fractions import Fraction
from itertools import product as iproduct
from typing import Iterable, Sequence

from .errors import (
    BadElement,
    BadParams,
    CapabilityMissing,
    NotComparable,
    UnknownSemiring,
    ZeroInverse,
)

INF = math.inf

CAPABILITY_NAMES = (
    "cancellative",
    "difference_ordered",
    "idempotent",
    "division",
    "omega_continuous",
    "bounded_chains",
)


@dataclasses.dataclass(frozen=True)
class Capabilities:
    """Declared algebraic properties of an ordered semiring.

    ``omega_continuous`` means every chain has a supremum preserved by the
    operations.  ``bounded_chains`` is the weaker guarantee used by the
    Kleene solver: chains bounded above have suprema (in the completion used
    for tolerance checks) and the operations preserve them.
    """

    cancellative: bool = False
    difference_ordered: bool = False
    idempotent: bool = False
    division: bool = False
    omega_continuous: bool = False
    bounded_chains: bool = False

    def declared(self) -> list[str]:
        return [name for name in CAPABILITY_NAMES if getattr(self, name)]

    def __and__(self, other: Capabilities) -> Capabilities:
        return Capabilities(
            **{n: getattr(self, n) and getattr(other, n) for n in CAPABILITY_NAMES}
        )

    @property
    def kleene(self) -> bool:
        return self.omega_continuous or self.bounded_chains


CapabilitySet = Capabilities


class Semiring:
    """Base class for ordered semiring instances.

    Subclasses implement ``add``, ``mul``, ``_le``, ``contains``, ``parse``,
    ``format``, ``sample`` and optionally ``_subtract``/``_invert``.
    """

    name = "semiring"
    zero = None
    one = None
    capabilities = Capabilities()
    finite = False
    #: Kleene iteration always reaches an exact fixed point (no tolerance needed).
    exact_iteration = False

    # -- structure -----------------------------------------------------
    def add(self, a, b):
        raise NotImplementedError

    def mul(self, a, b):
        raise NotImplementedError

    def _le(self, a, b) -> bool:
        raise NotImplementedError

    def leq(self, a, b) -> bool | None:
        if self._le(a, b):
            return True
        if self._le(b, a):
            return False
        return None

    def sum(self, xs: Iterable):
        total = self.zero
        for x in xs:
            total = self.add(total, x)
        return total

    def contains(self, x) -> bool:
        raise NotImplementedError

    def check(self, x):
        if not self.contains(x):
            raise BadElement(f"{x!r} is not an element of {self.name}")
        return x

    def elements(self) -> tuple:
        raise TypeError(f"{self.name} has an infinite carrier")

    # -- literals ------------------------------------------------------
    def parse(self, text: str):
        raise NotImplementedError

    def format(self, x) -> str:
        return str(x)

    # -- sampling and metrics (used by law checks and the Kleene solver) --
    def sample(self, rng):
        if self.finite:
            return rng.choice(self.elements())
        raise NotImplementedError

    def sample_chain(self, rng, length: int):
        """Return ``(chain, sup)``: an increasing chain and its supremum."""
        if not self.finite:
            raise NotImplementedError
        E = self.elements()
        cur, out = self.zero, []
        for _ in range(length):
            out.append(cur)
            cur = rng.choice([e for e in E if self.leq(cur, e) is True])
        return out, out[-1] if out else self.zero

    def distance(self, a, b):
        """Numeric distance used for Kleene tolerances; discrete by default."""
        return 0 if a == b else 1

    # -- derived operations ---------------------------------------------
    def require(self, *caps: str) -> None:
        missing = [c for c in caps if not getattr(self.capabilities, c)]
        if missing:
            raise CapabilityMissing(f"{self.name} lacks capability: {', '.join(missing)}")

    def subtract(self, r, s):
        """The unique ``t`` with ``r + t = s``, for ``r <= s``."""
        self.require("cancellative", "difference_ordered")
        if self.leq(r, s) is not True:
            raise NotComparable(f"{self.format(r)} is not <= {self.format(s)} in {self.name}")
        return self._subtract(r, s)

    def invert(self, r):
        self.require("division")
        if r == self.zero:
            raise ZeroInverse(f"zero has no inverse in {self.name}")
        return self._invert(r)

    def _subtract(self, r, s):
        for t in self.elements():
            if self.add(r, t) == s:
                return t
        raise NotComparable(f"no difference {self.format(s)} - {self.format(r)}")

    def _invert(self, r):
        for s in self.elements():
            if self.mul(r, s) == self.one and self.mul(s, r) == self.one:
                return s
        raise ZeroInverse(f"{self.format(r)} is not invertible")

    # -- identity --------------------------------------------------------
    def __eq__(self, other):
        return isinstance(other, Semiring) and self.name == other.name

    def __hash__(self):
        return hash(("semiring", self.name))

    def __repr__(self):
        return f"<{type(self).__name__} {self.name}>"


# ---------------------------------------------------------------------------
# Shared helpers for rational-valued carriers

def _is_rational(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise BadElement(f"not a rational literal: {text!r}") from exc


_DENOMS = (1, 2, 3, 4, 5, 6, 8)


def _random_fraction(rng, hi: int = 9) -> Fraction:
    return Fraction(rng.randint(0, hi), rng.choice(_DENOMS))


# ---------------------------------------------------------------------------

class Rational(Semiring):
    """Nonnegative rationals with +, x and the usual order."""

    name = "rational"
    zero = Fraction(0)
    one = Fraction(1)
    capabilities = Capabilities(
        cancellative=True, difference_ordered=True, division=True, bounded_chains=True
    )

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def _le(self, a, b):
        return a <= b

    def leq(self, a, b):
        return a <= b

    def contains(self, x):
        return _is_rational(x) and x >= 0

    def parse(self, text):
        return self.check(_parse_fraction(text))

    def format(self, x):
        return str(Fraction(x))

    def sample(self, rng):
        u = rng.random()
        if u < 0.15:
            return self.zero
        if u < 0.3:
            return self.one
        return _random_fraction(rng)

    def sample_chain(self, rng, length):
        sup = _random_fraction(rng) + 1
        return [sup * (1 - Fraction(1, 2**m)) for m in range(length)], sup

    def distance(self, a, b):
        return abs(a - b)

    def _subtract(self, r, s):
        return s - r

    def _invert(self, r):
        return 1 / Fraction(r)


class Bool2(Semiring):
    """({0, 1}, max, min) ordered by 0 < 1."""

    name = "bool2"
    zero = 0
    one = 1
    capabilities = Capabilities(idempotent=True, omega_continuous=True, bounded_chains=True)
    finite = True
    exact_iteration = True

    def add(self, a, b):
        return max(a, b)

    def mul(self, a, b):
        return min(a, b)

    def _le(self, a, b):
        return a <= b

    def leq(self, a, b):
        return a <= b

    def contains(self, x):
        return isinstance(x, int) and not isinstance(x, bool) and x in (0, 1)

    def elements(self):
        return (0, 1)

    def parse(self, text):
        t = text.strip()
        if t not in ("0", "1"):
            raise BadElement(f"not a bool2 literal: {text!r}")
        return int(t)


class Natural(Semiring):
    """Natural numbers with +, x.  Bounded chains are eventually constant."""

    name = "natural"
    zero = 0
    one = 1
    capabilities = Capabilities(cancellative=True, difference_ordered=True, bounded_chains=True)
    exact_iteration = True

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b

    def _le(self, a, b):
        return a <= b

    def leq(self, a, b):
        return a <= b

    def contains(self, x):
        return isinstance(x, int) and not isinstance(x, bool) and x >= 0

    def parse(self, text):
        t = text.strip()
        if not t.isdigit():
            raise BadElement(f"not a natural literal: {text!r}")
        return int(t)

    def sample(self, rng):
        u = rng.random()
        if u < 0.15:
            return 0
        if u < 0.3:
            return 1
        return rng.randint(0, 6)

    def sample_chain(self, rng, length):
        sup = rng.randint(1, 5)
        return [min(m, sup) for m in range(length)], sup

    def distance(self, a, b):
        return abs(a - b)

    def _subtract(self, r, s):
        return s - r


class Tropical(Semiring):
    """Min-plus semiring on Q u {inf}, ordered in reverse (inf is bottom).

    ``one`` is the rational 0, so the heavier direction is numerically smaller.
    """

    name = "tropical"
    zero = INF
    one = Fraction(0)
    capabilities = Capabilities(idempotent=True, division=True, bounded_chains=True)
    exact_iteration = True

    def add(self, a, b):
        return a if a <= b else b

    def mul(self, a, b):
        if a == INF or b == INF:
            return INF
        return a + b

    def _le(self, a, b):
        return a >= b

    def leq(self, a, b):
        return a >= b

    def contains(self, x):
        return x == INF or _is_rational(x)

    def parse(self, text):
        t = text.strip()
        if t in ("inf", "+inf", "oo"):
            return INF
        return _parse_fraction(t)

    def format(self, x):
        return "inf" if x == INF else str(Fraction(x))

    def sample(self, rng):
        u = rng.random()
        if u < 0.15:
            return INF
        if u < 0.25:
            return self.one
        return Fraction(rng.randint(-6, 12), rng.choice((1, 2, 3, 4)))

    def sample_chain(self, rng, length):
        sup = Fraction(rng.randint(-6, 6), rng.choice((1, 2, 3)))
        gap = _random_fraction(rng) + 1
        return [sup + gap / 2**m for m in range(length)], sup

    def distance(self, a, b):
        if a == b:
            return 0
        if a == INF or b == INF:
            return INF
        return abs(a - b)

    def _invert(self, r):
        return -r


class RVector(Semiring):
    """Vectors of nonnegative rationals that are all zero or all positive.

    Ordered by ``r <=* s`` iff ``r == s`` or ``r_i < s_i`` for every i.
    """

    capabilities = Capabilities(cancellative=True, difference_ordered=True, division=True)

    def __init__(self, n: int):
        if not isinstance(n, int) or isinstance(n, bool) or n < 1:
            raise BadParams(f"rvector dimension must be a positive integer, got {n!r}")
        self.n = n
        self.name = f"rvector({n})"
        self.zero = (Fraction(0),) * n
        self.one = (Fraction(1),) * n

    def add(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def mul(self, a, b):
        return tuple(x * y for x, y in zip(a, b))

    def _le(self, a, b):
        return a == b or all(x < y for x, y in zip(a, b))

    def contains(self, x):
        if not isinstance(x, tuple) or len(x) != self.n:
            return False
        if not all(_is_rational(c) and c >= 0 for c in x):
            return False
        return all(c == 0 for c in x) or all(c > 0 for c in x)

    def parse(self, text):
        t = text.strip()
        if not (t.startswith("(") and t.endswith(")")):
            raise BadElement(f"not a vector literal: {text!r}")
        parts = [p for p in t[1:-1].split(",")]
        return self.check(tuple(_parse_fraction(p) for p in parts))

    def format(self, x):
        return "(" + ",".join(str(Fraction(c)) for c in x) + ")"

    def sample(self, rng):
        u = rng.random()
        if u < 0.15:
            return self.zero
        if u < 0.25:
            return self.one
        return tuple(Fraction(rng.randint(1, 9), rng.choice(_DENOMS)) for _ in range(self.n))

    def distance(self, a, b):
        return max(abs(x - y) for x, y in zip(a, b))

    def _subtract(self, r, s):
        return tuple(y - x for x, y in zip(r, s))

    def _invert(self, r):
        return tuple(1 / Fraction(c) for c in r)


class Product(Semiring):
    """Direct product of two ordered semirings, ordered componentwise."""

    def __init__(self, left: Semiring, right: Semiring):
        self.left = left
        self.right = right
        self.name = f"product({left.name},{right.name})"
        self.zero = (left.zero, right.zero)
        self.one = (left.one, right.one)
        self.capabilities = left.capabilities & right.capabilities
        self.finite = left.finite and right.finite
        self.exact_iteration = left.exact_iteration and right.exact_iteration

    def add(self, a, b):
        return (self.left.add(a[0], b[0]), self.right.add(a[1], b[1]))

    def mul(self, a, b):
        return (self.left.mul(a[0], b[0]), self.right.mul(a[1], b[1]))

    def _le(self, a, b):
        return bool(self.left.leq(a[0], b[0])) and bool(self.right.leq(a[1], b[1]))

    def contains(self, x):
        return (
            isinstance(x, tuple)
            and len(x) == 2
            and self.left.contains(x[0])
            and self.right.contains(x[1])
        )

    def elements(self):
        return tuple(iproduct(self.left.elements(), self.right.elements()))

    def parse(self, text):
        t = text.strip()
        if not (t.startswith("(") and t.endswith(")")):
            raise BadElement(f"not a product literal: {text!r}")
        inner = t[1:-1]
        cut = _top_level_index(inner, "|")
        if cut < 0:
            raise BadElement(f"product literal needs '|': {text!r}")
        return (self.left.parse(inner[:cut]), self.right.parse(inner[cut + 1 :]))

    def format(self, x):
        return f"({self.left.format(x[0])}|{self.right.format(x[1])})"

    def sample(self, rng):
        return (self.left.sample(rng), self.right.sample(rng))

    def sample_chain(self, rng, length):
        lc, ls = self.left.sample_chain(rng, length)
        rc, rs = self.right.sample_chain(rng, length)
        return list(zip(lc, rc)), (ls, rs)

    def distance(self, a, b):
        return max(self.left.distance(a[0], b[0]), self.right.distance(a[1], b[1]))

    def _subtract(self, r, s):
        return (self.left._subtract(r[0], s[0]), self.right._subtract(r[1], s[1]))

    def _invert(self, r):
        return (self.left._invert(r[0]), self.right._invert(r[1]))


class TableSemiring(Semiring):
    """A finite ordered semiring on ``{0, ..., n-1}`` given by tables.

    Element 0 is the additive identity and element 1 the multiplicative one
    (for ``n == 1`` both are 0).  ``order[i][j]`` is True iff ``i <= j``.
    Capabilities are computed exhaustively from the tables.
    """

    finite = True
    exact_iteration = True

    def __init__(self, add_table, mul_table, order, name=None):
        self.size = len(add_table)
        self.add_table = tuple(tuple(r) for r in add_table)
        self.mul_table = tuple(tuple(r) for r in mul_table)
        self.order = tuple(tuple(bool(v) for v in r) for r in order)
        self.zero = 0
        self.one = 1 if self.size > 1 else 0
        self.name = name or self._default_name()
        self.capabilities = self._classify()

    def _default_name(self):
        enc = lambda t: "".join(str(v) for row in t for v in row)  # noqa: E731
        ordc = "".join("1" if v else "0" for row in self.order for v in row)
        return f"table{self.size}[{enc(self.add_table)}:{enc(self.mul_table)}:{ordc}]"

    def _classify(self) -> Capabilities:
        E = range(self.size)
        add, le = self.add, self._le
        canc = all(le(s, t) for r in E for s in E for t in E if le(add(r, s), add(r, t)))
        diff = all(any(add(r, t) == s for t in E) for r in E for s in E if le(r, s))
        idem = all(add(r, r) == r for r in E)
        div = all(
            any(self.mul(r, s) == self.one == self.mul(s, r) for s in E) for r in E if r != 0
        )
        return Capabilities(
            cancellative=canc,
            difference_ordered=diff,
            idempotent=idem,
            division=div,
            omega_continuous=True,
            bounded_chains=True,
        )

    def add(self, a, b):
        return self.add_table[a][b]

    def mul(self, a, b):
        return self.mul_table[a][b]

    def _le(self, a, b):
        return self.order[a][b]

    def contains(self, x):
        return isinstance(x, int) and 0 <= x < self.size

    def elements(self):
        return tuple(range(self.size))

    def parse(self, text):
        try:
            return self.check(int(text.strip()))
        except ValueError as exc:
            raise BadElement(f"not an element literal: {text!r}") from exc


# ---------------------------------------------------------------------------
# Construction

def _top_level_index(text: str, sep: str) -> int:
    depth = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            return i
    return -1


def _split_top_level(text: str, sep: str = ",") -> list[str]:
    parts, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == sep and depth == 0:
            parts.append(text[start:i])
            start = i + 1
    parts.append(text[start:])
    return [p.strip() for p in parts]


_SIMPLE = {"rational": Rational, "bool2": Bool2, "natural": Natural, "tropical": Tropical}


def make_instance(name: str, params: Sequence = ()) -> Semiring:
    """Build a semiring instance by name.

    ``params`` holds the dimension for ``rvector`` and two factors (instances
    or name strings) for ``product``.
    """
    name = name.strip()
    if name in _SIMPLE:
        if params:
            raise BadParams(f"{name} takes no parameters")
        return _SIMPLE[name]()
    if name == "rvector":
        if len(params) != 1:
            raise BadParams("rvector takes exactly one parameter (the dimension)")
        n = params[0]
        if isinstance(n, str):
            try:
                n = int(n)
            except ValueError as exc:
                raise BadParams(f"bad rvector dimension {params[0]!r}") from exc
        return RVector(n)
    if name == "product":
        if len(params) != 2:
            raise BadParams("product takes exactly two factors")
        factors = [p if isinstance(p, Semiring) else parse_semiring(p) for p in params]
        return Product(*factors)
    raise UnknownSemiring(f"unknown semiring {name!r}")


_SPEC = re.compile(r"^\s*([A-Za-z_][A-Za-z0-9_]*)\s*(?:\((.*)\))?\s*$", re.S)


def parse_semiring(text: str) -> Semiring:
    """Parse a declaration such as ``product(rational, rvector(2))``."""
    m = _SPEC.match(text)
    if not m:
        raise UnknownSemiring(f"cannot parse semiring declaration {text!r}")
    name, inner = m.group(1), m.group(2)
    params = _split_top_level(inner) if inner is not None and inner.strip() else []
    return make_instance(name, params)


def subtract(P: Semiring, r, s):
    return P.subtract(r, s)


def invert(P: Semiring, r):
    return P.invert(r)
