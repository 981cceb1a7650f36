"""
Farey Module

Reduced fractions, Stern-Brocot paths, Farey mediants, continued fractions
and the order-6 symmetry group generated by x -> 1-x and x -> 1/x. These
index both the Markov tree and the Cohn matrix words.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction as Rational
from math import gcd
from typing import Iterator

from .errors import DomainError


class Side(str, Enum):
    LEFT = "left"
    RIGHT = "right"
    TWO_SIDED = "two-sided"


class Generator(str, Enum):
    """Generators of the symmetry group m(1-x) = m(1/x) = m(x)."""
    ONE_MINUS = "1-x"
    RECIPROCAL = "1/x"


@dataclass(frozen=True)
class Fraction:
    """A reduced fraction p/q; (1, 0) stands for the point at infinity."""
    p: int
    q: int

    def __post_init__(self):
        if self.q < 0:
            raise DomainError(f"Denominator must be non-negative: {self.p}/{self.q}")
        if self.q == 0 and self.p != 1:
            raise DomainError(f"Only 1/0 is admitted as the point at infinity, got {self.p}/0")
        if gcd(self.p, self.q) != 1:
            raise DomainError(f"Fraction {self.p}/{self.q} is not reduced")

    @classmethod
    def of(cls, p: int, q: int) -> Fraction:
        """Build a fraction from any integer pair, normalising sign and gcd."""
        if p == 0 and q == 0:
            raise DomainError("0/0 is not a fraction")
        if q == 0:
            return cls(1, 0)
        if q < 0:
            p, q = -p, -q
        g = gcd(p, q)
        return cls(p // g, q // g)

    @classmethod
    def parse(cls, text: str) -> Fraction:
        """Parse "p/q" (or a bare integer "p")."""
        match = re.fullmatch(r"\s*(-?\d+)\s*(?:/\s*(-?\d+)\s*)?", text)
        if not match:
            raise DomainError(f"Cannot parse fraction: {text!r}")
        p = int(match.group(1))
        q = int(match.group(2)) if match.group(2) is not None else 1
        return cls.of(p, q)

    @property
    def is_infinite(self) -> bool:
        return self.q == 0

    def to_rational(self) -> Rational:
        if self.is_infinite:
            raise DomainError("The point at infinity has no rational value")
        return Rational(self.p, self.q)

    def __str__(self) -> str:
        return f"{self.p}/{self.q}"


ZERO = Fraction(0, 1)
HALF = Fraction(1, 2)
ONE = Fraction(1, 1)
INFINITY = Fraction(1, 0)


def mediant(left: Fraction, right: Fraction) -> Fraction:
    """Farey mediant (a+c)/(b+d)."""
    return Fraction.of(left.p + right.p, left.q + right.q)


def determinant(left: Fraction, right: Fraction) -> int:
    """p q' - p' q; Farey neighbours have determinant +-1."""
    return left.p * right.q - right.p * left.q


def in_fundamental(x: Fraction) -> bool:
    """True when x lies in the closed fundamental interval [0, 1/2]."""
    return not x.is_infinite and x.p >= 0 and 2 * x.p <= x.q


def strictly_inside(x: Fraction) -> bool:
    return not x.is_infinite and x.p > 0 and 2 * x.p < x.q


# ---------------------------------------------------------------------------
# Symmetry group
# ---------------------------------------------------------------------------

def apply_generator(generator: Generator, x: Fraction) -> Fraction:
    if generator is Generator.ONE_MINUS:
        if x.is_infinite:
            return x
        return Fraction(x.q - x.p, x.q)
    return Fraction.of(x.q, x.p)


def apply_word(word: tuple[Generator, ...], x: Fraction) -> Fraction:
    """Apply the generators of ``word`` to ``x``, first letter first."""
    for generator in word:
        x = apply_generator(generator, x)
    return x


# One word per element of the group, shortest first.
_GROUP_WORDS: tuple[tuple[Generator, ...], ...] = (
    (),
    (Generator.ONE_MINUS,),
    (Generator.RECIPROCAL,),
    (Generator.ONE_MINUS, Generator.RECIPROCAL),
    (Generator.RECIPROCAL, Generator.ONE_MINUS),
    (Generator.ONE_MINUS, Generator.RECIPROCAL, Generator.ONE_MINUS),
)


def symmetry_images(x: Fraction) -> list[Fraction]:
    """The orbit of x under the symmetry group, one entry per group element."""
    return [apply_word(word, x) for word in _GROUP_WORDS]


def reduce_to_fundamental(x: Fraction) -> tuple[Fraction, tuple[Generator, ...]]:
    """Map x into [0, 1/2].

    Returns the reduced fraction y and a generator word such that
    ``apply_word(word, y) == x``. The point at infinity maps to 0/1.
    """
    for word in _GROUP_WORDS:
        y = apply_word(word, x)
        if in_fundamental(y):
            # every generator is an involution, so the inverse word is the reversal
            return y, tuple(reversed(word))
    raise AssertionError(f"symmetry orbit of {x} misses [0, 1/2]")


# ---------------------------------------------------------------------------
# Stern-Brocot paths
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SBPath:
    """A Stern-Brocot path; L takes the half with the smaller endpoint."""
    steps: str = ""

    def __post_init__(self):
        if set(self.steps) - {"L", "R"}:
            raise DomainError(f"Stern-Brocot paths use only L and R: {self.steps!r}")

    def __len__(self) -> int:
        return len(self.steps)

    def __str__(self) -> str:
        return self.steps


def stern_brocot_path(
    x: Fraction, left: tuple[int, int], right: tuple[int, int]
) -> SBPath:
    """Path from the mediant of the Farey pair (left, right) down to x.

    The pair is given as raw (numerator, denominator) tuples so that the
    signed infinities (1, 0) and (-1, 0) can bound a region. x must lie
    strictly between the two endpoints.
    """
    lp, lq = left
    rp, rq = right
    steps: list[str] = []
    while True:
        mp_, mq = lp + rp, lq + rq
        diff = x.p * mq - mp_ * x.q
        if diff == 0:
            return SBPath("".join(steps))
        if diff < 0:
            steps.append("L")
            rp, rq = mp_, mq
        else:
            steps.append("R")
            lp, lq = mp_, mq


def sb_encode(x: Fraction) -> SBPath:
    """Stern-Brocot path of x inside the tree rooted at 1/3 = med(0/1, 1/2)."""
    if not strictly_inside(x):
        raise DomainError(f"sb_encode needs 0 < x < 1/2, got {x}")
    return stern_brocot_path(x, (0, 1), (1, 2))


def sb_decode(path: SBPath) -> Fraction:
    left, right = ZERO, HALF
    node = mediant(left, right)
    for step in path.steps:
        if step == "L":
            right = node
        else:
            left = node
        node = mediant(left, right)
    return node


# ---------------------------------------------------------------------------
# Neighbours and approach sequences
# ---------------------------------------------------------------------------

def farey_neighbour(x: Fraction, side: Side) -> tuple[int, int]:
    """The Farey neighbour (r, s) of x on ``side`` with the smallest s >= 0.

    Returned as a raw pair: for integer x it is the signed infinity (+-1, 0).
    """
    if x.is_infinite:
        raise DomainError("The point at infinity has no one-sided neighbours")
    p, q = x.p, x.q
    if q == 1:
        return (1, 0) if side is Side.RIGHT else (-1, 0)
    inverse = pow(p, -1, q)
    if side is Side.RIGHT:
        # q r - p s = 1
        s = (-inverse) % q
        return (1 + p * s) // q, s
    # p s - q r = 1
    s = inverse % q
    return (p * s - 1) // q, s


def approach_sequence(x: Fraction, side: Side) -> Iterator[Fraction]:
    """Repeated mediants of x with its neighbour: (k p + r)/(k q + s), k = 1, 2, ..."""
    if side not in (Side.LEFT, Side.RIGHT):
        raise DomainError(f"Approach side must be left or right, got {side}")
    r, s = farey_neighbour(x, side)
    k = 1
    while True:
        yield Fraction.of(k * x.p + r, k * x.q + s)
        k += 1


def farey_neighbours(x: Fraction, side: Side, count: int) -> list[Fraction]:
    """``count`` unimodular approach points to x from ``side`` inside the tree."""
    if count < 1:
        raise DomainError(f"count must be positive, got {count}")
    if not in_fundamental(x):
        raise DomainError(f"farey_neighbours needs x in [0, 1/2], got {x}")
    if (x == ZERO and side is Side.LEFT) or (x == HALF and side is Side.RIGHT):
        raise DomainError(f"Side {side.value} is unavailable at boundary point {x}")
    found: list[Fraction] = []
    for y in approach_sequence(x, side):
        if strictly_inside(y):
            found.append(y)
            if len(found) == count:
                return found


# ---------------------------------------------------------------------------
# Continued fractions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ContinuedFraction:
    """[a0; a1, ..., an, (b1, ..., bk)] with an optional periodic tail."""
    a0: int
    prefix: tuple[int, ...] = ()
    period: tuple[int, ...] = ()

    def __post_init__(self):
        for term in self.prefix + self.period:
            if term < 1:
                raise DomainError(f"Partial quotients must be positive, got {term}")

    @classmethod
    def parse(cls, text: str) -> ContinuedFraction:
        """Parse "a0;a1,a2,...", optionally ending in a periodic tail "(b1,...,bk)"."""
        body = text.strip().strip("[]").replace(" ", "")
        match = re.fullmatch(r"(-?\d+)(?:;([\d,]*?),?(?:\(([\d,]+)\))?)?", body)
        if not match:
            raise DomainError(f"Cannot parse continued fraction: {text!r}")
        head, prefix, period = match.groups()
        try:
            return cls(
                int(head),
                tuple(int(t) for t in (prefix or "").split(",") if t),
                tuple(int(t) for t in (period or "").split(",") if t),
            )
        except ValueError as exc:
            raise DomainError(f"Cannot parse continued fraction: {text!r}") from exc

    @property
    def is_periodic(self) -> bool:
        return bool(self.period)

    def terms(self) -> Iterator[int]:
        """Partial quotients a1, a2, ... (endless for a periodic tail)."""
        yield from self.prefix
        while self.period:
            yield from self.period

    def value(self) -> Fraction:
        if self.is_periodic:
            raise DomainError("A periodic continued fraction has no rational value")
        *_, last = iter_convergents(self)
        return last

    def __str__(self) -> str:
        inner = ",".join(str(t) for t in self.prefix)
        if self.period:
            tail = "(" + ",".join(str(t) for t in self.period) + ")"
            inner = f"{inner},{tail}" if inner else tail
        return f"{self.a0};{inner}" if inner else str(self.a0)


def iter_convergents(cf: ContinuedFraction) -> Iterator[Fraction]:
    """Convergents c0 = a0/1, c1, c2, ... via p_n = a_n p_{n-1} + p_{n-2}."""
    p_prev, q_prev = 1, 0
    p, q = cf.a0, 1
    yield Fraction.of(p, q)
    for a in cf.terms():
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        yield Fraction(p, q)


def convergents(cf: ContinuedFraction, depth: int) -> list[Fraction]:
    """The convergents c1 .. c_depth (just [a0/1] when there are no quotients)."""
    if depth < 1:
        raise DomainError(f"depth must be at least 1, got {depth}")
    result: list[Fraction] = []
    stream = iter_convergents(cf)
    first = next(stream)
    for c in stream:
        result.append(c)
        if len(result) == depth:
            break
    return result or [first]
