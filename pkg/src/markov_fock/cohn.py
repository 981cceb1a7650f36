"""
Cohn Matrices Module

Exact 2x2 integer matrix words in the Cohn generators and their
a-deformations. Traces of these words give a second, independent route to
the tree values of the markov module, and the Fricke trace identities are
checked on them exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd

from flint import fmpz_mat

from .errors import DomainError
from .farey import HALF, ZERO, Fraction, in_fundamental, sb_encode
from .markov import SurfaceMode, SurfaceParam, trace_at


class Mat2:
    """The integer matrix (a b; c d), held as a flint ``fmpz_mat``."""

    __slots__ = ("mat",)

    def __init__(self, a: int, b: int, c: int, d: int):
        self.mat = fmpz_mat(2, 2, [a, b, c, d])

    @classmethod
    def wrap(cls, mat: fmpz_mat) -> Mat2:
        m = cls.__new__(cls)
        m.mat = mat
        return m

    @classmethod
    def identity(cls) -> Mat2:
        return cls(1, 0, 0, 1)

    @property
    def a(self) -> int:
        return int(self.mat[0, 0])

    @property
    def b(self) -> int:
        return int(self.mat[0, 1])

    @property
    def c(self) -> int:
        return int(self.mat[1, 0])

    @property
    def d(self) -> int:
        return int(self.mat[1, 1])

    def entries(self) -> tuple[int, int, int, int]:
        return self.a, self.b, self.c, self.d

    def __matmul__(self, other: Mat2) -> Mat2:
        return Mat2.wrap(self.mat * other.mat)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Mat2):
            return NotImplemented
        return self.mat == other.mat

    def __hash__(self) -> int:
        return hash(self.entries())

    def det(self) -> int:
        return int(self.mat.det())

    def trace(self) -> int:
        return int(self.mat[0, 0] + self.mat[1, 1])

    def inverse(self) -> Mat2:
        """Exact inverse through the adjugate; only SL2 matrices qualify."""
        if self.det() != 1:
            raise DomainError(f"Matrix {self} is not unimodular (det {self.det()})")
        a, b, c, d = self.entries()
        return Mat2(d, -b, -c, a)

    def to_json(self) -> list[list[str]]:
        return [[str(self.a), str(self.b)], [str(self.c), str(self.d)]]

    def __repr__(self) -> str:
        return f"Mat2{self.entries()}"

    def __str__(self) -> str:
        return f"({self.a} {self.b}; {self.c} {self.d})"


def generator(s: SurfaceParam, which: str) -> Mat2:
    """A or B for the surface; the classical pair is the a = 1 member of the family."""
    if s.mode is SurfaceMode.FRICKE:
        raise DomainError("Fricke surfaces have no canonical generator matrices")
    a = 1 if s.mode is SurfaceMode.CLASSICAL else s.a
    if which == "A":
        return Mat2(1 - a + a * a, a * a, a, a + 1)
    if which == "B":
        return Mat2(1 - 2 * a + 4 * a * a, 4 * a * a, 2 * a, 2 * a + 1)
    raise DomainError(f"Generator must be A or B, got {which!r}")


def _alphabet(s: SurfaceParam) -> dict[str, Mat2]:
    A = generator(s, "A")
    B = generator(s, "B")
    # lower case letters are inverses
    return {"A": A, "B": B, "a": A.inverse(), "b": B.inverse()}


def word_matrix(letters: str, s: SurfaceParam) -> Mat2:
    """Product of the generators spelled by ``letters`` (a, b for inverses)."""
    gens = _alphabet(s)
    m = fmpz_mat(2, 2, [1, 0, 0, 1])
    for letter in letters:
        if letter not in gens:
            raise DomainError(f"Unknown letter {letter!r} in word {letters!r}")
        m = m * gens[letter].mat
    return Mat2.wrap(m)


@dataclass(frozen=True)
class MatrixWord:
    """A nonempty word in A, B (and inverses a, b) over a surface."""
    letters: str
    surface: SurfaceParam = field(default_factory=SurfaceParam.classical)

    def __post_init__(self):
        if not self.letters:
            raise DomainError("Matrix words must be nonempty")
        if set(self.letters) - set("ABab"):
            raise DomainError(f"Words use only A, B, a, b: {self.letters!r}")

    def evaluate(self) -> Mat2:
        return word_matrix(self.letters, self.surface)

    def trace(self) -> int:
        return self.evaluate().trace()

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return self.letters


def christoffel_word(x: Fraction, s: SurfaceParam | None = None) -> MatrixWord:
    """Word whose trace is the tree value at x in [0, 1/2].

    word(0/1) = A, word(1/2) = B, and the word at a mediant is the left
    parent's word followed by the right parent's. p/q has p letters B and
    q - 2p letters A.
    """
    s = s or SurfaceParam.classical()
    if not in_fundamental(x):
        raise DomainError(f"christoffel_word needs x in [0, 1/2], got {x}")
    if x == ZERO:
        return MatrixWord("A", s)
    if x == HALF:
        return MatrixWord("B", s)
    left, right = "A", "B"
    for step in sb_encode(x).steps:
        if step == "L":
            right = left + right
        else:
            left = left + right
    return MatrixWord(left + right, s)


def trace_of(x: Fraction, s: SurfaceParam | None = None) -> int:
    """Trace of the Christoffel word at x."""
    return christoffel_word(x, s).trace()


def fricke_check(A: Mat2, B: Mat2) -> tuple[int, int]:
    """Residuals of the two Fricke identities; both vanish for every SL2 pair.

    tr AB + tr AB^-1 = tr A tr B, and
    tr [A, B] = tr^2 A + tr^2 B + tr^2 AB - tr A tr B tr AB - 2.
    """
    if A.det() != 1 or B.det() != 1:
        raise DomainError(f"Fricke identities need det 1 matrices, got {A.det()} and {B.det()}")
    tA, tB = A.trace(), B.trace()
    tAB = (A @ B).trace()
    first = tAB + (A @ B.inverse()).trace() - tA * tB
    commutator = (A @ B @ A.inverse() @ B.inverse()).trace()
    second = commutator - (tA * tA + tB * tB + tAB * tAB - tA * tB * tAB - 2)
    return first, second


def commutator_trace(s: SurfaceParam) -> int:
    """tr(A B A^-1 B^-1) for the surface's generators; 2 - 4a^6 on the a-family."""
    return word_matrix("ABab", s).trace()


def random_sl2(rng: random.Random, bound: int) -> Mat2:
    """A seeded random SL2(Z) matrix with entries of size about ``bound``."""
    if bound < 1:
        raise DomainError(f"bound must be positive, got {bound}")
    while True:
        a = rng.randint(-bound, bound)
        c = rng.randint(-bound, bound)
        if c != 0 and gcd(a, c) == 1:
            break
    if abs(c) == 1:
        d = rng.randint(-bound, bound)
    else:
        d = pow(a, -1, abs(c))
    # a d - b c = 1
    b = (a * d - 1) // c
    return Mat2(a, b, c, d)


def verify_trace_route(s: SurfaceParam, max_q: int) -> list[Fraction]:
    """Fractions in [0, 1/2] with q <= max_q where word traces and tree values disagree."""
    mismatches = []
    for q in range(1, max_q + 1):
        for p in range(0, q // 2 + 1):
            if gcd(p, q) != 1:
                continue
            x = Fraction(p, q)
            if trace_of(x, s) != trace_at(x, s):
                mismatches.append(x)
    return mismatches
