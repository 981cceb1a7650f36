"""
High-Precision Reals Module

This module provides HPReal, an mpmath value paired with a guaranteed
absolute error bound. Every operation rounds at the current mpmath working
precision and widens the bound by the propagated error plus the rounding
error, so the true value always lies in [value - err, value + err].

The mpmath context is process-global: callers pick a precision with
``mpmath.workprec(bits)`` around a computation and never mutate ``mp.prec``
directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction as Rational

import mpmath
from mpmath import mpf

from .errors import DomainError, PrecisionError

GUARD_BITS = 32
DEFAULT_TARGET_ERR = "1e-30"


class Ordering(str, Enum):
    LESS = "less"
    GREATER = "greater"
    OVERLAPPING = "overlapping"


def _ulp_bound(x: mpf) -> mpf:
    """Bound on one rounding of x at the current precision."""
    return abs(x) * mpmath.ldexp(1, 1 - mpmath.mp.prec)


def _slack(e: mpf) -> mpf:
    """Inflate a freshly rounded error bound so it stays an upper bound."""
    return e * (1 + mpmath.ldexp(1, 4 - mpmath.mp.prec))


def as_mpf(value) -> mpf:
    """Exact-as-possible mpf for a decimal or rational literal."""
    r = Rational(str(value))
    return mpf(r.numerator) / r.denominator


def working_precision(target_err=DEFAULT_TARGET_ERR):
    """Context manager raising mpmath to the bits needed for ``target_err``."""
    return mpmath.workprec(target_bits(target_err) + GUARD_BITS)


def target_bits(target_err) -> int:
    """Number of bits b with 2**-b <= target_err."""
    target = Rational(str(target_err))
    if target <= 0:
        raise DomainError(f"Target error must be positive, got {target_err}")
    if target >= 1:
        return 1
    return (target.denominator // target.numerator).bit_length() + 1


@dataclass(frozen=True)
class HPReal:
    """A real number known to lie within ``err`` of ``value``."""
    value: mpf
    err: mpf

    def __post_init__(self):
        # mpf inputs keep their own precision; converting them would round
        if not isinstance(self.value, mpf):
            object.__setattr__(self, "value", mpf(self.value))
        if not isinstance(self.err, mpf):
            object.__setattr__(self, "err", mpf(self.err))
        if self.err < 0:
            raise DomainError(f"Error bound must be non-negative, got {self.err}")

    # -- constructors -------------------------------------------------------

    @classmethod
    def exact(cls, value) -> HPReal:
        return cls(mpf(value), mpf(0))

    @classmethod
    def from_int(cls, n: int) -> HPReal:
        v = mpf(n)
        return cls(v, _slack(mpf(abs(int(v) - n))))

    @classmethod
    def from_rational(cls, r: Rational) -> HPReal:
        return cls.from_int(r.numerator) / cls.from_int(r.denominator)

    @classmethod
    def from_string(cls, text: str) -> HPReal:
        """Parse a decimal ("-3.5", "1e-30") or rational ("7/2") literal."""
        try:
            r = Rational(text.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise DomainError(f"Cannot parse real number: {text!r}") from exc
        return cls.from_rational(r)

    @classmethod
    def from_bounds(cls, lo: mpf, hi: mpf) -> HPReal:
        """The smallest HPReal (up to rounding) enclosing [lo, hi]."""
        if hi < lo:
            raise DomainError(f"Empty interval [{lo}, {hi}]")
        v = (lo + hi) / 2
        return cls(v, _slack((hi - lo) / 2 + _ulp_bound(v)))

    @classmethod
    def coerce(cls, other) -> HPReal:
        if isinstance(other, HPReal):
            return other
        if isinstance(other, int):
            return cls.from_int(other)
        if isinstance(other, Rational):
            return cls.from_rational(other)
        raise TypeError(f"Cannot combine HPReal with {type(other).__name__}")

    # -- interval view ------------------------------------------------------

    # value - err and value + err are formed exactly, so the bounds and every
    # comparison built on them do not depend on the ambient mpmath precision

    @property
    def lower(self) -> mpf:
        """A certified lower bound on the true value."""
        return mpmath.fsub(self.value, self.err, exact=True)

    @property
    def upper(self) -> mpf:
        """A certified upper bound on the true value."""
        return mpmath.fadd(self.value, self.err, exact=True)

    def contains(self, x) -> bool:
        return self.lower <= x <= self.upper

    def is_positive(self) -> bool:
        return self.lower > 0

    def widen(self, extra) -> HPReal:
        return HPReal(self.value, _slack(self.err + mpf(extra)))

    def compare(self, other) -> Ordering:
        other = HPReal.coerce(other)
        if self.upper < other.lower:
            return Ordering.LESS
        if self.lower > other.upper:
            return Ordering.GREATER
        return Ordering.OVERLAPPING

    # -- field operations ---------------------------------------------------

    def __add__(self, other) -> HPReal:
        other = HPReal.coerce(other)
        v = self.value + other.value
        return HPReal(v, _slack(self.err + other.err + _ulp_bound(v)))

    __radd__ = __add__

    def __sub__(self, other) -> HPReal:
        other = HPReal.coerce(other)
        v = self.value - other.value
        return HPReal(v, _slack(self.err + other.err + _ulp_bound(v)))

    def __rsub__(self, other) -> HPReal:
        return HPReal.coerce(other) - self

    def __neg__(self) -> HPReal:
        return HPReal(-self.value, self.err)

    def __mul__(self, other) -> HPReal:
        other = HPReal.coerce(other)
        v = self.value * other.value
        e = (
            abs(self.value) * other.err
            + abs(other.value) * self.err
            + self.err * other.err
            + _ulp_bound(v)
        )
        return HPReal(v, _slack(e))

    __rmul__ = __mul__

    def __truediv__(self, other) -> HPReal:
        other = HPReal.coerce(other)
        margin = abs(other.value) - other.err
        if margin <= 0:
            raise DomainError(f"Division by an interval containing zero: {other}")
        v = self.value / other.value
        e = (self.err + abs(v) * other.err) / margin + _ulp_bound(v)
        return HPReal(v, _slack(e))

    def __rtruediv__(self, other) -> HPReal:
        return HPReal.coerce(other) / self

    def div_by_int(self, n: int) -> HPReal:
        if n == 0:
            raise DomainError("Division by zero")
        return self / HPReal.from_int(n)

    def square(self) -> HPReal:
        return self * self

    # -- elementary functions -----------------------------------------------

    def sqrt(self) -> HPReal:
        if self.value < 0 or self.value + self.err < 0:
            raise DomainError(f"sqrt of a negative interval: {self}")
        v = mpmath.sqrt(self.value)
        lo = self.value - self.err
        e = mpmath.sqrt(self.err)
        if lo > 0:
            e = min(e, self.err / (mpmath.sqrt(lo) + v))
        return HPReal(v, _slack(e + 2 * _ulp_bound(v)))

    def log(self) -> HPReal:
        lo = self.value - self.err
        if lo <= 0:
            raise DomainError(f"log of a non-positive interval: {self}")
        v = mpmath.log(self.value)
        e = self.err / lo + 2 * _ulp_bound(v) + mpmath.ldexp(1, -mpmath.mp.prec)
        return HPReal(v, _slack(e))

    def log1p(self) -> HPReal:
        lo = self.value - self.err
        if lo <= -1:
            raise DomainError(f"log1p of an interval reaching -1: {self}")
        v = mpmath.log1p(self.value)
        e = self.err / (1 + lo) + 2 * _ulp_bound(v) + mpmath.ldexp(1, -mpmath.mp.prec)
        return HPReal(v, _slack(e))

    def arcosh(self) -> HPReal:
        if self.value < 1:
            raise DomainError(f"arcosh needs an argument >= 1, got {self}")
        v = mpmath.acosh(self.value)
        lo = self.value - self.err
        # arcosh is concave on [1, oo) with arcosh(1) = 0, so a shift by t moves it by <= arcosh(1 + t)
        e = mpmath.sqrt(2 * self.err)
        if lo > 1:
            e = min(e, self.err / mpmath.sqrt(lo * lo - 1))
        return HPReal(v, _slack(e + 2 * _ulp_bound(v) + mpmath.ldexp(1, -mpmath.mp.prec)))

    # -- output ---------------------------------------------------------------

    def __float__(self) -> float:
        return float(self.value)

    def to_json(self) -> dict:
        """Decimal strings for value and err; the printed err covers display rounding."""
        if self.err == 0 and self.value == mpmath.floor(self.value):
            return {"value": str(int(self.value)), "err": "0"}
        if self.err == 0:
            digits = max(int(mpmath.mp.dps), 15)
        elif self.value == 0:
            digits = 1
        else:
            ratio = abs(self.value) / self.err
            digits = max(1, int(mpmath.ceil(mpmath.log10(ratio))) + 2) if ratio > 1 else 1
        shown = mpmath.nstr(self.value, digits)
        display_err = abs(self.value) * mpmath.power(10, 1 - digits) if self.value else mpf(0)
        bound = (self.err + display_err) * mpf("1.01")
        return {"value": shown, "err": mpmath.nstr(bound, 3) if bound else "0"}

    def __str__(self) -> str:
        payload = self.to_json()
        return f"{payload['value']} ± {payload['err']}"


def ln_of_int(n: int) -> HPReal:
    """ln n for a positive integer of any size, as bit-length * ln 2 + ln(mantissa)."""
    if n < 1:
        raise DomainError(f"ln_of_int needs a positive integer, got {n}")
    prec = mpmath.mp.prec
    shift = n.bit_length() - prec
    if shift <= 0:
        v = mpmath.log(n)
        return HPReal(v, _slack(2 * _ulp_bound(v) + mpmath.ldexp(1, -prec)))
    m = n >> shift
    # n = m * 2**shift * (1 + delta) with 0 <= delta < 1/m
    half_gap = mpf(1) / (2 * m)
    v = shift * mpmath.log(2) + mpmath.log(m) + half_gap
    e = half_gap + (shift.bit_length() + 8) * _ulp_bound(v)
    return HPReal(v, _slack(e))


def arcosh_of_ratio(n: int, d: int, target_err=DEFAULT_TARGET_ERR) -> HPReal:
    """arcosh(n/d) with a certified absolute error at most ``target_err``."""
    if d < 1:
        raise DomainError(f"Denominator must be positive, got {d}")
    if n < d:
        raise DomainError(f"arcosh needs n/d >= 1, got {n}/{d}")
    if n == d:
        return HPReal.exact(0)
    bits = target_bits(target_err) + GUARD_BITS + n.bit_length().bit_length()
    bn, bd = n.bit_length(), d.bit_length()
    with mpmath.workprec(bits):
        if bn - bd > bits // 2 + 2:
            # arcosh(y) = ln(2y) - eps with 0 <= eps <= 1/y**2
            eps = mpmath.ldexp(1, -2 * (bn - bd - 1))
            base = ln_of_int(n) - ln_of_int(d) + HPReal(mpmath.log(2), _ulp_bound(mpmath.log(2)))
            result = HPReal(base.value - eps / 2, _slack(base.err + eps / 2 + _ulp_bound(base.value)))
        else:
            u = HPReal.from_int(n - d) / HPReal.from_int(d)
            root = (u * (u + 2)).sqrt()
            result = (u + root).log1p()
    if result.err > as_mpf(target_err):
        raise PrecisionError(f"arcosh({n}/{d}) missed target {target_err}: err {result.err}")
    return result
