"""
Fock Norm Module

Fock's convex function psi(p/q) = (1/q) arcosh(T(p/q) / 2), the stable norm
it induces on first homology, Mather's beta function, geodesic and hole
lengths, and the numerical side of the differentiability dichotomy: certified
one-sided derivatives and corner gaps at rationals, shrinking slope brackets
at irrationals.

T is the trace coordinate: 3 m(p/q) on the punctured torus, X(p/q) on the
a-family and real Fricke surfaces.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction as Rational
from math import gcd

import mpmath
from mpmath import mpf

from .errors import ConvexityViolation, DigitBudgetExceeded, DomainError, PrecisionError
from .farey import (
    ContinuedFraction,
    Fraction,
    Side,
    approach_sequence,
    farey_neighbours,
    in_fundamental,
    iter_convergents,
    mediant,
    reduce_to_fundamental,
    HALF,
    ZERO,
)
from .hpreal import (
    DEFAULT_TARGET_ERR,
    GUARD_BITS,
    HPReal,
    Ordering,
    arcosh_of_ratio,
    target_bits,
    working_precision,
)
from .markov import (
    SurfaceMode,
    SurfaceParam,
    TreeCache,
    Value,
    descend,
    markov_number,
    region_start,
    Region,
    trace_at,
    trace_constant,
)

logger = logging.getLogger(__name__)

# the smallest step a precision retry takes, in bits
_RETRY_BITS = 64


# ---------------------------------------------------------------------------
# Types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HomologyClass:
    """An integer class (h1, h2) in H1 of the torus, stored as n times a primitive class."""
    h1: int
    h2: int

    def __post_init__(self):
        if self.h1 == 0 and self.h2 == 0:
            raise DomainError("The zero homology class has no norm")

    @classmethod
    def parse(cls, text: str) -> HomologyClass:
        parts = [part.strip() for part in text.split(",")]
        if len(parts) != 2:
            raise DomainError(f"Homology class must look like 'p,q', got {text!r}")
        try:
            return cls(int(parts[0]), int(parts[1]))
        except ValueError as exc:
            raise DomainError(f"Homology class must look like 'p,q', got {text!r}") from exc

    @property
    def multiplicity(self) -> int:
        return gcd(self.h1, self.h2)

    @property
    def primitive(self) -> tuple[int, int]:
        n = self.multiplicity
        return self.h1 // n, self.h2 // n

    @property
    def slope(self) -> Fraction:
        """The fraction p/q of the primitive class; (1, 0) gives 1/0."""
        return Fraction.of(*self.primitive)

    def __str__(self) -> str:
        return f"({self.h1},{self.h2})"


@dataclass(frozen=True)
class PsiValue:
    x: Fraction
    psi: HPReal
    surface: SurfaceParam
    trace: Value

    def to_json(self) -> dict:
        trace = str(self.trace) if isinstance(self.trace, int) else self.trace.to_json()
        return {
            "fraction": str(self.x),
            "surface": self.surface.label,
            "trace": trace,
            "psi": self.psi.to_json(),
        }


@dataclass(frozen=True)
class SlopePoint:
    depth: int
    approach: Fraction
    slope: HPReal


@dataclass(frozen=True)
class SlopeBracket:
    """Enclosure [lower, upper] of the derivative at depth ``depth``."""
    depth: int
    lower: HPReal
    upper: HPReal
    width: HPReal


@dataclass(frozen=True)
class SlopeSequence:
    x: Fraction | ContinuedFraction
    side: Side
    quotients: list[SlopePoint]
    brackets: list[SlopeBracket] = field(default_factory=list)
    truncated: bool = False


@dataclass(frozen=True)
class DerivativeBracket:
    """Certified enclosure of a one-sided derivative of psi."""
    x: Fraction
    side: Side
    enclosure: HPReal
    slopes: SlopeSequence

    @property
    def lower(self) -> mpf:
        return self.enclosure.lower

    @property
    def upper(self) -> mpf:
        return self.enclosure.upper


@dataclass(frozen=True)
class CornerGap:
    """D+psi(x) - D-psi(x), enclosed; certified_positive when the enclosure excludes 0."""
    x: Fraction
    depth: int
    left: DerivativeBracket
    right: DerivativeBracket
    gap: HPReal
    certified_positive: bool

    @property
    def lower(self) -> mpf:
        return self.gap.lower

    @property
    def upper(self) -> mpf:
        return self.gap.upper


@dataclass(frozen=True)
class ConvexityReport:
    surface: SurfaceParam
    max_q: int
    triples: int
    retries: int


# ---------------------------------------------------------------------------
# psi, lengths, norm
# ---------------------------------------------------------------------------

def trace_value(
    x: Fraction,
    s: SurfaceParam,
    cache: TreeCache | None = None,
    max_digits: int | None = None,
) -> Value:
    """T(x) for any x; the classical value goes through the symmetry reduction."""
    if s.mode is SurfaceMode.CLASSICAL:
        reduced, _word = reduce_to_fundamental(x)
        return 3 * markov_number(reduced, s, cache, max_digits)
    return trace_at(x, s, cache, max_digits)


def _arcosh_half(trace: Value, s: SurfaceParam, target_err) -> HPReal:
    """arcosh(T / 2), certified."""
    if isinstance(trace, int):
        return arcosh_of_ratio(trace, 2, target_err)
    with mpmath.workprec(max(s.prec, target_bits(target_err) + GUARD_BITS)):
        return (trace / 2).arcosh()


def psi_from_trace(trace: Value, q: int, s: SurfaceParam, target_err=DEFAULT_TARGET_ERR) -> HPReal:
    with working_precision(target_err):
        return _arcosh_half(trace, s, target_err).div_by_int(q)


def psi(
    x: Fraction,
    s: SurfaceParam,
    target_err=DEFAULT_TARGET_ERR,
    cache: TreeCache | None = None,
    max_digits: int | None = None,
) -> PsiValue:
    """psi(p/q) = (1/q) arcosh(T(p/q) / 2) for any finite rational p/q.

    Real Fricke surfaces are limited by the precision of their seed, so
    their error bound can exceed ``target_err``.
    """
    if x.is_infinite:
        raise DomainError("psi is defined on finite rationals; use stable_norm for (1,0)")
    trace = trace_value(x, s, cache, max_digits)
    return PsiValue(x, psi_from_trace(trace, x.q, s, target_err), s, trace)


def geodesic_length(
    x: Fraction,
    s: SurfaceParam,
    target_err=DEFAULT_TARGET_ERR,
    cache: TreeCache | None = None,
    max_digits: int | None = None,
) -> HPReal:
    """2 arcosh(T(x) / 2): the simple closed geodesic in the class of x (1/0 allowed)."""
    trace = trace_value(x, s, cache, max_digits)
    with working_precision(target_err):
        return _arcosh_half(trace, s, target_err) * 2


def hole_length(s: SurfaceParam, target_err=DEFAULT_TARGET_ERR) -> HPReal:
    """Length of the boundary geodesic: 0 at a puncture, 2 arcosh(2a^6 - 1) on the a-family."""
    if s.mode is SurfaceMode.CLASSICAL:
        return HPReal.exact(0)
    if s.mode is SurfaceMode.A_FAMILY:
        with working_precision(target_err):
            return arcosh_of_ratio(2 * s.a ** 6 - 1, 1, target_err) * 2
    return hole_length_from_constant(s.c, target_err, s.prec)


def hole_length_from_constant(c: int | HPReal, target_err=DEFAULT_TARGET_ERR, prec: int = 256) -> HPReal:
    """2 arcosh((2 - c) / 2) for the surface X^2 + Y^2 + Z^2 - XYZ = c."""
    with working_precision(target_err):
        if isinstance(c, int):
            return arcosh_of_ratio(2 - c, 2, target_err) * 2
    with mpmath.workprec(max(prec, target_bits(target_err) + GUARD_BITS)):
        return ((2 - c) / 2).arcosh() * 2


def stable_norm(
    h: HomologyClass,
    s: SurfaceParam,
    target_err=DEFAULT_TARGET_ERR,
    cache: TreeCache | None = None,
    max_digits: int | None = None,
) -> HPReal:
    """||n h'|| = n * (length of the simple geodesic in the primitive class h')."""
    n = h.multiplicity
    with working_precision(target_err):
        return geodesic_length(h.slope, s, target_err, cache, max_digits) * n


def beta(
    h: HomologyClass,
    s: SurfaceParam,
    target_err=DEFAULT_TARGET_ERR,
    cache: TreeCache | None = None,
) -> HPReal:
    """Mather's beta function of the geodesic flow: ||h||^2 / 2."""
    with working_precision(target_err):
        return stable_norm(h, s, target_err, cache).square().div_by_int(2)


# ---------------------------------------------------------------------------
# one-sided slopes and derivatives at rationals
# ---------------------------------------------------------------------------

def _next_target(target: Rational) -> Rational:
    """Twice the bits of ``target``, and at least one retry step finer."""
    return min(target * target, target / (1 << _RETRY_BITS))


def _width_target(width: mpf, scale: int) -> Rational | None:
    """A psi error target keeping errors, once multiplied by ``scale``, 2**-GUARD_BITS below ``width``."""
    if not width > 0:
        return None
    return Rational(mpmath.nstr(width, 10)) / (scale << GUARD_BITS)


def _refine(target: Rational, separation: mpf | None, scale: int) -> Rational:
    """The target after an overlap: sized from the separation seen, never coarser than twice the bits."""
    finer = _next_target(target)
    hint = _width_target(separation, scale) if separation is not None else None
    return finer if hint is None else min(finer, hint)


def _bits_for(values: list[HPReal], target_err) -> int:
    """Working bits fine enough to keep the errors already carried by ``values``."""
    bits = target_bits(target_err)
    for v in values:
        if v.err > 0:
            bits = max(bits, 1 - int(mpmath.floor(mpmath.log(v.err, 2))))
    return bits + GUARD_BITS


def approach_points(x: Fraction, side: Side, depth: int) -> list[Fraction]:
    """Unimodular approach points, kept inside the tree under 1/3 when x lies in it."""
    if depth < 1:
        raise DomainError(f"depth must be at least 1, got {depth}")
    if x.is_infinite:
        raise DomainError("One-sided slopes need a finite rational")
    if side not in (Side.LEFT, Side.RIGHT):
        raise DomainError(f"side must be left or right, got {side.value}")
    pointing_inside = (x != ZERO or side is Side.RIGHT) and (x != HALF or side is Side.LEFT)
    if in_fundamental(x) and pointing_inside:
        return farey_neighbours(x, side, depth)
    stream = approach_sequence(x, side)
    return [next(stream) for _ in range(depth)]


def _slopes_once(
    x: Fraction,
    side: Side,
    points: list[Fraction],
    s: SurfaceParam,
    target_err,
    cache: TreeCache,
    max_digits: int | None,
) -> list[SlopePoint]:
    sign = 1 if side is Side.RIGHT else -1
    base = psi(x, s, target_err, cache, max_digits).psi
    slopes = []
    with working_precision(target_err):
        for depth, y in enumerate(points, start=1):
            value = psi(y, s, target_err, cache, max_digits).psi
            # y - x = sign / (q_x q_y) for unimodular neighbours
            slopes.append(SlopePoint(depth, y, (value - base) * (sign * x.q * y.q)))
    return slopes


def one_sided_slopes(
    x: Fraction,
    side: Side,
    depth: int,
    s: SurfaceParam,
    target_err=DEFAULT_TARGET_ERR,
    max_retries: int = 4,
    cache: TreeCache | None = None,
    max_digits: int | None = None,
) -> SlopeSequence:
    """Difference quotients (psi(x_k) - psi(x)) / (x_k - x) along the approach sequence.

    Convexity makes left quotients non-decreasing and right ones
    non-increasing; each consecutive pair is certified, retrying at a finer
    target sized from the observed separation when intervals overlap.

    Raises:
        ConvexityViolation: If a certified comparison breaks monotonicity.
        PrecisionError: If monotonicity is still uncertified after max_retries.
    """
    points = approach_points(x, side, depth)
    cache = cache if cache is not None else TreeCache()
    # the order the quotients must not break
    forbidden = Ordering.GREATER if side is Side.LEFT else Ordering.LESS
    target = Rational(str(target_err))
    for attempt in range(max_retries + 1):
        slopes = _slopes_once(x, side, points, s, target, cache, max_digits)
        separation = None
        with working_precision(target):
            for before, after in zip(slopes, slopes[1:]):
                order = before.slope.compare(after.slope)
                if order is forbidden:
                    raise ConvexityViolation(
                        f"{side.value} slopes at {x} are not monotone between "
                        f"{before.approach} and {after.approach}"
                    )
                if order is Ordering.OVERLAPPING:
                    gap = abs(after.slope.value - before.slope.value)
                    separation = gap if separation is None else min(separation, gap)
        if separation is None:
            return SlopeSequence(x, side, slopes)
        logger.warning(f"Slopes at {x} ({side.value}) overlap; retry {attempt + 1} with finer target")
        target = _refine(target, separation, x.q * points[-1].q)
    raise PrecisionError(
        f"Could not certify monotone {side.value} slopes at {x} after {max_retries} retries"
    )


def _tail_bound(trace_x: Value, trace_k: Value, trace_prev: Value, q: int, s: SurfaceParam) -> HPReal | None:
    """Bound on |slope_k - D| from the tail of T_{k+1} = T_x T_k - T_{k-1}.

    With gamma = (T_x^2 - K) / (T_x^2 - 4) the bound is
    q (gamma - 1) / (T_k^2 / 4 - gamma); None when T_k does not yet dominate.
    """
    tx, tk, tp = (HPReal.coerce(t) for t in (trace_x, trace_k, trace_prev))
    if tk.compare(tp) is not Ordering.GREATER:
        return None
    k_const = HPReal.coerce(trace_constant(s))
    tx2 = tx.square()
    gamma_minus_one = (4 - k_const) / (tx2 - 4)
    gamma = gamma_minus_one + 1
    denominator = tk.square() / 4 - gamma
    if not denominator.is_positive():
        return None
    return gamma_minus_one * q / denominator


def one_sided_derivative(
    x: Fraction,
    side: Side,
    depth: int,
    s: SurfaceParam,
    target_err=DEFAULT_TARGET_ERR,
    max_retries: int = 4,
    cache: TreeCache | None = None,
    max_digits: int | None = None,
) -> DerivativeBracket:
    """Certified enclosure of D-psi(x) (side left) or D+psi(x) (side right).

    Secants give one end (D- >= s_k on the left, D+ <= s_k on the right);
    the tail bound gives the other.
    """
    cache = cache if cache is not None else TreeCache()
    slopes = one_sided_slopes(x, side, depth, s, target_err, max_retries, cache, max_digits)
    bits = _bits_for([point.slope for point in slopes.quotients], target_err)
    with mpmath.workprec(bits):
        trace_x = trace_value(x, s, cache, max_digits)
        secant_end = None
        tail_end = None
        for point in slopes.quotients:
            y = point.approach
            prev = Fraction.of(y.p - x.p, y.q - x.q)
            tau = _tail_bound(
                trace_x,
                trace_value(y, s, cache, max_digits),
                trace_value(prev, s, cache, max_digits),
                x.q,
                s,
            )
            if side is Side.RIGHT:
                secant_end = point.slope.upper if secant_end is None else min(secant_end, point.slope.upper)
                if tau is not None:
                    candidate = (point.slope - tau).lower
                    tail_end = candidate if tail_end is None else max(tail_end, candidate)
            else:
                secant_end = point.slope.lower if secant_end is None else max(secant_end, point.slope.lower)
                if tau is not None:
                    candidate = (point.slope + tau).upper
                    tail_end = candidate if tail_end is None else min(tail_end, candidate)
        if tail_end is None:
            raise PrecisionError(
                f"Depth {depth} is too shallow to bound the {side.value} derivative at {x}"
            )
        if side is Side.RIGHT:
            lo, hi = tail_end, secant_end
        else:
            lo, hi = secant_end, tail_end
        if lo > hi:
            raise ConvexityViolation(f"Derivative bounds at {x} ({side.value}) cross: [{lo}, {hi}]")
        enclosure = HPReal.from_bounds(lo, hi)
    return DerivativeBracket(x, side, enclosure, slopes)


def corner_gap(
    x: Fraction,
    depth: int,
    s: SurfaceParam,
    target_err=DEFAULT_TARGET_ERR,
    max_retries: int = 4,
    cache: TreeCache | None = None,
    max_digits: int | None = None,
    threads: int = 1,
) -> CornerGap:
    """Enclosure of D+psi(x) - D-psi(x); its lower end is a rigorous lower bound."""
    if threads > 1:
        with ProcessPoolExecutor(max_workers=2) as pool:
            left_job = pool.submit(
                one_sided_derivative, x, Side.LEFT, depth, s, target_err, max_retries, None, max_digits
            )
            right_job = pool.submit(
                one_sided_derivative, x, Side.RIGHT, depth, s, target_err, max_retries, None, max_digits
            )
            left, right = left_job.result(), right_job.result()
    else:
        cache = cache if cache is not None else TreeCache()
        left = one_sided_derivative(x, Side.LEFT, depth, s, target_err, max_retries, cache, max_digits)
        right = one_sided_derivative(x, Side.RIGHT, depth, s, target_err, max_retries, cache, max_digits)
    bits = _bits_for([left.enclosure, right.enclosure], target_err)
    with mpmath.workprec(bits):
        gap = right.enclosure - left.enclosure
        positive = gap.lower > 0
    logger.info(f"Corner gap at {x}, depth {depth}: lower bound {mpmath.nstr(gap.lower, 12)}")
    return CornerGap(x, depth, left, right, gap, positive)


# ---------------------------------------------------------------------------
# irrationals
# ---------------------------------------------------------------------------

def _secant(a: Fraction, psi_a: HPReal, b: Fraction, psi_b: HPReal) -> HPReal:
    """(psi(b) - psi(a)) / (b - a) with the exact rational step."""
    numerator = b.p * a.q - a.p * b.q
    return (psi_b - psi_a) * (a.q * b.q) / numerator


def irrational_slope_bracket(
    cf: ContinuedFraction,
    depth: int,
    s: SurfaceParam,
    target_err=DEFAULT_TARGET_ERR,
    cache: TreeCache | None = None,
    max_digits: int | None = None,
    max_retries: int = 4,
) -> SlopeSequence:
    """Brackets on psi'(x) at an irrational x from its convergents c_0 .. c_depth.

    Even convergents lie left of x and odd ones right of it, so by
    convexity the secant of the two latest even convergents is a lower
    bound and the secant of the two latest odd ones an upper bound.
    Brackets exist from depth 3 on. Each bracket is certified non-empty
    and strictly narrower than the one before; the psi target is refined
    per depth from the widths seen so far. Exceeding the digit budget
    stops the run early with ``truncated`` set.

    Raises:
        ConvexityViolation: If a bracket is certainly inverted.
        PrecisionError: If a bracket stays uncertified after max_retries.
    """
    if not cf.is_periodic:
        raise DomainError(f"Continued fraction {cf} is finite: rational target")
    if depth < 3:
        raise DomainError(f"depth must be at least 3 for a bracket, got {depth}")
    cache = cache if cache is not None else TreeCache()
    convergents: list[Fraction] = []
    traces: list[Value] = []
    truncated = False
    stream = iter_convergents(cf)
    for k in range(depth + 1):
        c = next(stream)
        try:
            traces.append(trace_value(c, s, cache, max_digits))
        except DigitBudgetExceeded as exc:
            logger.warning(f"Stopping at depth {k - 1} for {cf}: {exc}")
            truncated = True
            break
        convergents.append(c)

    psi_values: dict[tuple[int, Rational], HPReal] = {}

    def psi_at(k: int, target: Rational) -> HPReal:
        if (k, target) not in psi_values:
            psi_values[(k, target)] = psi_from_trace(traces[k], convergents[k].q, s, target)
        return psi_values[(k, target)]

    def secant(k: int, target: Rational) -> HPReal:
        with working_precision(target):
            return _secant(convergents[k - 2], psi_at(k - 2, target), convergents[k], psi_at(k, target))

    target = Rational(str(target_err))
    quotients: list[SlopePoint] = []
    brackets: list[SlopeBracket] = []
    for k in range(2, len(convergents)):
        if k == 2:
            quotients.append(SlopePoint(k, convergents[k], secant(k, target)))
            continue
        scale = convergents[k].q * convergents[k - 1].q
        if brackets:
            predicted = brackets[-1].width.value
            if len(brackets) >= 2:
                predicted = predicted * predicted / brackets[-2].width.value
            hint = _width_target(predicted, scale)
            if hint is not None:
                target = min(target, hint)
        for attempt in range(max_retries + 1):
            previous, current = secant(k - 1, target), secant(k, target)
            lower, upper = (current, previous) if k % 2 == 0 else (previous, current)
            order = lower.compare(upper)
            if order is Ordering.GREATER:
                raise ConvexityViolation(f"Slope bracket at depth {k} for {cf} is inverted")
            with working_precision(target):
                width = upper - lower
            narrower = not brackets or width.compare(brackets[-1].width) is Ordering.LESS
            if order is Ordering.LESS and width.is_positive() and narrower:
                break
            logger.warning(f"Bracket at depth {k} for {cf} is uncertified; retry {attempt + 1} with finer target")
            hint = _width_target(abs(width.value), scale) if width.err < abs(width.value) / 2 else None
            target = _next_target(target) if hint is None else min(_next_target(target), hint)
        else:
            raise PrecisionError(
                f"Slope bracket at depth {k} for {cf} stayed uncertified after {max_retries} retries"
            )
        quotients.append(SlopePoint(k, convergents[k], current))
        brackets.append(SlopeBracket(k, lower, upper, width))
    return SlopeSequence(cf, Side.TWO_SIDED, quotients, brackets, truncated)


# ---------------------------------------------------------------------------
# unit ball and convexity
# ---------------------------------------------------------------------------

def _ball_point(args: tuple[int, int, SurfaceParam, str]) -> tuple[HomologyClass, tuple[HPReal, HPReal]]:
    p, q, s, target_err = args
    h = HomologyClass(p, q)
    with working_precision(target_err):
        norm = stable_norm(h, s, target_err)
        return h, (HPReal.from_int(p) / norm, HPReal.from_int(q) / norm)


def primitive_classes(max_q: int) -> list[tuple[int, int]]:
    """Primitive (p, q) with max(|p|, |q|) <= max_q, counter-clockwise from angle -pi."""
    classes = [
        (p, q)
        for p in range(-max_q, max_q + 1)
        for q in range(-max_q, max_q + 1)
        if gcd(p, q) == 1
    ]
    return sorted(classes, key=lambda pq: math.atan2(pq[1], pq[0]))


def unit_ball(
    s: SurfaceParam,
    max_q: int,
    target_err=DEFAULT_TARGET_ERR,
    threads: int = 1,
) -> list[tuple[HomologyClass, tuple[HPReal, HPReal]]]:
    """Boundary points h / ||h|| of the unit ball for every primitive class up to max_q."""
    if max_q < 1:
        raise DomainError(f"max_q must be at least 1, got {max_q}")
    jobs = [(p, q, s, str(target_err)) for p, q in primitive_classes(max_q)]
    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            # map keeps the submission order
            return list(pool.map(_ball_point, jobs, chunksize=16))
    return [_ball_point(job) for job in jobs]


def convexity_check(
    s: SurfaceParam,
    max_q: int,
    target_err=DEFAULT_TARGET_ERR,
    max_retries: int = 4,
) -> ConvexityReport:
    """Certify psi(m) < lambda psi(l) + (1 - lambda) psi(r) on every Farey triple up to max_q.

    Raises:
        ConvexityViolation: If a chord inequality fails with certainty.
        PrecisionError: If a comparison still overlaps after max_retries.
    """
    start = region_start(Region.FUNDAMENTAL, s)
    def to_trace(value: Value) -> Value:
        return 3 * value if s.mode is SurfaceMode.CLASSICAL else value

    base_target = Rational(str(target_err))
    root = (ZERO, HALF, to_trace(start.X), to_trace(start.Y), start, base_target)
    psi_cache: dict[tuple[Fraction, Rational], HPReal] = {}

    def psi_at(x: Fraction, trace: Value, target: Rational) -> HPReal:
        key = (x, target)
        if key not in psi_cache:
            psi_cache[key] = psi_from_trace(trace, x.q, s, target)
        return psi_cache[key]

    triples = 0
    retries = 0
    stack = [root]
    while stack:
        # children start at the target their parent needed
        lo, hi, t_lo, t_hi, node, target = stack.pop()
        mid = mediant(lo, hi)
        if mid.q > max_q:
            continue
        t_mid = to_trace(node.Z)
        # lambda = (hi - mid) / (hi - lo)
        lam = (hi.to_rational() - mid.to_rational()) / (hi.to_rational() - lo.to_rational())
        for attempt in range(max_retries + 1):
            with working_precision(target):
                chord = psi_at(lo, t_lo, target) * lam + psi_at(hi, t_hi, target) * (1 - lam)
                at_mid = psi_at(mid, t_mid, target)
                order = at_mid.compare(chord)
                separation = abs(chord.value - at_mid.value)
            if order is Ordering.LESS:
                break
            if order is Ordering.GREATER:
                raise ConvexityViolation(f"psi({mid}) lies above the chord of {lo} and {hi} on {s.label}")
            retries += 1
            target = _refine(target, separation, 4)
        else:
            raise PrecisionError(f"Chord inequality at {mid} stayed uncertified after {max_retries} retries")
        triples += 1
        stack.append((lo, mid, t_lo, t_mid, descend(node, "L"), target))
        stack.append((mid, hi, t_mid, t_hi, descend(node, "R"), target))
    logger.info(f"Certified {triples} chord inequalities up to q={max_q} on {s.label}")
    return ConvexityReport(s, max_q, triples, retries)
