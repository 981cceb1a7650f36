"""
Verification Module

Property suites over the whole package. Each suite returns a SuiteResult and
the report renders one line per suite, "name: OK (detail)" or
"name: FAIL (detail)". Random inputs come from ``random.Random(seed)`` so two
runs with the same configuration print the same report.
"""

from __future__ import annotations

import dataclasses
import logging
import random
from dataclasses import dataclass
from typing import Callable

import mpmath

from .cohn import commutator_trace, fricke_check, random_sl2, verify_trace_route
from .config import RunConfig
from .errors import MarkovFockError
from .farey import ContinuedFraction, Fraction, SBPath
from .fock_norm import (
    HomologyClass,
    beta,
    convexity_check,
    corner_gap,
    hole_length,
    hole_length_from_constant,
    irrational_slope_bracket,
    primitive_classes,
    stable_norm,
)
from .hpreal import HPReal, Ordering, as_mpf, working_precision
from .markov import (
    Region,
    SurfaceParam,
    TreeCache,
    enumerate_tree,
    fricke_seed,
    surface_constant,
    values_up_to,
    walk,
)

logger = logging.getLogger(__name__)

SUITES = ("markov", "traces", "fricke", "convexity", "corners", "irrational", "norm", "beta", "hole")

MARKOV_HEAD = (1, 2, 5, 13, 29, 34, 89, 169, 194, 233, 433, 610, 985)
CORNER_POINTS = (Fraction(1, 2), Fraction(1, 3), Fraction(2, 5))
CORNER_FLOOR_AT_HALF = "0.23"
GOLDEN_CF = "0;2,(1)"
SYMMETRY_TOLERANCE = "1e-25"


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    detail: str

    def render(self) -> str:
        return f"{self.name}: {'OK' if self.passed else 'FAIL'} ({self.detail})"


@dataclass(frozen=True)
class VerifyReport:
    results: list[SuiteResult]

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    def render(self) -> str:
        return "".join(result.render() + "\n" for result in self.results)


def _fail(name: str, detail: str) -> SuiteResult:
    logger.error(f"Suite {name} failed: {detail}")
    return SuiteResult(name, False, detail)


def sample_fricke_surface(prec: int = 256, drift: str = "1e-3") -> SurfaceParam:
    """The real surface c = -1 seeded at X = Y = 3."""
    bare = SurfaceParam.fricke("-1", prec=prec, drift=drift)
    three = HPReal.from_int(3)
    seed = fricke_seed(three, three, bare).entries()
    return dataclasses.replace(bare, seed=seed)


def suite_markov(
    config: RunConfig,
    tree_depth: int = 14,
    random_depth: int = 20,
    random_paths: int = 200,
    max_a: int = 5,
) -> SuiteResult:
    """Markov numbers up to q = 10 and exact residuals on classical and a = 1..max_a trees."""
    values = sorted(set(values_up_to(SurfaceParam.classical(), 10).values()))
    head = tuple(values[: len(MARKOV_HEAD)])
    if head != MARKOV_HEAD:
        return _fail("markov", f"first values {head} differ from {MARKOV_HEAD}")
    rng = random.Random(config.seed)
    surfaces = [SurfaceParam.classical()] + [SurfaceParam.a_family(a) for a in range(1, max_a + 1)]
    nodes = 0
    for s in surfaces:
        # enumerate_tree rejects any node off the surface
        nodes += len(enumerate_tree(s, tree_depth))
        for _ in range(random_paths):
            steps = "".join(rng.choice("LR") for _ in range(random_depth))
            node = walk(Region.FUNDAMENTAL, SBPath(steps), s)
            if node.residual() != 0:
                return _fail("markov", f"residual {node.residual()} at path {steps} on {s.label}")
            nodes += 1
    return SuiteResult("markov", True, f"{len(head)} values, {nodes} nodes on {len(surfaces)} surfaces")


def suite_traces(config: RunConfig, classical_q: int = 40, family_q: int = 25, max_a: int = 4) -> SuiteResult:
    """Word traces against tree values, two independent routes."""
    checks = [(SurfaceParam.classical(), classical_q)]
    checks += [(SurfaceParam.a_family(a), family_q) for a in range(1, max_a + 1)]
    for s, max_q in checks:
        mismatches = verify_trace_route(s, max_q)
        if mismatches:
            return _fail("traces", f"{len(mismatches)} mismatches on {s.label}, first at {mismatches[0]}")
    return SuiteResult("traces", True, f"classical q<={classical_q}, a<={max_a} q<={family_q}")


def suite_fricke(config: RunConfig, bound: int = 50, max_a: int = 6) -> SuiteResult:
    """Both Fricke identities on seeded random SL2(Z) pairs, plus the commutator traces."""
    rng = random.Random(config.seed)
    for index in range(config.count):
        A, B = random_sl2(rng, bound), random_sl2(rng, bound)
        residuals = fricke_check(A, B)
        if residuals != (0, 0):
            return _fail("fricke", f"pair {index}: residuals {residuals} for A={A}, B={B}")
    if commutator_trace(SurfaceParam.classical()) != -2:
        return _fail("fricke", "classical commutator trace is not -2")
    for a in range(1, max_a + 1):
        got = commutator_trace(SurfaceParam.a_family(a))
        if got != 2 - 4 * a ** 6:
            return _fail("fricke", f"commutator trace {got} for a={a}, expected {2 - 4 * a ** 6}")
    return SuiteResult("fricke", True, f"{config.count} pairs, residuals 0")


def suite_convexity(config: RunConfig, max_q: int = 200, fricke_q: int = 60) -> SuiteResult:
    """Certified strict chord inequalities on classical, a = 2, 3 and a real Fricke surface."""
    checks = [
        (SurfaceParam.classical(), max_q),
        (SurfaceParam.a_family(2), max_q),
        (SurfaceParam.a_family(3), max_q),
        (sample_fricke_surface(config.fricke_prec, config.fricke_drift), fricke_q),
    ]
    triples = 0
    retries = 0
    for s, bound in checks:
        try:
            report = convexity_check(s, bound, config.precision, config.max_retries)
        except MarkovFockError as exc:
            return _fail("convexity", str(exc))
        triples += report.triples
        retries += report.retries
    return SuiteResult("convexity", True, f"{triples} chords on {len(checks)} surfaces, {retries} retries")


def suite_corners(config: RunConfig, depth: int = 8) -> SuiteResult:
    """Certified positive corner gaps at 1/2, 1/3 and 2/5."""
    s = SurfaceParam.classical()
    cache = TreeCache()
    bounds = []
    for x in CORNER_POINTS:
        try:
            result = corner_gap(x, depth, s, config.precision, config.max_retries, cache)
        except MarkovFockError as exc:
            return _fail("corners", str(exc))
        if not result.certified_positive:
            return _fail("corners", f"gap at {x} is not certified positive: {result.gap}")
        if x == Fraction(1, 2) and not result.lower > as_mpf(CORNER_FLOOR_AT_HALF):
            return _fail("corners", f"gap lower bound at 1/2 is {mpmath.nstr(result.lower, 8)}")
        bounds.append(f"{x} > {mpmath.nstr(result.lower, 6)}")
    return SuiteResult("corners", True, ", ".join(bounds))


def suite_irrational(config: RunConfig, first: int = 4, last: int = 12, factor: int = 10) -> SuiteResult:
    """Slope brackets at [0;2,(1)] shrink monotonically and by ``factor`` from ``first`` to ``last``."""
    cf = ContinuedFraction.parse(GOLDEN_CF)
    try:
        sequence = irrational_slope_bracket(
            cf, last, SurfaceParam.classical(), config.precision, max_retries=config.max_retries
        )
    except MarkovFockError as exc:
        return _fail("irrational", str(exc))
    widths = {bracket.depth: bracket.width for bracket in sequence.brackets}
    if sequence.truncated or any(d not in widths for d in range(first, last + 1)):
        return _fail("irrational", f"brackets stop at depth {max(widths, default=0)}")
    with working_precision(config.precision):
        for d in range(first, last):
            if widths[d].compare(widths[d + 1]) is not Ordering.GREATER:
                return _fail("irrational", f"width at depth {d + 1} does not shrink")
        ratio = widths[first] / widths[last]
    if not ratio.lower >= factor:
        return _fail("irrational", f"widths shrink by only {mpmath.nstr(ratio.value, 6)}")
    return SuiteResult(
        "irrational", True, f"{cf}: width {first}->{last} shrinks by {mpmath.nstr(ratio.lower, 6)}"
    )


def suite_norm(config: RunConfig, bound: int = 12) -> SuiteResult:
    """Triangle inequality for all classes with |coords| <= bound and the symmetries of the norm."""
    s = SurfaceParam.classical()
    cache = TreeCache()
    norms: dict[tuple[int, int], HPReal] = {}

    def norm(p: int, q: int) -> HPReal:
        if (p, q) not in norms:
            norms[(p, q)] = stable_norm(HomologyClass(p, q), s, config.precision, cache)
        return norms[(p, q)]

    classes = [
        (p, q) for p in range(-bound, bound + 1) for q in range(-bound, bound + 1) if (p, q) != (0, 0)
    ]
    pairs = 0
    strict = 0
    with working_precision(config.precision):
        for i, h in enumerate(classes):
            for g in classes[i + 1:]:
                total = (h[0] + g[0], h[1] + g[1])
                if total == (0, 0):
                    continue
                order = norm(*total).compare(norm(*h) + norm(*g))
                if order is Ordering.GREATER:
                    return _fail("norm", f"triangle inequality fails for {h} + {g}")
                independent = h[0] * g[1] - h[1] * g[0] != 0
                if independent:
                    if order is not Ordering.LESS:
                        return _fail("norm", f"triangle inequality not strict for {h} + {g}")
                    strict += 1
                pairs += 1
        tolerance = as_mpf(SYMMETRY_TOLERANCE)
        for p, q in primitive_classes(bound):
            base = norm(p, q)
            for image in ((q, p), (q - p, q)):
                if image == (0, 0):
                    continue
                diff = base - norm(*image)
                if not diff.contains(0) or diff.err > tolerance:
                    return _fail("norm", f"norm of {(p, q)} differs from {image}: {diff}")
    return SuiteResult("norm", True, f"{pairs} pairs, {strict} strict, |coords|<={bound}")


def suite_beta(config: RunConfig, max_q: int = 6, max_n: int = 10) -> SuiteResult:
    """beta(h) = ||h||^2 / 2 and beta(n h) = n^2 beta(h)."""
    s = SurfaceParam.classical()
    cache = TreeCache()
    checked = 0
    with working_precision(config.precision):
        for p, q in primitive_classes(max_q):
            h = HomologyClass(p, q)
            base = beta(h, s, config.precision, cache)
            half_square = stable_norm(h, s, config.precision, cache).square().div_by_int(2)
            if not (base - half_square).contains(0):
                return _fail("beta", f"beta{h} differs from half the squared norm")
            for n in range(2, max_n + 1):
                scaled = beta(HomologyClass(n * p, n * q), s, config.precision, cache)
                if not (scaled - base * (n * n)).contains(0):
                    return _fail("beta", f"beta is not quadratic at {n} * {h}")
            checked += 1
    return SuiteResult("beta", True, f"{checked} classes, n<={max_n}")


def suite_hole(config: RunConfig, max_a: int = 6) -> SuiteResult:
    """2 arcosh(2a^6 - 1) against 2 arcosh((2 - c) / 2) with c = 4 - 4a^6."""
    tolerance = as_mpf(SYMMETRY_TOLERANCE)
    with working_precision(config.precision):
        for a in range(1, max_a + 1):
            s = SurfaceParam.a_family(a)
            diff = hole_length(s, config.precision) - hole_length_from_constant(
                surface_constant(s), config.precision
            )
            if not diff.contains(0) or diff.err > tolerance:
                return _fail("hole", f"hole lengths disagree at a={a}: {diff}")
    return SuiteResult("hole", True, f"a<={max_a}")


SUITE_FUNCTIONS: dict[str, Callable[[RunConfig], SuiteResult]] = {
    "markov": suite_markov,
    "traces": suite_traces,
    "fricke": suite_fricke,
    "convexity": suite_convexity,
    "corners": suite_corners,
    "irrational": suite_irrational,
    "norm": suite_norm,
    "beta": suite_beta,
    "hole": suite_hole,
}


def run_suites(names: list[str], config: RunConfig) -> VerifyReport:
    """Run the named suites ("all" expands to every suite) in a fixed order."""
    selected = list(SUITES) if "all" in names else names
    unknown = [name for name in selected if name not in SUITE_FUNCTIONS]
    if unknown:
        raise ValueError(f"Unknown suite(s): {', '.join(unknown)}")
    results = []
    for name in selected:
        logger.info(f"Running suite {name}")
        try:
            result = SUITE_FUNCTIONS[name](config)
        except MarkovFockError as exc:
            result = _fail(name, str(exc))
        logger.info(result.render())
        results.append(result)
    return VerifyReport(results)
