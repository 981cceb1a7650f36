"""Tests for the fock_norm module."""

import mpmath
import pytest
from mpmath import mpf

from markov_fock.errors import DomainError
from markov_fock.farey import HALF, INFINITY, ZERO, ContinuedFraction, Fraction, Side
from markov_fock.fock_norm import (
    HomologyClass,
    approach_points,
    beta,
    convexity_check,
    corner_gap,
    geodesic_length,
    hole_length,
    hole_length_from_constant,
    irrational_slope_bracket,
    one_sided_derivative,
    one_sided_slopes,
    primitive_classes,
    psi,
    stable_norm,
    unit_ball,
)
from markov_fock.hpreal import Ordering
from markov_fock.markov import surface_constant


def acosh(value) -> mpf:
    with mpmath.workprec(256):
        return mpmath.acosh(mpf(value))


class TestHomologyClass:

    def test_parse(self):
        h = HomologyClass.parse(" 3, -6")
        assert (h.h1, h.h2) == (3, -6)
        assert h.multiplicity == 3
        assert h.primitive == (1, -2)
        assert h.slope == Fraction(-1, 2)

    def test_slope_of_horizontal_class(self):
        assert HomologyClass(1, 0).slope == INFINITY

    def test_zero_class(self):
        with pytest.raises(DomainError, match="zero homology class"):
            HomologyClass(0, 0)

    @pytest.mark.parametrize("text", ["1", "1,2,3", "a,b"])
    def test_parse_garbage(self, text):
        with pytest.raises(DomainError, match="must look like 'p,q'"):
            HomologyClass.parse(text)


class TestPsi:

    def test_one_third(self, classical):
        value = psi(Fraction(1, 3), classical)
        assert value.trace == 15
        with mpmath.workprec(256):
            assert value.psi.contains(acosh("7.5") / 3)
        assert value.psi.err <= mpf("1e-30")

    def test_a_family(self, a2):
        value = psi(Fraction(1, 3), a2)
        assert value.trace == 102
        with mpmath.workprec(256):
            assert value.psi.contains(acosh(51) / 3)

    def test_symmetric_point(self, classical):
        # 2/3 is the image of 1/3 under x -> 1 - x
        assert psi(Fraction(2, 3), classical).trace == 15

    def test_infinity_rejected(self, classical):
        with pytest.raises(DomainError, match="finite rationals"):
            psi(INFINITY, classical)

    def test_json(self, classical):
        payload = psi(HALF, classical).to_json()
        assert payload["fraction"] == "1/2"
        assert payload["surface"] == "classical"
        assert payload["trace"] == "6"
        assert set(payload["psi"]) == {"value", "err"}

    def test_fricke_surface(self, fricke_surface):
        value = psi(Fraction(1, 3), fricke_surface, "1e-20")
        assert value.psi.value > 0


class TestLengths:

    def test_geodesic_of_infinity(self, classical):
        length = geodesic_length(INFINITY, classical)
        with mpmath.workprec(256):
            assert length.contains(2 * acosh("1.5"))

    def test_norm_scales_with_multiplicity(self, classical):
        single = stable_norm(HomologyClass(1, 0), classical)
        double = stable_norm(HomologyClass(2, 0), classical)
        with mpmath.workprec(256):
            assert double.contains(2 * acosh("1.5") * 2)
            assert single.contains(2 * acosh("1.5"))

    def test_norm_of_one_two(self, classical):
        # slope 1/2 has Markov number 2, so trace 6
        norm = stable_norm(HomologyClass(1, 2), classical)
        with mpmath.workprec(256):
            assert norm.contains(2 * acosh(3))

    def test_beta_is_half_square(self, classical):
        value = beta(HomologyClass(0, 1), classical)
        with mpmath.workprec(256):
            assert value.contains((2 * acosh("1.5")) ** 2 / 2)

    def test_hole_lengths(self, classical, a2):
        assert hole_length(classical).value == 0
        with mpmath.workprec(256):
            assert hole_length(a2).contains(2 * acosh(127))

    def test_hole_from_constant_matches_family(self, a2):
        from_constant = hole_length_from_constant(surface_constant(a2))
        assert from_constant.compare(hole_length(a2)) is Ordering.OVERLAPPING

    def test_fricke_hole(self, fricke_surface):
        with mpmath.workprec(256):
            assert hole_length(fricke_surface, "1e-20").contains(2 * acosh("1.5"))


class TestOneSidedSlopes:

    def test_approach_points_inside_tree(self):
        assert approach_points(HALF, Side.LEFT, 3) == [Fraction(1, 3), Fraction(2, 5), Fraction(3, 7)]

    def test_approach_points_outside_tree(self):
        points = approach_points(ZERO, Side.LEFT, 3)
        assert all(y.p < 0 for y in points)

    def test_approach_points_errors(self):
        with pytest.raises(DomainError, match="at least 1"):
            approach_points(HALF, Side.LEFT, 0)
        with pytest.raises(DomainError, match="finite rational"):
            approach_points(INFINITY, Side.LEFT, 2)
        with pytest.raises(DomainError, match="left or right"):
            approach_points(HALF, Side.TWO_SIDED, 2)

    def test_left_slopes_at_half(self, classical):
        seq = one_sided_slopes(HALF, Side.LEFT, 4, classical)
        values = [point.slope.value for point in seq.quotients]
        assert abs(values[0] - mpf("-0.11891")) < mpf("1e-4")
        assert abs(values[1] - mpf("-0.11780")) < mpf("1e-4")
        assert values == sorted(values)

    def test_right_slopes_mirror_left(self, classical):
        left = one_sided_slopes(HALF, Side.LEFT, 3, classical)
        right = one_sided_slopes(HALF, Side.RIGHT, 3, classical)
        for l_point, r_point in zip(left.quotients, right.quotients):
            assert abs(l_point.slope.value + r_point.slope.value) < mpf("1e-25")
        values = [point.slope.value for point in right.quotients]
        assert values == sorted(values, reverse=True)

    def test_derivative_enclosure(self, classical):
        bracket = one_sided_derivative(HALF, Side.RIGHT, 6, classical)
        assert mpf("0.117") < bracket.lower <= bracket.upper < mpf("0.118")


class TestCornerGap:

    def test_gap_at_half(self, classical):
        gap = corner_gap(HALF, 6, classical)
        assert gap.certified_positive
        assert gap.lower > mpf("0.23")
        assert gap.upper < mpf("0.24")

    def test_gap_at_one_third(self, classical, cache):
        gap = corner_gap(Fraction(1, 3), 6, classical, cache=cache)
        assert gap.certified_positive
        assert len(cache) > 0

    @pytest.mark.slow
    @pytest.mark.parametrize("x", [HALF, Fraction(1, 3), Fraction(2, 5)])
    def test_certified_at_depth_eight(self, classical, cache, x):
        assert corner_gap(x, 8, classical, cache=cache).certified_positive

    def test_lower_bound_grows_with_depth(self, classical, cache):
        bounds = [corner_gap(HALF, depth, classical, cache=cache).lower for depth in range(3, 8)]
        assert bounds == sorted(bounds)

    def test_threads_match_sequential(self, classical):
        x = Fraction(1, 3)
        sequential = corner_gap(x, 6, classical, threads=1)
        parallel = corner_gap(x, 6, classical, threads=2)
        assert parallel.gap.value == sequential.gap.value
        assert parallel.gap.err == sequential.gap.err
        assert parallel.certified_positive == sequential.certified_positive


class TestIrrationalBracket:

    def test_golden_brackets_shrink(self, classical):
        seq = irrational_slope_bracket(ContinuedFraction.parse("0;2,(1)"), 8, classical)
        assert not seq.truncated
        assert [b.depth for b in seq.brackets] == [3, 4, 5, 6, 7, 8]
        for b in seq.brackets:
            assert b.lower.value <= b.upper.value
        widths = [b.width.value for b in seq.brackets]
        assert widths[-1] < widths[0]

    def test_finite_expansion_is_rational(self, classical):
        with pytest.raises(DomainError, match="rational target"):
            irrational_slope_bracket(ContinuedFraction.parse("0;2,3"), 5, classical)

    def test_depth_too_small(self, classical):
        with pytest.raises(DomainError, match="at least 3"):
            irrational_slope_bracket(ContinuedFraction.parse("0;2,(1)"), 2, classical)

    def test_digit_budget_truncates(self, classical):
        seq = irrational_slope_bracket(
            ContinuedFraction.parse("0;2,(1)"), 12, classical, max_digits=8
        )
        assert seq.truncated
        assert len(seq.brackets) < 10

    @pytest.mark.slow
    def test_widths_certified_shrinking_to_depth_twelve(self, classical):
        seq = irrational_slope_bracket(ContinuedFraction.parse("0;2,(1)"), 12, classical)
        assert [b.depth for b in seq.brackets] == list(range(3, 13))
        for b in seq.brackets:
            assert b.lower.compare(b.upper) is Ordering.LESS
            assert b.width.is_positive()
        for wider, narrower in zip(seq.brackets, seq.brackets[1:]):
            assert narrower.width.compare(wider.width) is Ordering.LESS


class TestUnitBall:

    def test_primitive_classes_order(self):
        assert primitive_classes(1) == [
            (-1, -1), (0, -1), (1, -1), (1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0)
        ]

    def test_points_lie_on_unit_sphere(self, classical):
        points = unit_ball(classical, 1)
        assert len(points) == 8
        h, (x, y) = points[3]
        assert (h.h1, h.h2) == (1, 0)
        with mpmath.workprec(256):
            assert x.contains(1 / (2 * acosh("1.5")))
            assert y.contains(0)

    def test_max_q_positive(self, classical):
        with pytest.raises(DomainError, match="at least 1"):
            unit_ball(classical, 0)

    def test_threads_match_sequential(self, classical):
        def flat(points):
            return [
                (h.h1, h.h2, x.value, x.err, y.value, y.err) for h, (x, y) in points
            ]

        assert flat(unit_ball(classical, 3, threads=2)) == flat(unit_ball(classical, 3))


class TestConvexity:

    def test_classical_triples(self, classical):
        report = convexity_check(classical, 15)
        assert report.triples == 35
        assert report.max_q == 15

    def test_a_family(self, a2):
        assert convexity_check(a2, 8).triples > 0

    @pytest.mark.slow
    def test_a_family_to_q_100(self, a2):
        report = convexity_check(a2, 100)
        assert report.triples > 0
        assert report.max_q == 100
