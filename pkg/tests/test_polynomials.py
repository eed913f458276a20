"""Sparse multivariate polynomials, scaling factors, fixed-point sweeps."""

import random
from fractions import Fraction

import pytest

from selfaffine.affine import AffineMap, compose
from selfaffine.polynomials import (
    MultiPoly,
    compose_affine,
    evaluate,
    format_polynomial,
    is_self_affine_pair,
    parse_polynomial,
    scaling_certificate,
    scaling_constant,
    verify_fixed_points_on_surface,
)


def half_map():
    return AffineMap(
        [[Fraction(1, 2), Fraction(0)], [Fraction(0), Fraction(1, 2)]],
        [Fraction(0), Fraction(0)],
    )


def shifted_half_map():
    return AffineMap(
        [[Fraction(1, 2), Fraction(0)], [Fraction(0), Fraction(1, 2)]],
        [Fraction(1, 2), Fraction(1, 2)],
    )


def antidiagonal_line():
    # P(x1, x2) = x2 - x1
    return MultiPoly(2, {(0, 1): Fraction(1), (1, 0): Fraction(-1)})


class TestMultiPolyAlgebra:
    def test_binomial_square(self):
        x = MultiPoly.variable(2, 0)
        y = MultiPoly.variable(2, 1)
        left = (x + y) * (x + y)
        right = x * x + 2 * (x * y) + y * y
        assert left == right

    def test_zero_and_degree(self):
        zero = MultiPoly.zero(3)
        assert zero.is_zero
        assert zero.degree == -1
        assert MultiPoly.constant(3, Fraction(5)).degree == 0

    def test_evaluate_exact(self):
        p = parse_polynomial("x1^2 * x2 - 3/2 * x2 + 1")
        value = evaluate(p, (Fraction(2), Fraction(1, 3)))
        assert value == Fraction(4) * Fraction(1, 3) - Fraction(3, 2) * Fraction(1, 3) + 1

    def test_rejects_bad_exponents(self):
        with pytest.raises(ValueError):
            MultiPoly(2, {(1,): Fraction(1)})
        with pytest.raises(ValueError):
            MultiPoly(2, {(-1, 0): Fraction(1)})


class TestParseFormat:
    def test_circle_round_trip(self):
        p = parse_polynomial("x1^2 + x2^2 - 1")
        assert p == MultiPoly(2, {(2, 0): Fraction(1), (0, 2): Fraction(1),
                                  (0, 0): Fraction(-1)})
        assert parse_polynomial(format_polynomial(p)) == p

    def test_coefficients_and_products(self):
        p = parse_polynomial("3/2 * x1 * x2^3 - x2")
        assert p.terms[(1, 3)] == Fraction(3, 2)
        assert p.terms[(0, 1)] == Fraction(-1)

    def test_dim_inference_and_override(self):
        p = parse_polynomial("x3", dim=5)
        assert p.dim == 5
        assert parse_polynomial("x2 + x1").dim == 2

    @pytest.mark.parametrize("bad", ["x1^-2", "x0", "1 +", "* x1", "x1^", "y1", "x1^x2"])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            parse_polynomial(bad)

    def test_format_zero(self):
        assert format_polynomial(MultiPoly.zero(2)) == "0"


class TestComposeAffine:
    def test_matches_pointwise_evaluation(self):
        rng = random.Random(21)
        for _ in range(20):
            dim = rng.choice([1, 2, 3])
            terms = {}
            for _ in range(rng.randint(1, 5)):
                expo = tuple(rng.randint(0, 2) for _ in range(dim))
                terms[expo] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
            p = MultiPoly(dim, terms)
            f = AffineMap(
                [[Fraction(rng.randint(-3, 3), 4) for _ in range(dim)] for _ in range(dim)],
                [Fraction(rng.randint(-2, 2)) for _ in range(dim)],
            )
            composed = compose_affine(p, f)
            for _ in range(5):
                x = tuple(Fraction(rng.randint(-5, 5), rng.randint(1, 3))
                          for _ in range(dim))
                assert evaluate(composed, x) == evaluate(p, f(x))


class TestScalingConstant:
    def test_printed_pair_constants_are_half(self):
        p = antidiagonal_line()
        assert scaling_constant(p, half_map()) == Fraction(1, 2)
        assert scaling_constant(p, shifted_half_map()) == Fraction(1, 2)

    def test_circle_has_none_under_half(self):
        circle = parse_polynomial("x1^2 + x2^2 - 1")
        assert scaling_constant(circle, half_map()) is None

    def test_homogeneous_quadratic(self):
        p = parse_polynomial("x1^2 + x2^2")
        assert scaling_constant(p, half_map()) == Fraction(1, 4)

    def test_zero_polynomial_rejected(self):
        with pytest.raises(ValueError):
            scaling_constant(MultiPoly.zero(2), half_map())

    def test_dimension_mismatch_rejected(self):
        p = parse_polynomial("x1 + x2 + x3")
        with pytest.raises(ValueError):
            scaling_constant(p, half_map())


class TestScalingCertificate:
    def test_certificate_on_printed_maps(self):
        p = antidiagonal_line()
        cert = scaling_certificate(p, half_map())
        assert cert is not None
        assert cert.constant == Fraction(1, 2)
        assert cert.fixed_point_value == 0

    def test_none_when_not_scaling(self):
        circle = parse_polynomial("x1^2 + x2^2 - 1")
        assert scaling_certificate(circle, half_map()) is None

    def test_requires_contractive(self):
        p = antidiagonal_line()
        double = AffineMap(
            [[Fraction(2), Fraction(0)], [Fraction(0), Fraction(2)]],
            [Fraction(0), Fraction(0)],
        )
        with pytest.raises(ValueError):
            scaling_certificate(p, double)

    def test_requires_invertible(self):
        p = antidiagonal_line()
        flat = AffineMap(
            [[Fraction(1, 2), Fraction(0)], [Fraction(0), Fraction(0)]],
            [Fraction(0), Fraction(0)],
        )
        with pytest.raises(ValueError):
            scaling_certificate(p, flat)


class TestSelfAffinePair:
    def test_printed_pair_is_self_affine(self):
        assert is_self_affine_pair(antidiagonal_line(), half_map(), shifted_half_map())

    def test_same_fixed_point_fails(self):
        p = antidiagonal_line()
        f = half_map()
        assert not is_self_affine_pair(p, f, compose(f, f))

    def test_non_scaling_member_fails(self):
        circle = parse_polynomial("x1^2 + x2^2 - 1")
        assert not is_self_affine_pair(circle, half_map(), shifted_half_map())


class TestFixedPointSweep:
    def test_depth_three_words_all_on_surface(self):
        p = antidiagonal_line()
        maps = [half_map(), shifted_half_map()]
        report = verify_fixed_points_on_surface(p, maps, 3)
        assert report.ok
        assert report.words_checked == 2 + 4 + 8
        assert not report.violations
        for check in report.checks:
            assert check.fixed_point_value == 0
            assert check.constant == Fraction(1, 2) ** len(check.word)

    def test_rejects_non_scaling_map(self):
        circle = parse_polynomial("x1^2 + x2^2 - 1")
        with pytest.raises(ValueError):
            verify_fixed_points_on_surface(circle, [half_map()], 2)

    def test_word_budget_guard(self):
        p = antidiagonal_line()
        maps = [half_map(), shifted_half_map()]
        with pytest.raises(ValueError):
            verify_fixed_points_on_surface(p, maps, 64)
