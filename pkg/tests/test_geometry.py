"""Geometry reduction: alpha encoding, triples, coefficient profiles."""

import math

import mpmath as mp
import numpy as np
import pytest

from conftest import get_profile
from eigenbound.errors import DivergentIntegral, DomainError, MyersViolation
from eigenbound.geometry import (
    Alpha,
    CoefficientProfile,
    CurvatureSign,
    GeometryTriple,
    HALF_PI,
    alpha_to_curvature,
    make_alpha,
)


class TestAlpha:
    def test_constructors_and_signs(self):
        assert Alpha.zero().sign is CurvatureSign.ZERO
        assert Alpha.negative(2.0).sign is CurvatureSign.NEGATIVE_K
        assert Alpha.positive(1.0).sign is CurvatureSign.POSITIVE_K

    def test_myers_cap_clamps_within_slack(self):
        a = Alpha.positive(HALF_PI + 1e-13)
        assert a.magnitude == HALF_PI
        assert a.at_half_pi

    def test_myers_cap_raises_beyond_slack(self):
        with pytest.raises(MyersViolation):
            Alpha.positive(HALF_PI + 1e-9)

    def test_invalid_magnitudes(self):
        with pytest.raises(DomainError):
            Alpha.negative(-1.0)
        with pytest.raises(DomainError):
            Alpha(CurvatureSign.ZERO, 0.5)
        with pytest.raises(DomainError):
            Alpha(CurvatureSign.NEGATIVE_K, 0.0)

    def test_signed_x_roundtrip(self):
        for a in (Alpha.zero(), Alpha.negative(1.7), Alpha.positive(0.9)):
            back = Alpha.from_signed_x(a.signed_x)
            assert back.sign is a.sign
            assert back.magnitude == pytest.approx(a.magnitude, rel=1e-15)


class TestGeometryTriple:
    def test_validation(self):
        with pytest.raises(DomainError):
            GeometryTriple(0, 1.0, 0.0)
        with pytest.raises(DomainError):
            GeometryTriple(2, -1.0, 0.0)
        with pytest.raises(DomainError):
            GeometryTriple(2, 1.0, math.inf)

    def test_myers_rejects_impossible_triple(self):
        with pytest.raises(MyersViolation):
            GeometryTriple(2, 7.0, 1.0)

    def test_alpha_curvature_roundtrip(self):
        g = GeometryTriple(5, 2.0, -4.0)
        a = make_alpha(g)
        assert a.sign is CurvatureSign.NEGATIVE_K
        assert a.magnitude == pytest.approx(1.0, rel=1e-15)
        assert alpha_to_curvature(a, 5, 2.0) == pytest.approx(-4.0, rel=1e-15)

    def test_dimension_one_and_flat_reduce_to_zero(self):
        assert make_alpha(GeometryTriple(1, 1.0, 3.0)).sign is CurvatureSign.ZERO
        assert make_alpha(GeometryTriple(4, 1.0, 0.0)).sign is CurvatureSign.ZERO


def _mp_coeff(d, alpha, s):
    if alpha.sign is CurvatureSign.NEGATIVE_K:
        return mp.cosh(alpha.magnitude * s) ** (d - 1)
    if alpha.sign is CurvatureSign.POSITIVE_K:
        return mp.cos(alpha.magnitude * s) ** (d - 1)
    return mp.mpf(1)


def _mp_phi(d, alpha, r):
    return mp.quad(lambda s: 1.0 / _mp_coeff(d, alpha, s), [0, r])


def _mp_psi(d, alpha, r):
    return mp.quad(lambda s: _mp_coeff(d, alpha, s), [r, 1])


class TestCoefficientProfile:
    def test_flat_profile_is_identity(self):
        p = get_profile(3, Alpha.zero())
        xs = np.array([0.0, 0.25, 0.5, 0.99])
        assert p.coeff(xs) == pytest.approx(np.ones(4), abs=0.0)
        assert p.phi_at(xs) == pytest.approx(xs, abs=1e-15)
        # psi accumulates ~6e4 panel sums right to left; 1e-13 is the
        # honest rounding width of that summation.
        assert p.psi_at(xs) == pytest.approx(1.0 - xs, abs=1e-13)

    @pytest.mark.parametrize(
        "d,alpha",
        [
            (2, Alpha.negative(1.5)),
            (5, Alpha.negative(0.7)),
            (3, Alpha.positive(1.2)),
            (6, Alpha.positive(1.5)),
        ],
    )
    def test_phi_psi_match_high_precision_quadrature(self, d, alpha):
        p = get_profile(d, alpha)
        mp.mp.dps = 30
        for r in (0.2, 0.55, 0.9):
            assert p.phi(r) == pytest.approx(float(_mp_phi(d, alpha, r)), rel=1e-11)
            assert p.psi(r) == pytest.approx(float(_mp_psi(d, alpha, r)), rel=1e-11)

    def test_coeff_inverse_identity(self):
        p = get_profile(4, Alpha.negative(2.0))
        xs = np.linspace(0.0, 1.0, 101)
        assert p.coeff(xs) * p.coeff_inv(xs) == pytest.approx(np.ones(101), rel=1e-14)

    def test_edge_coefficient_relative_accuracy(self):
        # Near the vanishing point the complement form keeps full relative
        # accuracy where the naive power of cos has none.
        p = get_profile(6, Alpha.positive(HALF_PI))
        mp.mp.dps = 40
        for x in (0.999, 0.9999, 1.0 - 1e-7):
            want = float(mp.cos(mp.pi / 2 * x) ** 5)
            assert p.coeff(np.array([x]))[0] == pytest.approx(want, rel=1e-12)

    def test_phi_divergence_flag_and_error(self):
        p = get_profile(6, Alpha.positive(HALF_PI))
        assert p.phi_diverges
        with pytest.raises(DivergentIntegral):
            p.phi(1.0)
        q = get_profile(2, Alpha.negative(1.0))
        assert not q.phi_diverges

    def test_edge_psi_tail_clean(self):
        # At the Myers edge psi(r) ~ (1 - r)^d near 1; the tail tables must
        # resolve it or flush to exact zero, never leave noise.
        p = get_profile(6, Alpha.positive(HALF_PI))
        mp.mp.dps = 40
        a = mp.pi / 2
        for r in (0.9, 0.99):
            want = float(mp.quad(lambda s: mp.cos(a * s) ** 5, [r, 1]))
            assert p.psi(r) == pytest.approx(want, rel=1e-9)

    def test_tail_floor_scales_with_dimension(self):
        shallow = get_profile(2, Alpha.positive(HALF_PI))
        steep = get_profile(12, Alpha.positive(HALF_PI))
        assert steep.tail_floor > shallow.tail_floor

    def test_profile_rejects_mismatched_alpha_type(self):
        with pytest.raises(DomainError):
            CoefficientProfile(0, Alpha.zero())
