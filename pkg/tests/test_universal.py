"""Weighted-integral functionals, the two-sided bracket, and iteration."""

import math

import numpy as np
import pytest

from conftest import get_lambda, get_profile
from eigenbound.errors import DomainError, InvalidTestFunction
from eigenbound.geometry import Alpha, CoefficientProfile, HALF_PI
from eigenbound.searches import sup_on_unit_interval
from eigenbound.universal import (
    delta,
    delta1,
    delta1_prime,
    delta1_star,
    delta1_star_prime,
    iterate_lower,
    iterate_upper,
    universal_bracket,
    variational_ratio,
)

PI2 = math.pi**2
CBRT5_4 = 5.0 ** (1.0 / 3.0) / 4.0


class TestFlatExactValues:
    """At alpha = 0 every functional has a closed form."""

    def test_delta(self):
        assert delta(get_profile(2, Alpha.zero())) == pytest.approx(0.25, abs=1e-12)

    def test_delta1_pair(self):
        p = get_profile(2, Alpha.zero())
        assert delta1(p) == pytest.approx(CBRT5_4, abs=1e-9)
        assert delta1_star(p) == pytest.approx(CBRT5_4, abs=1e-9)

    def test_prime_pair(self):
        p = get_profile(2, Alpha.zero())
        assert delta1_prime(p) == pytest.approx(0.375, abs=1e-9)
        assert delta1_star_prime(p) == pytest.approx(0.375, abs=1e-9)

    def test_flat_values_dimension_independent(self):
        # At alpha = 0 the coefficient is identically 1 for every d.
        for d in (3, 10):
            p = get_profile(d, Alpha.zero())
            assert delta(p) == pytest.approx(0.25, abs=1e-12)
            assert delta1_prime(p) == pytest.approx(0.375, abs=1e-9)

    def test_star_swap_symmetry_exact_at_flat(self):
        # The coefficient is its own reciprocal at alpha = 0, so each
        # starred functional must agree with its partner to rounding.
        p = get_profile(2, Alpha.zero())
        assert delta1(p) == pytest.approx(delta1_star(p), abs=5e-13)
        assert delta1_prime(p) == pytest.approx(delta1_star_prime(p), abs=5e-13)


class TestBruteForceCrossCheck:
    def test_delta_matches_dense_scan(self):
        # delta = sup phi psi; check the table-driven sup against a dense
        # direct-evaluation scan.
        p = get_profile(3, Alpha.negative(1.2))
        _, brute = sup_on_unit_interval(
            lambda t: p.phi_at(np.asarray(t)) * p.psi_at(np.asarray(t)),
            resolution=4001,
        )
        assert delta(p) == pytest.approx(brute, rel=1e-10)

    def test_delta1_matches_semi_analytic_flat(self):
        # At alpha = 0: sup over r of [int_0^r sqrt(s) C-weighted terms]
        # collapses to sup (2/3) r^{3/2} sqrt(r)... the known closed form
        # 5^{1/3}/4; crosscheck against a literal two-level quadrature sup.
        from eigenbound.quadrature import integrate

        def inner(r):
            head = integrate(lambda s: s**1.5, 0.0, r, tol=1e-12) / math.sqrt(r)
            tail = math.sqrt(r) * integrate(
                lambda s: np.sqrt(s), r, 1.0, tol=1e-12
            )
            return head + tail

        xs = np.linspace(1e-4, 1.0 - 1e-4, 2001)
        brute = max(inner(float(r)) for r in xs)
        assert delta1(get_profile(2, Alpha.zero())) == pytest.approx(
            brute, rel=1e-6
        )


class TestFrozenProfiles:
    def test_hyperbolic_profile_frozen(self):
        b = universal_bracket(3, Alpha.negative(1.5), profile=get_profile(3, Alpha.negative(1.5)))
        assert b.delta == pytest.approx(0.667401906504555, rel=1e-11)
        assert b.delta1 == pytest.approx(0.9394868386469475, rel=1e-11)
        assert b.delta1_prime == pytest.approx(0.8862495615239789, rel=1e-11)
        assert b.delta1_star == pytest.approx(0.938541937602676, rel=1e-11)
        assert b.delta1_star_prime == pytest.approx(0.8815274983792827, rel=1e-11)

    @pytest.mark.slow
    def test_high_dimension_edge_frozen(self):
        b = universal_bracket(
            63, Alpha.positive(HALF_PI), profile=get_profile(63, Alpha.positive(HALF_PI))
        )
        assert b.delta == pytest.approx(0.0030973584993663553, rel=1e-9)
        assert b.delta1 == pytest.approx(0.007362210617544581, rel=1e-9)
        assert b.delta1_prime == pytest.approx(0.005149596528448121, rel=1e-9)
        assert b.delta1_star == pytest.approx(0.007189546869864744, rel=1e-9)
        assert b.delta1_star_prime == pytest.approx(0.005389167326166233, rel=1e-9)

    def test_edge_ratio_anchors(self):
        for d, want in ((2, 1.2032378905344498), (5, 1.2726823545154387)):
            p = get_profile(d, Alpha.positive(HALF_PI))
            assert delta1_star(p) / delta1_star_prime(p) == pytest.approx(
                want, rel=1e-10
            )


class TestBracket:
    @pytest.mark.parametrize(
        "d,alpha",
        [
            (2, Alpha.zero()),
            (2, Alpha.positive(1.0)),
            (3, Alpha.negative(1.5)),
            (5, Alpha.positive(HALF_PI)),
            (7, Alpha.negative(0.4)),
        ],
    )
    def test_chain_order(self, d, alpha):
        b = universal_bracket(d, alpha, profile=get_profile(d, alpha))
        lo4, lo, hi, hi4 = b.chain()
        assert lo4 <= lo + 1e-9
        assert lo <= hi + 1e-9
        assert hi <= hi4 + 1e-9

    @pytest.mark.parametrize(
        "d,alpha",
        [(2, Alpha.zero()), (2, Alpha.positive(1.0)), (3, Alpha.negative(1.5))],
    )
    def test_bracket_contains_oracle_eigenvalue(self, d, alpha):
        b = universal_bracket(d, alpha, profile=get_profile(d, alpha))
        lam = get_lambda(d, alpha).eigenvalue
        assert b.lower <= lam + 1e-6
        assert lam <= b.upper + 1e-6

    def test_mismatched_profile_rejected(self):
        with pytest.raises(DomainError):
            universal_bracket(3, Alpha.zero(), profile=get_profile(2, Alpha.zero()))


class TestIteration:
    def test_flat_lower_sequence_frozen(self):
        tr = iterate_lower(get_profile(2, Alpha.zero()), 6)
        want = [
            0.4274939866,
            0.4074272173,
            0.4055944056,
            0.4053221289,
            0.4052890131,
            0.4052852150,
        ]
        assert list(tr.lower_sequence) == pytest.approx(want, abs=5e-9)

    def test_lower_reciprocals_nondecreasing(self):
        for d, alpha in ((2, Alpha.zero()), (3, Alpha.negative(1.0))):
            tr = iterate_lower(get_profile(d, alpha), 4)
            inv = [1.0 / v for v in tr.lower_sequence]
            assert all(b >= a - 1e-10 for a, b in zip(inv, inv[1:]))

    def test_upper_reciprocals_nonincreasing(self):
        tr = iterate_upper(get_profile(2, Alpha.positive(0.8)), 3)
        inv = [1.0 / v for v in tr.upper_sequence]
        assert all(b <= a + 1e-10 for a, b in zip(inv, inv[1:]))

    def test_first_upper_matches_prime_functional(self):
        p = get_profile(2, Alpha.zero())
        tr = iterate_upper(p, 1)
        assert tr.upper_sequence[0] == pytest.approx(delta1_prime(p), abs=1e-6)

    def test_sequences_converge_toward_eigenvalue(self):
        p = get_profile(2, Alpha.zero())
        lam = PI2 / 4.0
        lo = 1.0 / iterate_lower(p, 6).lower_sequence[-1]
        hi = 1.0 / iterate_upper(p, 6).upper_sequence[-1]
        assert lo <= lam + 1e-9
        assert hi >= lam - 1e-9
        assert abs(lo - lam) < 1e-3 and abs(hi - lam) < 1e-3

    def test_bad_depth_rejected(self):
        with pytest.raises(DomainError):
            iterate_lower(get_profile(2, Alpha.zero()), 0)


class TestVariationalRatio:
    def test_exact_eigenfunction_flat(self):
        # sin(pi r / 2) is the exact reduced eigenfunction at alpha = 0;
        # the ratio is constant pi^2/4, so inf = sup = pi^2/4.
        p = get_profile(2, Alpha.zero())
        got = variational_ratio(lambda r: np.sin(math.pi * r / 2.0), p)
        assert got == pytest.approx(PI2 / 4.0, abs=1e-8)

    def test_dual_form_agrees_for_dual_eigenfunction(self):
        p = get_profile(2, Alpha.zero())
        got = variational_ratio(
            lambda r: np.cos(math.pi * r / 2.0), p, form="dual"
        )
        # The dual denominator rides on interpolated tail tables, which add
        # a few 1e-8 of evaluation noise on top of the quadrature itself.
        assert got == pytest.approx(PI2 / 4.0, abs=5e-7)

    def test_generic_function_gives_valid_lower_bound(self):
        p = get_profile(3, Alpha.negative(1.0))
        lam = get_lambda(3, Alpha.negative(1.0)).eigenvalue
        got = variational_ratio(lambda r: np.asarray(r), p)
        assert got <= lam + 1e-9

    def test_invalid_test_function_rejected(self):
        p = get_profile(2, Alpha.zero())
        with pytest.raises(InvalidTestFunction):
            variational_ratio(lambda r: np.asarray(r) - 0.5, p)

    def test_bad_form_rejected(self):
        with pytest.raises(DomainError):
            variational_ratio(lambda r: np.asarray(r), get_profile(2, Alpha.zero()), form="x")
