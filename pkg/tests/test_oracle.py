"""Tests for the shooting solver for the reduced eigenvalue problems.

The solver is the independent referee for every bound in the package, so
it gets referee treatment itself: frozen regression values at the solver's
own reproducibility level (1e-9; bisection noise sits near 1e-10), exact
analytic anchors where the problem is solvable in closed form, a duality
cross-check (primal and adjoint families must share one eigenvalue), and a
fully external reimplementation of the shooting loop on scipy's DOP853.
"""

import math

import numpy as np
import pytest

from conftest import get_lambda, requires_full
from eigenbound.errors import DomainError
from eigenbound.geometry import HALF_PI, Alpha
from eigenbound.oracle import (
    DIRICHLET,
    NEUMANN,
    EigenProblem,
    beta_eigenvalue,
    beta_problem,
    derivative_identity_residual,
    dual_problem,
    duality_gap,
    principal_eigenvalue,
    reduced_problem,
    resample,
    solve_lambda_bar,
    variational_consistency,
)

PI2 = math.pi**2


class TestFrozenEigenvalues:
    # Frozen at the solver's reproducibility level: independent reruns of
    # the bisection agree to ~1e-10, so the regression tolerance is 1e-9.
    @pytest.mark.parametrize(
        "d, alpha, expected",
        [
            (2, Alpha.zero(), 2.46740110027119),
            (3, Alpha.negative(1.5), 1.096922393533319),
            (4, Alpha.positive(1.0), 4.561408332304504),
            (2, Alpha.positive(HALF_PI), 4.934802200443577),
            (5, Alpha.positive(1.2), 7.282230106242057),
        ],
        ids=["flat", "d3-neg", "d4-pos", "d2-edge", "d5-pos"],
    )
    def test_frozen_values(self, d, alpha, expected):
        assert get_lambda(d, alpha).eigenvalue == pytest.approx(
            expected, abs=1e-9
        )

    def test_flat_matches_quarter_pi_squared(self):
        assert get_lambda(2, Alpha.zero()).eigenvalue == pytest.approx(
            PI2 / 4.0, abs=1e-9
        )

    def test_myers_edge_matches_sphere_value(self):
        # At |alpha| = pi/2 the model is the round sphere: lambda = d pi^2/4
        # on the reduced scale (domain trimmed by 1e-8 at the tan pole).
        assert get_lambda(2, Alpha.positive(HALF_PI)).eigenvalue == pytest.approx(
            2.0 * PI2 / 4.0, abs=5e-9
        )

    def test_strong_negative_drift_collapses_eigenvalue(self):
        # d=12, alpha=-3: the spectral gap closes to ~2.6e-9 but stays
        # strictly positive; the reference-point walk-down must find it.
        lam = get_lambda(12, Alpha.negative(3.0)).eigenvalue
        assert 0.0 < lam < 1e-8
        assert lam == pytest.approx(2.5503054036959313e-09, abs=1e-9)

    @requires_full
    def test_high_dimensional_edge(self):
        lam = get_lambda(63, Alpha.positive(HALF_PI)).eigenvalue
        assert lam == pytest.approx(155.44626931534356, rel=1e-9)
        assert lam == pytest.approx(63.0 * PI2 / 4.0, rel=1e-6)


class TestBetaAnchors:
    def test_beta_zero_is_flat_problem(self):
        assert beta_eigenvalue(0.0).eigenvalue == pytest.approx(
            PI2 / 4.0, abs=1e-8
        )

    def test_beta_half_is_three(self):
        assert beta_eigenvalue(0.5).eigenvalue == pytest.approx(3.0, abs=1e-8)

    def test_beta_minus_half_is_two(self):
        assert beta_eigenvalue(-0.5).eigenvalue == pytest.approx(2.0, abs=1e-8)

    def test_interior_closed_form_anchor(self):
        # beta = (3 - sqrt 6)/2 solves to exactly 5(3 - sqrt 6).
        beta = (3.0 - math.sqrt(6.0)) / 2.0
        assert beta_eigenvalue(beta).eigenvalue == pytest.approx(
            5.0 * (3.0 - math.sqrt(6.0)), abs=2e-8
        )

    def test_eigenvalue_dominates_quadratic_model(self):
        # lambda0(beta) >= pi^2/4 + beta + (10 - pi^2) beta^2 on (0, 1/2].
        for beta in np.linspace(0.04, 0.5, 12):
            lam = beta_eigenvalue(float(beta)).eigenvalue
            model = PI2 / 4.0 + beta + (10.0 - PI2) * beta * beta
            assert lam - model >= -1e-8

    def test_monotone_in_beta(self):
        vals = [beta_eigenvalue(b).eigenvalue for b in (-0.5, 0.0, 0.25, 0.5)]
        assert all(b > a for a, b in zip(vals, vals[1:]))


class TestDuality:
    @pytest.mark.parametrize(
        "d, alpha",
        [(2, Alpha.zero()), (3, Alpha.negative(1.5)), (4, Alpha.positive(1.0))],
        ids=["flat", "neg", "pos"],
    )
    def test_primal_and_adjoint_share_eigenvalue(self, d, alpha):
        primal, adjoint, gap = duality_gap(d, alpha)
        assert gap < 1e-9
        assert primal.eigenvalue == pytest.approx(
            adjoint.eigenvalue, abs=1e-9
        )

    def test_dual_flag_solves_adjoint_family(self):
        res = solve_lambda_bar(3, Alpha.negative(1.5), dual=True)
        assert res.problem.label.startswith("dual")
        assert res.eigenvalue == pytest.approx(
            get_lambda(3, Alpha.negative(1.5)).eigenvalue, abs=1e-9
        )

    def test_adjoint_swaps_conditions_and_drift_sign(self):
        base = reduced_problem(5, Alpha.negative(2.0))
        dual = dual_problem(5, Alpha.negative(2.0))
        assert (base.bc_left, base.bc_right) == (DIRICHLET, NEUMANN)
        assert (dual.bc_left, dual.bc_right) == (NEUMANN, DIRICHLET)
        assert dual.c1 == -base.c1
        assert dual.c2 == base.c2


class TestScipyCrossCheck:
    """Re-derive two eigenvalues with none of the package's machinery.

    scipy's DOP853 integrates the same ODE, brentq bisects the same
    boundary functional; only EigenProblem.drift is shared, as the
    definition of the problem being solved.
    """

    @staticmethod
    def _external_eigenvalue(d, alpha):
        from scipy.integrate import solve_ivp
        from scipy.optimize import brentq

        prob = reduced_problem(d, alpha)

        def mismatch(lam):
            def rhs(r, y):
                return [y[1], -float(prob.drift(r)) * y[1] - lam * y[0]]

            sol = solve_ivp(
                rhs,
                [0.0, prob.r_end],
                [0.0, 1.0],
                method="DOP853",
                rtol=1e-11,
                atol=1e-13,
            )
            return sol.y[1, -1]

        prev_x, prev_m = 1e-6, mismatch(1e-6)
        for x in np.linspace(0.05, 60.0, 241):
            mx = mismatch(float(x))
            if prev_m > 0.0 and mx <= 0.0:
                return brentq(mismatch, prev_x, float(x), xtol=1e-12)
            prev_x, prev_m = float(x), mx
        raise AssertionError("external scan found no sign change")

    @pytest.mark.parametrize(
        "d, alpha",
        [(3, Alpha.negative(1.5)), (4, Alpha.positive(1.0))],
        ids=["neg", "pos"],
    )
    def test_matches_external_solver(self, d, alpha):
        assert self._external_eigenvalue(d, alpha) == pytest.approx(
            get_lambda(d, alpha).eigenvalue, abs=1e-8
        )


class TestDerivativeIdentity:
    def test_residual_and_boundary_defects_vanish(self):
        rep = derivative_identity_residual(2, Alpha.negative(1.0), 0.5)
        assert rep.residual < 1e-6
        assert abs(rep.g_slope_origin) < 1e-6
        assert abs(rep.g_end) < 1e-6
        assert rep.residual == pytest.approx(abs(rep.lhs - rep.rhs))
        assert rep.s == 0.5

    def test_eigenvalue_agrees_with_plain_solve(self):
        # The identity run lifts the eigenvalue by a 3e-7 relative nudge so
        # f' crosses zero strictly inside the interval.
        rep = derivative_identity_residual(2, Alpha.negative(1.0), 0.5)
        lam = get_lambda(2, Alpha.negative(1.0)).eigenvalue
        assert rep.eigenvalue == pytest.approx(lam, rel=1e-5)


class TestVariationalConsistency:
    @pytest.mark.parametrize(
        "d, alpha",
        [(2, Alpha.zero()), (3, Alpha.negative(1.5))],
        ids=["flat", "neg"],
    )
    def test_solved_eigenfunctions_reproduce_eigenvalue(self, d, alpha):
        rep = variational_consistency(d, alpha)
        assert rep.worst_gap < 1e-8
        assert rep.eigenvalue == pytest.approx(
            get_lambda(d, alpha).eigenvalue, abs=1e-9
        )


class TestSolutionSurface:
    def test_primal_satisfies_both_boundary_conditions(self):
        res = solve_lambda_bar(2, Alpha.zero())
        scale = float(np.max(np.abs(res.f)))
        assert res.f[0] == 0.0
        assert abs(res.fp[-1]) / float(np.max(np.abs(res.fp))) < 1e-9
        assert scale > 0.0

    def test_resample_preserves_solution(self):
        res = solve_lambda_bar(2, Alpha.zero())
        dense = resample(res, 8193)
        assert len(dense.r) == 8193
        assert dense.eigenvalue == res.eigenvalue
        xs = np.linspace(0.0, 1.0, 777)
        gap = np.max(np.abs(res.interpolant()(xs) - dense.interpolant()(xs)))
        assert float(gap) < 1e-10

    def test_positive_edge_trims_domain(self):
        prob = reduced_problem(2, Alpha.positive(HALF_PI))
        assert prob.r_end == pytest.approx(1.0 - 1e-8)
        assert reduced_problem(2, Alpha.positive(1.0)).r_end == 1.0

    def test_beta_problem_is_linear_drift(self):
        prob = beta_problem(0.5)
        assert float(prob.drift(0.25)) == pytest.approx(-0.25)
        assert float(prob.drift_slope(0.9)) == pytest.approx(-1.0)


class TestValidation:
    def test_rejects_unknown_kernel_kind(self):
        with pytest.raises(DomainError):
            EigenProblem(9, 0.0, 0.0, DIRICHLET, NEUMANN)

    def test_rejects_bad_boundary_condition(self):
        with pytest.raises(DomainError):
            EigenProblem(0, 0.0, 0.0, "robin", NEUMANN)

    def test_rejects_bad_domain_end(self):
        with pytest.raises(DomainError):
            EigenProblem(0, 0.0, 0.0, DIRICHLET, NEUMANN, r_end=0.0)

    def test_rejects_non_integer_dimension(self):
        with pytest.raises(DomainError):
            solve_lambda_bar(0, Alpha.zero())
        with pytest.raises(DomainError):
            reduced_problem(True, Alpha.zero())

    def test_rejects_bad_scan_ceiling(self):
        with pytest.raises(DomainError):
            principal_eigenvalue(beta_problem(0.0), lam_max=float("inf"))

    def test_rejects_infinite_beta(self):
        with pytest.raises(DomainError):
            beta_problem(float("nan"))
