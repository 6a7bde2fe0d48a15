"""Cost functions, the local primal step, and dual quantities."""

import math

import numpy as np
import pytest

from netalloc import (
    FeasibleInterval,
    GenericConvex,
    LocalProblem,
    Quadratic,
    dual_subgradient,
    dual_value,
    golden_section_min,
    primal_argmin,
    subgradient_bound,
)


def grid_argmin(fn, lo, hi, points=200_001):
    """Independent brute-force minimizer on a dense grid."""
    xs = np.linspace(lo, hi, points)
    return float(xs[np.argmin([fn(x) for x in xs])])


def gen1_problem(share=60.0):
    # 0.04 x^2 + 2 x on [0, 80]
    return LocalProblem(Quadratic(0.04, 2.0), FeasibleInterval(0.0, 80.0), share)


class TestFeasibleInterval:
    def test_rejects_inverted(self):
        with pytest.raises(ValueError, match="empty"):
            FeasibleInterval(1.0, 0.0)

    def test_rejects_infinite(self):
        with pytest.raises(ValueError, match="finite"):
            FeasibleInterval(0.0, math.inf)

    def test_singleton_allowed(self):
        assert FeasibleInterval(2.0, 2.0).width == 0.0


class TestPrimalArgmin:
    def test_interior_minimizer(self):
        p = gen1_problem()
        x = primal_argmin(p, -4.0)
        assert x == pytest.approx(25.0, abs=1e-12)
        # grid oracle over [0, 80]
        oracle = grid_argmin(lambda t: 0.04 * t * t + 2.0 * t + (-4.0) * t, 0.0, 80.0)
        assert x == pytest.approx(oracle, abs=1e-3)

    def test_lower_endpoint(self):
        assert primal_argmin(gen1_problem(), -2.0) == 0.0

    def test_clamps_to_upper(self):
        p = gen1_problem()
        x = primal_argmin(p, -10.0)
        assert x == 80.0
        oracle = grid_argmin(lambda t: 0.04 * t * t + 2.0 * t - 10.0 * t, 0.0, 80.0)
        assert oracle == pytest.approx(80.0, abs=1e-3)

    def test_independent_of_share(self):
        a = primal_argmin(gen1_problem(share=60.0), -4.0)
        b = primal_argmin(gen1_problem(share=-7.5), -4.0)
        assert a == b

    def test_linear_cost_tie_break_returns_lo(self):
        p = LocalProblem(Quadratic(0.0, 2.0), FeasibleInterval(-1.0, 3.0), 0.0)
        assert primal_argmin(p, -2.0) == -1.0  # every point optimal

    def test_linear_cost_endpoints(self):
        p = LocalProblem(Quadratic(0.0, 2.0), FeasibleInterval(-1.0, 3.0), 0.0)
        assert primal_argmin(p, 1.0) == -1.0
        assert primal_argmin(p, -5.0) == 3.0

    def test_generic_convex_matches_quadratic(self):
        quad = Quadratic(0.3, -1.0, 0.5)
        generic = GenericConvex(lambda x: 0.3 * x * x - 1.0 * x + 0.5)
        iv = FeasibleInterval(-2.0, 6.0)
        for v in (-3.0, -0.5, 0.0, 1.0, 4.0):
            a = quad.shifted_argmin(v, iv)
            b = generic.shifted_argmin(v, iv)
            # golden section localizes to ~sqrt(eps) via value comparisons
            assert b == pytest.approx(a, abs=1e-6)

    def test_generic_convex_user_oracle(self):
        generic = GenericConvex(
            lambda x: abs(x), argmin_fn=lambda c, lo, hi: lo if c > -1.0 else hi
        )
        iv = FeasibleInterval(0.0, 2.0)
        assert generic.shifted_argmin(0.0, iv) == 0.0

    def test_feasibility_property(self, suite_rng):
        # optimality certificate against random feasible points
        for _ in range(1000):
            lo = float(suite_rng.uniform(-10, 0))
            hi = float(suite_rng.uniform(0, 10))
            p = LocalProblem(
                Quadratic(float(suite_rng.uniform(0, 1)), float(suite_rng.uniform(-5, 5))),
                FeasibleInterval(lo, hi),
                float(suite_rng.uniform(-5, 5)),
            )
            v = float(suite_rng.uniform(-10, 10))
            x_hat = primal_argmin(p, v)
            assert lo <= x_hat <= hi
            best = p.cost.value(x_hat) + v * x_hat
            others = lo + (hi - lo) * suite_rng.random(100)
            vals = p.cost.value(others) + v * others
            assert (best <= vals + 1e-9).all()


class TestQuadraticValidation:
    def test_rejects_negative_gamma(self):
        with pytest.raises(ValueError, match="nonnegative"):
            Quadratic(-0.1, 2.0)


class TestDualValue:
    def test_boundary_minimizer(self):
        p = LocalProblem(Quadratic(0.5, 0.0, 0.0), FeasibleInterval(-1.0, 1.0), 0.0)
        assert dual_value(p, 1.0) == pytest.approx(0.5, abs=1e-12)
        oracle_x = grid_argmin(lambda t: 0.5 * t * t + 1.0 * t, -1.0, 1.0)
        assert -(0.5 * oracle_x**2 + 1.0 * oracle_x) == pytest.approx(0.5, abs=1e-4)

    def test_vanishes_at_share(self):
        # x_hat = b and f(x_hat) = 0 makes both terms vanish
        p = LocalProblem(Quadratic(0.5, 0.0, 0.0), FeasibleInterval(-1.0, 1.0), 0.0)
        assert dual_value(p, 0.0) == 0.0

    def test_zero_multiplier_gen1(self):
        p = gen1_problem()
        assert dual_value(p, 0.0) == 0.0  # x_hat = 0, f(0) = 0

    def test_mu_carried_through(self):
        p = LocalProblem(Quadratic(0.5, 0.0, 3.0), FeasibleInterval(-1.0, 1.0), 0.0)
        assert dual_value(p, 0.0) == pytest.approx(-3.0, abs=1e-12)

    def test_convexity_probe(self, suite_rng):
        p = LocalProblem(Quadratic(0.2, 1.0, -0.5), FeasibleInterval(-3.0, 5.0), 1.0)
        for _ in range(200):
            l1, l2 = suite_rng.uniform(-8, 8, size=2)
            t = float(suite_rng.uniform(0.01, 0.99))
            mid = dual_value(p, t * l1 + (1 - t) * l2)
            assert mid <= t * dual_value(p, l1) + (1 - t) * dual_value(p, l2) + 1e-9

    def test_subgradient_inequality(self, suite_rng):
        p = LocalProblem(Quadratic(0.3, -2.0), FeasibleInterval(-4.0, 4.0), 0.5)
        for _ in range(200):
            u, v = suite_rng.uniform(-6, 6, size=2)
            lhs = dual_value(p, u)
            rhs = dual_value(p, v) + dual_subgradient(p, v) * (u - v)
            assert lhs >= rhs - 1e-9


class TestDualSubgradient:
    def test_definitional(self):
        p = gen1_problem(share=60.0)
        assert dual_subgradient(p, -4.0) == pytest.approx(60.0 - 25.0, abs=1e-12)

    def test_zero_at_stationarity(self):
        p = gen1_problem(share=25.0)
        assert dual_subgradient(p, -4.0) == pytest.approx(0.0, abs=1e-12)

    def test_clamped_case(self):
        p = gen1_problem(share=60.0)
        assert dual_subgradient(p, -10.0) == pytest.approx(-20.0, abs=1e-12)

    def test_bounded_by_subgradient_bound(self, suite_rng):
        for _ in range(300):
            lo = float(suite_rng.uniform(-10, 0))
            hi = float(suite_rng.uniform(0, 10))
            p = LocalProblem(
                Quadratic(float(suite_rng.uniform(0, 1)), float(suite_rng.uniform(-5, 5))),
                FeasibleInterval(lo, hi),
                float(suite_rng.uniform(-15, 15)),
            )
            v = float(suite_rng.uniform(-20, 20))
            assert abs(dual_subgradient(p, v)) <= subgradient_bound(p) + 1e-15


class TestSubgradientBound:
    def test_asymmetric(self):
        assert subgradient_bound(gen1_problem(share=60.0)) == 60.0

    def test_symmetric(self):
        assert subgradient_bound(gen1_problem(share=40.0)) == 40.0

    def test_degenerate_singleton(self):
        p = LocalProblem(Quadratic(1.0, 0.0), FeasibleInterval(2.0, 2.0), 2.0)
        assert subgradient_bound(p) == 0.0


class TestGoldenSection:
    def test_quadratic_minimum(self):
        x = golden_section_min(lambda t: (t - 1.3) ** 2, -5.0, 5.0)
        assert x == pytest.approx(1.3, abs=1e-6)

    def test_plateau_returns_left_edge(self):
        x = golden_section_min(lambda t: max(abs(t) - 1.0, 0.0), -4.0, 6.0)
        assert x == pytest.approx(-1.0, abs=1e-6)

    def test_deterministic(self):
        fn = lambda t: math.exp(0.3 * t) - t
        a = golden_section_min(fn, -2.0, 8.0)
        b = golden_section_min(fn, -2.0, 8.0)
        assert a == b
