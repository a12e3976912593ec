"""Tests for stagbench.benchmarks: optima, gradients, fd oracle, objectives."""

from __future__ import annotations

import numpy as np
import pytest

from stagbench import benchmarks
from stagbench.core import Bounds, derive_stream


class TestOptima:
    def test_zhou1_dim3_certificate_point(self):
        # The dim-3 minimizer is exactly (1, 2, 8).
        opt = benchmarks.optimum("zhou1", 3)
        assert np.array_equal(opt, [1.0, 2.0, 8.0])
        assert benchmarks.value("zhou1", opt) == 0.0

    def test_zhou1_recursion(self):
        opt = benchmarks.optimum("zhou1", 5)
        assert opt[0] == 1.0
        for i in range(4):
            assert opt[i + 1] == 2.0 * opt[i] ** 2

    @pytest.mark.parametrize("name", ("zhou2", "zhou3"))
    @pytest.mark.parametrize("branch", benchmarks.BRANCHES)
    @pytest.mark.parametrize("dim", (2, 3, 4, 5))
    def test_branch_optima_near_zero(self, name, branch, dim):
        opt = benchmarks.optimum(name, dim, branch)
        assert opt[0] == -1.0
        assert abs(benchmarks.value(name, opt)) <= 1e-8
        assert np.linalg.norm(benchmarks.gradient(name, opt)) <= 1e-4

    def test_branches_differ_only_in_last_coordinate(self):
        minus = benchmarks.optimum("zhou2", 4, "minus")
        plus = benchmarks.optimum("zhou2", 4, "plus")
        assert np.array_equal(minus[:-1], plus[:-1])
        assert minus[-1] == -plus[-1] != 0.0

    def test_optima_listing_dedupes(self):
        # zhou1 has a single optimum; zhou2/zhou3 have two symmetric ones.
        assert len(benchmarks.optima("zhou1", 3)) == 1
        assert len(benchmarks.optima("zhou2", 3)) == 2
        assert len(benchmarks.optima("zhou3", 3)) == 2

    def test_unknown_branch_rejected(self):
        with pytest.raises(ValueError):
            benchmarks.optimum("zhou2", 3, "sideways")

    def test_dim_below_two_rejected(self):
        with pytest.raises(ValueError):
            benchmarks.optimum("zhou1", 1)


class TestEvaluators:
    def test_unknown_name_rejected(self):
        with pytest.raises(ValueError):
            benchmarks.value("zhou9", np.zeros(3))

    def test_batch_matches_scalar(self):
        gen = np.random.Generator(np.random.PCG64(0))
        X = gen.uniform(-2.0, 2.0, size=(16, 3))
        for name in benchmarks.FUNCTIONS:
            vals = benchmarks.value_batch(name, X)
            grads = benchmarks.gradient_batch(name, X)
            for i, x in enumerate(X):
                assert vals[i] == benchmarks.value(name, x)
                assert np.array_equal(grads[i], benchmarks.gradient(name, x))

    def test_values_nonnegative(self):
        gen = np.random.Generator(np.random.PCG64(1))
        X = gen.uniform(-100.0, 100.0, size=(64, 3))
        for name in benchmarks.FUNCTIONS:
            assert np.all(benchmarks.value_batch(name, X) >= 0.0)

    def test_non_finite_input_rejected(self):
        with pytest.raises(ValueError):
            benchmarks.value("zhou1", np.array([np.nan, 1.0, 1.0]))


class TestFdGradient:
    def test_matches_analytic_at_mixed_tolerance(self):
        gen = derive_stream(42, ["fd-check"]).generator()
        for name in benchmarks.FUNCTIONS:
            P = gen.uniform(-2.0, 2.0, size=(25, 3))
            for x in P:
                analytic = benchmarks.gradient(name, x)
                fd = benchmarks.fd_gradient(name, x, h=1e-7)
                tol = np.where(np.abs(fd) > 1.0, 1e-3 * np.abs(fd), 1e-2)
                assert np.all(np.abs(analytic - fd) <= tol)

    def test_near_optimum_fd_is_small(self):
        # At the optima the analytic gradient vanishes; fd retains a
        # truncation floor from the 1e4-frequency ripple (7th derivative
        # times h^6 leaves ~3e-2 for zhou1 at h=1e-7).  The check is that
        # fd sees *no* spurious large gradient there — typical non-optimum
        # gradient norms on these functions are 1e6 and up.
        for name in benchmarks.FUNCTIONS:
            opt = benchmarks.optimum(name, 3)
            fd = benchmarks.fd_gradient(name, opt, h=1e-7)
            assert np.linalg.norm(fd) <= 0.1

    def test_order_controls_truncation(self):
        # On the 1e4-frequency ripple the 2nd-order stencil truncation at
        # h=1e-7 is visible; order 6 must be strictly more accurate on a
        # point where order 2 errs.
        x = np.array([0.7, -1.3, 0.4])
        g = benchmarks.gradient("zhou2", x)
        err2 = np.max(np.abs(benchmarks.fd_gradient("zhou2", x, order=2) - g))
        err6 = np.max(np.abs(benchmarks.fd_gradient("zhou2", x, order=6) - g))
        assert err6 < err2

    def test_unsupported_order_rejected(self):
        with pytest.raises(ValueError):
            benchmarks.fd_gradient("zhou1", np.zeros(3), order=3)


class TestObjectiveFactory:
    @pytest.mark.parametrize("name", benchmarks.FUNCTIONS)
    def test_objective_wires_kernels(self, name):
        obj = benchmarks.objective(name, 3)
        x = np.array([0.5, -0.5, 1.5])
        assert obj.value(x) == benchmarks.value(name, x)
        assert np.array_equal(obj.grad(x), benchmarks.gradient(name, x))
        X = np.array([[0.5, -0.5, 1.5], [1.0, 1.0, 1.0]])
        assert np.array_equal(obj.value_batch(X), benchmarks.value_batch(name, X))

    def test_interior_optima_only(self):
        # zhou1 optima escape [-100, 100]^dim from dim 4 ((1,2,8,128,...)).
        obj3 = benchmarks.objective("zhou1", 3)
        assert len(obj3.known_optima) == 1
        obj5 = benchmarks.objective("zhou1", 5)
        assert len(obj5.known_optima) == 0

    def test_zhou23_keep_both_branches_at_default_bounds(self):
        for name in ("zhou2", "zhou3"):
            obj = benchmarks.objective(name, 3)
            assert len(obj.known_optima) == 2

    def test_custom_bounds_respected(self):
        bounds = Bounds.cube(-5.0, 5.0, 3)
        obj = benchmarks.objective("zhou2", 3, bounds)
        assert obj.domain is bounds

    def test_sphere_objective(self):
        obj = benchmarks.sphere_objective(3)
        assert obj.value(np.zeros(3)) == 0.0
        assert obj.value(np.ones(3)) == 3.0
        assert np.array_equal(obj.grad(np.ones(3)), 2.0 * np.ones(3))
        assert len(obj.known_optima) == 1
