"""Unit tests for backtracking, inner descent and the outer solve loop."""
from dataclasses import replace

import numpy as np
import pytest

from rwflow.core.measurement import (
    FieldKind,
    GaussianEnsemble,
    gen_gaussian_ensemble,
    gen_signal,
    intensities,
    unit_signal,
)
from rwflow.core.objective import WeightedObjective, compute_weights, unit_weights
from rwflow.core.solver import armijo_search, backtrack_stepsize, inner_gd, refresh_weights, solve
from rwflow.core.spectral import spectral_init
from rwflow.core.state import Method, SolverConfig, StepsizeMode, StopReason
from rwflow.errors import ParameterError, StagnationError
from rwflow.metrics.recovery import in_region_E, nmse
from rwflow.utils.rng import derive_seed


def _half_norm_sq(z):
    return 0.5 * float(np.real(np.vdot(z, z)))


class TestSolverConfig:
    """Test cases for SolverConfig."""

    def test_defaults(self):
        """Defaults: T=300, T1=500, beta=0.1, eta=0.9."""
        cfg = SolverConfig()
        assert cfg.method is Method.RWF
        assert (cfg.T, cfg.T1, cfg.beta, cfg.eta) == (300, 500, 0.1, 0.9)
        assert cfg.success_nmse == 1e-5

    def test_step_budget(self):
        """RWF budgets T * T1 steps; the baselines use the flat budget."""
        assert SolverConfig(T=3, T1=7).step_budget == 21
        assert SolverConfig(method=Method.WF, flat_iteration_budget=99).step_budget == 99
        assert SolverConfig(method="TWF-lite", flat_iteration_budget=5).step_budget == 5

    def test_default_fixed_stepsize(self):
        """Fixed mode defaults to mu = 0.2 / n."""
        assert SolverConfig().mu_for(64) == pytest.approx(0.2 / 64)
        assert SolverConfig(fixed_mu=0.01).mu_for(64) == 0.01

    @pytest.mark.parametrize("kwargs", [
        {"beta": 0.0}, {"beta": 1.0}, {"T": 0}, {"T1": 0}, {"eta": 0.0},
        {"trunc_C": float("inf")}, {"fixed_mu": -1.0}, {"success_nmse": 0.0},
    ])
    def test_invalid_values(self, kwargs):
        """Out-of-range tunables raise ParameterError."""
        with pytest.raises(ParameterError):
            SolverConfig(**kwargs)


class TestBacktracking:
    """Test cases for the Armijo search."""

    def test_unit_step_accepted(self):
        """f = ||z||^2 / 2 with beta = 0.1 accepts tau = 1."""
        z = np.array([1.0, -2.0])
        assert backtrack_stepsize(_half_norm_sq, z, z, beta=0.1) == 1.0

    def test_one_halving(self):
        """With beta = 0.6 the unit step fails and tau = 0.5 is accepted."""
        z = np.array([1.0])
        assert backtrack_stepsize(_half_norm_sq, z, z, beta=0.6) == 0.5

    def test_zero_gradient_rejected(self):
        """A zero gradient has no descent direction."""
        with pytest.raises(ParameterError):
            backtrack_stepsize(_half_norm_sq, np.zeros(2), np.ones(2))

    def test_beta_range(self):
        """beta must lie in (0, 1)."""
        with pytest.raises(ParameterError):
            backtrack_stepsize(_half_norm_sq, np.ones(1), np.ones(1), beta=1.5)

    def test_stagnation(self):
        """A function with no decrease exhausts the halvings."""
        with pytest.raises(StagnationError) as info:
            armijo_search(lambda z: 1.0, np.ones(2), np.ones(2), beta=0.1, max_halvings=5)
        assert info.value.halvings == 5

    def test_result_fields(self):
        """The search reports the accepted point and its value."""
        z = np.array([2.0])
        result = armijo_search(_half_norm_sq, z, z, beta=0.6, max_halvings=10)
        assert result.halvings == 1
        np.testing.assert_allclose(result.z_next, [1.0])
        assert result.value == pytest.approx(0.5)


class TestInnerGD:
    """Test cases for inner_gd."""

    def test_scalar_descent(self):
        """a=1, y=1, z=2: the objective drops from 4.5 and |z| reaches 1."""
        e = GaussianEnsemble(np.array([[1.0]]))
        y = intensities(e, np.array([1.0]))
        cfg = SolverConfig(T1=50)
        result = inner_gd(e, y, unit_weights(1), np.array([2.0]), cfg)
        values = [entry.objective for entry in result.trace]
        assert values[0] < 4.5
        assert all(b < a for a, b in zip(values, values[1:]))
        assert abs(abs(result.z[0]) - 1.0) < 1e-6

    def test_start_at_solution(self, real_problem):
        """Starting at x succeeds without taking a step."""
        e, x, y = real_problem
        result = inner_gd(e, y, unit_weights(e.m), x, SolverConfig(), ground_truth=x)
        assert result.steps == 0
        assert result.stop_reason is StopReason.SUCCESS
        np.testing.assert_array_equal(result.z, x.values)

    def test_strict_descent(self, complex_problem):
        """Backtracking steps strictly decrease the frozen objective."""
        e, x, y = complex_problem
        z0 = spectral_init(e, y, seed=1).z0
        result = inner_gd(e, y, compute_weights(e, y, z0), z0, SolverConfig(T1=100), x)
        values = [entry.objective for entry in result.trace]
        assert len(values) > 1
        assert all(b < a for a, b in zip(values, values[1:]))

    def test_step_cap(self, real_problem):
        """No more than max_steps steps are taken."""
        e, _, y = real_problem
        result = inner_gd(e, y, unit_weights(e.m), np.ones(e.n), SolverConfig(), max_steps=3)
        assert result.steps <= 3
        assert len(result.trace) == result.steps

    def test_fixed_stepsize_mode(self, real_problem):
        """Fixed mode takes exactly mu-sized gradient steps."""
        e, _, y = real_problem
        cfg = SolverConfig(stepsize_mode=StepsizeMode.FIXED, fixed_mu=0.001)
        z0 = np.ones(e.n)
        w = unit_weights(e.m)
        result = inner_gd(e, y, w, z0, cfg, max_steps=1)
        expected = z0 - 0.001 * WeightedObjective(e, y, w).gradient(z0)
        np.testing.assert_allclose(result.z, expected)

    def test_weight_refresh_changes_objective(self, real_problem):
        """Weights recomputed at the new iterate change the gradient."""
        e, x, y = real_problem
        z0 = spectral_init(e, y, seed=2).z0
        stale = compute_weights(e, y, z0)
        result = inner_gd(e, y, stale, z0, SolverConfig(T1=5), x)
        fresh = compute_weights(e, y, result.z)
        g_stale = np.linalg.norm(WeightedObjective(e, y, stale).gradient(result.z))
        g_fresh = np.linalg.norm(WeightedObjective(e, y, fresh).gradient(result.z))
        assert g_stale != g_fresh

    @pytest.mark.slow
    def test_geometric_convergence_with_fixed_stepsize(self):
        """From inside E(z), fixed mu = 0.2/n stays under (1/8)(1 - mu/4)^(t-1) ||x||."""
        n, m = 64, 512
        mu = 0.2 / n
        backtracking = SolverConfig(T1=50)
        fixed = SolverConfig(stepsize_mode=StepsizeMode.FIXED, T1=300)
        passed = 0
        for trial in range(20):
            x = unit_signal(gen_signal(n, FieldKind.REAL, derive_seed(trial, "x")))
            e = gen_gaussian_ensemble(n, m, FieldKind.REAL, derive_seed(trial, "e"))
            y = intensities(e, x)
            z = spectral_init(e, y, seed=derive_seed(trial, "init")).z0
            for _ in range(40):
                if in_region_E(e, y, z):
                    break
                z = inner_gd(e, y, compute_weights(e, y, z), z, backtracking).z
            if not in_region_E(e, y, z):
                continue
            result = inner_gd(e, y, compute_weights(e, y, z), z, fixed, ground_truth=x)
            bound_ok = all(
                entry.nmse <= 0.125 * (1 - mu / 4) ** (entry.inner - 1) for entry in result.trace
            )
            passed += bound_ok
        assert passed >= 18


class TestSolve:
    """Test cases for the outer loop."""

    @pytest.mark.parametrize("method", [Method.RWF, Method.WF, Method.TWF_LITE])
    def test_recovers_well_sampled_real_signal(self, real_problem, quick_solver, method):
        """m/n = 8 is enough for every method."""
        e, x, y = real_problem
        report = solve(e, y, replace(quick_solver, method=method), ground_truth=x, seed=1)
        assert report.converged
        assert report.stop_reason is StopReason.SUCCESS
        assert report.final_nmse < 1e-5

    def test_recovers_complex_signal(self, complex_problem, quick_solver):
        """RWF recovers a complex signal up to global phase."""
        e, x, y = complex_problem
        report = solve(e, y, quick_solver, ground_truth=x, seed=2)
        assert report.final_nmse < 1e-5
        assert nmse(report.z_final, x) == pytest.approx(report.final_nmse)

    def test_immediate_success(self, real_problem):
        """Starting from x succeeds with zero steps."""
        e, x, y = real_problem
        report = solve(e, y, SolverConfig(), ground_truth=x, z_init=x)
        assert report.converged
        assert report.total_grad_steps == 0
        assert report.outer_iters == 0
        assert report.init is None

    @pytest.mark.parametrize("cfg", [
        SolverConfig(T=2, T1=3),
        SolverConfig(method=Method.WF, flat_iteration_budget=7),
        SolverConfig(method=Method.TWF_LITE, T1=3, flat_iteration_budget=8),
    ])
    def test_budget_accounting(self, cfg):
        """Total steps never exceed the method's budget."""
        x = gen_signal(16, FieldKind.REAL, seed=5)
        e = gen_gaussian_ensemble(16, 24, FieldKind.REAL, seed=6)
        report = solve(e, intensities(e, x), cfg, ground_truth=x, seed=3)
        assert report.total_grad_steps <= cfg.step_budget
        if not report.converged:
            assert report.stop_reason in (
                StopReason.BUDGET_EXHAUSTED, StopReason.MAX_OUTER, StopReason.FIXED_POINT
            )

    def test_wf_equals_unit_weight_descent(self, real_problem):
        """WF is one inner run with unit weights from the spectral initializer."""
        e, x, y = real_problem
        cfg = SolverConfig(method=Method.WF, flat_iteration_budget=40)
        report = solve(e, y, cfg, ground_truth=x, seed=9)
        z0 = spectral_init(e, y, seed=9).z0
        manual = inner_gd(e, y, unit_weights(e.m), z0, cfg, x, max_steps=40)
        assert np.array_equal(report.z_final, manual.z)
        assert report.total_grad_steps == manual.steps

    def test_phase_of_ground_truth_is_irrelevant(self, complex_problem, quick_solver):
        """Rotating the ground truth leaves the final NMSE unchanged."""
        e, x, y = complex_problem
        a = solve(e, y, quick_solver, ground_truth=x, seed=4)
        b = solve(e, y, quick_solver, ground_truth=x.values * np.exp(1.1j), seed=4)
        assert abs(a.final_nmse - b.final_nmse) <= 1e-12

    def test_trace_layout(self, real_problem, quick_solver):
        """Step 0 is the initializer and steps count up by one."""
        e, x, y = real_problem
        report = solve(e, y, quick_solver, ground_truth=x, seed=5)
        steps = [entry.step for entry in report.trace]
        assert steps == list(range(len(steps)))
        assert report.trace[0].outer == 0
        assert len(report.trace) == report.total_grad_steps + 1

    def test_without_ground_truth(self, real_problem, quick_solver):
        """Without x the loop stops on its own and reports no NMSE."""
        e, x, y = real_problem
        report = solve(e, y, quick_solver, seed=6)
        assert report.final_nmse is None
        assert nmse(report.z_final, x) < 1e-5

    def test_refresh_weights_by_method(self, real_problem):
        """Each method refreshes its own kind of weights."""
        e, _, y = real_problem
        z = np.ones(e.n)
        assert refresh_weights(e, y, z, SolverConfig()).mode.value == "reweighted"
        assert refresh_weights(e, y, z, SolverConfig(method=Method.WF)).mode.value == "unit"
        twf = SolverConfig(method=Method.TWF_LITE)
        assert refresh_weights(e, y, z, twf).mode.value == "truncated"

    def test_z_init_length_checked(self, real_problem):
        """An override initializer must have length n."""
        e, _, y = real_problem
        with pytest.raises(ParameterError):
            solve(e, y, SolverConfig(), z_init=np.ones(e.n + 1))
