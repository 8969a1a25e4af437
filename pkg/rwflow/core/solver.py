"""
Backtracking gradient descent and the outer reweighting loop.

One solve runs: spectral init -> for k = 1..T { refresh weights from z_{k-1};
run up to T1 gradient steps on f^k warm-started at z_{k-1} }. WF and TWF-lite
share this loop and differ only in how weights are refreshed and in budget:

- RWF:      w from the reweighting rule, T outer iterations of T1 steps.
- WF:       unit weights, a single outer iteration with the flat budget.
- TWF-lite: truncation weights refreshed every T1 steps, flat budget overall.
"""
from __future__ import annotations

import logging
from typing import Callable, List, NamedTuple, Optional

import numpy as np

from ..errors import ParameterError, StagnationError
from ..metrics.recovery import nmse
from .measurement import IntensityLike, MeasurementEnsemble, SignalLike, as_vector
from .objective import (
    WeightedObjective,
    WeightVector,
    compute_truncation_weights,
    compute_weights,
    default_truncation_threshold,
    unit_weights,
)
from .spectral import spectral_init
from .state import Method, SolverConfig, SolverReport, StepsizeMode, StopReason, TraceEntry

logger = logging.getLogger(__name__)

# gradient-norm floor used when no ground truth is available, per measurement
UNSUPERVISED_GRAD_TOL_PER_M = 1e-10


class LineSearchResult(NamedTuple):
    tau: float
    z_next: np.ndarray
    value: float
    halvings: int


class InnerResult(NamedTuple):
    z: np.ndarray
    trace: List[TraceEntry]
    steps: int
    stop_reason: StopReason


def armijo_search(
    f_at: Callable[[np.ndarray], float],
    grad: np.ndarray,
    z: np.ndarray,
    beta: float,
    max_halvings: int,
    f_z: Optional[float] = None,
) -> LineSearchResult:
    """
    Halve tau from 1 until f(z - tau g) < f(z) - tau * beta * ||g||^2.

    Raises:
        ParameterError: for a zero gradient or beta outside (0, 1).
        StagnationError: when ``max_halvings`` halvings never satisfy the test.
    """
    if not 0.0 < beta < 1.0:
        raise ParameterError(f"beta must lie in (0, 1), got {beta}")
    grad_sq = float(np.real(np.vdot(grad, grad)))
    if grad_sq <= 0.0:
        raise ParameterError("backtracking needs a nonzero gradient")
    f0 = f_at(z) if f_z is None else f_z

    tau = 1.0
    for halvings in range(max_halvings + 1):
        candidate = z - tau * grad
        value = f_at(candidate)
        if value < f0 - tau * beta * grad_sq:
            return LineSearchResult(tau, candidate, value, halvings)
        tau *= 0.5
    raise StagnationError(
        f"no sufficient decrease after {max_halvings} halvings", halvings=max_halvings
    )


def backtrack_stepsize(
    f_at: Callable[[np.ndarray], float],
    grad: np.ndarray,
    z: np.ndarray,
    beta: float = 0.1,
    max_halvings: int = 60,
) -> float:
    """Armijo stepsize tau = 2^-k for the smallest accepted k."""
    return armijo_search(f_at, grad, np.asarray(z), beta, max_halvings).tau


def inner_gd(
    e: MeasurementEnsemble,
    y: IntensityLike,
    w: WeightVector,
    z_start: SignalLike,
    cfg: SolverConfig,
    ground_truth: Optional[SignalLike] = None,
    *,
    max_steps: Optional[int] = None,
    outer: int = 1,
    step_offset: int = 0,
    grad_tol: Optional[float] = None,
) -> InnerResult:
    """
    Gradient descent on f^k with the weights ``w`` frozen.

    Runs at most ``max_steps`` (default ``cfg.T1``) steps and stops early when the
    gradient norm drops to ``grad_tol`` (default ``cfg.grad_tol``), when the Armijo
    search stagnates, or when the NMSE against ``ground_truth`` falls below
    ``cfg.success_nmse``.
    """
    objective = WeightedObjective(e, y, w)
    x = None if ground_truth is None else as_vector(ground_truth)
    cap = cfg.T1 if max_steps is None else max_steps
    tol = cfg.grad_tol if grad_tol is None else grad_tol
    mu = cfg.mu_for(e.n)

    z = np.array(as_vector(z_start), copy=True)
    trace: List[TraceEntry] = []
    if x is not None and nmse(z, x) < cfg.success_nmse:
        return InnerResult(z, trace, 0, StopReason.SUCCESS)

    value, grad = objective.value_and_gradient(z)
    steps = 0
    reason = StopReason.INNER_LIMIT
    while steps < cap:
        if np.linalg.norm(grad) <= tol:
            reason = StopReason.GRADIENT_VANISHED
            break
        if cfg.stepsize_mode is StepsizeMode.BACKTRACKING:
            try:
                z = armijo_search(
                    objective.value, grad, z, cfg.beta, cfg.max_halvings, value
                ).z_next
            except StagnationError:
                logger.debug("outer %d: Armijo search stagnated after %d step(s)", outer, steps)
                reason = StopReason.STAGNATED
                break
        else:
            z = z - mu * grad
        steps += 1
        value, grad = objective.value_and_gradient(z)

        error = nmse(z, x) if x is not None else float("nan")
        if cfg.record_trace:
            trace.append(TraceEntry(outer, steps, step_offset + steps, value, error))
        if x is not None and error < cfg.success_nmse:
            reason = StopReason.SUCCESS
            break
    return InnerResult(z, trace, steps, reason)


def refresh_weights(
    e: MeasurementEnsemble, y: IntensityLike, z: np.ndarray, cfg: SolverConfig
) -> WeightVector:
    """Weights of f^k computed from z_{k-1} according to ``cfg.method``."""
    if cfg.method is Method.RWF:
        return compute_weights(e, y, z, cfg.eta)
    if cfg.method is Method.WF:
        return unit_weights(e.m, cfg.eta)
    threshold = cfg.trunc_C
    if threshold is None:
        threshold = default_truncation_threshold(e, y, z, cfg.trunc_factor)
    return compute_truncation_weights(e, y, z, threshold)


def solve(
    e: MeasurementEnsemble,
    y: IntensityLike,
    cfg: SolverConfig,
    ground_truth: Optional[SignalLike] = None,
    seed: int = 0,
    z_init: Optional[SignalLike] = None,
) -> SolverReport:
    """
    Recover a signal from intensities with RWF, WF or TWF-lite.

    Args:
        e: Measurement ensemble.
        y: Observed intensities.
        cfg: Solver configuration.
        ground_truth: Planted signal; enables NMSE tracing and the success stop.
        seed: Seed of the power-method start vector.
        z_init: Overrides the spectral initialization when given.

    Returns:
        SolverReport with the last iterate, step accounting and trace.
    """
    x = None if ground_truth is None else as_vector(ground_truth)
    init = None
    if z_init is None:
        init = spectral_init(e, y, cfg.power_iters, cfg.power_tol, seed)
        z = init.z0
    else:
        z = np.array(as_vector(z_init), copy=True)
        if z.shape != (e.n,):
            raise ParameterError(f"z_init length {z.shape} does not match n={e.n}")

    trace: List[TraceEntry] = []
    error = nmse(z, x) if x is not None else float("nan")
    if cfg.record_trace:
        start_value = WeightedObjective(e, y, unit_weights(e.m)).value(z)
        trace.append(TraceEntry(0, 0, 0, start_value, error))
    if x is not None and error < cfg.success_nmse:
        return SolverReport(z, 0, 0, True, StopReason.SUCCESS, error, init, trace)

    budget = cfg.step_budget
    if cfg.method is Method.RWF:
        max_outer, inner_cap = cfg.T, cfg.T1
    elif cfg.method is Method.WF:
        max_outer, inner_cap = 1, budget
    else:
        max_outer, inner_cap = -(-budget // cfg.T1), cfg.T1
    grad_tol = cfg.grad_tol
    if x is None:
        grad_tol = max(cfg.grad_tol, UNSUPERVISED_GRAD_TOL_PER_M * e.m)

    outer = 0
    total = 0
    converged = False
    reason = StopReason.MAX_OUTER
    while outer < max_outer:
        if total >= budget:
            reason = StopReason.BUDGET_EXHAUSTED
            break
        weights = refresh_weights(e, y, z, cfg)
        outer += 1
        result = inner_gd(
            e, y, weights, z, cfg, x,
            max_steps=min(inner_cap, budget - total),
            outer=outer,
            step_offset=total,
            grad_tol=grad_tol,
        )
        z_prev, z = z, result.z
        total += result.steps
        trace.extend(result.trace)
        reason = result.stop_reason
        logger.debug(
            "%s outer %d: %d step(s), stop=%s", cfg.method.value, outer, result.steps, reason.value
        )

        if reason is StopReason.SUCCESS:
            converged = True
            break
        if np.linalg.norm(z - z_prev) < cfg.fixed_point_tol:
            if x is None and reason is StopReason.GRADIENT_VANISHED:
                converged = True
            else:
                reason = StopReason.FIXED_POINT
            break
    else:
        if total >= budget:
            reason = StopReason.BUDGET_EXHAUSTED
        elif cfg.method is Method.RWF:
            reason = StopReason.MAX_OUTER

    final = nmse(z, x) if x is not None else None
    return SolverReport(z, outer, total, converged, reason, final, init, trace)
