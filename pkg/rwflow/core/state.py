"""Solver configuration and result records shared across the solve loop."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import List, NamedTuple, Optional

import numpy as np

from ..errors import ParameterError
from .spectral import DEFAULT_POWER_ITERS, DEFAULT_POWER_TOL, InitReport


class Method(str, Enum):
    RWF = "RWF"
    WF = "WF"
    TWF_LITE = "TWF-lite"


class StepsizeMode(str, Enum):
    BACKTRACKING = "backtracking"
    FIXED = "fixed"


class StopReason(str, Enum):
    SUCCESS = "success"
    GRADIENT_VANISHED = "gradient_vanished"
    STAGNATED = "stagnated"
    INNER_LIMIT = "inner_limit"
    FIXED_POINT = "fixed_point"
    BUDGET_EXHAUSTED = "budget_exhausted"
    MAX_OUTER = "max_outer"


@dataclass(frozen=True)
class SolverConfig:
    """All tunables of the outer reweighting loop and the inner descent."""

    method: Method = Method.RWF
    T: int = 300
    T1: int = 500
    flat_iteration_budget: int = 150_000
    beta: float = 0.1
    eta: float = 0.9
    trunc_C: Optional[float] = None
    trunc_factor: float = 5.0
    stepsize_mode: StepsizeMode = StepsizeMode.BACKTRACKING
    fixed_mu: Optional[float] = None
    success_nmse: float = 1e-5
    max_halvings: int = 60
    grad_tol: float = 1e-12
    fixed_point_tol: float = 1e-14
    power_iters: int = DEFAULT_POWER_ITERS
    power_tol: float = DEFAULT_POWER_TOL
    record_trace: bool = True

    def __post_init__(self):
        object.__setattr__(self, "method", Method(self.method))
        object.__setattr__(self, "stepsize_mode", StepsizeMode(self.stepsize_mode))
        if not 0.0 < self.beta < 1.0:
            raise ParameterError(f"beta must lie in (0, 1), got {self.beta}")
        if self.T < 1 or self.T1 < 1 or self.flat_iteration_budget < 1:
            raise ParameterError("T, T1 and flat_iteration_budget must all be >= 1")
        if self.success_nmse <= 0:
            raise ParameterError(f"success_nmse must be positive, got {self.success_nmse}")
        if self.eta <= 0:
            raise ParameterError(f"eta must be positive, got {self.eta}")
        if self.trunc_C is not None and not (np.isfinite(self.trunc_C) and self.trunc_C > 0):
            raise ParameterError(f"trunc_C must be finite and positive, got {self.trunc_C}")
        if self.trunc_factor <= 0:
            raise ParameterError(f"trunc_factor must be positive, got {self.trunc_factor}")
        if self.fixed_mu is not None and self.fixed_mu <= 0:
            raise ParameterError(f"fixed_mu must be positive, got {self.fixed_mu}")
        if self.max_halvings < 0:
            raise ParameterError(f"max_halvings must be >= 0, got {self.max_halvings}")

    @property
    def step_budget(self) -> int:
        """Cap on the total number of gradient steps."""
        if self.method is Method.RWF:
            return self.T * self.T1
        return self.flat_iteration_budget

    def mu_for(self, n: int) -> float:
        """Constant stepsize used in fixed mode (default 0.2 / n)."""
        return self.fixed_mu if self.fixed_mu is not None else 0.2 / n


class TraceEntry(NamedTuple):
    outer: int
    inner: int
    step: int
    objective: float
    nmse: float


@dataclass
class SolverReport:
    z_final: np.ndarray
    outer_iters: int
    total_grad_steps: int
    converged: bool
    stop_reason: StopReason
    final_nmse: Optional[float] = None
    init: Optional[InitReport] = None
    trace: List[TraceEntry] = field(default_factory=list)
