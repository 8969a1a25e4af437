"""
Weighted fourth-order intensity objective.

    f(z)   = (1/2m) sum_i w_i (|<a_i, z>|^2 - y_i)^2
    grad f = (1/m)  sum_i w_i (|<a_i, z>|^2 - y_i) a_i a_i^* z

The gradient is the Wirtinger (conjugate-coordinate) derivative, so the
directional change of f along v is 2 Re <grad f(z), v>. Both ensemble families
share one code path: the gradient is ``adjoint_accumulate`` applied to the
coefficients (1/m) w_i r_i <a_i, z>.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Tuple, Union

import numpy as np

from ..errors import ParameterError
from .measurement import IntensityLike, MeasurementEnsemble, SignalLike, as_intensities, as_vector

DEFAULT_ETA = 0.9


class WeightMode(str, Enum):
    REWEIGHTED = "reweighted"
    UNIT = "unit"
    TRUNCATED = "truncated"


@dataclass(frozen=True)
class WeightVector:
    """Per-measurement weights w_i and the eta_i they were computed with."""

    omegas: np.ndarray
    etas: np.ndarray
    mode: WeightMode

    def __post_init__(self):
        omegas = np.asarray(self.omegas, dtype=float)
        etas = np.broadcast_to(np.asarray(self.etas, dtype=float), omegas.shape).copy()
        if np.any(omegas < 0):
            raise ParameterError("weights must be nonnegative")
        omegas.setflags(write=False)
        etas.setflags(write=False)
        object.__setattr__(self, "omegas", omegas)
        object.__setattr__(self, "etas", etas)
        object.__setattr__(self, "mode", WeightMode(self.mode))

    @property
    def m(self) -> int:
        return self.omegas.size


def residuals(e: MeasurementEnsemble, y: IntensityLike, z: SignalLike) -> np.ndarray:
    """Signed intensity residuals |<a_i, z>|^2 - y_i."""
    y_arr = _checked_intensities(e, y)
    return np.abs(e.forward(z)) ** 2 - y_arr


def unit_weights(m: int, eta: float = DEFAULT_ETA) -> WeightVector:
    """All-ones weights: plain Wirtinger flow."""
    return WeightVector(np.ones(m), np.full(m, eta), WeightMode.UNIT)


def compute_weights(
    e: MeasurementEnsemble,
    y: IntensityLike,
    z_prev: SignalLike,
    etas: Union[float, np.ndarray] = DEFAULT_ETA,
) -> WeightVector:
    """
    Reweighting rule w_i = 1 / (| |<a_i, z_prev>|^2 - y_i | + eta_i).

    ``etas`` may be a scalar (broadcast to every measurement) or a length-m array.
    """
    eta_arr = np.broadcast_to(np.asarray(etas, dtype=float), (e.m,))
    if np.any(eta_arr <= 0):
        raise ParameterError("eta must be strictly positive")
    r = residuals(e, y, z_prev)
    return WeightVector(1.0 / (np.abs(r) + eta_arr), eta_arr, WeightMode.REWEIGHTED)


def compute_truncation_weights(
    e: MeasurementEnsemble,
    y: IntensityLike,
    z_prev: SignalLike,
    threshold_C: float,
) -> WeightVector:
    """Zero weight where | |<a_i, z_prev>|^2 - y_i | >= C, unit weight elsewhere."""
    if not np.isfinite(threshold_C) or threshold_C <= 0:
        raise ParameterError(f"truncation threshold must be finite and positive, got {threshold_C}")
    r = residuals(e, y, z_prev)
    omegas = np.where(np.abs(r) >= threshold_C, 0.0, 1.0)
    return WeightVector(omegas, np.full(e.m, DEFAULT_ETA), WeightMode.TRUNCATED)


def default_truncation_threshold(
    e: MeasurementEnsemble, y: IntensityLike, z_prev: SignalLike, factor: float = 5.0
) -> float:
    """C = factor * mean_i | |<a_i, z_prev>|^2 - y_i |, floored at the smallest positive double."""
    scale = float(np.mean(np.abs(residuals(e, y, z_prev))))
    return max(factor * scale, np.finfo(float).tiny)


class WeightedObjective:
    """f^k for frozen weights, evaluating value and gradient from one forward pass."""

    def __init__(self, e: MeasurementEnsemble, y: IntensityLike, w: WeightVector):
        self.ensemble = e
        self.y = _checked_intensities(e, y)
        if w.m != e.m:
            raise ParameterError(f"weight length {w.m} does not match m={e.m}")
        self.weights = w
        self._omegas = w.omegas

    def value(self, z: np.ndarray) -> float:
        r = np.abs(self.ensemble.forward(z)) ** 2 - self.y
        return float(np.sum(self._omegas * r * r)) / (2.0 * self.ensemble.m)

    def gradient(self, z: np.ndarray) -> np.ndarray:
        return self.value_and_gradient(z)[1]

    def value_and_gradient(self, z: np.ndarray) -> Tuple[float, np.ndarray]:
        e = self.ensemble
        az = e.forward(z)
        r = np.abs(az) ** 2 - self.y
        wr = self._omegas * r
        value = float(np.sum(wr * r)) / (2.0 * e.m)
        grad = e.adjoint_accumulate(wr * az / e.m)
        return value, grad


def objective_value(
    e: MeasurementEnsemble, y: IntensityLike, w: WeightVector, z: SignalLike
) -> float:
    """f(z) = (1/2m) sum_i w_i (|<a_i, z>|^2 - y_i)^2."""
    return WeightedObjective(e, y, w).value(as_vector(z))


def wirtinger_gradient(
    e: MeasurementEnsemble, y: IntensityLike, w: WeightVector, z: SignalLike
) -> np.ndarray:
    """(1/m) sum_i w_i (|<a_i, z>|^2 - y_i) a_i a_i^* z."""
    return WeightedObjective(e, y, w).gradient(as_vector(z))


def _checked_intensities(e: MeasurementEnsemble, y: IntensityLike) -> np.ndarray:
    y_arr = as_intensities(y)
    if y_arr.shape != (e.m,):
        raise ParameterError(f"intensity length {y_arr.shape} does not match m={e.m}")
    return y_arr
