"""
Spectral initialization.

z0 is the leading eigenvector of Y = (1/m) sum_i y_i a_i a_i^*, found by
matrix-free power iteration (v -> adjoint(y * forward(v)) / m) and scaled to

    lambda^2 = n * sum_i y_i / sum_i ||a_i||^2.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateInputError, ParameterError
from ..utils.rng import SeededRNG
from .measurement import FieldKind, IntensityLike, MeasurementEnsemble, as_intensities

logger = logging.getLogger(__name__)

DEFAULT_POWER_ITERS = 1000
DEFAULT_POWER_TOL = 1e-6


@dataclass(frozen=True)
class InitReport:
    z0: np.ndarray
    lam: float
    eig_residual: float
    rayleigh: float
    iterations_used: int
    seed: int


def init_scale(e: MeasurementEnsemble, y: IntensityLike) -> float:
    """lambda = sqrt(n * sum y / sum ||a_i||^2)."""
    y_arr = as_intensities(y)
    if y_arr.shape != (e.m,):
        raise ParameterError(f"intensity length {y_arr.shape} does not match m={e.m}")
    total = float(np.sum(y_arr))
    if not np.any(y_arr) or total <= 0.0:
        raise DegenerateInputError("all intensities are zero; the signal scale is undetermined")
    return float(np.sqrt(e.n * total / float(np.sum(e.row_norms_sq()))))


def _apply_Y(e: MeasurementEnsemble, y_arr: np.ndarray, v: np.ndarray) -> np.ndarray:
    return e.adjoint_accumulate(y_arr * e.forward(v)) / e.m


def _sine_distance(v: np.ndarray, w: np.ndarray) -> float:
    return float(np.linalg.norm(w - np.vdot(v, w) * v))


def spectral_init(
    e: MeasurementEnsemble,
    y: IntensityLike,
    max_iters: int = DEFAULT_POWER_ITERS,
    tol: float = DEFAULT_POWER_TOL,
    seed: int = 0,
) -> InitReport:
    """
    Power iteration on Y from a seeded random unit vector.

    The start vector is real for real ensembles (so iterates stay real) and
    complex otherwise. Iteration stops once successive normalized iterates are
    within ``tol`` in sine distance, or after ``max_iters`` applications.
    """
    if max_iters < 1:
        raise ParameterError(f"max_iters must be >= 1, got {max_iters}")
    if tol <= 0:
        raise ParameterError(f"tol must be positive, got {tol}")
    lam = init_scale(e, y)
    y_arr = as_intensities(y)

    rng = SeededRNG(seed)
    complex_valued = e.field_kind is FieldKind.COMPLEX
    v = rng.unit_vector(e.n, complex_valued)

    iterations = 0
    for iterations in range(1, max_iters + 1):
        w = _apply_Y(e, y_arr, v)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            # start vector fell in the null space of Y
            v = rng.unit_vector(e.n, complex_valued)
            continue
        w = w / norm
        step = _sine_distance(v, w)
        v = w
        if step < tol:
            break

    Yv = _apply_Y(e, y_arr, v)
    rayleigh = float(np.real(np.vdot(v, Yv)))
    residual = float(np.linalg.norm(Yv - rayleigh * v))
    logger.debug(
        "power method stopped after %d iteration(s), residual %.3e, rayleigh %.4g",
        iterations, residual, rayleigh,
    )
    return InitReport(
        z0=lam * v,
        lam=lam,
        eig_residual=residual,
        rayleigh=rayleigh,
        iterations_used=iterations,
        seed=rng.seed,
    )
