"""Phase-invariant distance, NMSE and per-trial outcome records."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional

import numpy as np

from ..core.measurement import (
    FieldKind,
    IntensityLike,
    MeasurementEnsemble,
    SignalLike,
    as_intensities,
    as_vector,
)
from ..errors import DegenerateInputError, ParameterError

REGION_E_RADIUS = 0.1


def _field_of(z: np.ndarray, x: np.ndarray, field_kind: Optional[FieldKind]) -> FieldKind:
    if field_kind is not None:
        return FieldKind(field_kind)
    if np.isrealobj(z) and np.isrealobj(x):
        return FieldKind.REAL
    return FieldKind.COMPLEX


def optimal_phase(z: SignalLike, x: SignalLike, field_kind: Optional[FieldKind] = None) -> complex:
    """
    Unit scalar u minimizing ||z - u x|| over the field's ambiguity group.

    Complex field: u = exp(j arg(x^* z)). Real field: u = sign(x^T z), with +1 on ties.
    """
    zv, xv = as_vector(z), as_vector(x)
    inner = np.vdot(xv, zv)
    if _field_of(zv, xv, field_kind) is FieldKind.REAL:
        return -1.0 if np.real(inner) < 0 else 1.0
    if inner == 0:
        return 1.0
    return inner / abs(inner)


def dist(z: SignalLike, x: SignalLike, field_kind: Optional[FieldKind] = None) -> float:
    """
    min over the global phase of ||z - x e^{j phi}||.

    The field defaults to real when both vectors are real-valued arrays; the
    real ambiguity group is {+1, -1}.
    """
    zv, xv = as_vector(z), as_vector(x)
    if zv.shape != xv.shape:
        raise ParameterError(f"length mismatch: {zv.shape} vs {xv.shape}")
    return float(np.linalg.norm(zv - optimal_phase(zv, xv, field_kind) * xv))


def nmse(z: SignalLike, x: SignalLike, field_kind: Optional[FieldKind] = None) -> float:
    """dist(z, x) / ||x||."""
    norm = float(np.linalg.norm(as_vector(x)))
    if norm == 0.0:
        raise DegenerateInputError("NMSE is undefined for a zero ground truth")
    return dist(z, x, field_kind) / norm


def max_residual(e: MeasurementEnsemble, y: IntensityLike, z: SignalLike) -> float:
    """max_i | |<a_i, z>|^2 - y_i |."""
    y_arr = as_intensities(y)
    if y_arr.shape != (e.m,):
        raise ParameterError(f"intensity length {y_arr.shape} does not match m={e.m}")
    return float(np.max(np.abs(np.abs(e.forward(z)) ** 2 - y_arr)))


def in_region_E(
    e: MeasurementEnsemble, y: IntensityLike, z: SignalLike, radius: float = REGION_E_RADIUS
) -> bool:
    """True iff every intensity residual at z is below ``radius`` (default 0.1)."""
    return max_residual(e, y, z) < radius


@dataclass(frozen=True)
class TrialRecord:
    """Outcome of one Monte-Carlo trial."""

    seed: int
    n: int
    m: int
    field_kind: str
    method: str
    success: bool
    final_nmse: float
    outer_iters: int
    total_grad_steps: int
    wall_time_seconds: float
    ratio: float = 0.0
    index: int = 0


def summarize_trials(records: List[TrialRecord]) -> Dict[str, float]:
    """Recovery rate and means over a group of trials."""
    if not records:
        return {"trials": 0, "successes": 0, "rate": 0.0, "mean_nmse": float("nan"),
                "mean_iters": float("nan"), "mean_wall_time": float("nan")}
    successes = sum(1 for r in records if r.success)
    return {
        "trials": len(records),
        "successes": successes,
        "rate": successes / len(records),
        "mean_nmse": float(np.mean([r.final_nmse for r in records])),
        "mean_iters": float(np.mean([r.outer_iters for r in records])),
        "mean_wall_time": float(np.mean([r.wall_time_seconds for r in records])),
    }
