"""
Empirical regularity-condition diagnostics.

For a probe z near x, with h = e^{-j phi(z)} z - x and RWF weights computed at z:

    RC:          Re <grad f(z), z - x e^{j phi(z)}> >= dist^2 / alpha + ||grad f(z)||^2 / beta
    curvature:   same LHS >= (1/alpha + (1 + delta)/4) dist^2 + (1/10m) sum |a_i^* h|^4
    smoothness:  ||grad f(z)||^2 <= beta ((1 + delta)/4 dist^2 + (1/10m) sum |a_i^* h|^4)
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import List, NamedTuple, Optional

import numpy as np

from ..core.measurement import IntensityLike, MeasurementEnsemble, SignalLike, as_vector
from ..core.objective import DEFAULT_ETA, compute_weights, wirtinger_gradient
from ..errors import ParameterError
from ..utils.rng import SeededRNG
from .recovery import in_region_E, optimal_phase

DEFAULT_ALPHA = 10.0
DEFAULT_DELTA = 0.01


class EpsilonRegime(str, Enum):
    """Neighborhood radius relative to ||x||: 1/8 (Gaussian) or 1/(8 sqrt n) (CDP)."""

    GAUSSIAN = "gaussian"
    CDP = "cdp"

    def relative_radius(self, n: int) -> float:
        if self is EpsilonRegime.GAUSSIAN:
            return 1.0 / 8.0
        return 1.0 / (8.0 * np.sqrt(n))


def smoothness_constant(delta: float, eps: float, n: int) -> float:
    """beta >= max(160/3 (2+delta)^2/(1+delta), 300(2+delta) + 200 eps^2 n (1+delta))."""
    first = 160.0 / 3.0 * (2.0 + delta) ** 2 / (1.0 + delta)
    second = 300.0 * (2.0 + delta) + 200.0 * eps ** 2 * n * (1.0 + delta)
    return max(first, second)


@dataclass(frozen=True)
class RCReport:
    z_probe: np.ndarray
    h: np.ndarray
    lhs_curvature: float
    dist_sq: float
    grad_norm_sq: float
    fourth_moment: float
    alpha: float
    beta_rc: float
    delta: float
    rhs: float
    satisfied: bool
    curvature_rhs: float
    curvature_satisfied: bool
    smoothness_rhs: float
    smoothness_satisfied: bool
    in_region: bool


def rc_probe(
    e: MeasurementEnsemble,
    y: IntensityLike,
    x: SignalLike,
    z: SignalLike,
    alpha: float = DEFAULT_ALPHA,
    beta_rc: Optional[float] = None,
    delta: float = DEFAULT_DELTA,
    eta: float = DEFAULT_ETA,
) -> RCReport:
    """
    Evaluate both sides of the regularity condition at probe ``z``.

    ``beta_rc`` defaults to ``smoothness_constant`` with the Gaussian radius 1/8.
    """
    xv, zv = as_vector(x), as_vector(z)
    if xv.shape != zv.shape or xv.shape != (e.n,):
        raise ParameterError("probe and ground truth must both have length n")
    if alpha <= 0:
        raise ParameterError(f"alpha must be positive, got {alpha}")
    if beta_rc is None:
        beta_rc = smoothness_constant(delta, EpsilonRegime.GAUSSIAN.relative_radius(e.n), e.n)
    if beta_rc <= 0:
        raise ParameterError(f"beta_rc must be positive, got {beta_rc}")

    weights = compute_weights(e, y, zv, eta)
    grad = wirtinger_gradient(e, y, weights, zv)

    phase = optimal_phase(zv, xv)
    h = np.conj(phase) * zv - xv
    lhs = float(np.real(np.vdot(grad, zv - phase * xv)))
    dist_sq = float(np.real(np.vdot(h, h)))
    grad_norm_sq = float(np.real(np.vdot(grad, grad)))
    fourth = float(np.mean(np.abs(e.forward(h)) ** 4))

    rhs = dist_sq / alpha + grad_norm_sq / beta_rc
    curvature_rhs = (1.0 / alpha + (1.0 + delta) / 4.0) * dist_sq + fourth / 10.0
    smoothness_rhs = beta_rc * ((1.0 + delta) / 4.0 * dist_sq + fourth / 10.0)
    return RCReport(
        z_probe=zv,
        h=h,
        lhs_curvature=lhs,
        dist_sq=dist_sq,
        grad_norm_sq=grad_norm_sq,
        fourth_moment=fourth,
        alpha=alpha,
        beta_rc=beta_rc,
        delta=delta,
        rhs=rhs,
        satisfied=lhs >= rhs,
        curvature_rhs=curvature_rhs,
        curvature_satisfied=lhs >= curvature_rhs,
        smoothness_rhs=smoothness_rhs,
        smoothness_satisfied=grad_norm_sq <= smoothness_rhs,
        in_region=in_region_E(e, y, zv),
    )


class Probe(NamedTuple):
    s: float
    h: np.ndarray
    z: np.ndarray


def regularity_probes(x: SignalLike, count: int, eps: float, seed: int) -> List[Probe]:
    """
    Probes z = x + s h with ||h|| = 1, Im(h^* x) = 0 and s uniform on (0, eps].
    """
    xv = as_vector(x)
    if count < 0:
        raise ParameterError(f"probe count must be >= 0, got {count}")
    if eps <= 0:
        raise ParameterError(f"probe radius must be positive, got {eps}")
    rng = SeededRNG(seed)
    complex_valued = np.iscomplexobj(xv)
    x_sq = float(np.real(np.vdot(xv, xv)))
    probes = []
    for _ in range(count):
        h = rng.unit_vector(xv.size, complex_valued)
        if complex_valued and x_sq > 0:
            h = h - 1j * (np.imag(np.vdot(xv, h)) / x_sq) * xv
            h = h / np.linalg.norm(h)
        s = eps * (1.0 - float(rng.uniform(1)[0]))
        probes.append(Probe(s, h, xv + s * h))
    return probes
