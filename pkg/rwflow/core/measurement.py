"""
Measurement ensembles and the intensity model.

Inner-product convention, used everywhere in rwflow:

    <a, z> := a^* z        (conjugate-linear in a)

so ``forward(e, z)[i] = a_i^* z`` and ``adjoint_accumulate(e, c) = sum_i c_i a_i``.
With these definitions the adjoint identity reads

    <forward(e, z), c> = <z, adjoint_accumulate(e, c)>

for every z in C^n and c in C^m, with no extra conjugation of c.

Two ensemble families are provided:

- ``GaussianEnsemble``: m explicit sensing vectors a_i (rows of ``vectors``).
- ``CDPEnsemble``: L coded diffraction masks d_l with an implicit length-n DFT.
  Row r = l * n + k measures sum_t z[t] conj(d_l[t]) exp(-j 2 pi k t / n),
  i.e. a_r[t] = d_l[t] exp(+j 2 pi k t / n).
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np

from ..errors import ParameterError
from ..utils.fft import Direction, fft, is_power_of_two, next_power_of_two
from ..utils.rng import SeededRNG


class FieldKind(str, Enum):
    REAL = "real"
    COMPLEX = "complex"


# b2 amplitude law of the octanary admissible mask: E|d|^2 = (1/2)(4/5) + 3(1/5) = 1
CDP_PHASES = np.array([1.0, -1.0, 1j, -1j])
CDP_AMPLITUDES = (np.sqrt(2.0) / 2.0, np.sqrt(3.0))
CDP_LOW_AMPLITUDE_PROB = 0.8


@dataclass(frozen=True)
class Signal:
    """A planted signal x or an iterate z."""

    values: np.ndarray
    field_kind: FieldKind = FieldKind.COMPLEX

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.ndim != 1 or values.size < 1:
            raise ParameterError("signal must be a non-empty 1-D vector")
        field_kind = FieldKind(self.field_kind)
        if field_kind is FieldKind.REAL:
            if np.iscomplexobj(values) and np.any(values.imag != 0):
                raise ParameterError("real signal has a nonzero imaginary part")
            values = values.real.astype(float)
        else:
            values = values.astype(complex)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "field_kind", field_kind)

    @property
    def n(self) -> int:
        return self.values.size

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.values))


@dataclass(frozen=True)
class IntensityVector:
    """Observed intensities y_i = |<a_i, x>|^2 + eps_i."""

    values: np.ndarray
    noise: Optional[np.ndarray] = None

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.noise is not None:
            noise = np.asarray(self.noise, dtype=float)
            if noise.shape != values.shape:
                raise ParameterError(
                    f"noise length {noise.size} does not match {values.size} measurements"
                )
            noise.setflags(write=False)
            object.__setattr__(self, "noise", noise)

    @property
    def m(self) -> int:
        return self.values.size

    @property
    def observed(self) -> np.ndarray:
        """Values with the additive perturbation applied."""
        if self.noise is None:
            return self.values
        return self.values + self.noise


IntensityLike = Union[IntensityVector, np.ndarray]
SignalLike = Union[Signal, np.ndarray]


def as_intensities(y: IntensityLike) -> np.ndarray:
    """Observed intensity array from either representation."""
    if isinstance(y, IntensityVector):
        return y.observed
    return np.asarray(y, dtype=float)


def as_vector(z: SignalLike) -> np.ndarray:
    if isinstance(z, Signal):
        return z.values
    return np.asarray(z)


class MeasurementEnsemble(ABC):
    """Linear map z -> {<a_i, z>} together with its adjoint."""

    n: int
    m: int
    seed: Optional[int]

    @property
    @abstractmethod
    def field_kind(self) -> FieldKind:
        """Field the sensing vectors live in."""

    @abstractmethod
    def _apply(self, z: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def _accumulate(self, coeffs: np.ndarray) -> np.ndarray:
        ...

    @abstractmethod
    def row_norms_sq(self) -> np.ndarray:
        """||a_i||^2 for every measurement i."""

    def forward(self, z: SignalLike) -> np.ndarray:
        v = as_vector(z)
        if v.shape != (self.n,):
            raise ParameterError(f"signal length {v.shape} does not match ensemble n={self.n}")
        return self._apply(v)

    def adjoint_accumulate(self, coeffs: np.ndarray) -> np.ndarray:
        c = np.asarray(coeffs)
        if c.shape != (self.m,):
            raise ParameterError(f"coefficient length {c.shape} does not match m={self.m}")
        return self._accumulate(c)


@dataclass(frozen=True, eq=False)
class GaussianEnsemble(MeasurementEnsemble):
    """Explicit sensing vectors a_i stored as the rows of ``vectors``."""

    vectors: np.ndarray
    seed: Optional[int] = None
    _conj: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        vectors = np.array(self.vectors)
        if vectors.ndim != 2 or vectors.shape[0] < 1 or vectors.shape[1] < 1:
            raise ParameterError("Gaussian ensemble needs an (m, n) array with m, n >= 1")
        vectors = vectors.astype(complex if np.iscomplexobj(vectors) else float)
        vectors.setflags(write=False)
        conj = np.conj(vectors)
        conj.setflags(write=False)
        object.__setattr__(self, "vectors", vectors)
        object.__setattr__(self, "_conj", conj)

    @property
    def n(self) -> int:
        return self.vectors.shape[1]

    @property
    def m(self) -> int:
        return self.vectors.shape[0]

    @property
    def field_kind(self) -> FieldKind:
        return FieldKind.COMPLEX if np.iscomplexobj(self.vectors) else FieldKind.REAL

    def _apply(self, z: np.ndarray) -> np.ndarray:
        return self._conj @ z

    def _accumulate(self, coeffs: np.ndarray) -> np.ndarray:
        return self.vectors.T @ coeffs

    def row_norms_sq(self) -> np.ndarray:
        return np.sum(np.abs(self.vectors) ** 2, axis=1)


@dataclass(frozen=True, eq=False)
class CDPEnsemble(MeasurementEnsemble):
    """L coded diffraction masks over a power-of-two transform length."""

    masks: np.ndarray
    seed: Optional[int] = None

    def __post_init__(self):
        masks = np.array(self.masks, dtype=complex)
        if masks.ndim != 2 or masks.shape[0] < 1:
            raise ParameterError("CDP ensemble needs an (L, n) mask array with L >= 1")
        if not is_power_of_two(masks.shape[1]):
            raise ParameterError(f"CDP length must be a power of two, got {masks.shape[1]}")
        masks.setflags(write=False)
        object.__setattr__(self, "masks", masks)

    @property
    def L(self) -> int:
        return self.masks.shape[0]

    @property
    def n(self) -> int:
        return self.masks.shape[1]

    @property
    def transform_length(self) -> int:
        return self.n

    @property
    def m(self) -> int:
        return self.n * self.L

    @property
    def field_kind(self) -> FieldKind:
        return FieldKind.COMPLEX

    def _apply(self, z: np.ndarray) -> np.ndarray:
        return fft(np.conj(self.masks) * z).reshape(-1)

    def _accumulate(self, coeffs: np.ndarray) -> np.ndarray:
        per_mask = fft(coeffs.reshape(self.L, self.n), Direction.INVERSE) * self.n
        return np.sum(self.masks * per_mask, axis=0)

    def row_norms_sq(self) -> np.ndarray:
        # |a_(l,k)[t]| = |d_l[t]| for every frequency k
        mask_energy = np.sum(np.abs(self.masks) ** 2, axis=1)
        return np.repeat(mask_energy, self.n)


def gen_gaussian_ensemble(n: int, m: int, field_kind: FieldKind, seed: int) -> GaussianEnsemble:
    """
    Draw m i.i.d. Gaussian sensing vectors.

    Real kind: N(0, I) entries. Complex kind: N(0, I/2) + jN(0, I/2) entries.
    """
    if n < 1 or m < 1:
        raise ParameterError(f"Gaussian ensemble needs n, m >= 1, got n={n}, m={m}")
    rng = SeededRNG(seed)
    if FieldKind(field_kind) is FieldKind.REAL:
        vectors = rng.normal((m, n))
    else:
        vectors = rng.complex_normal((m, n))
    return GaussianEnsemble(vectors=vectors, seed=rng.seed)


def gen_cdp_ensemble(n: int, L: int, seed: int) -> CDPEnsemble:
    """
    Draw L octanary admissible masks d = b1 * b2.

    b1 is uniform on {1, -1, j, -j}; b2 is sqrt(2)/2 with probability 4/5 and
    sqrt(3) with probability 1/5.
    """
    if not is_power_of_two(n):
        raise ParameterError(f"CDP length must be a power of two, got {n}")
    if L < 1:
        raise ParameterError(f"CDP needs at least one mask, got L={L}")
    rng = SeededRNG(seed)
    b1 = CDP_PHASES[rng.integers(4, (L, n))]
    low, high = CDP_AMPLITUDES
    b2 = np.where(rng.uniform((L, n)) < CDP_LOW_AMPLITUDE_PROB, low, high)
    return CDPEnsemble(masks=b1 * b2, seed=rng.seed)


def gen_signal(n: int, field_kind: FieldKind, seed: int) -> Signal:
    """Ground truth drawn from N(0, I) (real) or N(0, I/2) + jN(0, I/2) (complex)."""
    if n < 1:
        raise ParameterError(f"signal length must be >= 1, got {n}")
    rng = SeededRNG(seed)
    kind = FieldKind(field_kind)
    values = rng.normal(n) if kind is FieldKind.REAL else rng.complex_normal(n)
    return Signal(values, kind)


def unit_signal(x: Signal) -> Signal:
    """``x`` rescaled to unit norm."""
    norm = x.norm
    if norm == 0.0:
        raise ParameterError("cannot normalize the zero signal")
    return Signal(x.values / norm, x.field_kind)


def forward(e: MeasurementEnsemble, z: SignalLike) -> np.ndarray:
    """Measurements <a_i, z> = a_i^* z for every i."""
    return e.forward(z)


def adjoint_accumulate(e: MeasurementEnsemble, coeffs: np.ndarray) -> np.ndarray:
    """sum_i coeffs_i a_i (the adjoint of ``forward``)."""
    return e.adjoint_accumulate(coeffs)


def intensities(
    e: MeasurementEnsemble, x: SignalLike, noise: Optional[np.ndarray] = None
) -> IntensityVector:
    """y_i = |<a_i, x>|^2, plus the optional additive perturbation."""
    return IntensityVector(np.abs(e.forward(x)) ** 2, noise)


def pad_to_power_of_two(v: np.ndarray) -> Tuple[np.ndarray, int]:
    """Zero-pad ``v`` to the next power of two; returns (padded, original length)."""
    v = np.asarray(v)
    length = v.size
    target = next_power_of_two(length)
    if target == length:
        return v.copy(), length
    padded = np.zeros(target, dtype=v.dtype)
    padded[:length] = v
    return padded, length


def flatten_channel(channel: np.ndarray) -> Tuple[np.ndarray, int]:
    """Row-major flatten of a 2-D channel, zero-padded for the CDP transform."""
    return pad_to_power_of_two(np.asarray(channel, dtype=float).reshape(-1))


def unflatten_channel(v: np.ndarray, height: int, width: int) -> np.ndarray:
    """Strip padding and restore the (height, width) layout."""
    return np.asarray(v)[: height * width].reshape(height, width)
