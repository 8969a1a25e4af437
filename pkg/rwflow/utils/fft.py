"""
Radix-2 decimation-in-time FFT.

The transform works along the last axis, so a stack of L masked signals of
length n is transformed in one call. The forward transform is unnormalized,

    X[k] = sum_t x[t] exp(-j 2 pi k t / n),

and the inverse carries the 1/n factor, so ``fft(fft(v), INVERSE) == v``.
"""
from __future__ import annotations

from enum import Enum
from functools import lru_cache

import numpy as np

from ..errors import ParameterError


class Direction(str, Enum):
    FORWARD = "forward"
    INVERSE = "inverse"


def is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


def next_power_of_two(n: int) -> int:
    if n < 1:
        raise ParameterError(f"length must be positive, got {n}")
    return 1 << (n - 1).bit_length()


@lru_cache(maxsize=64)
def _bit_reverse_indices(n: int) -> np.ndarray:
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.intp)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev


@lru_cache(maxsize=64)
def _twiddles(size: int, sign: int) -> np.ndarray:
    half = size // 2
    return np.exp(sign * 2j * np.pi * np.arange(half) / size)


def fft(v: np.ndarray, direction: Direction = Direction.FORWARD) -> np.ndarray:
    """
    Discrete Fourier transform of ``v`` along its last axis.

    Args:
        v: Real or complex array whose last dimension is a power of two.
        direction: ``Direction.FORWARD`` (unnormalized) or ``Direction.INVERSE``
            (scaled by 1/n).

    Returns:
        Complex array with the same shape as ``v``.

    Raises:
        ParameterError: if the transform length is not a power of two.
    """
    x = np.asarray(v, dtype=complex)
    n = x.shape[-1] if x.ndim else 0
    if not is_power_of_two(n):
        raise ParameterError(f"FFT length must be a power of two, got {n}")

    direction = Direction(direction)
    sign = -1 if direction is Direction.FORWARD else 1
    lead = x.shape[:-1]

    out = x[..., _bit_reverse_indices(n)].reshape(-1, n)
    size = 2
    while size <= n:
        half = size // 2
        blocks = out.reshape(out.shape[0], n // size, size)
        even = blocks[..., :half]
        odd = blocks[..., half:] * _twiddles(size, sign)
        out = np.concatenate([even + odd, even - odd], axis=-1).reshape(-1, n)
        size *= 2

    out = out.reshape(*lead, n)
    if direction is Direction.INVERSE:
        out = out / n
    return out


def naive_dft(v: np.ndarray) -> np.ndarray:
    """O(n^2) reference transform, used as a test oracle."""
    x = np.asarray(v, dtype=complex)
    n = x.shape[-1]
    k = np.arange(n)
    kernel = np.exp(-2j * np.pi * np.outer(k, k) / n)
    return x @ kernel.T
