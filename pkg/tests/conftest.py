"""Pytest configuration and shared fixtures."""
import numpy as np
import pytest

from rwflow.core.measurement import (
    FieldKind,
    GaussianEnsemble,
    gen_gaussian_ensemble,
    gen_signal,
    intensities,
)
from rwflow.core.state import SolverConfig


@pytest.fixture
def identity_ensemble():
    """Gaussian-type ensemble whose sensing vectors are the standard basis of R^4."""
    return GaussianEnsemble(np.eye(4))


@pytest.fixture
def real_problem():
    """Small real Gaussian instance (n=8, m=64) with its planted signal."""
    x = gen_signal(8, FieldKind.REAL, seed=11)
    e = gen_gaussian_ensemble(8, 64, FieldKind.REAL, seed=12)
    return e, x, intensities(e, x)


@pytest.fixture
def complex_problem():
    """Small complex Gaussian instance (n=8, m=96) with its planted signal."""
    x = gen_signal(8, FieldKind.COMPLEX, seed=21)
    e = gen_gaussian_ensemble(8, 96, FieldKind.COMPLEX, seed=22)
    return e, x, intensities(e, x)


@pytest.fixture
def quick_solver():
    """Solver settings small enough for unit tests."""
    return SolverConfig(T=20, T1=200, flat_iteration_budget=4000)


@pytest.fixture
def write_config(tmp_path):
    """Factory writing a key=value config file and returning its path."""
    def _write(text: str, name: str = "bench.cfg"):
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path
    return _write
