"""
Monte-Carlo trial execution.

A trial is fully described by a picklable ``TrialSpec``. The problem instance
(signal, ensemble, intensities) is keyed by (base_seed, ratio, index) only, so
every method sees the same instance; the power-method start is keyed by the
method as well.
"""
import asyncio
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import List, Sequence, Tuple, Union

from ..core.measurement import (
    FieldKind,
    IntensityVector,
    MeasurementEnsemble,
    Signal,
    gen_cdp_ensemble,
    gen_gaussian_ensemble,
    gen_signal,
    intensities,
)
from ..core.solver import solve
from ..core.state import Method, SolverConfig
from ..metrics.recovery import TrialRecord
from ..utils.rng import SeededRNG, derive_seed

logger = logging.getLogger(__name__)


class Model(str, Enum):
    GAUSSIAN = "gaussian"
    CDP = "cdp"


@dataclass(frozen=True)
class TrialSpec:
    """
    One Monte-Carlo trial.

    ``ratio`` is m/n for the Gaussian model and the mask count L for CDP.
    """

    method: Method
    ratio: Union[float, int]
    index: int
    n: int
    field_kind: FieldKind
    base_seed: int
    solver: SolverConfig
    model: Model = Model.GAUSSIAN

    @property
    def instance_seed(self) -> int:
        return derive_seed(self.base_seed, "instance", self.ratio, self.index)

    @property
    def solver_seed(self) -> int:
        return derive_seed(self.base_seed, Method(self.method).value, self.ratio, self.index)

    @property
    def sort_key(self) -> Tuple[str, float, int]:
        return Method(self.method).value, float(self.ratio), self.index


def measurement_count(n: int, ratio: float) -> int:
    """m = round(ratio * n), at least one measurement."""
    return max(1, int(round(ratio * n)))


def build_instance(spec: TrialSpec) -> Tuple[Signal, MeasurementEnsemble, IntensityVector]:
    """Planted signal, ensemble and noiseless intensities of a trial."""
    rng = SeededRNG(spec.instance_seed)
    signal_seed, ensemble_seed = rng.fork("signal").seed, rng.fork("ensemble").seed
    if spec.model is Model.CDP:
        x = gen_signal(spec.n, FieldKind.COMPLEX, signal_seed)
        ensemble = gen_cdp_ensemble(spec.n, int(spec.ratio), ensemble_seed)
    else:
        x = gen_signal(spec.n, spec.field_kind, signal_seed)
        m = measurement_count(spec.n, spec.ratio)
        ensemble = gen_gaussian_ensemble(spec.n, m, spec.field_kind, ensemble_seed)
    return x, ensemble, intensities(ensemble, x)


def run_trial(spec: TrialSpec) -> TrialRecord:
    """Build the instance, solve it and record the outcome."""
    x, ensemble, y = build_instance(spec)
    cfg = replace(spec.solver, method=spec.method, record_trace=False)

    start = time.perf_counter()
    report = solve(ensemble, y, cfg, ground_truth=x, seed=spec.solver_seed)
    elapsed = time.perf_counter() - start

    final = report.final_nmse if report.final_nmse is not None else math.inf
    return TrialRecord(
        seed=spec.solver_seed,
        n=ensemble.n,
        m=ensemble.m,
        field_kind=x.field_kind.value,
        method=cfg.method.value,
        success=bool(final < cfg.success_nmse),
        final_nmse=float(final),
        outer_iters=report.outer_iters,
        total_grad_steps=report.total_grad_steps,
        wall_time_seconds=elapsed,
        ratio=float(spec.ratio),
        index=spec.index,
    )


class TrialPool:
    """
    Runs independent trials, inline for ``jobs == 1`` and on worker processes otherwise.

    Results always come back ordered by (method, ratio, index), so nothing
    downstream can observe the degree of parallelism.
    """

    def __init__(self, jobs: int = 1):
        if jobs < 1:
            raise ValueError(f"jobs must be >= 1, got {jobs}")
        self.jobs = jobs

    def run(self, specs: Sequence[TrialSpec]) -> List[TrialRecord]:
        if not specs:
            return []
        if self.jobs == 1:
            return _ordered(specs, [run_trial(spec) for spec in specs])
        return asyncio.run(self.run_async(specs))

    async def run_async(self, specs: Sequence[TrialSpec]) -> List[TrialRecord]:
        """Dispatch every trial to a process pool and gather the records."""
        loop = asyncio.get_running_loop()
        workers = min(self.jobs, len(specs)) or 1
        with ProcessPoolExecutor(max_workers=workers) as executor:
            tasks = [loop.run_in_executor(executor, run_trial, spec) for spec in specs]
            records = await asyncio.gather(*tasks)
        logger.debug("gathered %d trial(s) from %d worker(s)", len(records), workers)
        return _ordered(specs, list(records))


def _ordered(specs: Sequence[TrialSpec], records: List[TrialRecord]) -> List[TrialRecord]:
    pairs = sorted(zip((spec.sort_key for spec in specs), records), key=lambda pair: pair[0])
    return [record for _, record in pairs]
