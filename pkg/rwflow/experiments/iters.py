"""Mean outer-iteration counts over successful trials."""
from typing import List, Optional

import numpy as np

from ..core.state import Method
from ..metrics.recovery import TrialRecord
from .base import BaseExperiment, ExperimentResult
from .trials import TrialSpec

DEFAULT_RATIOS = tuple(2.0 + 0.5 * k for k in range(13))


class ItersExperiment(BaseExperiment):
    """
    For each m/n, keeps drawing trials until ``trials_per_point`` of them
    succeed or ``iters.cap_factor * trials_per_point`` attempts were spent, and
    averages the outer-iteration count over the first quota of successes.

    Trials run in batches sized to the remaining quota and are consumed in
    index order, so the attempted set never depends on the worker count.
    """

    columns = ("method", "mn_ratio", "successes", "attempts", "mean_outer_iters", "complete")

    def execute(self) -> ExperimentResult:
        cfg = self.config
        quota = cfg.trials_per_point
        cap = cfg.iters.cap_factor * quota
        table = self.new_table()
        shortfalls = []
        for method in cfg.methods_or((Method.RWF,)):
            for ratio in cfg.ratios_or(DEFAULT_RATIOS):
                successes, attempts = self._collect(method, float(ratio), quota, cap)
                complete = len(successes) >= quota
                mean_iters: Optional[float] = None
                if successes:
                    mean_iters = float(np.mean([r.outer_iters for r in successes]))
                table.add_row(
                    method.value, float(ratio), len(successes), attempts, mean_iters, complete
                )
                if not complete:
                    note = (
                        f"{method.value} @ m/n={ratio:g}: "
                        f"{len(successes)}/{quota} successes in {attempts} attempts"
                    )
                    shortfalls.append(note)
                    self.log(f"quota missed: {note}")
                else:
                    self.log(f"{method.value} @ m/n={ratio:g}: mean outer iters {mean_iters:.3f}")
        return ExperimentResult(table, shortfalls=shortfalls)

    def _collect(self, method: Method, ratio: float, quota: int, cap: int):
        cfg = self.config
        successes: List[TrialRecord] = []
        attempts = 0
        while len(successes) < quota and attempts < cap:
            batch = min(quota - len(successes), cap - attempts)
            specs = [
                TrialSpec(
                    method=method,
                    ratio=ratio,
                    index=attempts + k,
                    n=cfg.n,
                    field_kind=cfg.field_kind,
                    base_seed=cfg.base_seed,
                    solver=cfg.solver,
                )
                for k in range(batch)
            ]
            records = sorted(self.pool.run(specs), key=lambda r: r.index)
            attempts += batch
            for record in records:
                if record.success and len(successes) < quota:
                    successes.append(record)
        return successes, attempts
