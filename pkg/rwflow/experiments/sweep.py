"""Recovery-rate sweeps over m/n (Gaussian) and over the mask count L (CDP)."""
from itertools import groupby
from typing import List, Tuple

from ..core.measurement import FieldKind
from ..core.state import Method
from ..errors import ConfigError
from ..metrics.recovery import TrialRecord, summarize_trials
from ..utils.fft import is_power_of_two
from .base import BaseExperiment, ExperimentResult
from .trials import Model, TrialSpec

DEFAULT_RATIOS = tuple(1.0 + 0.5 * k for k in range(15))
SWEEP_METHODS = (Method.RWF, Method.TWF_LITE, Method.WF)
CDP_METHODS = (Method.RWF, Method.WF)


class SweepExperiment(BaseExperiment):
    """Empirical recovery rate per (method, m/n) on the Gaussian model."""

    columns = (
        "method", "mn_ratio", "trials", "successes", "rate",
        "mean_nmse", "mean_iters", "mean_wall_time",
    )
    model = Model.GAUSSIAN

    def grid(self) -> Tuple[float, ...]:
        return tuple(float(r) for r in self.config.ratios_or(DEFAULT_RATIOS))

    def methods(self) -> Tuple[Method, ...]:
        return self.config.methods_or(SWEEP_METHODS)

    def field_kind(self) -> FieldKind:
        return self.config.field_kind

    def specs(self) -> List[TrialSpec]:
        cfg = self.config
        return [
            TrialSpec(
                method=method,
                ratio=ratio,
                index=index,
                n=cfg.n,
                field_kind=self.field_kind(),
                base_seed=cfg.base_seed,
                solver=cfg.solver,
                model=self.model,
            )
            for method in self.methods()
            for ratio in self.grid()
            for index in range(cfg.trials_per_point)
        ]

    def execute(self) -> ExperimentResult:
        specs = self.specs()
        self.log(
            f"{len(specs)} trial(s): n={self.config.n}, "
            f"methods={[m.value for m in self.methods()]}, "
            f"points={list(self.grid())}, jobs={self.pool.jobs}"
        )
        records = self.pool.run(specs)

        table = self.new_table()
        for (method, ratio), group in groupby(records, key=lambda r: (r.method, r.ratio)):
            row = self._summary_row(method, ratio, list(group))
            table.add_row(*row)
            self.log(f"{method} @ {ratio:g}: rate={row[4]:.2f}")
        return ExperimentResult(table)

    def _summary_row(self, method: str, ratio: float, group: List[TrialRecord]) -> tuple:
        summary = summarize_trials(group)
        wall = summary["mean_wall_time"] if self.config.timing else None
        return (
            method,
            self._point_label(ratio),
            summary["trials"],
            summary["successes"],
            summary["rate"],
            summary["mean_nmse"],
            summary["mean_iters"],
            wall,
        )

    def _point_label(self, ratio: float):
        return ratio


class CDPSweepExperiment(SweepExperiment):
    """Recovery rate per (method, L) for a complex signal under L coded masks."""

    columns = (
        "method", "L", "trials", "successes", "rate",
        "mean_nmse", "mean_iters", "mean_wall_time",
    )
    model = Model.CDP

    def grid(self) -> Tuple[int, ...]:
        return tuple(int(L) for L in self.config.L_values)

    def methods(self) -> Tuple[Method, ...]:
        return self.config.methods_or(CDP_METHODS)

    def field_kind(self) -> FieldKind:
        return FieldKind.COMPLEX

    def execute(self) -> ExperimentResult:
        if not is_power_of_two(self.config.n):
            raise ConfigError(f"CDP sweeps need a power-of-two n, got {self.config.n}")
        return super().execute()

    def _point_label(self, ratio: float):
        return int(ratio)
