"""Per-step NMSE traces of each method on one shared instance."""
from dataclasses import replace
from typing import List, Tuple

from ..core.solver import solve
from ..core.state import Method, SolverConfig
from ..utils.rng import derive_seed
from .base import BaseExperiment, ExperimentResult
from .trials import TrialSpec, build_instance

TRACE_METHODS = (Method.RWF, Method.WF, Method.TWF_LITE)


def eta_label(eta: float) -> str:
    return f"{Method.RWF.value}(eta={float(eta)!r})"


class TraceExperiment(BaseExperiment):
    """
    Runs every method on the instance drawn at ``trace.mn_ratio`` and logs the
    objective and NMSE after each gradient step. Step 0 is the spectral
    initializer; ``objective`` is the value of the current outer iteration's
    weighted objective (unit weights at step 0).
    """

    columns = ("method", "step", "outer", "objective", "nmse")

    def runs(self) -> List[Tuple[str, SolverConfig]]:
        base = replace(self.config.solver, record_trace=True)
        runs = [(m.value, replace(base, method=m)) for m in self.config.methods_or(TRACE_METHODS)]
        for eta in self.config.trace.eta_sweep:
            runs.append((eta_label(eta), replace(base, method=Method.RWF, eta=float(eta))))
        return runs

    def execute(self) -> ExperimentResult:
        cfg = self.config
        ratio = float(cfg.trace.mn_ratio)
        spec = TrialSpec(
            method=Method.RWF,
            ratio=ratio,
            index=0,
            n=cfg.n,
            field_kind=cfg.field_kind,
            base_seed=cfg.base_seed,
            solver=cfg.solver,
        )
        x, ensemble, y = build_instance(spec)
        self.log(f"instance n={ensemble.n}, m={ensemble.m} (m/n={ratio:g})")

        table = self.new_table()
        for label, solver_cfg in self.runs():
            seed = derive_seed(cfg.base_seed, label, ratio, 0)
            report = solve(ensemble, y, solver_cfg, ground_truth=x, seed=seed)
            for entry in report.trace:
                table.add_row(label, entry.step, entry.outer, entry.objective, entry.nmse)
            self.log(
                f"{label}: {report.total_grad_steps} step(s), {report.outer_iters} outer, "
                f"final NMSE={report.final_nmse:.3e} ({report.stop_reason.value})"
            )
        return ExperimentResult(table)
