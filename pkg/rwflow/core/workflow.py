"""Bench orchestrator: picks the experiment, runs it and writes its outputs."""
import logging
import time
from pathlib import Path
from typing import Dict, Optional, Type

from ..errors import QuotaError
from ..experiments import (
    BaseExperiment,
    CDPSweepExperiment,
    ExperimentResult,
    ImageExperiment,
    ItersExperiment,
    LandscapeExperiment,
    RCProbeExperiment,
    SweepExperiment,
    TraceExperiment,
    TrialPool,
)
from ..utils.config import Experiment, ExperimentConfig

logger = logging.getLogger(__name__)

EXPERIMENTS: Dict[Experiment, Type[BaseExperiment]] = {
    Experiment.SWEEP: SweepExperiment,
    Experiment.TRACE: TraceExperiment,
    Experiment.ITERS: ItersExperiment,
    Experiment.CDP_SWEEP: CDPSweepExperiment,
    Experiment.IMAGE: ImageExperiment,
    Experiment.LANDSCAPE: LandscapeExperiment,
    Experiment.RC_PROBE: RCProbeExperiment,
}


class BenchWorkflow:
    """Runs one configured experiment end to end."""

    def __init__(self, config: ExperimentConfig, pool: Optional[TrialPool] = None):
        self.config = config
        self.pool = pool or TrialPool(config.jobs)
        self.experiment = EXPERIMENTS[config.experiment](config, self.pool)

    def run(self) -> ExperimentResult:
        """
        Execute the experiment and write its CSV to ``output_path``.

        Returns:
            The experiment result.

        Raises:
            QuotaError: after the CSV is written, when some row missed its quota.
        """
        start = time.perf_counter()
        result = self.experiment.execute()
        written: Optional[Path] = result.table.write(self.config.output_path)
        elapsed = time.perf_counter() - start

        destination = written if written is not None else "stdout"
        logger.info(
            "%s finished in %.2fs: %d row(s) written to %s",
            self.config.experiment.value, elapsed, len(result.table), destination,
        )
        if result.shortfalls:
            raise QuotaError("; ".join(result.shortfalls))
        return result
