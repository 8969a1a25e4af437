"""Base class shared by every bench experiment."""
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

from ..utils.config import ExperimentConfig
from ..utils.csv_writer import CsvTable
from .trials import TrialPool

logger = logging.getLogger(__name__)


@dataclass
class ExperimentResult:
    table: CsvTable
    artifacts: List[Path] = field(default_factory=list)
    # human-readable notes for rows that missed their quota
    shortfalls: List[str] = field(default_factory=list)


class BaseExperiment(ABC):
    columns: tuple = ()

    def __init__(self, config: ExperimentConfig, pool: Optional[TrialPool] = None):
        self.config = config
        self.pool = pool or TrialPool(config.jobs)
        self.experiment_name = self.__class__.__name__

    @abstractmethod
    def execute(self) -> ExperimentResult:
        pass

    def new_table(self) -> CsvTable:
        return CsvTable(self.columns)

    def log(self, message: str):
        logger.info(f"[{self.experiment_name}] {message}")
