"""Bench experiments."""
from .base import BaseExperiment, ExperimentResult
from .image import ImageExperiment
from .iters import ItersExperiment
from .landscape import LandscapeExperiment
from .rc_probe import RCProbeExperiment
from .sweep import CDPSweepExperiment, SweepExperiment
from .trace import TraceExperiment
from .trials import TrialPool, TrialSpec, run_trial

__all__ = [
    'BaseExperiment',
    'ExperimentResult',
    'ImageExperiment',
    'ItersExperiment',
    'LandscapeExperiment',
    'RCProbeExperiment',
    'CDPSweepExperiment',
    'SweepExperiment',
    'TraceExperiment',
    'TrialPool',
    'TrialSpec',
    'run_trial',
]
