"""Recovery metrics and regularity-condition diagnostics."""
from .recovery import TrialRecord, dist, in_region_E, nmse, optimal_phase, summarize_trials
from .regularity import EpsilonRegime, RCReport, rc_probe, regularity_probes, smoothness_constant

__all__ = [
    'TrialRecord',
    'dist',
    'in_region_E',
    'nmse',
    'optimal_phase',
    'summarize_trials',
    'EpsilonRegime',
    'RCReport',
    'rc_probe',
    'regularity_probes',
    'smoothness_constant',
]
