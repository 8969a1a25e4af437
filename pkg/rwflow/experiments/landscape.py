"""Objective landscape of a two-dimensional real problem."""
import numpy as np

from ..core.measurement import FieldKind, Signal, gen_gaussian_ensemble, intensities
from ..core.objective import WeightedObjective, compute_weights, unit_weights
from ..utils.rng import SeededRNG, derive_seed
from .base import BaseExperiment, ExperimentResult


class LandscapeExperiment(BaseExperiment):
    """
    Evaluates the reweighted objective (weights frozen at a perturbed copy of
    x) and the unweighted one on a square grid. Rows run over z1 in the outer
    loop and z2 in the inner loop, both ascending.
    """

    columns = ("z1", "z2", "f_weighted", "f_unweighted")

    def execute(self) -> ExperimentResult:
        cfg = self.config
        settings = cfg.landscape
        x = Signal(np.asarray(settings.x, dtype=float), FieldKind.REAL)
        seed = derive_seed(cfg.base_seed, "landscape")
        ensemble = gen_gaussian_ensemble(2, settings.m, FieldKind.REAL, seed)
        y = intensities(ensemble, x)

        rng = SeededRNG(derive_seed(cfg.base_seed, "landscape-perturbation"))
        direction = rng.unit_vector(2, False)
        z0 = x.values + settings.perturbation * direction
        weighted = WeightedObjective(ensemble, y, compute_weights(ensemble, y, z0, cfg.solver.eta))
        unweighted = WeightedObjective(ensemble, y, unit_weights(ensemble.m))
        self.log(f"m={ensemble.m}, weights frozen at z0={z0.tolist()}")

        grid = np.linspace(settings.lo, settings.hi, settings.points)
        table = self.new_table()
        for z1 in grid:
            for z2 in grid:
                z = np.array([z1, z2])
                table.add_row(float(z1), float(z2), weighted.value(z), unweighted.value(z))
        self.log(f"{len(table)} grid point(s) evaluated")
        return ExperimentResult(table)
