from __future__ import annotations
from typing import Any, Dict, TYPE_CHECKING

from horizonlab.evolution import PropagationMode, linear_grid, overlap_series, write_series
from horizonlab.horizon import predict_horizon_theory
from horizonlab.perturbation import (
    ErrorDistribution, energy_dispersion, sample_perturbed, write_perturbed
)
from horizonlab.plots import PlotKind
from horizonlab.schemas import EvolveSchema
from horizonlab.spectral import SpectralModel, write_spectrum
from .experiment import Experiment

if TYPE_CHECKING:
    from horizonlab.managers import ResultsManager


class EvolveExperiment(Experiment):
    """Overlap and deviation of one exact / approximate pair."""
    name = "evolve"
    schema = EvolveSchema

    def run(self, params: Dict[str, Any], results: ResultsManager) -> None:
        mode = PropagationMode(params["mode"])
        model = SpectralModel.random(
            params["dim"], self.derive_seed(params["seed"], 0), params["energy_span"],
            params["hbar"], params["equal_weights"],
        )
        dist = ErrorDistribution.with_dispersion(
            params["kind"], params["dE"], self.derive_seed(params["seed"], 1)
        )
        pert = sample_perturbed(
            model, dist, params["dE_coeff"], params["epsilon"],
            with_residuals=mode == PropagationMode.FULL,
        )
        t_max = params["t_max"] or 4.0 * predict_horizon_theory(
            energy_dispersion(model, pert), model.hbar
        )
        series = overlap_series(model, pert, linear_grid(t_max, params["samples"]), mode)

        results.track(write_spectrum(results.path("evolve_spectrum.csv"), model))
        results.track(write_perturbed(results.path("evolve_perturbed.csv"), model, pert))
        results.track(write_series(results.path("evolve_series.csv"), series))

    def plots(self, results):
        series = [results.path("evolve_series.csv")]
        return [(series, PlotKind.OVERLAP), (series, PlotKind.DEVIATION)]
