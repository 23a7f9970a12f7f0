from __future__ import annotations
from typing import Any, Dict, TYPE_CHECKING

from horizonlab.evolution import linear_grid, overlap_series
from horizonlab.horizon import predict_horizon_theory
from horizonlab.perturbation import ErrorDistribution, energy_dispersion, sample_perturbed
from horizonlab.plots import PlotKind
from horizonlab.schemas import Fig1Schema
from horizonlab.spectral import SpectralModel
from .experiment import Experiment

if TYPE_CHECKING:
    from horizonlab.managers import ResultsManager


OVERLAP_HEADER = ("time", "overlap_re", "overlap_im")
DEVIATION_HEADER = ("time", "deviation")


class Fig1Experiment(Experiment):
    """Typical overlap decay and deviation growth, equal coefficients."""
    name = "fig1"
    schema = Fig1Schema

    def run(self, params: Dict[str, Any], results: ResultsManager) -> None:
        model = SpectralModel.random(
            params["dim"], self.derive_seed(params["seed"], 0), params["energy_span"],
            params["hbar"], equal_weights=params["equal_weights"],
        )
        dist = ErrorDistribution.with_dispersion(
            params["kind"], params["dE"], self.derive_seed(params["seed"], 1)
        )
        pert = sample_perturbed(model, dist)
        tp = predict_horizon_theory(energy_dispersion(model, pert), model.hbar)
        series = overlap_series(model, pert, linear_grid(params["t_factor"] * tp, params["samples"]))
        self.logger.info("fig1: dim=%d, T_p=%.6g, %d samples", model.dim, tp, len(series))

        results.csv("fig1_overlap.csv", OVERLAP_HEADER,
                    zip(series.times, series.overlap_re, series.overlap_im))
        results.csv("fig1_deviation.csv", DEVIATION_HEADER,
                    zip(series.times, series.deviation))

    def plots(self, results):
        return [
            ([results.path("fig1_overlap.csv")], PlotKind.OVERLAP),
            ([results.path("fig1_deviation.csv")], PlotKind.DEVIATION),
        ]
