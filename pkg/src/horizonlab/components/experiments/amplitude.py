from __future__ import annotations
from typing import Any, Dict, TYPE_CHECKING

from horizonlab.costmeter.fit import fit_power_law
from horizonlab.evolution import linear_grid, overlap_series
from horizonlab.horizon import amplitude_theory, measure_amplitude, predict_horizon_theory
from horizonlab.perturbation import ErrorDistribution, energy_dispersion, sample_perturbed
from horizonlab.schemas import AmplitudeSchema
from horizonlab.spectral import SpectralModel
from .experiment import Experiment

if TYPE_CHECKING:
    from horizonlab.managers import ResultsManager


AMPLITUDE_HEADER = ("dim", "amp_theory", "amp_empirical")
AMPLITUDE_FIT_HEADER = ("slope", "r2")


class AmplitudeExperiment(Experiment):
    """Residual overlap amplitude past the horizon, against dim."""
    name = "amplitude"
    schema = AmplitudeSchema

    def _point(self, params: Dict[str, Any], dim: int) -> tuple:
        seed = self.derive_seed(params["seed"], dim)
        model = SpectralModel.random(
            dim, seed, params["energy_span"], params["hbar"], params["equal_weights"]
        )
        pert = sample_perturbed(
            model, ErrorDistribution.with_dispersion(params["kind"], params["dE"], seed + 1)
        )
        tp = predict_horizon_theory(energy_dispersion(model, pert), model.hbar)
        lo, hi = params["tail"]
        series = overlap_series(model, pert, linear_grid(hi * tp, params["samples"], lo * tp))
        return dim, amplitude_theory(dim), measure_amplitude(series, lo * tp)

    def run(self, params: Dict[str, Any], results: ResultsManager) -> None:
        rows = self.app.map(lambda dim: self._point(params, dim), sorted(params["dims"]))
        results.csv("amplitude.csv", AMPLITUDE_HEADER, rows)
        if len(rows) >= 2:
            line = fit_power_law([r[0] for r in rows], [r[2] for r in rows])
            self.logger.info("Residual amplitude ~ dim^%.4f, r2 %.4f", line.exponent, line.r2)
            results.csv("amplitude_fit.csv", AMPLITUDE_FIT_HEADER, [(line.exponent, line.r2)])
