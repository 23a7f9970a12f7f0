from __future__ import annotations
import math
from itertools import product
from typing import Any, Dict, List, Tuple, TYPE_CHECKING

from horizonlab.costmeter.fit import fit_power_law
from horizonlab.evolution import linear_grid, overlap_series
from horizonlab.horizon import (
    HorizonReport, build_report, dispersion_sensitivity, predict_horizon_theory, write_reports
)
from horizonlab.perturbation import ErrorDistribution, sample_perturbed
from horizonlab.plots import PlotKind
from horizonlab.schemas import HorizonSchema
from horizonlab.spectral import SpectralModel
from .experiment import Experiment

if TYPE_CHECKING:
    from horizonlab.managers import ResultsManager


SENSITIVITY_HEADER = ("dim", "seed", "dE", "tp_std", "tp_halfwidth", "tp_mad", "tp_empirical")
HORIZON_FIT_HEADER = ("dim", "slope", "r2")


class HorizonExperiment(Experiment):
    """Empirical vs predicted horizon over a (dim, dE, seed) grid."""
    name = "horizon"
    schema = HorizonSchema

    def _point(self, params: Dict[str, Any], job: Tuple[int, int, int]) -> Tuple[HorizonReport, tuple]:
        dim, j, s = job
        seed = self.derive_seed(params["seed"], dim, j, s)
        model = SpectralModel.random(
            dim, seed, params["energy_span"], params["hbar"], params["equal_weights"]
        )
        dist = ErrorDistribution.with_dispersion(params["kind"], params["dEs"][j], seed + 1)
        pert = sample_perturbed(model, dist)
        t_max = params["t_factor"] * predict_horizon_theory(params["dEs"][j], model.hbar)
        series = overlap_series(model, pert, linear_grid(t_max, params["samples"]))
        report = build_report(model, pert, series, params["threshold"], params["window"])
        tp = dispersion_sensitivity(model, pert)
        return report, (dim, seed, report.dE, tp["std"], tp["halfwidth"], tp["mad"],
                        report.t_p_empirical)

    def run(self, params: Dict[str, Any], results: ResultsManager) -> None:
        jobs = sorted(product(params["dims"], range(len(params["dEs"])), range(params["seeds"])))
        out = self.app.map(lambda job: self._point(params, job), jobs)
        reports: List[HorizonReport] = [r for r, _ in out]

        results.track(write_reports(results.path("horizon_reports.csv"), reports))
        results.csv("horizon_sensitivity.csv", SENSITIVITY_HEADER, (row for _, row in out))

        fits = []
        for dim in params["dims"]:
            runs = [r for r in reports if r.dim == dim and math.isfinite(r.t_p_empirical)]
            if len({r.dE for r in runs}) < 2:
                self.logger.warning("dim=%d: fewer than two measured horizons, no fit.", dim)
                continue
            line = fit_power_law([1.0 / r.dE for r in runs], [r.t_p_empirical for r in runs])
            self.logger.info("dim=%d: T_p ~ (1/dE)^%.4f, r2 %.4f", dim, line.exponent, line.r2)
            fits.append((dim, line.exponent, line.r2))
        results.csv("horizon_fit.csv", HORIZON_FIT_HEADER, fits)

    def plots(self, results):
        return [([results.path("horizon_reports.csv")], PlotKind.HORIZON)]
