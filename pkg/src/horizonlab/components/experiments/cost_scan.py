from __future__ import annotations
from typing import Any, Dict, TYPE_CHECKING

import numpy as np

from horizonlab.costmeter.fit import FIT_HEADER, fit_scaling
from horizonlab.costmeter.pipelines import (
    COST_HEADER, SystemKind, cost_scan, default_study, fit_cost_exponent, pipeline_for
)
from horizonlab.plots import PlotKind
from horizonlab.ritz import ModelHamiltonian
from horizonlab.schemas import CostScanSchema
from .experiment import Experiment

if TYPE_CHECKING:
    from horizonlab.managers import ResultsManager


EXPONENT_HEADER = ("model", "lambda", "beta_hat", "r2")


class CostScanExperiment(Experiment):
    """Prediction cost against horizon time, integrable vs Ritz pipelines."""
    name = "cost_scan"
    schema = CostScanSchema
    notes = (
        "Cost exponents are upper bounds realized by the specific algorithms instrumented "
        "here, not lower bounds on the complexity of the systems.",
        "Ritz costs beyond the executed basis limit are estimated from an executed solve.",
    )

    def run(self, params: Dict[str, Any], results: ResultsManager) -> None:
        study = None
        fits = []
        for system in sorted(SystemKind(s) for s in params["systems"]):
            if system == SystemKind.NONINTEGRABLE and study is None:
                study = default_study(params["coupling"], solve=self.app.cache.ritz)
            lo, hi = params[f"T_{system.value}"]
            T = np.logspace(np.log10(lo), np.log10(hi), params["points"])
            pipeline = pipeline_for(system, study, params["N_levels"])
            points = [p for chunk in self.app.map(
                lambda t: cost_scan([t], pipeline, params["hbar"]), T.tolist()
            ) for p in chunk]
            results.csv(f"cost_scan_{system.value}.csv", COST_HEADER, (p.row() for p in points))

            fit = fit_scaling([p.T for p in points], [p.ledger.model_cost for p in points])
            self.logger.info("%s: %s, %s exponent %.4f (r2 %.4f)",
                             system, fit.classification, fit.model_kind, fit.exponent, fit.r2)
            fits.extend(fit.rows(system.value))
        results.csv("cost_fit.csv", FIT_HEADER, fits)

        if SystemKind.NONINTEGRABLE in params["systems"]:
            h = ModelHamiltonian.coupled_quartic(params["coupling"])
            line = fit_cost_exponent(h, params["beta_dims"])
            self.logger.info("Ritz cost ~ D^%.4f over matrix dimensions", line.exponent)
            results.csv("ritz_cost_exponent.csv", EXPONENT_HEADER,
                        [(h.kind.value, h.coupling, line.exponent, line.r2)])

    def plots(self, results):
        return [
            ([path], PlotKind.COST_SCAN)
            for name, path in sorted(results.files.items()) if name.startswith("cost_scan_")
        ]
