from __future__ import annotations
from typing import Any, Dict, TYPE_CHECKING

import numpy as np

from horizonlab.classical import (
    CostNotion, GrowthKind, PhaseMap, classical_cost_curve, divergence_growth, tangent_lyapunov,
    write_classical_cost, write_divergence,
)
from horizonlab.costmeter.fit import FIT_HEADER
from horizonlab.plots import PlotKind
from horizonlab.schemas import ClassicalSchema
from .experiment import Experiment

if TYPE_CHECKING:
    from horizonlab.managers import ResultsManager


LYAPUNOV_HEADER = ("map", "parameter", "fit_kind", "rate", "r2", "tangent_rate")
# Prediction times when none are given, by measured growth kind.
DEFAULT_T_RANGE = {
    GrowthKind.EXPONENTIAL: (10.0, 1e4),
    GrowthKind.POLYNOMIAL: (1e3, 1e30),
}


class ClassicalExperiment(Experiment):
    """Trajectory divergence of a phase map and its prediction cost."""
    name = "classical"
    schema = ClassicalSchema
    notes = (
        "paper_model (mantissa only) cost omits the T map iterations needed to reach T; "
        "measured cost includes them.",
    )

    def run(self, params: Dict[str, Any], results: ResultsManager) -> None:
        m = PhaseMap(params["map"], params["parameter"], params["theta"], params["p"])
        series = divergence_growth(
            m, params["delta0"], params["steps"], params["n_bits"], params["perturb"]
        )
        tangent = tangent_lyapunov(m, series)
        self.logger.info("%s map: %s growth, rate %.4f (tangent %.4f), r2 %.4f",
                         m.kind, series.fit_kind, series.rate, tangent, series.r2)

        lo, hi = params["T"] or DEFAULT_T_RANGE[series.fit_kind]
        curve = classical_cost_curve(
            m, np.logspace(np.log10(lo), np.log10(hi), params["points"]),
            params["delta"], params["alpha_model"], growth=series,
        )

        results.track(write_divergence(results.path("classical_divergence.csv"), series))
        results.track(write_classical_cost(results.path("classical_cost.csv"), curve))
        results.csv("classical_fit.csv", FIT_HEADER, [
            *curve.mantissa_model.rows(f"{m.kind.value}:{CostNotion.MANTISSA_MODEL.value}"),
            *curve.measured.rows(f"{m.kind.value}:{CostNotion.MEASURED.value}"),
        ])
        results.csv("classical_lyapunov.csv", LYAPUNOV_HEADER, [(
            m.kind.value, m.parameter, series.fit_kind.value, series.rate, series.r2, tangent
        )])

    def plots(self, results):
        return [([results.path("classical_divergence.csv")], PlotKind.DIVERGENCE)]
