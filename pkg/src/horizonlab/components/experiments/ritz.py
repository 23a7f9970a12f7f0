from __future__ import annotations
from typing import Any, Dict, TYPE_CHECKING

from horizonlab.plots import PlotKind
from horizonlab.ritz import (
    HamiltonianKind, ModelHamiltonian, convergence_study, variational_upper_bound_check,
    write_convergence, write_summary,
)
from horizonlab.schemas import RitzSchema
from .experiment import Experiment

if TYPE_CHECKING:
    from horizonlab.managers import ResultsManager


class RitzExperiment(Experiment):
    """Ritz convergence of a model Hamiltonian against a larger basis."""
    name = "ritz"
    schema = RitzSchema
    notes = ("Variational monotonicity checked between consecutive basis sizes.",)

    @staticmethod
    def hamiltonian(params: Dict[str, Any]) -> ModelHamiltonian:
        kind = HamiltonianKind(params["model"])
        modes = 1 if kind == HamiltonianKind.HARMONIC_1D else 2
        omega = tuple(params["omega"] or (1.0,) * modes)
        return ModelHamiltonian(kind, omega, params["coupling"], params["hbar"])

    def run(self, params: Dict[str, Any], results: ResultsManager) -> None:
        h = self.hamiltonian(params)
        study = convergence_study(
            h, params["dims"], params["levels"], params["reference"], solve=self.app.cache.ritz
        )
        dims = [int(D) for D in study.dims]
        violations = [
            (a, b) for a, b in zip(dims, dims[1:])
            if not variational_upper_bound_check(h, a, b, params["levels"])
        ]
        if violations:
            self.logger.warning("Ritz values increased between basis sizes %s", violations)
        self.logger.info("%s lambda=%s: alpha=%.4f r2=%.4f",
                         h.kind, h.coupling, study.fitted_alpha, study.fit_r2)

        results.track(write_convergence(results.path("ritz_convergence.csv"), study))
        results.track(write_summary(results.path("ritz_summary.csv"), [study]))

    def plots(self, results):
        return [([results.path("ritz_convergence.csv")], PlotKind.CONVERGENCE)]
