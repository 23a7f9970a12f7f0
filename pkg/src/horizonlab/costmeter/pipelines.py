"""Spectrum pipelines under instrumentation and their prediction cost curves.

A prediction to time T needs eigenvalues accurate to dE = pi hbar / T, hence
n = required_bits(dE) mantissa bits. Integrable spectra come from the closed form
E_N = hbar omega (N + 1/2), nonintegrable ones from Ritz diagonalization at the basis
size the fitted convergence law asks for.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import StrEnum
from functools import lru_cache
from typing import Callable, List, Sequence, Tuple

import numpy as np
from numpy.typing import ArrayLike

from horizonlab import config
from horizonlab.exceptions import ContractViolationError, DimensionError, InsufficientDataError
from horizonlab.ritz.hamiltonian import ModelHamiltonian, assembly_charge, build_matrix
from horizonlab.ritz.jacobi import charge_solve, eigensolve
from horizonlab.ritz.study import ConvergenceStudy, convergence_study, ritz_solve
from .arith import Program, const, precise_eval
from .fit import MIN_DECADES, FitLine, ScalingFit, fit_power_law, fit_scaling
from .ledger import CostLedger, required_bits


logger = logging.getLogger(__name__)

COST_HEADER = ("T", "dE", "n_bits", "D", "adds", "muls", "divs", "model_cost")
DEFAULT_LEVELS = 100

# Pipeline: accuracy target -> (basis size or level count, ledger).
Pipeline = Callable[[float], Tuple[int, CostLedger]]


class SystemKind(StrEnum):
    INTEGRABLE = "integrable"
    NONINTEGRABLE = "nonintegrable"


@dataclass(frozen=True)
class CostPoint:
    T: float
    dE: float
    n_bits: int
    D: int
    ledger: CostLedger

    def row(self) -> tuple:
        lg = self.ledger
        return (self.T, self.dE, self.n_bits, self.D, lg.adds, lg.muls, lg.divs, lg.model_cost)


def integrable_spectrum(
    N_levels: int, n: int, omega: float = 1.0, hbar: float = 1.0,
    ledger: CostLedger | None = None,
) -> Tuple[list, CostLedger]:
    """E_N = hbar omega (N + 1/2), N < N_levels, evaluated at n bits."""
    if N_levels < 1:
        raise DimensionError(f"N_levels must be at least 1, got {N_levels!r}.")
    quantum = const(float(hbar)) * const(float(omega))
    half = const("0.5")
    program = Program(tuple(quantum * (const(N) + half) for N in range(N_levels)))
    return precise_eval(program, n, ledger)


def integrable_spectrum_cost(
    N_levels: int, n: int, omega: float = 1.0, hbar: float = 1.0
) -> CostLedger:
    _, ledger = integrable_spectrum(N_levels, n, omega, hbar)
    return ledger


@lru_cache(maxsize=None)
def _anchor(h: ModelHamiltonian, D: int) -> Tuple[int, float]:
    """Sweep count and fraction of rotations performed, measured on an executed solve."""
    H = build_matrix(h, D)
    labels = h.parity_labels(D)
    sweeps, rotations, pairs = 0, 0, 0
    for label in np.unique(labels):
        idx = np.flatnonzero(labels == label)
        eig = eigensolve(H[np.ix_(idx, idx)])
        m = idx.size
        sweeps = max(sweeps, eig.sweeps)
        rotations += eig.rotations
        pairs += eig.sweeps * m * (m - 1) // 2
    return sweeps, (rotations / pairs if pairs else 0.0)


def jacobi_cost_estimate(
    h: ModelHamiltonian, D: int, ledger: CostLedger, anchor_D: int | None = None
) -> CostLedger:
    """Charge a Ritz solve at D states per mode without running it.

    Uses the executed solver's per-rotation and per-check charges, with sweep count and
    rotation density taken from an actual solve at anchor_D (RITZ_EXEC_LIMIT by default).
    """
    anchor_D = min(D, config.RITZ_EXEC_LIMIT) if anchor_D is None else anchor_D
    sweeps, density = _anchor(h, anchor_D)
    ledger.charge(**assembly_charge(h, D))
    for m in h.sector_sizes(D):
        rotations = round(density * sweeps * m * (m - 1) / 2)
        charge_solve(ledger, m, sweeps, rotations)
    return ledger


def ritz_spectrum_cost(
    h: ModelHamiltonian,
    D: int | None = None,
    dE: float | None = None,
    study: ConvergenceStudy | None = None,
    n: int | None = None,
) -> CostLedger:
    """Ledger of a Ritz spectrum at D states per mode, or at the size a study requires for dE.

    Sizes up to RITZ_EXEC_LIMIT are diagonalized, larger ones estimated.
    """
    if D is None:
        if study is None or dE is None:
            raise ContractViolationError("Either D or both dE and a convergence study are required.")
        D = study.required_basis(dE)
    if n is None:
        n = required_bits(dE) if dE is not None else 53
    ledger = CostLedger(n)
    if D <= config.RITZ_EXEC_LIMIT:
        ritz_solve(h, D, ledger=ledger)
    else:
        jacobi_cost_estimate(h, D, ledger)
    return ledger


def default_study(coupling: float = 0.1, solve=ritz_solve) -> ConvergenceStudy:
    """Coupled quartic study: 6 to 14 states per mode against 24, ten levels."""
    return convergence_study(
        ModelHamiltonian.coupled_quartic(coupling), (6, 8, 10, 12, 14), 10, 24, solve
    )


def integrable_pipeline(N_levels: int = DEFAULT_LEVELS, omega: float = 1.0, hbar: float = 1.0) -> Pipeline:
    def run(dE: float) -> Tuple[int, CostLedger]:
        return N_levels, integrable_spectrum_cost(N_levels, required_bits(dE), omega, hbar)
    return run


def ritz_pipeline(study: ConvergenceStudy) -> Pipeline:
    def run(dE: float) -> Tuple[int, CostLedger]:
        D = study.required_basis(dE)
        return D, ritz_spectrum_cost(study.model, D=D, n=required_bits(dE))
    return run


def horizon_accuracy(T: float, hbar: float = 1.0) -> float:
    """dE = pi hbar / T."""
    if not T > 0:
        raise ContractViolationError(f"Prediction time must be positive, got {T!r}.")
    return math.pi * hbar / T


def cost_scan(
    T_values: ArrayLike, pipeline: Pipeline, hbar: float = 1.0
) -> List[CostPoint]:
    points = []
    for T in np.asarray(T_values, dtype=np.float64).reshape(-1):
        dE = horizon_accuracy(float(T), hbar)
        D, ledger = pipeline(dE)
        ledger.check()
        points.append(CostPoint(float(T), dE, ledger.mantissa_bits, D, ledger))
    return points


def fit_points(points: Sequence[CostPoint]) -> ScalingFit:
    return fit_scaling([p.T for p in points], [p.ledger.model_cost for p in points])


def pipeline_for(
    system_kind: SystemKind | str,
    study: ConvergenceStudy | None = None,
    N_levels: int = DEFAULT_LEVELS,
) -> Pipeline:
    match SystemKind(system_kind):
        case SystemKind.INTEGRABLE:
            return integrable_pipeline(N_levels)
        case SystemKind.NONINTEGRABLE:
            return ritz_pipeline(study or default_study())


def prediction_cost_curve(
    system_kind: SystemKind | str,
    T_values: ArrayLike,
    hbar: float = 1.0,
    pipeline: Pipeline | None = None,
    study: ConvergenceStudy | None = None,
) -> ScalingFit:
    """Cost of predicting to each T, fitted and classified.

    :raises InsufficientDataError: T values spanning less than three decades
    """
    T = np.asarray(T_values, dtype=np.float64).reshape(-1)
    if np.any(T <= 0):
        raise ContractViolationError("Prediction times must be positive.")
    if T.size < 3 or math.log10(T.max() / T.min()) < MIN_DECADES - 1e-9:
        raise InsufficientDataError(
            f"Prediction times must span {MIN_DECADES} decades over at least three points."
        )
    pipeline = pipeline or pipeline_for(system_kind, study)
    fit = fit_points(cost_scan(T, pipeline, hbar))
    logger.info("%s prediction cost: %s (%s, exponent %.3f, r2 %.3f)",
                SystemKind(system_kind), fit.classification, fit.model_kind, fit.exponent, fit.r2)
    return fit


def executed_ritz_cost(h: ModelHamiltonian, D: int, n: int = 53) -> CostLedger:
    """Ledger of a Ritz spectrum actually diagonalized at D states per mode."""
    return ritz_solve(h, D, ledger=CostLedger(n)).op_count


def fit_cost_exponent(h: ModelHamiltonian, dims: Sequence[int], n: int = 53) -> FitLine:
    """Measured beta in cost ~ D^beta over matrix dimensions.

    Every size is diagonalized, RITZ_EXEC_LIMIT does not apply.
    """
    costs = [executed_ritz_cost(h, int(D), n).model_cost for D in dims]
    return fit_power_law([h.matrix_dim(int(D)) for D in dims], costs)
