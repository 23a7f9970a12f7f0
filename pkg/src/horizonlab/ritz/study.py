"""Ritz spectra, convergence studies against a self reference, and variational checks."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Sequence

import numpy as np
from numpy.typing import NDArray

from horizonlab.costmeter.fit import fit_power_law
from horizonlab.costmeter.ledger import CostLedger
from horizonlab.exceptions import (
    ContractViolationError, DimensionError, InsufficientDataError, ReferenceQualityError
)
from horizonlab.utils import write_csv
from .hamiltonian import ModelHamiltonian, build_matrix
from .jacobi import eigensolve


logger = logging.getLogger(__name__)

CONVERGENCE_HEADER = ("D", "level", "error")
SUMMARY_HEADER = ("model", "lambda", "alpha_hat", "r2")
# Errors below NOISE_FLOOR * max(1, |E|) are round-off, not truncation.
NOISE_FLOOR = 1e-10
UPPER_BOUND_TOL = 1e-10
PRE_ASYMPTOTIC = 2


@dataclass(frozen=True, eq=False)
class RitzResult:
    basis_dim: int
    eigenvalues: NDArray[np.float64]
    matrix_dim: int
    op_count: CostLedger


def ritz_solve(
    h: ModelHamiltonian,
    D: int,
    levels: int | None = None,
    ledger: CostLedger | None = None,
    mantissa_bits: int = 53,
) -> RitzResult:
    """Lowest Ritz values over D oscillator states per mode.

    Parity sectors are diagonalized separately, then merged in ascending order.
    """
    ledger = CostLedger(mantissa_bits) if ledger is None else ledger
    H = build_matrix(h, D, ledger)
    size = H.shape[0]
    if levels is not None and not 1 <= levels <= size:
        raise DimensionError(f"Cannot retain {levels} levels of a {size} x {size} matrix.")

    labels = h.parity_labels(D)
    values = []
    for label in np.unique(labels):
        idx = np.flatnonzero(labels == label)
        values.append(eigensolve(H[np.ix_(idx, idx)], ledger).values)
    eigenvalues = np.sort(np.concatenate(values), kind="stable")[:levels]
    return RitzResult(basis_dim=D, eigenvalues=eigenvalues, matrix_dim=size, op_count=ledger)


@dataclass(frozen=True, eq=False)
class ConvergenceStudy:
    """Ritz errors per basis size against a larger self reference.

    dims are per mode basis sizes, fits run against the matrix dimension D.
    fitted_alpha and fit_r2 are nan when the basis is already exact.
    """
    model: ModelHamiltonian
    dims: NDArray[np.int64]
    matrix_dims: NDArray[np.int64]
    reference_dim: int
    errors: NDArray[np.float64]
    fitted_alpha: float
    fit_r2: float
    intercept: float

    @property
    def levels(self) -> int:
        return self.errors.shape[1]

    @property
    def exact(self) -> bool:
        return math.isnan(self.fitted_alpha)

    def required_dim(self, dE: float) -> float:
        """Matrix dimension reaching accuracy dE on the fitted law err = e^b D^-alpha."""
        if not dE > 0:
            raise ContractViolationError(f"Accuracy target must be positive, got {dE!r}.")
        if self.exact or not self.fitted_alpha > 0:
            raise ContractViolationError("No convergence rate was fitted for this study.")
        return math.exp((self.intercept - math.log(dE)) / self.fitted_alpha)

    def required_basis(self, dE: float) -> int:
        """Per mode basis size reaching accuracy dE."""
        return max(1, math.ceil(self.required_dim(dE) ** (1.0 / self.model.modes) - 1e-9))

    def rows(self):
        for D, errs in zip(self.matrix_dims, self.errors):
            for mu, err in enumerate(errs):
                yield int(D), mu, float(err)

    def summary_row(self) -> tuple:
        return (self.model.kind.value, self.model.coupling, self.fitted_alpha, self.fit_r2)


def _check_dims(dims: Sequence[int]) -> NDArray[np.int64]:
    d = np.asarray(dims, dtype=np.int64).reshape(-1)
    if d.size < PRE_ASYMPTOTIC + 2:
        raise InsufficientDataError(
            f"Convergence study needs at least {PRE_ASYMPTOTIC + 2} basis sizes, got {d.size}."
        )
    if np.any(np.diff(d) <= 0) or d[0] < 1:
        raise ContractViolationError(f"Basis sizes must be positive and strictly increasing: {dims}.")
    return d


def convergence_study(
    h: ModelHamiltonian,
    dims: Sequence[int],
    levels: int,
    reference_D: int,
    solve: Callable[[ModelHamiltonian, int], RitzResult] = ritz_solve,
) -> ConvergenceStudy:
    """Errors |E_mu(D) - E_mu(reference_D)| and the power law rate fitted on the
    largest-error level, two smallest sizes excluded.

    :param solve: full spectrum at a basis size, ritz_solve or a cached equivalent
    :raises ReferenceQualityError: some level error grows with D, the reference is not converged
    """
    d = _check_dims(dims)
    if reference_D <= int(d[-1]):
        raise ContractViolationError(
            f"reference_D={reference_D} must exceed the largest studied size {int(d[-1])}."
        )
    if not 1 <= levels <= h.matrix_dim(int(d[0])):
        raise DimensionError(
            f"{levels} levels do not fit the smallest basis of dimension {h.matrix_dim(int(d[0]))}."
        )

    reference = solve(h, reference_D).eigenvalues[:levels]
    errors = np.array([
        np.abs(solve(h, int(D)).eigenvalues[:levels] - reference) for D in d
    ])
    floor = NOISE_FLOOR * np.maximum(1.0, np.abs(reference))
    resolved = errors > floor

    for mu in range(levels):
        e = errors[resolved[:, mu], mu]
        if np.any(np.diff(e) > 0):
            raise ReferenceQualityError(
                f"Error of level {mu} grows with the basis size; "
                f"reference_D={reference_D} is not converged."
            )

    matrix_dims = np.array([h.matrix_dim(int(D)) for D in d], dtype=np.int64)
    worst = errors.max(axis=1)
    window = slice(PRE_ASYMPTOTIC, None)
    keep = worst[window] > NOISE_FLOOR * max(1.0, float(np.max(np.abs(reference))))
    alpha = r2 = intercept = math.nan
    if np.count_nonzero(keep) >= 2:
        line = fit_power_law(matrix_dims[window][keep], worst[window][keep])
        alpha, r2, intercept = -line.exponent, line.r2, line.intercept
        logger.debug("Convergence fit %s lambda=%s: alpha=%.4f r2=%.4f",
                     h.kind, h.coupling, alpha, r2)

    return ConvergenceStudy(
        model=h, dims=d, matrix_dims=matrix_dims, reference_dim=reference_D,
        errors=errors, fitted_alpha=alpha, fit_r2=r2, intercept=intercept,
    )


def variational_upper_bound_check(
    h: ModelHamiltonian, D_small: int, D_large: int, levels: int | None = None
) -> bool:
    """True iff no tracked Ritz value increases from D_small to D_large states per mode."""
    if D_small > D_large:
        raise ContractViolationError(
            f"Basis of size {D_small} is not nested in one of size {D_large}."
        )
    levels = h.matrix_dim(D_small) if levels is None else levels
    small = ritz_solve(h, D_small, levels).eigenvalues
    large = ritz_solve(h, D_large, levels).eigenvalues
    tol = UPPER_BOUND_TOL * np.maximum(1.0, np.abs(small))
    return bool(np.all(large <= small + tol))


def write_convergence(path: Path | str, study: ConvergenceStudy) -> Path:
    return write_csv(path, CONVERGENCE_HEADER, study.rows())


def write_summary(path: Path | str, studies: Sequence[ConvergenceStudy]) -> Path:
    return write_csv(path, SUMMARY_HEADER, (s.summary_row() for s in studies))
