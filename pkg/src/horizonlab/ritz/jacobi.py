"""Cyclic Jacobi eigensolver for real symmetric matrices.

Sweeps visit (p, q) in row order, p < q, and annihilate a[p, q] with the symmetric
Schur rotation J = [[c, s], [-s, c]]. The rotation order is fixed so results and
operation counts are reproducible.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Dict

import numpy as np
from numpy.typing import ArrayLike, NDArray

from horizonlab import config
from horizonlab.costmeter.ledger import CostLedger
from horizonlab.exceptions import (
    CapacityError, ContractViolationError, ConvergenceFailureError, DimensionError
)


logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12
# Rotations on elements this small relative to their diagonal pair change nothing.
_SKIP = 1e-17


@dataclass(frozen=True, eq=False)
class Eigensystem:
    values: NDArray[np.float64]
    vectors: NDArray[np.float64]
    sweeps: int
    rotations: int


def rotation_charge(m: int) -> Dict[str, int]:
    """Operations of one rotation on an m x m matrix and its accumulated eigenvectors."""
    return {"adds": 6 * m + 4, "muls": 12 * m + 4, "divs": 3, "evals": 2}


def off_norm_charge(m: int) -> Dict[str, int]:
    """Operations of one convergence test."""
    return {"adds": m * m, "muls": m * m}


def charge_solve(ledger: CostLedger, m: int, sweeps: int, rotations: int) -> None:
    """Book a solve of `sweeps` full sweeps and `rotations` rotations."""
    if m < 2:
        return
    rot, chk = rotation_charge(m), off_norm_charge(m)
    ledger.charge(**{k: v * rotations for k, v in rot.items()})
    ledger.charge(**{k: v * (sweeps + 1) for k, v in chk.items()})


def _off_norm(a: NDArray[np.float64]) -> float:
    return float(np.linalg.norm(a - np.diag(np.diag(a))))


def _as_symmetric(matrix: ArrayLike) -> NDArray[np.float64]:
    a = np.array(matrix, dtype=np.float64, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise DimensionError(f"Expected a non empty square matrix, got shape {a.shape}.")
    if a.shape[0] > config.MAX_MATRIX_DIM:
        raise CapacityError(
            f"Matrix of dimension {a.shape[0]} exceeds MAX_MATRIX_DIM={config.MAX_MATRIX_DIM}."
        )
    scale = max(1.0, float(np.max(np.abs(a))))
    if float(np.max(np.abs(a - a.T))) > SYMMETRY_TOL * scale:
        raise ContractViolationError("Jacobi eigensolve requires a symmetric matrix.")
    return a


def eigensolve(
    matrix: ArrayLike,
    ledger: CostLedger | None = None,
    tol: float | None = None,
    max_sweeps: int | None = None,
) -> Eigensystem:
    """Ascending eigenvalues and orthonormal eigenvectors (columns) of a symmetric matrix.

    Stops once the off-diagonal Frobenius norm is below tol * ||matrix||_F.

    :raises ConvergenceFailureError: still above tolerance after max_sweeps sweeps
    """
    tol = config.JACOBI_TOL if tol is None else tol
    max_sweeps = config.JACOBI_MAX_SWEEPS if max_sweeps is None else max_sweeps
    a = _as_symmetric(matrix)
    m = a.shape[0]
    v = np.eye(m)
    target = tol * float(np.linalg.norm(a))
    rotations = sweeps = 0

    if m > 1:
        while _off_norm(a) > target:
            if sweeps == max_sweeps:
                raise ConvergenceFailureError(
                    f"Jacobi did not converge in {max_sweeps} sweeps "
                    f"(off-diagonal norm {_off_norm(a):.3e}, target {target:.3e})."
                )
            for p in range(m - 1):
                for q in range(p + 1, m):
                    apq = a[p, q]
                    if abs(apq) <= _SKIP * (abs(a[p, p]) + abs(a[q, q])):
                        continue
                    tau = (a[q, q] - a[p, p]) / (2.0 * apq)
                    t = math.copysign(1.0, tau) / (abs(tau) + math.sqrt(1.0 + tau * tau))
                    c = 1.0 / math.sqrt(1.0 + t * t)
                    s = t * c

                    cp, cq = a[:, p].copy(), a[:, q].copy()
                    a[:, p] = c * cp - s * cq
                    a[:, q] = s * cp + c * cq
                    rp, rq = a[p, :].copy(), a[q, :].copy()
                    a[p, :] = c * rp - s * rq
                    a[q, :] = s * rp + c * rq
                    a[p, q] = a[q, p] = 0.0

                    vp, vq = v[:, p].copy(), v[:, q].copy()
                    v[:, p] = c * vp - s * vq
                    v[:, q] = s * vp + c * vq
                    rotations += 1
            sweeps += 1
        logger.debug("Jacobi m=%d converged: %d sweeps, %d rotations.", m, sweeps, rotations)

    if ledger is not None:
        charge_solve(ledger, m, sweeps, rotations)

    d = np.diag(a)
    order = np.argsort(d, kind="stable")
    return Eigensystem(values=d[order].copy(), vectors=v[:, order].copy(),
                       sweeps=sweeps, rotations=rotations)
