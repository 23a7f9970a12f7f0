"""Exact and approximate propagation by spectral sums, overlap and deviation series.

Phases are evaluated as exp(-i E T / hbar) from scratch at every sample, never by
incremental multiplication.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from pathlib import Path
from typing import Iterator

import numpy as np
from numpy.typing import ArrayLike, NDArray

from horizonlab import config
from horizonlab.exceptions import ContractViolationError, DimensionError
from horizonlab.perturbation import PerturbedSpectrum
from horizonlab.spectral import (
    SpectralModel, WaveState, NORM_TOL_OP, participation_ratio
)
from horizonlab.utils import write_csv


SERIES_HEADER = ("time", "overlap_re", "overlap_im", "deviation")
# Spread of energy errors left by rounding E + dE - E.
_SAME_FREQUENCY = 8 * np.finfo(np.float64).eps


class PropagationMode(StrEnum):
    DIAGONAL = "diagonal"
    FULL = "full"


@dataclass(frozen=True, eq=False)
class OverlapSeries:
    """<psi(T)|psi~(T)> and ||dpsi(T)|| sampled on a time grid.

    :param dim: participation ratio of the initial state, the number of terms that matter
    :param single_frequency: all energy errors are equal, the overlap is a single cosine
    """
    times: NDArray[np.float64]
    overlap_re: NDArray[np.float64]
    overlap_im: NDArray[np.float64]
    deviation: NDArray[np.float64]
    dim: float
    single_frequency: bool = False

    def __len__(self) -> int:
        return int(self.times.size)

    @property
    def overlap(self) -> NDArray[np.complex128]:
        return self.overlap_re + 1j * self.overlap_im


def linear_grid(t_max: float, count: int, t_min: float = 0.0) -> NDArray[np.float64]:
    if count < 2 or not t_max > t_min:
        raise DimensionError("A linear grid needs t_max > t_min and at least two samples.")
    return np.linspace(t_min, t_max, count)


def log_grid(t_min: float, t_max: float, count: int) -> NDArray[np.float64]:
    if count < 2 or not 0 < t_min < t_max:
        raise DimensionError("A log grid needs 0 < t_min < t_max and at least two samples.")
    return np.geomspace(t_min, t_max, count)


def _times(times: ArrayLike) -> NDArray[np.float64]:
    t = np.asarray(times, dtype=np.float64).reshape(-1)
    if t.size == 0:
        raise DimensionError("Empty time grid.")
    if np.any(np.diff(t) <= 0):
        raise ContractViolationError("Time grid must be strictly increasing.")
    return t


def _chunks(t: NDArray[np.float64]) -> Iterator[NDArray[np.float64]]:
    step = max(1, config.SERIES_CHUNK)
    for k in range(0, t.size, step):
        yield t[k:k + step]


def phases(energies: NDArray[np.float64], T: float | NDArray, hbar: float) -> NDArray:
    """exp(-i E T / hbar), broadcast over times on the first axis."""
    T = np.asarray(T, dtype=np.float64)
    return np.exp(-1j * np.multiply.outer(T, energies) / hbar)


def evolve_exact(model: SpectralModel, T: float) -> WaveState:
    """psi(T) = sum_mu c_mu exp(-i E_mu T / hbar) phi_mu."""
    return WaveState(model.coefficients * phases(model.energies, T, model.hbar), float(T))


def _full_amplitudes(
    pert: PerturbedSpectrum, hbar: float, T: NDArray[np.float64]
) -> NDArray[np.complex128]:
    """Approximate amplitudes in the exact basis: (1 + R) c~ exp(-i E~ T / hbar), normalized."""
    raw = pert.coefficients_approx * phases(pert.energies_approx, T, hbar)
    mixed = raw + raw @ pert.residuals.T
    norms = np.linalg.norm(mixed, axis=-1, keepdims=True)
    return mixed / norms


def evolve_approx(
    pert: PerturbedSpectrum,
    model: SpectralModel,
    T: float,
    mode: PropagationMode | str = PropagationMode.DIAGONAL,
) -> WaveState:
    """psi~(T) = sum_nu c~_nu exp(-i E~_nu T / hbar) phi~_nu, written in the exact basis.

    Diagonal mode identifies phi~ with phi and does not renormalize. Full mode mixes through
    (delta + R), then rescales the result to unit norm.
    """
    pert.check_paired(model)
    match PropagationMode(mode):
        case PropagationMode.DIAGONAL:
            amps = pert.coefficients_approx * phases(pert.energies_approx, T, model.hbar)
        case PropagationMode.FULL:
            if pert.residuals is None:
                raise ContractViolationError("Full mode requires sampled residuals.")
            amps = _full_amplitudes(pert, model.hbar, np.asarray(T, dtype=np.float64))
    return WaveState(amps, float(T))


def overlap_series(
    model: SpectralModel,
    pert: PerturbedSpectrum,
    times: ArrayLike,
    mode: PropagationMode | str = PropagationMode.DIAGONAL,
) -> OverlapSeries:
    """Sample <psi(T)|psi~(T)> and fill ||dpsi(T)|| = sqrt(2 (1 - Re overlap)).

    Diagonal mode sums c*_mu c~_mu exp(-i dE_mu T / hbar) directly on the energy errors, so
    that the common phases cancel before evaluation.
    """
    pert.check_paired(model)
    t = _times(times)
    mode = PropagationMode(mode)
    if mode is PropagationMode.FULL and pert.residuals is None:
        raise ContractViolationError("Full mode requires sampled residuals.")

    dE = pert.energies_approx - model.energies
    weights = np.conj(model.coefficients) * pert.coefficients_approx
    out = np.empty(t.size, dtype=np.complex128)
    k = 0
    for block in _chunks(t):
        match mode:
            case PropagationMode.DIAGONAL:
                values = phases(dE, block, model.hbar) @ weights
            case PropagationMode.FULL:
                exact = model.coefficients * phases(model.energies, block, model.hbar)
                approx = _full_amplitudes(pert, model.hbar, block)
                values = np.sum(np.conj(exact) * approx, axis=-1)
        out[k:k + block.size] = values
        k += block.size

    deviation = np.sqrt(np.clip(2.0 * (1.0 - out.real), 0.0, 4.0))
    same = _SAME_FREQUENCY * max(1.0, float(np.max(np.abs(model.energies))))
    return OverlapSeries(
        times=t,
        overlap_re=out.real.copy(),
        overlap_im=out.imag.copy(),
        deviation=deviation,
        dim=participation_ratio(model.coefficients),
        single_frequency=bool(np.ptp(dE) <= same),
    )


def mode_difference(model: SpectralModel, pert: PerturbedSpectrum, times: ArrayLike) -> float:
    """max_k |full - diagonal| overlap: the measured size of the off-diagonal sum."""
    diag = overlap_series(model, pert, times, PropagationMode.DIAGONAL)
    full = overlap_series(model, pert, times, PropagationMode.FULL)
    return float(np.max(np.abs(full.overlap - diag.overlap)))


def unitarity_check(
    model: SpectralModel, state_a: WaveState, state_b: WaveState, times: ArrayLike
) -> float:
    """Evolve two states under the exact spectrum, return max_k |<A(t_k)|B(t_k)> - <A|B>|."""
    if state_a.dim != model.dim or state_b.dim != model.dim:
        raise DimensionError("States and model dimensions differ.")
    for s in (state_a, state_b):
        if not s.is_normalized(NORM_TOL_OP):
            raise ContractViolationError(f"unitarity_check expects normalized states, got {s.norm!r}.")
    a, b = state_a.amplitudes, state_b.amplitudes
    reference = np.vdot(a, b)
    t = np.asarray(times, dtype=np.float64).reshape(-1)
    drift = 0.0
    for block in _chunks(t):
        ph = phases(model.energies, block, model.hbar)
        at, bt = a * ph, b * ph
        values = np.sum(np.conj(at) * bt, axis=-1)
        drift = max(drift, float(np.max(np.abs(values - reference))))
    return drift


def write_series(path: Path | str, series: OverlapSeries) -> Path:
    return write_csv(
        path,
        SERIES_HEADER,
        zip(series.times, series.overlap_re, series.overlap_im, series.deviation),
    )
