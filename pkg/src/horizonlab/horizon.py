"""Prediction horizon T_p and residual amplitude of the overlap.

Theory: T_p ~ pi hbar / dE and A ~ 1 / sqrt(2 dim). The empirical counterparts are read
off an OverlapSeries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Sequence

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view
from numpy.typing import ArrayLike, NDArray

from horizonlab.evolution import OverlapSeries
from horizonlab.exceptions import (
    ContractViolationError, DimensionError, DivisionDomainError, InsufficientDataError
)
from horizonlab.perturbation import PerturbedSpectrum, energy_dispersion
from horizonlab.spectral import SpectralModel
from horizonlab.utils import write_csv


HORIZON_NOT_REACHED = math.inf
DEFAULT_THRESHOLD = 0.1
DEFAULT_WINDOW = 16
MIN_TAIL_SAMPLES = 100
REPORT_HEADER = (
    "dim", "dE", "threshold", "tp_theory", "tp_empirical", "amp_theory", "amp_empirical"
)


@dataclass(frozen=True)
class HorizonReport:
    t_p_theory: float
    t_p_empirical: float
    amplitude_theory: float
    amplitude_empirical: float
    threshold: float
    dim: int
    dE: float

    def row(self) -> tuple:
        return (
            self.dim, self.dE, self.threshold, self.t_p_theory, self.t_p_empirical,
            self.amplitude_theory, self.amplitude_empirical
        )


def predict_horizon_theory(dE: float, hbar: float = 1.0) -> float:
    """T_p = pi hbar / dE."""
    if dE < 0:
        raise ContractViolationError(f"dE must be nonnegative, got {dE!r}.")
    if dE == 0:
        raise DivisionDomainError("Zero energy error dispersion: the horizon is infinite.",
                                  value=HORIZON_NOT_REACHED)
    return math.pi * hbar / dE


def amplitude_theory(dim: float) -> float:
    """1 / sqrt(2 dim)."""
    if dim < 1:
        raise DimensionError(f"dim must be at least 1, got {dim!r}.")
    return 1.0 / math.sqrt(2.0 * dim)


def cosine_model(deltaE: ArrayLike, hbar: float, T: float | ArrayLike) -> float | NDArray:
    """P(T) = (1/dim) sum_mu cos(dE_mu T / hbar)."""
    dE = np.asarray(deltaE, dtype=np.float64).reshape(-1)
    if dE.size == 0:
        raise DimensionError("cosine_model needs at least one term.")
    values = np.mean(np.cos(np.multiply.outer(np.asarray(T, dtype=np.float64), dE) / hbar),
                     axis=-1)
    return float(values) if np.ndim(values) == 0 else values


def detect_horizon(
    series: OverlapSeries,
    threshold: float = DEFAULT_THRESHOLD,
    window: int = DEFAULT_WINDOW,
    sustain: bool | None = None,
) -> float:
    """First time the real overlap falls below threshold and stays below 3 A(dim)
    over the next `window` samples.

    The crossing time is linearly interpolated when the previous sample was above
    threshold. The confirmation window is skipped for single frequency series, whose
    first crossing is already final; pass sustain to force either behaviour.

    :return: crossing time, or HORIZON_NOT_REACHED
    """
    if not 0 < threshold < 1:
        raise ContractViolationError(f"threshold must lie in (0, 1), got {threshold!r}.")
    if sustain is None:
        sustain = not series.single_frequency
    re, t = series.overlap_re, series.times
    if sustain and len(series) <= window:
        raise InsufficientDataError(
            f"Series of {len(series)} samples is too short for a window of {window}."
        )

    below = re < threshold
    if sustain:
        limit = 3.0 * amplitude_theory(max(1.0, series.dim))
        confirmed = np.zeros(re.size, dtype=bool)
        # confirmed[k]: samples k+1 .. k+window all below limit.
        confirmed[:re.size - window] = sliding_window_view(re[1:], window).max(axis=1) < limit
        below &= confirmed

    hits = np.flatnonzero(below)
    if hits.size == 0:
        return HORIZON_NOT_REACHED
    k = int(hits[0])
    if k > 0 and re[k - 1] >= threshold:
        frac = (re[k - 1] - threshold) / (re[k - 1] - re[k])
        return float(t[k - 1] + frac * (t[k] - t[k - 1]))
    return float(t[k])


def measure_amplitude(series: OverlapSeries, t_min: float) -> float:
    """RMS of the real overlap over samples with time >= t_min."""
    tail = series.overlap_re[series.times >= t_min]
    if tail.size < MIN_TAIL_SAMPLES:
        raise InsufficientDataError(
            f"Only {tail.size} samples past t_min={t_min!r}, {MIN_TAIL_SAMPLES} required."
        )
    return float(np.sqrt(np.mean(tail ** 2)))


def build_report(
    model: SpectralModel,
    pert: PerturbedSpectrum,
    series: OverlapSeries,
    threshold: float = DEFAULT_THRESHOLD,
    window: int = DEFAULT_WINDOW,
    tail_factor: float | None = None,
) -> HorizonReport:
    """Theory vs measurement for one (model, perturbation) pair.

    :param tail_factor: amplitude measured past tail_factor * T_p theory, skipped if None
    """
    dE = energy_dispersion(model, pert)
    try:
        tp = predict_horizon_theory(dE, model.hbar)
    except DivisionDomainError as e:
        tp = e.value
    amp = math.nan
    if tail_factor is not None and math.isfinite(tp):
        amp = measure_amplitude(series, tail_factor * tp)
    return HorizonReport(
        t_p_theory=tp,
        t_p_empirical=detect_horizon(series, threshold, window),
        amplitude_theory=amplitude_theory(model.dim),
        amplitude_empirical=amp,
        threshold=threshold,
        dim=model.dim,
        dE=dE,
    )


def dispersion_sensitivity(model: SpectralModel, pert: PerturbedSpectrum) -> Dict[str, float]:
    """T_p theory under three readings of the error dispersion dE.

    std: weighted standard deviation, halfwidth: largest deviation from the weighted mean,
    mad: weighted mean absolute deviation.
    """
    pert.check_paired(model)
    w = model.weights
    dE = pert.energies_approx - model.energies
    centered = dE - float(np.sum(w * dE))
    readings = {
        "std": energy_dispersion(model, pert),
        "halfwidth": float(np.max(np.abs(centered))),
        "mad": float(np.sum(w * np.abs(centered))),
    }
    out = {}
    for name, value in readings.items():
        try:
            out[name] = predict_horizon_theory(value, model.hbar)
        except DivisionDomainError as e:
            out[name] = e.value
    return out


def write_reports(path: Path | str, reports: Sequence[HorizonReport]) -> Path:
    return write_csv(path, REPORT_HEADER, (r.row() for r in reports))

