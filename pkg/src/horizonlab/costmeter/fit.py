"""Least squares scaling laws and the compressible / incompressible verdict.

Both candidate forms are straight lines on suitable axes:

    power_law:  ln y = ln a + p ln x              (y = a x^p)
    poly_log:   ln y = ln a + q ln log2 x         (y = a (log2 x)^q)
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import StrEnum
from typing import Callable, Dict

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.stats import linregress

from horizonlab.exceptions import ContractViolationError, DimensionError, InsufficientDataError


logger = logging.getLogger(__name__)

MIN_DECADES = 3.0
R2_MARGIN = 0.02
MIN_EXPONENT = 0.1
FIT_HEADER = ("system", "model_kind", "exponent", "r2", "classification")


class ModelKind(StrEnum):
    POWER_LAW = "power_law"
    POLY_LOG = "poly_log"


class Classification(StrEnum):
    COMPRESSIBLE = "compressible"
    INCOMPRESSIBLE = "incompressible"
    AMBIGUOUS = "ambiguous"


VERDICT = {
    ModelKind.POWER_LAW: Classification.INCOMPRESSIBLE,
    ModelKind.POLY_LOG: Classification.COMPRESSIBLE,
}

AXES: Dict[ModelKind, Callable[[NDArray], NDArray]] = {
    ModelKind.POWER_LAW: np.log,
    ModelKind.POLY_LOG: lambda x: np.log(np.log2(x)),
}


@dataclass(frozen=True)
class FitLine:
    kind: ModelKind
    exponent: float
    intercept: float
    r2: float

    def predict(self, x: ArrayLike) -> NDArray[np.float64]:
        return np.exp(self.intercept + self.exponent * AXES[self.kind](np.asarray(x, float)))


@dataclass(frozen=True, eq=False)
class ScalingFit:
    xs: NDArray[np.float64]
    ys: NDArray[np.float64]
    model_kind: ModelKind
    exponent: float
    r2: float
    classification: Classification
    power_law: FitLine
    poly_log: FitLine

    def rows(self, system: str):
        """Fit summary rows, the selected model first."""
        chosen = self.power_law if self.model_kind == ModelKind.POWER_LAW else self.poly_log
        other = self.poly_log if chosen is self.power_law else self.power_law
        return [
            (system, line.kind.value, line.exponent, line.r2, self.classification.value)
            for line in (chosen, other)
        ]


def _positive(xs: ArrayLike, ys: ArrayLike) -> tuple[NDArray, NDArray]:
    x = np.asarray(xs, dtype=np.float64).reshape(-1)
    y = np.asarray(ys, dtype=np.float64).reshape(-1)
    if x.size != y.size:
        raise DimensionError(f"{x.size} abscissae for {y.size} values.")
    if x.size < 2:
        raise InsufficientDataError("A fit needs at least two points.")
    if not (np.all(x > 0) and np.all(y > 0)):
        raise ContractViolationError("Scaling fits require positive data.")
    return x, y


def _line(kind: ModelKind, u: NDArray, v: NDArray) -> FitLine:
    if np.ptp(v) == 0.0:
        # Flat data: no dependence, nothing explained.
        return FitLine(kind, 0.0, float(v[0]), 0.0)
    if np.ptp(u) == 0.0:
        raise InsufficientDataError("All abscissae coincide.")
    res = linregress(u, v)
    return FitLine(kind, float(res.slope), float(res.intercept), float(res.rvalue ** 2))


def fit_power_law(xs: ArrayLike, ys: ArrayLike) -> FitLine:
    """y = a x^p by least squares on log-log axes."""
    x, y = _positive(xs, ys)
    return _line(ModelKind.POWER_LAW, np.log(x), np.log(y))


def fit_poly_log(xs: ArrayLike, ys: ArrayLike) -> FitLine:
    """y = a (log2 x)^q by least squares on log-loglog axes, requires x > 1."""
    x, y = _positive(xs, ys)
    if not np.all(x > 1):
        raise ContractViolationError("Poly-logarithmic fits require abscissae above 1.")
    return _line(ModelKind.POLY_LOG, np.log(np.log2(x)), np.log(y))


def classify(power_law: FitLine, poly_log: FitLine) -> tuple[FitLine, Classification]:
    """Higher r2 wins; ambiguous on a near tie or a vanishing winning exponent."""
    best = poly_log if poly_log.r2 > power_law.r2 else power_law
    if abs(power_law.r2 - poly_log.r2) < R2_MARGIN or best.exponent < MIN_EXPONENT:
        return best, Classification.AMBIGUOUS
    return best, VERDICT[best.kind]


def fit_scaling(xs: ArrayLike, ys: ArrayLike, min_decades: float = MIN_DECADES) -> ScalingFit:
    """Fit both model kinds to a cost curve and classify it.

    :raises InsufficientDataError: fewer than three points or xs spanning less than min_decades
    """
    x, y = _positive(xs, ys)
    if x.size < 3:
        raise InsufficientDataError(f"Scaling fit needs at least three points, got {x.size}.")
    span = math.log10(float(x.max()) / float(x.min()))
    if span < min_decades - 1e-9:
        raise InsufficientDataError(
            f"Abscissae span {span:.2f} decades, at least {min_decades} required."
        )
    pl, lg = fit_power_law(x, y), fit_poly_log(x, y)
    best, verdict = classify(pl, lg)
    logger.debug(
        "Scaling fit: power_law p=%.4f r2=%.4f, poly_log q=%.4f r2=%.4f -> %s",
        pl.exponent, pl.r2, lg.exponent, lg.r2, verdict,
    )
    return ScalingFit(
        xs=x, ys=y, model_kind=best.kind, exponent=best.exponent, r2=best.r2,
        classification=verdict, power_law=pl, poly_log=lg,
    )
