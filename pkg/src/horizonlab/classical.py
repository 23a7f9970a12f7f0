"""Classical side: divergence of nearby trajectories and the cost of predicting them.

Two exemplar maps on the cylinder (theta mod 2 pi, p):

    rotation:  theta' = theta + 2 pi rho,         p' = p
    standard:  p' = p + K sin theta,              theta' = theta + p'

Trajectory pairs run on instrumented arithmetic at n bits, separations use the torus
metric (nearest winding image in theta, plain difference in p).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, replace
from enum import StrEnum
from pathlib import Path
from typing import Any, Callable, List, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy.stats import linregress

from horizonlab.costmeter.arith import Arithmetic, arithmetic
from horizonlab.costmeter.fit import MIN_DECADES, ScalingFit, fit_scaling
from horizonlab.costmeter.ledger import CostLedger, MIN_MANTISSA
from horizonlab.exceptions import (
    ContractViolationError, DegenerateInputError, InsufficientDataError, StepSizeError
)
from horizonlab.utils import write_csv


logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
TRANSIENT = 10
SATURATION = 0.1
MIN_UNSATURATED = 2.0 / 3.0
DIVERGENCE_HEADER = ("step", "separation")
CLASSICAL_COST_HEADER = (
    "T", "dE", "n_bits", "D", "adds", "muls", "divs", "model_cost", "cost_notion"
)


class MapKind(StrEnum):
    ROTATION = "rotation"
    STANDARD = "standard"


class GrowthKind(StrEnum):
    EXPONENTIAL = "exponential"
    POLYNOMIAL = "polynomial"


class Perturbation(StrEnum):
    ANGLE = "angle"
    MOMENTUM = "momentum"


class CostNotion(StrEnum):
    MANTISSA_MODEL = "paper_model"
    MEASURED = "measured"


@dataclass(frozen=True)
class PhaseMap:
    """Map kind, its parameter (rotation number or kick strength K) and a state."""
    kind: MapKind
    parameter: float
    theta: float = 0.0
    p: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", MapKind(self.kind))
        object.__setattr__(self, "theta", float(self.theta) % TWO_PI)
        if not (math.isfinite(self.theta) and math.isfinite(self.p)):
            raise ContractViolationError("Phase map state must be finite.")

    @property
    def state(self) -> Tuple[float, float]:
        return self.theta, self.p


def step(m: PhaseMap) -> PhaseMap:
    """One iteration in double precision."""
    match m.kind:
        case MapKind.ROTATION:
            return replace(m, theta=(m.theta + TWO_PI * m.parameter) % TWO_PI)
        case MapKind.STANDARD:
            p = m.p + m.parameter * math.sin(m.theta)
            return replace(m, theta=(m.theta + p) % TWO_PI, p=p)


def jacobian(m: PhaseMap) -> NDArray[np.float64]:
    """d(theta', p') / d(theta, p) at the map's state."""
    if m.kind == MapKind.ROTATION:
        return np.eye(2)
    kc = m.parameter * math.cos(m.theta)
    return np.array([[1.0 + kc, 1.0], [kc, 1.0]])


def is_area_preserving(m: PhaseMap, tol: float = 1e-12) -> bool:
    return abs(float(np.linalg.det(jacobian(m))) - 1.0) <= tol * max(1.0, abs(m.parameter))


## Instrumented iteration
class _Stepper:
    """Map iteration on a given arithmetic backend."""
    def __init__(self, m: PhaseMap, arith: Arithmetic) -> None:
        self.kind = m.kind
        self.arith = arith
        self.two_pi = arith.mul(arith.const(2), arith.pi)
        self.parameter = arith.const(m.parameter)
        if m.kind == MapKind.ROTATION:
            self.shift = arith.mul(self.two_pi, self.parameter)

    def __call__(self, theta: Any, p: Any) -> Tuple[Any, Any]:
        a = self.arith
        if self.kind == MapKind.ROTATION:
            return a.wrap(a.add(theta, self.shift), self.two_pi), p
        p = a.add(p, a.mul(self.parameter, a.sin(theta)))
        return a.wrap(a.add(theta, p), self.two_pi), p

    def separation(self, a_state: Tuple[Any, Any], b_state: Tuple[Any, Any]) -> float:
        a = self.arith
        dtheta = a.sub(a_state[0], b_state[0])
        dtheta = a.sub(dtheta, a.mul(self.two_pi, a.nint(a.div(dtheta, self.two_pi))))
        dp = a.sub(a_state[1], b_state[1])
        return a.to_float(a.call("sqrt", a.add(a.mul(dtheta, dtheta), a.mul(dp, dp))))


def per_step_ledger(m: PhaseMap, n: int) -> CostLedger:
    """Operations of a single map iteration at n bits, setup excluded."""
    arith = arithmetic(n)
    stepper = _Stepper(m, arith)
    arith.ledger = CostLedger(n)
    stepper(arith.const(m.theta), arith.const(m.p))
    return arith.ledger


@dataclass(frozen=True, eq=False)
class DivergenceSeries:
    """Separation of a trajectory pair and the growth law fitted before saturation.

    rate is the Lyapunov exponent for exponential fits and the degree for polynomial ones.
    """
    steps: NDArray[np.int64]
    separation: NDArray[np.float64]
    fit_kind: GrowthKind
    rate: float
    r2: float
    intercept: float
    window: Tuple[int, int]
    thetas: NDArray[np.float64]
    perturb: Perturbation

    def log2_growth(self, T: float) -> float:
        """log2 f(T) under the fitted law, f(T) = e^(rate T) or T^rate, at least 0."""
        if self.fit_kind == GrowthKind.EXPONENTIAL:
            return max(0.0, self.rate * T / math.log(2.0))
        return max(0.0, self.rate * math.log2(T))


def _fit(x: NDArray, y: NDArray) -> Tuple[float, float, float]:
    res = linregress(x, y)
    return float(res.slope), float(res.intercept), float(res.rvalue ** 2)


def divergence_growth(
    m: PhaseMap,
    delta0: float,
    steps: int,
    n: int,
    perturb: Perturbation | str = Perturbation.ANGLE,
) -> DivergenceSeries:
    """Evolve m and a copy displaced by delta0, record separations, fit growth.

    The fit skips the first TRANSIENT steps and stops at the first separation reaching
    SATURATION. Exponential is log-linear, polynomial log-log; the higher r2 wins and
    ties go to polynomial.

    :raises DegenerateInputError: delta0 == 0
    :raises StepSizeError: saturation within the first 2/3 of the run, or a displacement
        below the resolution of n bits
    """
    perturb = Perturbation(perturb)
    if delta0 == 0:
        raise DegenerateInputError("Zero initial displacement: separation is identically 0.")
    if delta0 < 0:
        raise ContractViolationError(f"delta0 must be positive, got {delta0!r}.")
    if steps < TRANSIENT + 3:
        raise InsufficientDataError(f"At least {TRANSIENT + 3} steps are needed, got {steps}.")

    arith = arithmetic(n)
    stepper = _Stepper(m, arith)
    a = (arith.const(m.theta), arith.const(m.p))
    d = arith.const(delta0)
    b = (arith.add(a[0], d), a[1]) if perturb == Perturbation.ANGLE else (a[0], arith.add(a[1], d))

    separation = np.empty(steps + 1)
    thetas = np.empty(steps + 1)
    for t in range(steps + 1):
        if t:
            a, b = stepper(*a), stepper(*b)
        separation[t] = stepper.separation(a, b)
        thetas[t] = arith.to_float(a[0])
    if np.any(separation <= 0):
        raise StepSizeError(
            f"delta0={delta0!r} is below the resolution of {n} bits; raise n."
        )

    saturated = np.flatnonzero(separation >= SATURATION)
    stop = int(saturated[0]) if saturated.size else steps + 1
    if stop < MIN_UNSATURATED * steps:
        raise StepSizeError(
            f"Separation saturates at step {stop} of {steps}; use a smaller delta0 or a higher n."
        )
    t = np.arange(TRANSIENT, stop)
    if t.size < 3:
        raise StepSizeError("Too few unsaturated steps to fit a growth law.")
    log_sep = np.log(separation[TRANSIENT:stop])

    # Constant up to rounding at n bits.
    resolution = 1024 * 2.0 ** -n * TWO_PI * (1.0 + abs(m.p))
    if np.ptp(separation[TRANSIENT:stop]) <= resolution + 1e-9 * float(np.mean(separation)):
        kind, rate, intercept, r2 = GrowthKind.POLYNOMIAL, 0.0, float(log_sep[0]), 1.0
    else:
        lam, b_exp, r2_exp = _fit(t.astype(float), log_sep)
        deg, b_pol, r2_pol = _fit(np.log(t), log_sep)
        if r2_exp > r2_pol:
            kind, rate, intercept, r2 = GrowthKind.EXPONENTIAL, lam, b_exp, r2_exp
        else:
            kind, rate, intercept, r2 = GrowthKind.POLYNOMIAL, deg, b_pol, r2_pol
    logger.debug("%s K=%s: %s growth, rate %.4f, r2 %.4f over steps [%d, %d)",
                 m.kind, m.parameter, kind, rate, r2, TRANSIENT, stop)

    return DivergenceSeries(
        steps=np.arange(steps + 1), separation=separation, fit_kind=kind, rate=rate, r2=r2,
        intercept=intercept, window=(TRANSIENT, stop), thetas=thetas, perturb=perturb,
    )


def tangent_lyapunov(m: PhaseMap, series: DivergenceSeries) -> float:
    """Growth rate of a tangent vector along the recorded trajectory over the fit window.

    The tangent vector starts along the displaced coordinate and is renormalized every step.
    """
    start, stop = series.window
    v = np.array([1.0, 0.0]) if series.perturb == Perturbation.ANGLE else np.array([0.0, 1.0])
    log_growth = 0.0
    for t in range(stop - 1):
        v = jacobian(replace(m, theta=series.thetas[t])) @ v
        norm = float(np.linalg.norm(v))
        if t >= start:
            log_growth += math.log(norm)
        v /= norm
    return log_growth / max(1, stop - 1 - start)


def required_mantissa(fT: float, delta: float) -> float:
    """n = log2 f(T) - log2 delta, floored at 8 bits."""
    if not fT >= 1:
        raise ContractViolationError(f"f(T) must be at least 1, got {fT!r}.")
    return required_mantissa_log2(math.log2(fT), delta)


def required_mantissa_log2(log2_fT: float, delta: float) -> float:
    """required_mantissa from log2 f(T), for growth factors beyond float range."""
    if not delta > 0:
        raise ContractViolationError(f"delta must be positive, got {delta!r}.")
    return max(float(MIN_MANTISSA), log2_fT - math.log2(delta))


@dataclass(frozen=True)
class ClassicalCostPoint:
    T: float
    n_bits: float
    steps: int
    delta: float
    mantissa_cost: float
    measured: CostLedger

    def rows(self) -> List[tuple]:
        dE = 2.0 ** -self.n_bits
        lg = self.measured
        return [
            (self.T, dE, self.n_bits, self.steps, 0, 0, 0, self.mantissa_cost,
             CostNotion.MANTISSA_MODEL.value),
            (self.T, dE, lg.mantissa_bits, self.steps, lg.adds, lg.muls, lg.divs,
             lg.model_cost, CostNotion.MEASURED.value),
        ]


@dataclass(frozen=True)
class ClassicalCostCurve:
    mantissa_model: ScalingFit
    measured: ScalingFit
    points: Tuple[ClassicalCostPoint, ...]

    def rows(self) -> List[tuple]:
        return [row for point in self.points for row in point.rows()]


def classical_cost_curve(
    m: PhaseMap,
    T_values: ArrayLike,
    delta: float = 1.0,
    alpha_model: float = 2.0,
    growth: DivergenceSeries | Callable[[float], float] | None = None,
    delta0: float = 1e-100,
    steps: int = 200,
    n: int = 512,
) -> ClassicalCostCurve:
    """Prediction cost to each T under two notions, each fitted and classified.

    mantissa_model: n(T)^alpha_model with n(T) = required_mantissa(f(T), delta).
    measured: T iterations of the instrumented map at ceil(n(T)) bits.

    :param growth: fitted divergence of m, or any T -> log2 f(T); measured from m when None
    """
    T = np.asarray(T_values, dtype=np.float64).reshape(-1)
    if np.any(T < 1):
        raise ContractViolationError("Prediction times must be at least 1.")
    if T.size < 3 or math.log10(T.max() / T.min()) < MIN_DECADES - 1e-9:
        raise InsufficientDataError(
            f"Prediction times must span {MIN_DECADES} decades over at least three points."
        )
    if growth is None:
        growth = divergence_growth(m, delta0, steps, n)
    log2_growth = growth.log2_growth if isinstance(growth, DivergenceSeries) else growth

    points = []
    for t in T:
        n_T = required_mantissa_log2(log2_growth(float(t)), delta)
        iterations = math.ceil(float(t))
        measured = per_step_ledger(m, math.ceil(n_T)).scaled(iterations)
        measured.check()
        points.append(ClassicalCostPoint(
            T=float(t), n_bits=n_T, steps=iterations, delta=delta,
            mantissa_cost=n_T ** alpha_model, measured=measured,
        ))
    curve = ClassicalCostCurve(
        mantissa_model=fit_scaling(T, [p.mantissa_cost for p in points]),
        measured=fit_scaling(T, [p.measured.model_cost for p in points]),
        points=tuple(points),
    )
    logger.info("%s map cost: mantissa model %s, measured %s",
                m.kind, curve.mantissa_model.classification, curve.measured.classification)
    return curve


def write_divergence(path: Path | str, series: DivergenceSeries) -> Path:
    return write_csv(path, DIVERGENCE_HEADER, zip(series.steps.tolist(), series.separation.tolist()))


def write_classical_cost(path: Path | str, curve: ClassicalCostCurve) -> Path:
    return write_csv(path, CLASSICAL_COST_HEADER, curve.rows())
