"""Approximate spectra built from an error budget.

Energies receive independent errors dE_mu drawn from an ErrorDistribution, the initial
state coefficients errors dc_mu bounded by dE_coeff, and, on request, the eigenfunction
residual matrix R_{mu nu} = <phi_mu|dphi_nu> bounded by epsilon.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import StrEnum
from pathlib import Path

import numpy as np
from numpy.typing import ArrayLike, NDArray

from horizonlab.exceptions import ContractViolationError, DimensionError, FormatError
from horizonlab.spectral import SpectralModel, NORM_TOL_BUILD
from horizonlab.utils import column, read_csv, write_csv


PERTURBED_HEADER = (
    "mu", "energy_exact", "energy_approx", "re_c", "im_c", "re_c_approx", "im_c_approx"
)
# Shrinking attempts of the coefficient errors until renormalization keeps them in budget.
_MAX_SHRINK = 64


class ErrorKind(StrEnum):
    UNIFORM = "uniform"
    GAUSSIAN = "gaussian"
    FIXED = "fixed"
    STRATIFIED = "stratified"


@dataclass(frozen=True)
class ErrorDistribution:
    """Distribution of the energy errors dE_mu.

    :param kind: uniform in [-scale, scale], gaussian of std scale, fixed at scale, or
        stratified: uniform marginal with one draw per equal-width stratum of [-scale, scale]
    :param scale: dE_max or sigma, energy units
    :param seed: random generator seed
    """
    kind: ErrorKind
    scale: float
    seed: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, 'kind', ErrorKind(self.kind))
        if not self.scale > 0:
            raise ContractViolationError(f"Error scale must be positive, got {self.scale!r}.")

    def draw(self, dim: int, rng: np.random.Generator) -> NDArray[np.float64]:
        match self.kind:
            case ErrorKind.UNIFORM:
                return rng.uniform(-self.scale, self.scale, dim)
            case ErrorKind.GAUSSIAN:
                return rng.normal(0.0, self.scale, dim)
            case ErrorKind.FIXED:
                return np.full(dim, self.scale)
            case ErrorKind.STRATIFIED:
                edges = -1.0 + 2.0 * (np.arange(dim) + rng.uniform(size=dim)) / dim
                return self.scale * rng.permutation(edges)

    @classmethod
    def with_dispersion(cls, kind: ErrorKind | str, dE: float, seed: int = 0) -> ErrorDistribution:
        """Distribution whose standard deviation is dE; fixed errors have none and take scale dE."""
        kind = ErrorKind(kind)
        scale = math.sqrt(3.0) * dE if kind in (ErrorKind.UNIFORM, ErrorKind.STRATIFIED) else dE
        return cls(kind, scale, seed)


@dataclass(frozen=True, eq=False)
class PerturbedSpectrum:
    """Approximate energies and coefficients paired with an exact SpectralModel.

    :param residuals: R_{mu nu}, None unless sampled (diagonal propagation only)
    :param epsilon: eigenfunction error bound
    """
    energies_approx: NDArray[np.float64]
    coefficients_approx: NDArray[np.complex128]
    residuals: NDArray[np.complex128] | None
    epsilon: float
    energy_errors: NDArray[np.float64]

    @property
    def dim(self) -> int:
        return int(self.energies_approx.size)

    def check_paired(self, model: SpectralModel) -> None:
        if model.dim != self.dim:
            raise DimensionError(
                f"Perturbed spectrum of dimension {self.dim} is not paired with model of "
                f"dimension {model.dim}."
            )

    @classmethod
    def exact(cls, model: SpectralModel) -> PerturbedSpectrum:
        """Zero perturbation."""
        return cls(
            model.energies.copy(), model.coefficients.copy(), None, 0.0, np.zeros(model.dim)
        )


def _coefficient_errors(
    c: NDArray[np.complex128], budget: float, rng: np.random.Generator
) -> NDArray[np.complex128]:
    """Renormalized c + dc with max |c~ - c| <= budget."""
    if budget == 0.0:
        return c.copy()
    dim = c.size
    raw = 0.5 * budget * rng.uniform(size=dim) * np.exp(2j * np.pi * rng.uniform(size=dim))
    for _ in range(_MAX_SHRINK):
        approx = c + raw
        approx = approx / np.linalg.norm(approx)
        if np.max(np.abs(approx - c)) <= budget:
            return approx
        raw *= 0.5
    return c.copy()


def sample_perturbed(
    model: SpectralModel,
    dist: ErrorDistribution,
    dE_coeff: float = 0.0,
    epsilon: float | None = None,
    with_residuals: bool = False,
) -> PerturbedSpectrum:
    """Draw an approximate spectrum around model.

    Energy errors come first from the generator, then coefficient errors, then residuals,
    so a given seed always yields the same spectrum.

    :param dE_coeff: bound on |c~_mu - c_mu|, 0 for energy errors only
    :param epsilon: bound on |R_{mu nu}|, defaults to dE_coeff
    :param with_residuals: sample R for full mode propagation
    """
    if dE_coeff < 0:
        raise ContractViolationError("dE_coeff must be nonnegative.")
    epsilon = dE_coeff if epsilon is None else epsilon
    if epsilon < 0:
        raise ContractViolationError("epsilon must be nonnegative.")

    rng = np.random.default_rng(dist.seed)
    dE = dist.draw(model.dim, rng)
    c_approx = _coefficient_errors(model.coefficients, dE_coeff, rng)

    residuals = None
    if with_residuals:
        shape = (model.dim, model.dim)
        # Strictly inside the disc of radius epsilon.
        radius = epsilon * (1.0 - 1e-12) * rng.uniform(size=shape)
        residuals = radius * np.exp(2j * np.pi * rng.uniform(size=shape))

    return PerturbedSpectrum(
        energies_approx=model.energies + dE,
        coefficients_approx=c_approx,
        residuals=residuals,
        epsilon=float(epsilon),
        energy_errors=dE,
    )


def energy_dispersion(model: SpectralModel, pert: PerturbedSpectrum) -> float:
    """|c_mu|^2 weighted population standard deviation of dE_mu."""
    pert.check_paired(model)
    w = model.weights
    dE = pert.energies_approx - model.energies
    mean = float(np.sum(w * dE))
    return float(np.sqrt(max(0.0, np.sum(w * (dE - mean) ** 2))))


def _eigen_check(H: NDArray, phi: NDArray) -> float:
    if H.ndim != 2 or H.shape[0] != H.shape[1] or H.shape[0] != phi.size:
        raise DimensionError(f"Matrix {H.shape} and vector {phi.shape} are not compatible.")
    if abs(np.linalg.norm(phi) - 1.0) > NORM_TOL_BUILD * 1e3:
        raise ContractViolationError("phi must be normalized.")
    Hphi = H @ phi
    E = float(np.vdot(phi, Hphi).real)
    scale = max(1.0, float(np.max(np.abs(H))))
    if np.linalg.norm(Hphi - E * phi) > 1e-10 * scale:
        raise ContractViolationError("phi is not an eigenvector of H.")
    return E


def rayleigh_energy_error(H: ArrayLike, phi: ArrayLike, delta_phi: ArrayLike) -> float:
    """dE = 2 E Re<phi|dphi> + <dphi|H|dphi>, E being the eigenvalue of phi.

    Equals <phi+dphi|H|phi+dphi> - E exactly since H phi = E phi.
    """
    H = np.asarray(H, dtype=np.float64)
    phi = np.asarray(phi).reshape(-1)
    dphi = np.asarray(delta_phi).reshape(-1)
    E = _eigen_check(H, phi)
    if dphi.size != phi.size:
        raise DimensionError("delta_phi and phi lengths differ.")
    return float(2.0 * E * np.vdot(phi, dphi).real + np.vdot(dphi, H @ dphi).real)


def rayleigh_error_bound(H: ArrayLike, phi: ArrayLike, delta_phi: ArrayLike) -> float:
    """2|E| eps + eps^2 ||H||, eps = ||dphi||, ||H|| the spectral norm."""
    H = np.asarray(H, dtype=np.float64)
    phi = np.asarray(phi).reshape(-1)
    E = _eigen_check(H, phi)
    eps = float(np.linalg.norm(np.asarray(delta_phi)))
    return 2.0 * abs(E) * eps + eps ** 2 * float(np.linalg.norm(H, 2))


def write_perturbed(path: Path | str, model: SpectralModel, pert: PerturbedSpectrum) -> Path:
    pert.check_paired(model)
    return write_csv(
        path,
        PERTURBED_HEADER,
        (
            (mu, float(e), float(ea), float(c.real), float(c.imag), float(ca.real), float(ca.imag))
            for mu, (e, ea, c, ca) in enumerate(zip(
                model.energies, pert.energies_approx, model.coefficients, pert.coefficients_approx
            ))
        )
    )


def read_perturbed(path: Path | str, hbar: float = 1.0) -> tuple[SpectralModel, PerturbedSpectrum]:
    """Exact model and approximate spectrum back from write_perturbed output.

    Residuals are not stored; epsilon is set to the largest coefficient error read.
    """
    header, rows = read_csv(path, PERTURBED_HEADER)
    if not rows:
        raise FormatError(f"Perturbed spectrum file without rows: {path}")
    col = {name: np.array(column(header, rows, name)) for name in PERTURBED_HEADER}
    if np.any(np.diff(col["mu"]) <= 0):
        raise FormatError(f"Perturbed spectrum rows out of order in {path}")
    model = SpectralModel(col["energy_exact"], col["re_c"] + 1j * col["im_c"], hbar)
    c_approx = col["re_c_approx"] + 1j * col["im_c_approx"]
    return model, PerturbedSpectrum(
        energies_approx=col["energy_approx"],
        coefficients_approx=c_approx,
        residuals=None,
        epsilon=float(np.max(np.abs(c_approx - model.coefficients))),
        energy_errors=col["energy_approx"] - col["energy_exact"],
    )
