"""States and spectra in the exact eigenbasis.

A state is the vector of its coefficients on the exact eigenfunctions, which never
materialize. Every quantity computed downstream only needs energies, coefficients and
overlap residuals.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from numpy.typing import ArrayLike, NDArray

from horizonlab.exceptions import (
    ContractViolationError, DegenerateInputError, DimensionError, FormatError
)
from horizonlab.utils import write_csv, read_csv
from horizonlab.utils.csvio import column


NORM_TOL_BUILD = 1e-12
NORM_TOL_OP = 1e-9
SPECTRUM_HEADER = ("mu", "energy", "re_c", "im_c")


def _frozen(a: ArrayLike, dtype) -> NDArray:
    arr = np.array(a, dtype=dtype).reshape(-1)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class SpectralModel:
    """Exact eigenenergies, expansion coefficients of the initial state and hbar.

    :param energies: E_mu, energy units
    :param coefficients: c_mu = <phi_mu|psi_0>
    :param hbar: action units, positive
    """
    energies: NDArray[np.float64]
    coefficients: NDArray[np.complex128]
    hbar: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, 'energies', _frozen(self.energies, np.float64))
        object.__setattr__(self, 'coefficients', _frozen(self.coefficients, np.complex128))
        if self.energies.size == 0:
            raise DimensionError("SpectralModel requires at least one retained term.")
        if self.energies.size != self.coefficients.size:
            raise DimensionError(
                f"{self.energies.size} energies for {self.coefficients.size} coefficients."
            )
        if not np.all(np.isfinite(self.energies)):
            raise ContractViolationError("Energies must be finite.")
        if not self.hbar > 0:
            raise ContractViolationError("hbar must be positive.")
        norm2 = float(np.sum(np.abs(self.coefficients) ** 2))
        if abs(norm2 - 1.0) > NORM_TOL_BUILD:
            raise ContractViolationError(
                f"Initial state is not normalized: sum |c|^2 = {norm2!r}."
            )

    @property
    def dim(self) -> int:
        return int(self.energies.size)

    @property
    def weights(self) -> NDArray[np.float64]:
        """|c_mu|^2."""
        return np.abs(self.coefficients) ** 2

    def initial_state(self) -> WaveState:
        return WaveState(self.coefficients, 0.0)

    @classmethod
    def equal(cls, energies: ArrayLike, hbar: float = 1.0) -> SpectralModel:
        """Initial state with all c_mu equal to 1/sqrt(dim)."""
        energies = np.asarray(energies, dtype=np.float64).reshape(-1)
        dim = energies.size
        if dim == 0:
            raise DimensionError("dim must be at least 1.")
        return cls(energies, np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128), hbar)

    @classmethod
    def random(
        cls,
        dim: int,
        seed: int,
        energy_span: float = 1.0,
        hbar: float = 1.0,
        equal_weights: bool = False,
    ) -> SpectralModel:
        """Sorted uniform energies in [0, energy_span] and a random normalized state.

        With equal_weights, coefficients are 1/sqrt(dim) times random phases.
        """
        if dim < 1:
            raise DimensionError("dim must be at least 1.")
        rng = np.random.default_rng(seed)
        energies = np.sort(rng.uniform(0.0, energy_span, dim))
        if equal_weights:
            c = np.exp(2j * np.pi * rng.uniform(size=dim)) / np.sqrt(dim)
        else:
            c = rng.normal(size=dim) + 1j * rng.normal(size=dim)
            c /= np.linalg.norm(c)
        return cls(energies, c, hbar)


@dataclass(frozen=True, eq=False)
class WaveState:
    """Coefficient vector of a state in the exact eigenbasis at a given time."""
    amplitudes: NDArray[np.complex128]
    time: float = 0.0
    _norm: float = field(init=False, repr=False, compare=False, default=0.0)

    def __post_init__(self) -> None:
        object.__setattr__(self, 'amplitudes', _frozen(self.amplitudes, np.complex128))
        object.__setattr__(self, '_norm', float(np.linalg.norm(self.amplitudes)))

    @property
    def dim(self) -> int:
        return int(self.amplitudes.size)

    @property
    def norm(self) -> float:
        return self._norm

    def is_normalized(self, tol: float = NORM_TOL_BUILD) -> bool:
        return abs(self._norm - 1.0) <= tol

    @classmethod
    def normalized(cls, amplitudes: ArrayLike, time: float = 0.0) -> WaveState:
        """Build a state and check it is normalized to construction tolerance."""
        state = cls(np.asarray(amplitudes), time)
        if not state.is_normalized(NORM_TOL_BUILD):
            raise ContractViolationError(f"State norm {state.norm!r} differs from 1.")
        return state

    @classmethod
    def basis(cls, dim: int, mu: int, time: float = 0.0) -> WaveState:
        """Exact eigenstate e_mu."""
        amps = np.zeros(dim, dtype=np.complex128)
        amps[mu] = 1.0
        return cls(amps, time)


def _paired(a: WaveState, b: WaveState) -> None:
    if a.dim != b.dim:
        raise DimensionError(f"States of dimension {a.dim} and {b.dim} cannot be paired.")


def inner_product(a: WaveState, b: WaveState) -> complex:
    """<a|b> = sum_mu conj(a_mu) b_mu."""
    _paired(a, b)
    return complex(np.vdot(a.amplitudes, b.amplitudes))


def deviation_norm(a: WaveState, b: WaveState) -> float:
    """||b - a|| = sqrt(2 (1 - Re<a|b>)) for normalized states, in [0, 2]."""
    _paired(a, b)
    for s in (a, b):
        if not s.is_normalized(NORM_TOL_OP):
            raise ContractViolationError(
                f"deviation_norm expects normalized states, got norm {s.norm!r}."
            )
    re = inner_product(a, b).real
    return float(np.sqrt(min(4.0, max(0.0, 2.0 * (1.0 - re)))))


def normalize(a: WaveState) -> WaveState:
    """Rescale to unit norm, keeping the direction."""
    if a.norm == 0.0:
        raise DegenerateInputError("Cannot normalize the zero vector.")
    return WaveState(a.amplitudes / a.norm, a.time)


def participation_ratio(coefficients: ArrayLike) -> float:
    """1 / sum |c|^4: number of terms carrying the state, dim for equal coefficients."""
    w = np.abs(np.asarray(coefficients)) ** 2
    s = float(np.sum(w))
    if s == 0.0:
        raise DegenerateInputError("Zero coefficient vector has no participation ratio.")
    w = w / s
    return float(1.0 / np.sum(w ** 2))


## I/O
def write_spectrum(path: Path | str, model: SpectralModel) -> Path:
    """Spectrum file: one row per mu, `mu,energy,re_c,im_c`."""
    return write_csv(
        path,
        SPECTRUM_HEADER,
        (
            (mu, float(e), float(c.real), float(c.imag))
            for mu, (e, c) in enumerate(zip(model.energies, model.coefficients))
        )
    )


def read_spectrum(path: Path | str, hbar: float = 1.0) -> SpectralModel:
    header, rows = read_csv(path, SPECTRUM_HEADER)
    if not rows:
        raise FormatError(f"Spectrum file without rows: {path}")
    mus = column(header, rows, "mu")
    if mus != sorted(mus):
        raise FormatError(f"Spectrum rows out of order in {path}")
    energies = column(header, rows, "energy")
    c = np.array(column(header, rows, "re_c")) + 1j * np.array(column(header, rows, "im_c"))
    return SpectralModel(np.array(energies), c, hbar)

