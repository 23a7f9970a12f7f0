"""Model Hamiltonians in truncated harmonic oscillator (product) bases.

Position operators are written with unit mass, q = sqrt(hbar / 2 omega) (a + a+), so
q^2 has the closed form elements

    <n|q^2|n>   = (hbar / omega) (n + 1/2)
    <n+2|q^2|n> = (hbar / 2 omega) sqrt((n + 1)(n + 2))

and the coupled model reads H = sum_i hbar omega_i (n_i + 1/2) + coupling q1^2 q2^2.
Product states are indexed i = n1 * N + n2.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from typing import Dict, Tuple

import numpy as np
from numpy.typing import NDArray

from horizonlab import config
from horizonlab.costmeter.ledger import CostLedger
from horizonlab.exceptions import CapacityError, ContractViolationError, DimensionError


class HamiltonianKind(StrEnum):
    HARMONIC_1D = "harmonic_1d"
    COUPLED_QUARTIC_2D = "coupled_quartic_2d"


@dataclass(frozen=True)
class ModelHamiltonian:
    kind: HamiltonianKind
    omega: Tuple[float, ...] = (1.0,)
    coupling: float = 0.0
    hbar: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", HamiltonianKind(self.kind))
        object.__setattr__(self, "omega", tuple(float(w) for w in self.omega))
        if len(self.omega) != self.modes:
            raise DimensionError(
                f"{self.kind} takes {self.modes} frequencies, got {len(self.omega)}."
            )
        if any(w <= 0 for w in self.omega):
            raise ContractViolationError(f"Frequencies must be positive, got {self.omega!r}.")
        if self.hbar <= 0:
            raise ContractViolationError(f"hbar must be positive, got {self.hbar!r}.")
        if self.coupling < 0:
            raise ContractViolationError(f"Coupling must be nonnegative, got {self.coupling!r}.")
        if self.kind == HamiltonianKind.HARMONIC_1D and self.coupling:
            raise ContractViolationError("harmonic_1d has no coupling term.")

    @classmethod
    def harmonic(cls, omega: float = 1.0, hbar: float = 1.0) -> ModelHamiltonian:
        return cls(HamiltonianKind.HARMONIC_1D, (omega,), 0.0, hbar)

    @classmethod
    def coupled_quartic(
        cls, coupling: float, omega: Tuple[float, float] = (1.0, 1.0), hbar: float = 1.0
    ) -> ModelHamiltonian:
        return cls(HamiltonianKind.COUPLED_QUARTIC_2D, omega, coupling, hbar)

    @property
    def modes(self) -> int:
        return 1 if self.kind == HamiltonianKind.HARMONIC_1D else 2

    def matrix_dim(self, D: int) -> int:
        """Size of the Hamiltonian matrix for D basis states per mode."""
        return D ** self.modes

    def parity_labels(self, D: int) -> NDArray[np.int64]:
        """Conserved parity sector of each basis state; q^2 only couples n to n and n +- 2."""
        n = np.arange(D)
        if self.modes == 1:
            return n % 2
        return (2 * (n[:, None] % 2) + n[None, :] % 2).reshape(-1)

    def sector_sizes(self, D: int) -> Tuple[int, ...]:
        """Sizes of the nonempty parity sectors, in label order, without building labels."""
        per_mode = ((D + 1) // 2, D // 2)
        if self.modes == 1:
            sizes = per_mode
        else:
            sizes = tuple(a * b for a in per_mode for b in per_mode)
        return tuple(s for s in sizes if s)


def _check_dim(h: ModelHamiltonian, D: int) -> None:
    if D < 1:
        raise DimensionError(f"Basis size must be at least 1, got {D!r}.")
    if h.matrix_dim(D) > config.MAX_MATRIX_DIM:
        raise CapacityError(
            f"Matrix of dimension {h.matrix_dim(D)} exceeds MAX_MATRIX_DIM={config.MAX_MATRIX_DIM}."
        )


def oscillator_levels(omega: float, hbar: float, D: int) -> NDArray[np.float64]:
    """hbar omega (n + 1/2), n = 0 .. D-1."""
    return hbar * omega * (np.arange(D) + 0.5)


def q2_matrix(omega: float, hbar: float, D: int) -> NDArray[np.float64]:
    """Truncated matrix of q^2, pentadiagonal with zero first off-diagonals."""
    n = np.arange(D, dtype=np.float64)
    q2 = np.diag(n + 0.5)
    if D > 2:
        off = 0.5 * np.sqrt((n[:-2] + 1.0) * (n[:-2] + 2.0))
        idx = np.arange(D - 2)
        q2[idx, idx + 2] = off
        q2[idx + 2, idx] = off
    return (hbar / omega) * q2


def assembly_charge(h: ModelHamiltonian, D: int) -> Dict[str, int]:
    """Operations spent assembling the matrix over D states per mode."""
    if h.modes == 1:
        return {"adds": D, "muls": D}
    size = D * D
    charge = {"adds": 3 * D + size, "muls": 2 * D, "evals": 0}
    if h.coupling:
        off = max(D - 2, 0)
        upper = ((D + 2 * off) ** 2 - size) // 2 + size
        charge["adds"] += 2 * (D + 2 * off) + upper
        charge["muls"] += 2 * (D + 3 * off) + 2 * upper
        charge["evals"] += 2 * off
    return charge


def build_matrix(
    h: ModelHamiltonian, D: int, ledger: CostLedger | None = None
) -> NDArray[np.float64]:
    """Hamiltonian matrix over D oscillator states per mode.

    Every element is computed once and written at both (i, j) and (j, i).
    """
    _check_dim(h, D)
    if ledger is not None:
        ledger.charge(**assembly_charge(h, D))
    if h.modes == 1:
        return np.diag(oscillator_levels(h.omega[0], h.hbar, D))

    w1, w2 = h.omega
    diag = np.add.outer(oscillator_levels(w1, h.hbar, D), oscillator_levels(w2, h.hbar, D))
    H = np.diag(diag.reshape(-1))
    if h.coupling:
        Q1, Q2 = q2_matrix(w1, h.hbar, D), q2_matrix(w2, h.hbar, D)
        V = h.coupling * np.kron(Q1, Q2)
        H += V
    return H


def separable_spectrum(h: ModelHamiltonian, D: int) -> NDArray[np.float64]:
    """Exact ascending spectrum of the uncoupled model truncated at D states per mode."""
    if h.coupling:
        raise ContractViolationError("Closed form spectrum only exists without coupling.")
    _check_dim(h, D)
    if h.modes == 1:
        return oscillator_levels(h.omega[0], h.hbar, D)
    (w1, w2) = h.omega
    levels = np.add.outer(oscillator_levels(w1, h.hbar, D), oscillator_levels(w2, h.hbar, D))
    return np.sort(levels.reshape(-1), kind="stable")
