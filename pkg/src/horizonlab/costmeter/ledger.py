from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

from horizonlab import config
from horizonlab.exceptions import ContractViolationError


MIN_MANTISSA = 8


@dataclass
class CostLedger:
    """Counters of elementary operations at a declared mantissa length n.

    Weights: n per addition, n^2 per multiplication or division. A transcendental
    evaluation is booked as `transcendental_weight` multiplications and also counted
    in `evals`, so that model_cost == adds n + (muls + divs) n^2 always holds.
    """
    mantissa_bits: int
    adds: int = 0
    muls: int = 0
    divs: int = 0
    evals: int = 0
    model_cost: int = 0
    transcendental_weight: int = field(default_factory=lambda: config.TRANSCENDENTAL_WEIGHT)

    def __post_init__(self) -> None:
        if self.mantissa_bits < 1:
            raise ContractViolationError(
                f"Mantissa length must be positive, got {self.mantissa_bits!r}."
            )

    def charge(self, adds: int = 0, muls: int = 0, divs: int = 0, evals: int = 0) -> None:
        muls += evals * self.transcendental_weight
        n = self.mantissa_bits
        self.adds += adds
        self.muls += muls
        self.divs += divs
        self.evals += evals
        self.model_cost += adds * n + (muls + divs) * n * n

    def recompute(self) -> int:
        n = self.mantissa_bits
        return self.adds * n + (self.muls + self.divs) * n * n

    def check(self) -> None:
        """Raise if model_cost drifted from the weighted counter formula."""
        if self.model_cost != self.recompute():
            raise ContractViolationError(
                f"Ledger model cost {self.model_cost} differs from recomputed {self.recompute()}."
            )

    def merge(self, other: CostLedger) -> CostLedger:
        """Counter-wise sum of two ledgers kept at the same mantissa length."""
        if other.mantissa_bits != self.mantissa_bits:
            raise ContractViolationError("Cannot merge ledgers of different mantissa lengths.")
        return CostLedger(
            mantissa_bits=self.mantissa_bits,
            adds=self.adds + other.adds,
            muls=self.muls + other.muls,
            divs=self.divs + other.divs,
            evals=self.evals + other.evals,
            model_cost=self.model_cost + other.model_cost,
            transcendental_weight=self.transcendental_weight,
        )

    def scaled(self, k: int) -> CostLedger:
        """Ledger of k repetitions."""
        return CostLedger(
            mantissa_bits=self.mantissa_bits,
            adds=self.adds * k,
            muls=self.muls * k,
            divs=self.divs * k,
            evals=self.evals * k,
            model_cost=self.model_cost * k,
            transcendental_weight=self.transcendental_weight,
        )

    def counters(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def required_bits(dE: float) -> int:
    """Mantissa length n ~ -log2 dE, never below MIN_MANTISSA."""
    if not dE > 0:
        raise ContractViolationError(f"Accuracy target must be positive, got {dE!r}.")
    return max(MIN_MANTISSA, math.ceil(-math.log2(dE)))
