"""Bit-operation accounting: ledger, instrumented arithmetic and scaling fits.

Pipelines depending on the Ritz solver live in ``horizonlab.costmeter.pipelines``.
"""
from .ledger import CostLedger, required_bits
from .arith import (
    Arithmetic, HardwareArithmetic, MultiPrecisionArithmetic, arithmetic,
    Node, Program, precise_eval,
)
from .fit import (
    FitLine, ScalingFit, ModelKind, Classification, fit_power_law, fit_poly_log, fit_scaling,
)
