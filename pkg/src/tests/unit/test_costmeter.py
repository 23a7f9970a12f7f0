import math

import pytest
import numpy as np

from horizonlab import exceptions as exc
from horizonlab.costmeter import (
    Classification, CostLedger, HardwareArithmetic, ModelKind, MultiPrecisionArithmetic,
    Program, arithmetic, fit_poly_log, fit_power_law, fit_scaling, precise_eval, required_bits,
)
from horizonlab.costmeter.arith import call, const, var
from horizonlab.costmeter import pipelines
from horizonlab.costmeter.pipelines import (
    SystemKind, cost_scan, executed_ritz_cost, fit_cost_exponent, horizon_accuracy,
    integrable_pipeline, integrable_spectrum, integrable_spectrum_cost, prediction_cost_curve,
    ritz_pipeline, ritz_spectrum_cost,
)
from horizonlab.ritz import ModelHamiltonian, ritz_solve


T_INTEGRABLE = np.logspace(3, 30, 15)
T_NONINTEGRABLE = np.logspace(2, 16, 15)


def test_single_addition():
    _, ledger = precise_eval(Program((const(1.0) + const(2.0),)), 53)
    assert (ledger.adds, ledger.model_cost) == (1, 53)


def test_single_multiplication():
    _, ledger = precise_eval(Program((const(3) * const(5),)), 100)
    assert (ledger.muls, ledger.model_cost) == (1, 10_000)


def test_empty_program():
    ledger = CostLedger(64)
    values, out = precise_eval(Program(), 64, ledger)
    assert values == [] and out is ledger
    assert out.counters() == CostLedger(64).counters()


def test_ledger_deterministic():
    h = ModelHamiltonian.coupled_quartic(0.1)
    assert executed_ritz_cost(h, 6).counters() == executed_ritz_cost(h, 6).counters()
    program = Program((call("sin", const(1.0)) * const(3.0) + const(0.5),))
    assert precise_eval(program, 200)[1].counters() == precise_eval(program, 200)[1].counters()


def test_ledger_cost_monotone_in_work(rng):
    ledger, last = CostLedger(64), 0
    for _ in range(50):
        adds, muls, divs, evals = (int(k) for k in rng.integers(0, 5, size=4))
        ledger.charge(adds=adds, muls=muls, divs=divs, evals=evals)
        assert ledger.model_cost >= last
        last = ledger.model_cost
    by_levels = [integrable_spectrum_cost(N, 64).model_cost for N in (1, 2, 5, 10, 50)]
    assert all(a < b for a, b in zip(by_levels, by_levels[1:]))
    by_bits = [integrable_spectrum_cost(10, n).model_cost for n in (8, 53, 100, 500)]
    assert all(a < b for a, b in zip(by_bits, by_bits[1:]))


def test_shared_subexpression_charged_once():
    x = var("x") * var("x")
    values, ledger = precise_eval(Program((x + 1, x - 1)), 53, env={"x": 3.0})
    assert values == [10.0, 8.0]
    assert (ledger.muls, ledger.adds) == (1, 2)


def test_transcendental_weight():
    ledger = CostLedger(53, transcendental_weight=20)
    precise_eval(Program((call("sin", const(1.0)),)), 53, ledger)
    assert (ledger.evals, ledger.muls) == (1, 20)
    ledger.check()


def test_precision_is_carried():
    values, _ = precise_eval(Program((const(1) / const(3),)), 200)
    assert abs(values[0] * 3 - 1) < 2.0 ** -190
    assert isinstance(arithmetic(53), HardwareArithmetic)
    assert isinstance(arithmetic(54), MultiPrecisionArithmetic)


@pytest.mark.xfail(raises=exc.ArithmeticDomainError)
def test_division_by_zero():
    precise_eval(Program((const(1) / const(0),)), 128)


@pytest.mark.xfail(raises=exc.ArithmeticDomainError)
def test_log_of_zero():
    precise_eval(Program((call("log", const(0)),)), 53)


@pytest.mark.xfail(raises=exc.ContractViolationError)
def test_unbound_variable():
    precise_eval(Program((var("y") + 1,)), 53)


def test_ledger_merge_and_scale():
    a, b = CostLedger(32), CostLedger(32)
    a.charge(adds=3, muls=1)
    b.charge(divs=2, evals=1)
    merged = a.merge(b)
    merged.check()
    assert merged.model_cost == a.model_cost + b.model_cost
    assert merged.scaled(4).model_cost == 4 * merged.model_cost


@pytest.mark.xfail(raises=exc.ContractViolationError)
def test_ledger_merge_mismatch():
    CostLedger(32).merge(CostLedger(64))


@pytest.mark.xfail(raises=exc.ContractViolationError)
def test_ledger_drift_detected():
    ledger = CostLedger(16)
    ledger.charge(adds=1)
    ledger.model_cost += 1
    ledger.check()


@pytest.mark.parametrize("dE, n", [(2.0 ** -30, 30), (1e-3, 10), (0.5, 8)])
def test_required_bits(dE, n):
    assert required_bits(dE) == n


def test_integrable_ground_level():
    for n in (8, 53, 300):
        values, _ = integrable_spectrum(1, n)
        assert float(values[0]) == 0.5


def test_integrable_cost_in_n():
    costs = [integrable_spectrum_cost(100, n).model_cost for n in (64, 128, 256, 512, 1024)]
    for lo, hi in zip(costs, costs[1:]):
        assert hi <= 4 * lo
    slope = fit_power_law([64, 128, 256, 512, 1024], costs).exponent
    assert 1 <= slope <= 2.2


def test_power_law_fit_exact():
    x = np.logspace(0, 4, 9)
    line = fit_power_law(x, 3 * x ** 2.5)
    assert line.exponent == pytest.approx(2.5)
    assert line.r2 == pytest.approx(1.0)


def test_poly_log_fit_exact():
    x = np.logspace(1, 20, 12)
    line = fit_poly_log(x, 7 * np.log2(x) ** 2)
    assert line.exponent == pytest.approx(2.0)
    assert line.r2 == pytest.approx(1.0)


def test_classification_of_exact_laws():
    T = np.logspace(2, 14, 13)
    assert fit_scaling(T, T ** 2).classification == Classification.INCOMPRESSIBLE
    poly = fit_scaling(T, np.log2(T) ** 2)
    assert poly.classification == Classification.COMPRESSIBLE
    assert poly.model_kind == ModelKind.POLY_LOG


def test_flat_curve_is_ambiguous():
    T = np.logspace(2, 8, 7)
    fit = fit_scaling(T, np.full(7, 42.0))
    assert fit.classification == Classification.AMBIGUOUS
    assert fit.exponent == 0.0


@pytest.mark.xfail(raises=exc.InsufficientDataError)
def test_fit_needs_three_decades():
    fit_scaling([10.0, 100.0, 1000.0], [1.0, 2.0, 3.0])


def test_horizon_accuracy():
    assert horizon_accuracy(math.pi) == pytest.approx(1.0)


def test_cost_scan_points():
    points = cost_scan([1e3, 1e4], integrable_pipeline(10))
    assert [p.n_bits for p in points] == [required_bits(math.pi / 1e3), required_bits(math.pi / 1e4)]
    assert points[0].row()[:4] == (1e3, math.pi / 1e3, points[0].n_bits, 10)


def test_integrable_is_compressible():
    fit = prediction_cost_curve(SystemKind.INTEGRABLE, T_INTEGRABLE)
    assert fit.classification == Classification.COMPRESSIBLE
    dense = prediction_cost_curve(SystemKind.INTEGRABLE, np.logspace(3, 30, 29))
    assert dense.classification == Classification.COMPRESSIBLE


def test_ritz_is_incompressible(quartic_study):
    pipeline = ritz_pipeline(quartic_study)
    fit = prediction_cost_curve(SystemKind.NONINTEGRABLE, T_NONINTEGRABLE, pipeline=pipeline)
    assert fit.classification == Classification.INCOMPRESSIBLE
    assert fit.exponent > 0
    dense = prediction_cost_curve(SystemKind.NONINTEGRABLE, np.logspace(2, 16, 29),
                                  pipeline=pipeline)
    assert dense.classification == Classification.INCOMPRESSIBLE


def test_constant_stub_is_ambiguous():
    stub = lambda dE: (1, CostLedger(53, adds=1, model_cost=53))
    fit = prediction_cost_curve(SystemKind.INTEGRABLE, T_INTEGRABLE, pipeline=stub)
    assert fit.classification == Classification.AMBIGUOUS


@pytest.mark.xfail(raises=exc.InsufficientDataError)
def test_cost_curve_short_span():
    prediction_cost_curve(SystemKind.INTEGRABLE, [1e3, 1e4, 1e5])


def test_ritz_cost_exponent(monkeypatch):
    def estimator(*args, **kwargs):
        raise AssertionError("cost exponent must come from executed solves")

    monkeypatch.setattr(pipelines, "jacobi_cost_estimate", estimator)
    h = ModelHamiltonian.coupled_quartic(0.1)
    assert fit_cost_exponent(h, [8, 16, 32]).exponent > 2


def test_ritz_cost_exponent_counts_solves():
    h = ModelHamiltonian.coupled_quartic(0.1)
    dims = [4, 6, 8]
    costs = [ritz_solve(h, D, ledger=CostLedger(53)).op_count.model_cost for D in dims]
    expected = fit_power_law([D * D for D in dims], costs)
    assert fit_cost_exponent(h, dims).exponent == pytest.approx(expected.exponent, rel=1e-12)


def test_estimated_ritz_cost_grows():
    h = ModelHamiltonian.coupled_quartic(0.1)
    assert ritz_spectrum_cost(h, D=16).model_cost >= 16 * ritz_spectrum_cost(h, D=8).model_cost


def test_ritz_single_state_cost():
    ledger = ritz_spectrum_cost(ModelHamiltonian.harmonic(), D=1, n=53)
    assert ledger.model_cost == 53 + 53 ** 2


def test_ritz_cost_from_study(quartic_study):
    h = quartic_study.model
    ledger = ritz_spectrum_cost(h, dE=1e-4, study=quartic_study)
    assert ledger.mantissa_bits == required_bits(1e-4)
    D = quartic_study.required_basis(1e-4)
    assert ledger.model_cost == ritz_spectrum_cost(h, D=D, n=required_bits(1e-4)).model_cost
