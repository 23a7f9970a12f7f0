import math

import pytest
import numpy as np

from horizonlab import exceptions as exc
from horizonlab.costmeter import fit_power_law
from horizonlab.evolution import linear_grid, overlap_series
from horizonlab.horizon import (
    HORIZON_NOT_REACHED, amplitude_theory, build_report, cosine_model, detect_horizon,
    dispersion_sensitivity, measure_amplitude, predict_horizon_theory, write_reports,
)
from horizonlab.perturbation import (
    ErrorDistribution, ErrorKind, PerturbedSpectrum, energy_dispersion, sample_perturbed
)
from horizonlab.spectral import SpectralModel


@pytest.mark.parametrize("dE, expected", [
    (math.pi, 1.0), (1.0, math.pi), (1e-3, 3141.59265358979),
])
def test_predict_horizon_theory(dE, expected):
    assert predict_horizon_theory(dE) == pytest.approx(expected, rel=1e-12)


def test_zero_dispersion_horizon():
    with pytest.raises(exc.DivisionDomainError) as e:
        predict_horizon_theory(0.0)
    assert e.value.value == HORIZON_NOT_REACHED


@pytest.mark.parametrize("dim, expected", [(2, 0.5), (50, 0.1), (1, 1 / math.sqrt(2))])
def test_amplitude_theory(dim, expected):
    assert amplitude_theory(dim) == pytest.approx(expected)


def test_cosine_model():
    assert cosine_model([0.3, -0.1, 2.0], 1.0, 0.0) == pytest.approx(1.0)
    assert cosine_model([0.2] * 4, 1.0, 3.0) == pytest.approx(math.cos(0.6))
    assert cosine_model([0.0, math.pi], 1.0, 1.0) == pytest.approx(0.0, abs=1e-15)


def test_cosine_model_even_and_bounded(rng):
    dE = rng.normal(scale=1e-2, size=50)
    T = np.linspace(0.0, 5e3, 400)
    values = cosine_model(dE, 1.0, T)
    assert np.allclose(values, cosine_model(dE, 1.0, -T), rtol=0, atol=1e-15)
    assert np.all(np.abs(values) <= 1.0)


def test_equal_weights_overlap_is_cosine_model():
    model = SpectralModel.equal(np.linspace(0.0, 1.0, 64))
    pert = sample_perturbed(model, ErrorDistribution(ErrorKind.UNIFORM, 1e-2, seed=3))
    times = linear_grid(1e4, 300)
    series = overlap_series(model, pert, times)
    expected = cosine_model(pert.energies_approx - model.energies, model.hbar, times)
    assert np.allclose(series.overlap_re, expected, rtol=0, atol=1e-12)


def test_unperturbed_not_reached(model_200):
    series = overlap_series(model_200, PerturbedSpectrum.exact(model_200), linear_grid(1e4, 200))
    assert detect_horizon(series) == HORIZON_NOT_REACHED


def test_single_cosine_first_crossing(model_200):
    d = 1e-2
    pert = sample_perturbed(model_200, ErrorDistribution(ErrorKind.FIXED, d))
    series = overlap_series(model_200, pert, linear_grid(200.0, 20001))
    assert detect_horizon(series, 0.1) == pytest.approx(math.acos(0.1) / d, rel=1e-6)


@pytest.mark.xfail(raises=exc.ContractViolationError)
def test_threshold_out_of_range(model_200):
    series = overlap_series(model_200, PerturbedSpectrum.exact(model_200), linear_grid(1.0, 100))
    detect_horizon(series, 1.5)


def _horizon_run(dim, dE, seed, kind=ErrorKind.STRATIFIED):
    model = SpectralModel.random(dim, seed, equal_weights=True)
    pert = sample_perturbed(model, ErrorDistribution.with_dispersion(kind, dE, seed + 1))
    series = overlap_series(model, pert, linear_grid(4 * math.pi / dE, 4000))
    return model, pert, series


def test_horizon_law():
    """Empirical horizon within a factor 2 of pi hbar / dE, and inverse in dE."""
    dEs = [1e-2, 1e-3, 1e-4]
    inverse, tp = [], []
    for dE in dEs:
        for seed in range(8):
            model, pert, series = _horizon_run(200, dE, 100 * seed)
            report = build_report(model, pert, series)
            assert report.t_p_theory / 2 <= report.t_p_empirical <= 2 * report.t_p_theory
            inverse.append(1 / report.dE)
            tp.append(report.t_p_empirical)
    assert fit_power_law(inverse, tp).exponent == pytest.approx(1.0, abs=0.1)


def test_amplitude_single_cosine():
    d = 1.0
    model = SpectralModel.equal([0.0])
    pert = PerturbedSpectrum(np.array([d]), model.coefficients.copy(), None, 0.0, np.array([d]))
    series = overlap_series(model, pert, np.linspace(0.0, 100 * 2 * math.pi, 20000, endpoint=False))
    assert measure_amplitude(series, 0.0) == pytest.approx(1 / math.sqrt(2), rel=0.02)


def test_amplitude_zero_tail():
    model = SpectralModel.equal([0.0, 0.0])
    pert = PerturbedSpectrum(np.array([0.0, math.pi]), model.coefficients.copy(), None, 0.0,
                             np.array([0.0, math.pi]))
    # (1 + cos(pi T)) / 2 vanishes at odd T.
    series = overlap_series(model, pert, np.arange(1.0, 400.0, 2.0))
    assert measure_amplitude(series, 0.0) == pytest.approx(0.0, abs=1e-12)


@pytest.mark.xfail(raises=exc.InsufficientDataError)
def test_amplitude_short_tail(model_200):
    series = overlap_series(model_200, PerturbedSpectrum.exact(model_200), linear_grid(1.0, 50))
    measure_amplitude(series, 0.0)


def _tail_amplitude(dim, seed, dE=1e-2):
    model = SpectralModel.random(dim, seed, equal_weights=True)
    pert = sample_perturbed(model, ErrorDistribution.with_dispersion("uniform", dE, seed + 1))
    tp = predict_horizon_theory(energy_dispersion(model, pert))
    series = overlap_series(model, pert, linear_grid(100 * tp, 2000, 10 * tp))
    return measure_amplitude(series, 10 * tp)


@pytest.mark.parametrize("dim", [50, 200, 800])
def test_amplitude_law(dim):
    assert _tail_amplitude(dim, seed=dim) == pytest.approx(amplitude_theory(dim), rel=0.2)


def test_amplitude_scaling():
    dims = [50, 200, 800]
    rms = [math.sqrt(np.mean([_tail_amplitude(d, 1000 * s + d) ** 2 for s in range(8)]))
           for d in dims]
    assert fit_power_law(dims, rms).exponent == pytest.approx(-0.5, abs=0.05)


def test_dispersion_sensitivity(model_200):
    pert = sample_perturbed(model_200, ErrorDistribution.with_dispersion("stratified", 1e-3, 1))
    tp = dispersion_sensitivity(model_200, pert)
    assert set(tp) == {"std", "halfwidth", "mad"}
    # halfwidth >= std >= mad for any sample.
    assert tp["halfwidth"] <= tp["std"] <= tp["mad"]
    assert tp["std"] == pytest.approx(math.pi / 1e-3, rel=0.01)


def test_write_reports(tmp_path):
    model, pert, series = _horizon_run(200, 1e-3, 5)
    path = write_reports(tmp_path / "r.csv", [build_report(model, pert, series, tail_factor=2)])
    header, row = path.read_text().splitlines()
    assert header == "dim,dE,threshold,tp_theory,tp_empirical,amp_theory,amp_empirical"
    assert row.startswith("200,")
