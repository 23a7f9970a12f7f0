import math

import pytest
import numpy as np

from horizonlab import exceptions as exc
from horizonlab.ritz import (
    HamiltonianKind, ModelHamiltonian, build_matrix, convergence_study, eigensolve, q2_matrix,
    ritz_solve, separable_spectrum, variational_upper_bound_check, write_convergence,
    write_summary,
)
from horizonlab.costmeter import CostLedger


def test_harmonic_matrix_is_diagonal():
    H = build_matrix(ModelHamiltonian.harmonic(omega=2.0), 6)
    assert np.array_equal(H, np.diag(2.0 * (np.arange(6) + 0.5)))


def test_decoupled_quartic_is_separable():
    h = ModelHamiltonian.coupled_quartic(0.0, omega=(1.0, 1.5))
    H = build_matrix(h, 5)
    assert np.count_nonzero(H - np.diag(np.diag(H))) == 0
    assert np.allclose(np.sort(np.diag(H)), separable_spectrum(h, 5))


def test_quartic_ground_diagonal_element():
    H = build_matrix(ModelHamiltonian.coupled_quartic(0.1), 4)
    assert H[0, 0] == pytest.approx(1.025, rel=1e-15)
    assert np.array_equal(H, H.T)


def test_q2_ladder_elements():
    q2 = q2_matrix(1.0, 1.0, 4)
    assert q2[0, 0] == 0.5
    assert q2[0, 2] == pytest.approx(math.sqrt(2) / 2)
    assert q2[0, 1] == 0.0


@pytest.mark.xfail(raises=exc.ContractViolationError)
def test_harmonic_with_coupling():
    ModelHamiltonian(HamiltonianKind.HARMONIC_1D, (1.0,), 0.3)


@pytest.mark.xfail(raises=exc.CapacityError)
def test_matrix_over_capacity():
    build_matrix(ModelHamiltonian.coupled_quartic(0.1), 128)


def test_sector_sizes_match_labels():
    for h in (ModelHamiltonian.harmonic(), ModelHamiltonian.coupled_quartic(0.1)):
        for D in (1, 2, 5, 8):
            labels = h.parity_labels(D)
            counts = tuple(int(np.count_nonzero(labels == k)) for k in np.unique(labels))
            assert h.sector_sizes(D) == counts


def test_eigensolve_diagonal():
    eig = eigensolve(np.diag([3.0, 1.0, 2.0]))
    assert np.array_equal(eig.values, [1.0, 2.0, 3.0])
    assert np.array_equal(np.abs(eig.vectors), np.eye(3)[:, [1, 2, 0]])
    assert eig.rotations == 0


def test_eigensolve_two_by_two():
    eig = eigensolve([[0.0, 1.0], [1.0, 0.0]])
    assert np.allclose(eig.values, [-1.0, 1.0], rtol=0, atol=1e-15)


def test_eigensolve_reconstruction(rng):
    A = rng.normal(size=(8, 8))
    M = A + A.T
    eig = eigensolve(M)
    V = eig.vectors
    assert np.linalg.norm(V @ np.diag(eig.values) @ V.T - M) <= 1e-10 * np.linalg.norm(M)
    assert np.allclose(V.T @ V, np.eye(8), rtol=0, atol=1e-12)
    assert np.allclose(eig.values, np.linalg.eigvalsh(M), rtol=0, atol=1e-10)


def test_eigensolve_preserves_trace(rng):
    for _ in range(50):
        A = rng.normal(size=(16, 16))
        M = A + A.T
        values = eigensolve(M).values
        assert values.sum() == pytest.approx(np.trace(M), rel=1e-10, abs=1e-10)


def test_eigensolve_charges_ledger(rng):
    A = rng.normal(size=(6, 6))
    ledger = CostLedger(53)
    eig = eigensolve(A + A.T, ledger)
    assert ledger.adds == eig.rotations * (6 * 6 + 4) + (eig.sweeps + 1) * 36
    ledger.check()


@pytest.mark.xfail(raises=exc.ContractViolationError)
def test_eigensolve_not_symmetric():
    eigensolve([[0.0, 1.0], [0.0, 0.0]])


@pytest.mark.xfail(raises=exc.DimensionError)
def test_eigensolve_not_square():
    eigensolve(np.zeros((2, 3)))


@pytest.mark.xfail(raises=exc.ConvergenceFailureError)
def test_eigensolve_sweep_budget(rng):
    A = rng.normal(size=(5, 5))
    eigensolve(A + A.T, max_sweeps=0)


def test_harmonic_ritz_exact():
    """Harmonic Ritz values are hbar omega (N + 1/2)."""
    values = ritz_solve(ModelHamiltonian.harmonic(), 32).eigenvalues
    assert np.allclose(values, np.arange(32) + 0.5, rtol=0, atol=1e-10)


def test_decoupled_ritz_multiplicities():
    """Levels hbar omega (N1 + N2 + 1) appear N + 1 times while N < D."""
    values = ritz_solve(ModelHamiltonian.coupled_quartic(0.0), 6, levels=21).eigenvalues
    expected = np.repeat(np.arange(1.0, 7.0), np.arange(1, 7))
    assert np.allclose(values, expected, rtol=0, atol=1e-12)


def test_single_state_ledger():
    result = ritz_solve(ModelHamiltonian.harmonic(), 1)
    assert result.eigenvalues.tolist() == [0.5]
    assert (result.op_count.adds, result.op_count.muls, result.op_count.divs) == (1, 1, 0)


def test_quartic_ritz_matches_dense_solver():
    h = ModelHamiltonian.coupled_quartic(0.1)
    result = ritz_solve(h, 8, levels=12)
    reference = np.linalg.eigvalsh(build_matrix(h, 8))[:12]
    assert np.allclose(result.eigenvalues, reference, rtol=0, atol=1e-10)
    assert result.matrix_dim == 64


def test_upper_bound_harmonic():
    assert variational_upper_bound_check(ModelHamiltonian.harmonic(), 4, 9)


def test_upper_bound_quartic():
    """Tracked Ritz values never increase with the basis."""
    h = ModelHamiltonian.coupled_quartic(0.1)
    for small, large in ((6, 8), (8, 10), (10, 12), (6, 12)):
        assert variational_upper_bound_check(h, small, large, levels=10)


@pytest.mark.xfail(raises=exc.ContractViolationError)
def test_upper_bound_not_nested():
    variational_upper_bound_check(ModelHamiltonian.harmonic(), 8, 4)


def test_harmonic_study_is_exact():
    study = convergence_study(ModelHamiltonian.harmonic(), (4, 5, 6, 7), 4, 10)
    assert np.all(study.errors <= 1e-12)
    assert study.exact


def test_decoupled_study_is_exact():
    study = convergence_study(ModelHamiltonian.coupled_quartic(0.0), (3, 4, 5, 6), 5, 8)
    assert np.all(study.errors <= 1e-12)
    assert study.exact


def test_quartic_power_convergence(quartic_study):
    """Errors fall with the basis size and follow a power law."""
    errors = quartic_study.errors
    for mu in range(quartic_study.levels):
        e = errors[:, mu]
        e = e[e > 1e-10]
        assert np.all(np.diff(e) < 0)
    assert quartic_study.fitted_alpha > 0
    assert quartic_study.fit_r2 >= 0.9


def test_required_dim_inversion(quartic_study):
    dE = 1e-6
    ratio = quartic_study.required_dim(dE / 2) / quartic_study.required_dim(dE)
    assert ratio == pytest.approx(2 ** (1 / quartic_study.fitted_alpha), rel=1e-9)
    assert quartic_study.required_basis(dE / 2) >= quartic_study.required_basis(dE)


@pytest.mark.xfail(raises=exc.InsufficientDataError)
def test_study_too_few_dims():
    convergence_study(ModelHamiltonian.harmonic(), (4, 5, 6), 2, 10)


@pytest.mark.xfail(raises=exc.ContractViolationError)
def test_study_reference_too_small():
    convergence_study(ModelHamiltonian.harmonic(), (4, 5, 6, 7), 2, 7)


def test_study_files(tmp_path, quartic_study):
    conv = write_convergence(tmp_path / "c.csv", quartic_study).read_text().splitlines()
    assert conv[0] == "D,level,error"
    assert len(conv) == 1 + 5 * 10
    assert conv[1].startswith("36,0,")
    summary = write_summary(tmp_path / "s.csv", [quartic_study]).read_text().splitlines()
    assert summary[0] == "model,lambda,alpha_hat,r2"
    assert summary[1].startswith("coupled_quartic_2d,0.10000000000000001,")
