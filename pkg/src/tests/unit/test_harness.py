import hashlib
import json
import logging

import pytest
import numpy as np

from horizonlab import config, exceptions as exc
from horizonlab.api import MANIFEST
from horizonlab.cli import main
from horizonlab.error import EXIT_IO, EXIT_NUMERICAL, EXIT_OK, EXIT_UNEXPECTED, EXIT_VALIDATION
from horizonlab.error import exit_code, onerror
from horizonlab.plots import PlotKind, emit_plot_script
from horizonlab.ritz import ModelHamiltonian
from horizonlab.runconfig import ExperimentConfig, RunManifest, parse_override
from horizonlab.utils import read_csv, write_csv
from horizonlab.utils.csvio import column


def _fig1(out, **parameters):
    return ExperimentConfig("fig1", {"seed": 1, "dim": 50, "samples": 400, **parameters}, str(out))


## Configuration
def test_config_roundtrip():
    cfg = ExperimentConfig("horizon", {"seed": 1, "dEs": [1e-2, 1e-3], "kind": "uniform"}, "out")
    assert ExperimentConfig.loads(cfg.dumps()) == cfg


def test_overrides():
    cfg = ExperimentConfig("horizon", {"seed": 1, "dim": 10}).with_overrides(
        ["dim=50", "kind=stratified", "dEs=[1e-2, 1e-3]"], seed=3, output_dir="elsewhere"
    )
    assert cfg.parameters == {"seed": 3, "dim": 50, "kind": "stratified", "dEs": [1e-2, 1e-3]}
    assert cfg.output_dir == "elsewhere"


@pytest.mark.xfail(raises=exc.ConfigValidationError)
def test_malformed_override():
    parse_override("dim")


@pytest.mark.xfail(raises=exc.ConfigValidationError)
def test_config_unknown_key():
    ExperimentConfig.loads('experiment = "fig1"\ncolour = "blue"\n')


def test_parameter_errors_list_keys(harness):
    cfg = ExperimentConfig("horizon", {"seed": 1, "dims": [0], "bogus": 1})
    with pytest.raises(exc.ConfigValidationError) as e:
        harness.validate(cfg)
    assert e.value.keys == ("bogus", "dims")


def test_missing_seed(harness):
    with pytest.raises(exc.ConfigValidationError) as e:
        harness.validate(ExperimentConfig("fig1", {"dim": 10}))
    assert e.value.keys == ("seed",)


def test_defaults_filled_in(harness):
    params = harness.validate(ExperimentConfig("horizon", {"seed": 1}))
    assert params["kind"] == "stratified"
    assert params["dEs"] == [1e-2, 1e-3, 1e-4]


def test_full_mode_needs_residuals(harness):
    with pytest.raises(exc.ConfigValidationError) as e:
        harness.validate(ExperimentConfig("evolve", {"seed": 1, "mode": "full"}))
    assert e.value.keys == ("epsilon",)


@pytest.mark.xfail(raises=exc.ConfigValidationError)
def test_unknown_experiment(harness):
    harness.experiment("fig2")


@pytest.mark.xfail(raises=exc.ConfigValidationError)
def test_threads_positive():
    from horizonlab.api import Harness
    Harness(threads=0)


## Runs
def test_fig1(harness, tmp_path):
    """Overlap decays to the 1/sqrt(N) floor and the deviation settles at sqrt(2)."""
    manifest = harness.run(_fig1(tmp_path / "fig1", dim=200, kind="stratified", samples=2000))
    assert set(manifest.files) == {"fig1_overlap.csv", "fig1_deviation.csv"}

    header, rows = read_csv(tmp_path / "fig1" / "fig1_overlap.csv", ("time", "overlap_re"))
    t = np.array(column(header, rows, "time"))
    re = np.array(column(header, rows, "overlap_re"))
    im = np.array(column(header, rows, "overlap_im"))
    tp = t[-1] / 20.0
    assert re[0] == pytest.approx(1.0) and im[0] == pytest.approx(0.0, abs=1e-12)

    early = re[t <= 0.5 * tp]
    means = [block.mean() for block in np.array_split(early, 4)]
    assert all(a > b for a, b in zip(means, means[1:]))

    late = (t >= 2 * tp) & (t <= 20 * tp)
    assert np.sqrt(np.mean(re[late] ** 2 + im[late] ** 2)) < 0.15

    header, rows = read_csv(tmp_path / "fig1" / "fig1_deviation.csv", ("time", "deviation"))
    deviation = np.array(column(header, rows, "deviation"))
    assert deviation[0] == pytest.approx(0.0, abs=1e-6)
    assert deviation[late].mean() == pytest.approx(np.sqrt(2.0), rel=0.05)


def test_manifest(harness, tmp_path):
    out = tmp_path / "run"
    manifest = harness.run(_fig1(out))
    on_disk = RunManifest.read(out / MANIFEST)
    assert on_disk.files == manifest.files
    assert on_disk.experiment == "fig1"
    assert on_disk.config["parameters"]["seed"] == 1
    assert on_disk.started <= on_disk.finished
    for name, digest in on_disk.files.items():
        assert hashlib.sha256((out / name).read_bytes()).hexdigest() == digest
    assert json.loads((out / MANIFEST).read_text())["version"] == manifest.version


def test_manifest_covers_plot_scripts(harness, tmp_path):
    out = tmp_path / "run"
    manifest = harness.run(_fig1(out), plot=True)
    emitted = {p.name for p in out.iterdir() if p.name != MANIFEST}
    assert {"plot_fig1_overlap.py", "plot_fig1_deviation.py"} <= emitted
    assert set(manifest.files) == emitted
    for name, digest in manifest.files.items():
        assert hashlib.sha256((out / name).read_bytes()).hexdigest() == digest
    assert harness.rerun(out / MANIFEST, output_dir=tmp_path / "again").files == manifest.files


def test_deterministic(harness, tmp_path):
    first = harness.run(_fig1(tmp_path / "a"))
    second = harness.run(_fig1(tmp_path / "b"))
    assert first.files == second.files
    again = harness.rerun(tmp_path / "a" / MANIFEST, output_dir=tmp_path / "c")
    assert again.files == first.files


def test_seed_changes_output(harness, tmp_path):
    first = harness.run(_fig1(tmp_path / "a"))
    second = harness.run(_fig1(tmp_path / "b", seed=2))
    assert first.files != second.files


def test_classical_default_times_follow_growth(harness, tmp_path):
    out = tmp_path / "rotor"
    harness.run(ExperimentConfig("classical", {
        "map": "standard", "parameter": 0.0, "p": 0.3, "perturb": "momentum",
    }, str(out)))
    header, rows = read_csv(out / "classical_cost.csv", ("T", "cost_notion"))
    T = column(header, rows, "T")
    assert min(T) == pytest.approx(1e3) and max(T) == pytest.approx(1e30)
    header, rows = read_csv(out / "classical_fit.csv", ("system", "classification"))
    verdicts = {r[header.index("system")]: r[header.index("classification")] for r in rows}
    assert verdicts["standard:paper_model"] == "compressible"


def test_threads_do_not_change_output(tmp_path):
    from horizonlab.api import Harness
    cfg = {"seed": 1, "dim": 200, "dEs": [1e-2, 1e-3], "seeds": 2, "samples": 400}
    serial = Harness(cache_dir=tmp_path / "cache").run(
        ExperimentConfig("horizon", cfg, str(tmp_path / "serial")))
    pooled = Harness(threads=4, cache_dir=tmp_path / "cache").run(
        ExperimentConfig("horizon", cfg, str(tmp_path / "pooled")))
    assert serial.files == pooled.files


def test_ritz_run_uses_cache(harness, tmp_path, caplog):
    cfg = ExperimentConfig(
        "ritz", {"model": "harmonic_1d", "coupling": 0.0, "dims": [4, 5, 6, 7],
                 "levels": 3, "reference": 10},
        str(tmp_path / "ritz"),
    )
    harness.run(cfg)
    assert (tmp_path / "ritz" / "ritz_convergence.csv").is_file()
    with caplog.at_level(logging.INFO):
        harness.run(cfg.with_overrides(output_dir=tmp_path / "ritz2"))
    assert "Spectrum cache hit" in caplog.text


def test_cache_entry(harness):
    h = ModelHamiltonian.coupled_quartic(0.1)
    first = harness.cache.ritz(h, 6)
    csv_path, meta_path = harness.cache.entry(harness.cache.key(h, 6, config.JACOBI_TOL))
    assert csv_path.is_file() and meta_path.is_file()
    second = harness.cache.ritz(h, 6)
    assert np.array_equal(first.eigenvalues, second.eigenvalues)
    assert second.op_count.model_cost == first.op_count.model_cost


## Plots
def test_deviation_plot_has_guide(harness, tmp_path):
    harness.run(_fig1(tmp_path), plot=True)
    script = tmp_path / "plot_fig1_deviation.py"
    assert script.is_file()
    assert "2 ** 0.5" in script.read_text()


def test_cost_plot_overlays_fits(tmp_path):
    T = np.logspace(1, 5, 9)
    path = write_csv(tmp_path / "cost.csv", ("T", "model_cost"), zip(T, T ** 2))
    text = emit_plot_script([path], PlotKind.COST_SCAN).read_text()
    assert "a T^p, p=2" in text
    assert "a (log2 T)^q" in text
    assert "loglog" in text


@pytest.mark.xfail(raises=exc.FormatError)
def test_plot_empty_csv(tmp_path):
    path = write_csv(tmp_path / "empty.csv", ("time", "deviation"), [])
    emit_plot_script([path], PlotKind.DEVIATION)


@pytest.mark.xfail(raises=exc.FormatError)
def test_plot_missing_column(tmp_path):
    path = write_csv(tmp_path / "d.csv", ("time", "overlap"), [(0.0, 1.0)])
    emit_plot_script([path], PlotKind.DEVIATION)


## Command line
def test_cli(tmp_path, capsys):
    code = main(["fig1", "--seed", "1", "--set", "dim=50", "--set", "samples=200",
                 "--out", str(tmp_path / "cli"), "--no-cache"])
    assert code == EXIT_OK
    assert (tmp_path / "cli" / MANIFEST).is_file()
    assert "fig1_overlap.csv" in capsys.readouterr().out


def test_cli_config_file(tmp_path):
    cfg = _fig1(tmp_path / "from_file")
    (tmp_path / "fig1.toml").write_text(cfg.dumps())
    assert main(["fig1", "--config", str(tmp_path / "fig1.toml"), "--no-cache"]) == EXIT_OK
    assert (tmp_path / "from_file" / MANIFEST).is_file()


def test_cli_config_mismatch(tmp_path):
    (tmp_path / "h.toml").write_text(ExperimentConfig("horizon", {"seed": 1}).dumps())
    assert main(["fig1", "--config", str(tmp_path / "h.toml"), "--no-cache"]) == EXIT_VALIDATION


def test_cli_validation_error(tmp_path, capsys):
    code = main(["fig1", "--seed", "1", "--set", "dim=-1", "--out", str(tmp_path), "--no-cache"])
    assert code == EXIT_VALIDATION
    assert "dim" in capsys.readouterr().err


def test_cli_io_error(tmp_path):
    blocker = tmp_path / "blocker"
    blocker.write_text("")
    code = main(["fig1", "--seed", "1", "--out", str(blocker / "out"), "--no-cache"])
    assert code == EXIT_IO


def test_cli_unknown_experiment():
    with pytest.raises(SystemExit) as e:
        main(["fig2"])
    assert e.value.code == 2


@pytest.mark.parametrize("error, code", [
    (exc.ContractViolationError("x"), EXIT_VALIDATION),
    (exc.ConfigValidationError("x"), EXIT_VALIDATION),
    (exc.StepSizeError("x"), EXIT_NUMERICAL),
    (exc.ReferenceQualityError("x"), EXIT_NUMERICAL),
    (exc.FormatError("x"), EXIT_IO),
    (exc.OutputError("x", path="p"), EXIT_IO),
    (ValueError("x"), EXIT_UNEXPECTED),
])
def test_exit_codes(error, code):
    assert exit_code(error) == code


def test_onerror_detail():
    assert onerror(exc.OutputError("Could not write.", path="a.csv")).detail == "Could not write. [a.csv]"
    assert "--debug" in onerror(KeyError("k")).detail
