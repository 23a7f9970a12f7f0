"""HorizonLab Harness Class."""
import logging
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Callable, Dict, Iterable, List, Optional, Type, TypeVar

from horizonlab import config, __version__ as CORE_VERSION
from horizonlab.components.experiments import CORE_EXPERIMENTS, Experiment
from horizonlab.exceptions import ConfigValidationError, OutputError
from horizonlab.managers import CacheManager, ResultsManager
from horizonlab.plots import PLOT_PREFIX, emit_plot_script
from horizonlab.runconfig import ExperimentConfig, RunManifest
from horizonlab.utils import utcnow


_T = TypeVar("_T")
_U = TypeVar("_U")

MANIFEST = "manifest.json"


class Harness:
    """Experiment orchestrator.

    - Sets up logging and the spectrum cache
    - Instanciates CORE_EXPERIMENTS and passed experiments
    - Validates configurations, runs experiments, writes manifests
    """
    logger = logging.getLogger(__name__)
    # Managers
    cache: CacheManager
    # Experiments
    experiments: Dict[str, Experiment]

    def __init__(
        self,
        experiments: Optional[List[Type[Experiment]]] = None,
        debug: bool = False,
        threads: int = 1,
        cache_dir: Path | str | None = None,
        use_cache: bool = True,
    ) -> None:
        if threads < 1:
            raise ConfigValidationError(f"threads must be at least 1, got {threads}.", ("threads",))
        self.threads = threads

        # Logger.
        logging.basicConfig(
            level=logging.DEBUG if debug else config.LOG_LEVEL,
            format=(
                "%(asctime)s | %(levelname)-8s | %(module)s:%(funcName)s:%(lineno)d - %(message)s"
            )
        )

        # Managers
        self.cache = CacheManager(app=self, root=cache_dir, enabled=use_cache)
        self.logger.info("Spectrum cache: %s (%s).", self.cache.location,
                         "on" if use_cache else "off")

        # Experiments.
        self.experiments = {}
        for exp in list(CORE_EXPERIMENTS.values()) + (experiments or []):
            self.adopt_experiment(exp)

    def adopt_experiment(self, experiment: Type[Experiment]) -> Experiment:
        """Instanciate an experiment and register it under its name."""
        e = experiment(app=self)
        self.experiments[e.name] = e
        return e

    def map(self, fn: Callable[[_T], _U], items: Iterable[_T]) -> List[_U]:
        """fn over items on the worker pool, results in input order."""
        items = list(items)
        if self.threads == 1 or len(items) < 2:
            return [fn(item) for item in items]
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            return list(pool.map(fn, items))

    def experiment(self, name: str) -> Experiment:
        try:
            return self.experiments[name]
        except KeyError:
            raise ConfigValidationError(
                f"Unknown experiment '{name}', expected one of: {', '.join(sorted(self.experiments))}.",
                ("experiment",),
            ) from None

    def validate(self, cfg: ExperimentConfig) -> Dict[str, Any]:
        """Experiment parameters with defaults filled in."""
        return self.experiment(cfg.experiment).validate(cfg.parameters)

    def run(self, cfg: ExperimentConfig, plot: bool = False) -> RunManifest:
        """Run cfg's experiment into cfg.output_dir and write its manifest.

        :raises ConfigValidationError: unknown experiment or invalid parameters
        :raises OutputError: output directory cannot be created
        """
        exp = self.experiment(cfg.experiment)
        params = exp.validate(cfg.parameters)

        out_dir = Path(cfg.output_dir)
        try:
            out_dir.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise OutputError("Could not create output directory.", path=str(out_dir)) from e
        results = ResultsManager(app=self, out_dir=out_dir)

        started = utcnow()
        self.logger.info("Running %s into %s.", exp.name, out_dir)
        exp.run(params, results)
        if plot:
            for paths, kind in exp.plots(results):
                results.track(emit_plot_script(paths, kind))
        finished = utcnow()
        self.logger.info("%s done in %.3fs, %d files.",
                         exp.name, (finished - started).total_seconds(), len(results.files))

        manifest = RunManifest(
            experiment=exp.name,
            config=cfg.to_dict(),
            version=CORE_VERSION,
            started=started,
            finished=finished,
            files=results.hashes(),
            notes=list(exp.notes),
        )
        manifest.write(out_dir / MANIFEST)
        return manifest

    def rerun(self, manifest_path: Path | str, output_dir: Path | str | None = None) -> RunManifest:
        """Run again the configuration recorded in a manifest, with its plot scripts if any."""
        recorded = RunManifest.read(manifest_path)
        cfg = recorded.experiment_config()
        plot = any(name.startswith(PLOT_PREFIX) for name in recorded.files)
        return self.run(cfg.with_overrides(output_dir=output_dir) if output_dir else cfg, plot=plot)
