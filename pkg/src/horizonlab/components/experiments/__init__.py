"""Experiments, one per ExperimentConfig.experiment value."""
from typing import Dict, Type

from .experiment import Experiment
from .amplitude import AmplitudeExperiment
from .classical import ClassicalExperiment
from .cost_scan import CostScanExperiment
from .evolve import EvolveExperiment
from .fig1 import Fig1Experiment
from .horizon import HorizonExperiment
from .ritz import RitzExperiment


CORE_EXPERIMENTS: Dict[str, Type[Experiment]] = {
    e.name: e for e in (
        EvolveExperiment, HorizonExperiment, AmplitudeExperiment, RitzExperiment,
        CostScanExperiment, ClassicalExperiment, Fig1Experiment,
    )
}
