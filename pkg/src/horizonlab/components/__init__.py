"""Harness components running experiments."""
from .experiments import Experiment, CORE_EXPERIMENTS
