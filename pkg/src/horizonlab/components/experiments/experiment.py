"""Experiment base class."""
from __future__ import annotations
from abc import abstractmethod
from pathlib import Path
from typing import Any, ClassVar, Dict, List, Tuple, Type, TYPE_CHECKING

import numpy as np
from marshmallow import Schema
from marshmallow.exceptions import ValidationError

from horizonlab.component import HarnessComponent
from horizonlab.exceptions import ConfigValidationError
from horizonlab.plots import PlotKind

if TYPE_CHECKING:
    from horizonlab.managers import ResultsManager


class Experiment(HarnessComponent):
    """A named experiment: a parameter schema and a run writing CSV files.

    Subclasses set name and schema, and implement run.
    """
    name: ClassVar[str]
    schema: ClassVar[Type[Schema]]
    notes: ClassVar[Tuple[str, ...]] = ()

    @classmethod
    def validate(cls, parameters: Dict[str, Any]) -> Dict[str, Any]:
        """Load parameters through the experiment schema.

        :raises ConfigValidationError: listing every offending key
        """
        try:
            return cls.schema().load(parameters)
        except ValidationError as ve:
            messages = ve.messages if isinstance(ve.messages, dict) else {"_schema": ve.messages}
            keys = tuple(sorted(messages))
            raise ConfigValidationError(
                f"Invalid {cls.name} parameters: {', '.join(keys)} ({messages})", keys
            ) from ve

    @staticmethod
    def derive_seed(seed: int, *parts: int) -> int:
        """Independent deterministic seed for one scan point."""
        return int(np.random.SeedSequence([seed, *parts]).generate_state(1)[0])

    @abstractmethod
    def run(self, params: Dict[str, Any], results: ResultsManager) -> None:
        raise NotImplementedError

    def plots(self, results: ResultsManager) -> List[Tuple[List[Path], PlotKind]]:
        """CSV files and plot kinds to emit scripts for."""
        return []
