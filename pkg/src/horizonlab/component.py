from __future__ import annotations
from abc import abstractmethod, ABCMeta
from pathlib import Path
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    import logging
    from horizonlab.api import Harness


class HarnessComponent(metaclass=ABCMeta):
    """Abstract harness component, referencing the orchestrator and its logger.

    :param app: Reference to running harness.
    :type app: class:`horizonlab.Harness`
    """
    app: Harness
    logger: logging.Logger

    def __init__(self, app: Harness) -> None:
        self.__class__.app = app
        self.__class__.logger = app.logger


class HarnessManager(HarnessComponent, metaclass=ABCMeta):
    """Manager base class.
    A manager owns a storage location and the primitives reading and writing it."""
    @property
    @abstractmethod
    def location(self) -> Path:
        """Managed directory."""
        raise NotImplementedError
