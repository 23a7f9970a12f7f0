import logging

from .exceptions import (
    HorizonLabError,
    ContractError,
    NumericalError,
    ConfigValidationError,
    FormatError,
    OutputError,
)

logger = logging.getLogger(__name__)

EXIT_OK         = 0
EXIT_UNEXPECTED = 1
EXIT_VALIDATION = 2
EXIT_NUMERICAL  = 3
EXIT_IO         = 4


class Error:
    """Error printing class."""
    def __init__(self, code: int, detail: str | None = None) -> None:
        self.code = code
        self.detail = detail

    @property
    def __dict__(self):
        return {"code": self.code, "message": self.detail}

    def __str__(self) -> str:
        return f"error {self.code}: {self.detail}"


def exit_code(exc: BaseException) -> int:
    """Map an exception onto the command line exit code."""
    match exc:
        case ConfigValidationError() | ContractError():
            return EXIT_VALIDATION
        case NumericalError():
            return EXIT_NUMERICAL
        case FormatError() | OutputError() | OSError():
            return EXIT_IO
        case _:
            return EXIT_UNEXPECTED


def onerror(exc: BaseException) -> Error:
    """Error event handler: log and build the printable error."""
    code = exit_code(exc)
    if isinstance(exc, HorizonLabError):
        detail = exc.detail
        logger.error("%s: %s", exc.__class__.__name__, detail)
    else:
        detail = "Unexpected error. Rerun with --debug for a traceback."
        logger.exception(exc)
    return Error(code, detail)
