class HorizonLabError(RuntimeError):
    detail: str

    def __init__(self, detail: str) -> None:
        super().__init__(detail)
        self.detail = detail


## Contract
class ContractError(HorizonLabError):
    """Raised when an operation is called outside of its preconditions."""


class DimensionError(ContractError):
    """Raised on length mismatch, empty inputs or unpaired spectra."""


class ContractViolationError(ContractError):
    """Raised when an input breaks a stated invariant, e.g. a non normalized state."""


class DegenerateInputError(ContractError):
    """Raised on zero vectors, zero separations and the like."""


class DivisionDomainError(ContractError):
    """Raised when a quantity would require dividing by zero.

    :param value: distinguished value standing for the undefined result.
    """
    def __init__(self, detail: str, value: float = float("inf")) -> None:
        super().__init__(detail)
        self.value = value


class ArithmeticDomainError(ContractError):
    """Raised by instrumented arithmetic, e.g. division by zero."""


class InsufficientDataError(ContractError):
    """Raised when a series, grid or window is too short for the requested analysis."""


class CapacityError(ContractError):
    """Raised when a matrix would exceed the configured memory budget."""


## Numerics
class NumericalError(HorizonLabError):
    """Raised when a computation ran but its result cannot be trusted."""


class ConvergenceFailureError(NumericalError):
    """Raised when an iterative method exhausts its iteration budget."""


class ReferenceQualityError(NumericalError):
    """Raised when a self-reference spectrum is not converged enough to measure errors against."""


class StepSizeError(NumericalError):
    """Raised when trajectories saturate before a growth law can be fitted."""


## Harness
class HarnessError(HorizonLabError):
    """Raised by the experiment orchestration layer."""


class ConfigValidationError(HarnessError):
    """Raised when an experiment configuration is invalid."""
    def __init__(self, detail: str, keys: tuple[str, ...] = ()) -> None:
        super().__init__(detail)
        self.keys = keys


class FormatError(HarnessError):
    """Raised when a CSV file is missing, empty or lacks an expected column."""


class OutputError(HarnessError):
    """Raised when an output file cannot be written."""
    def __init__(self, detail: str, path: str = "") -> None:
        super().__init__(f"{detail} [{path}]" if path else detail)
        self.path = path
