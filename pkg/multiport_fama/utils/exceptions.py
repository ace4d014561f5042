"""Custom exceptions for multiport-fama."""

from typing import Optional


class FamaError(Exception):
    """Base exception for multiport-fama."""
    pass


class ValidationError(FamaError):
    """Raised when a domain object or argument fails validation."""
    pass


class ConfigurationError(FamaError):
    """Raised when an experiment configuration is invalid.

    Args:
        message: Human readable description
        location: Where the problem is, e.g. ``"line 4, column 12"`` or ``"system.L"``
    """

    def __init__(self, message: str, location: Optional[str] = None):
        self.message = message
        self.location = location
        prefix = f"{location}: " if location else ""
        super().__init__(f"{prefix}{message}")

    def __reduce__(self):
        return (type(self), (self.message, self.location))


class NotPositiveDefiniteError(FamaError):
    """Raised when a matrix expected to be positive definite is not."""

    def __init__(self, index: int, value: float):
        self.index = index
        self.value = value
        super().__init__(
            f"matrix is not positive definite: pivot {index} has value {value:.6g}"
        )

    def __reduce__(self):
        return (type(self), (self.index, self.value))


class ConvergenceError(FamaError):
    """Raised when an iterative solver exhausts its iteration budget."""

    def __init__(self, message: str, iterations: int, residual: float,
                 stage: Optional[int] = None):
        self.message = message
        self.iterations = iterations
        self.residual = residual
        self.stage = stage
        where = f" (removal step {stage})" if stage is not None else ""
        super().__init__(
            f"{message}{where}: {iterations} iterations, last residual {residual:.3e}"
        )

    def __reduce__(self):
        return (type(self), (self.message, self.iterations, self.residual, self.stage))


class ZeroEigenvalueError(FamaError):
    """Raised when the dominant generalized eigenvalue is zero."""
    pass


class ModelError(FamaError):
    """Raised when a channel model produces an invalid correlation matrix."""
    pass


class OracleLimitError(FamaError):
    """Raised when a brute-force reference is asked to do too much work."""
    pass


class OutputExistsError(FamaError):
    """Raised when a result file exists and overwriting was not requested."""
    pass


class ExperimentError(FamaError):
    """Raised when a Monte-Carlo run aborts; carries where it happened."""

    def __init__(self, message: str, trial: int, sweep_value: float, strategy: str):
        self.message = message
        self.trial = trial
        self.sweep_value = sweep_value
        self.strategy = strategy
        super().__init__(
            f"trial {trial}, sweep value {sweep_value:g}, strategy '{strategy}': {message}"
        )

    def __reduce__(self):
        return (type(self), (self.message, self.trial, self.sweep_value, self.strategy))
