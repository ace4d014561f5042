"""Utility functions and classes for multiport-fama."""

from multiport_fama.utils.conversions import db_to_linear, linear_to_db
from multiport_fama.utils.validators import (
    validate_port_index,
    validate_port_set,
    validate_active_ports,
    validate_positive,
    validate_strictly_increasing,
    validate_square,
)
from multiport_fama.utils.exceptions import (
    FamaError,
    ValidationError,
    ConfigurationError,
    NotPositiveDefiniteError,
    ConvergenceError,
    ZeroEigenvalueError,
    ModelError,
    OracleLimitError,
    OutputExistsError,
    ExperimentError,
)

__all__ = [
    "db_to_linear",
    "linear_to_db",
    "validate_port_index",
    "validate_port_set",
    "validate_active_ports",
    "validate_positive",
    "validate_strictly_increasing",
    "validate_square",
    "FamaError",
    "ValidationError",
    "ConfigurationError",
    "NotPositiveDefiniteError",
    "ConvergenceError",
    "ZeroEigenvalueError",
    "ModelError",
    "OracleLimitError",
    "OutputExistsError",
    "ExperimentError",
]
