"""Validation utilities for multiport-fama."""

import math
from typing import Iterable, Sequence

import numpy as np

from multiport_fama.utils.exceptions import ValidationError


def validate_port_index(index: int, n_ports: int, name: str = "port") -> int:
    """Validate a 0-based index against a dimension.

    Args:
        index: Index to check
        n_ports: Number of valid positions
        name: Label used in the error message

    Returns:
        The index as a plain int

    Raises:
        ValidationError: If the index is out of range
    """
    if isinstance(index, bool) or not isinstance(index, (int, np.integer)):
        raise ValidationError(f"{name} index must be an integer, got {index!r}")
    if not 0 <= index < n_ports:
        raise ValidationError(f"{name} index {index} out of range [0, {n_ports})")
    return int(index)


def validate_port_set(ports: Iterable[int], n_ports: int) -> tuple:
    """Validate a set of distinct port indices.

    Returns:
        The ports as a tuple of ints, order preserved

    Raises:
        ValidationError: If empty, duplicated or out of range
    """
    checked = tuple(validate_port_index(p, n_ports) for p in ports)
    if not checked:
        raise ValidationError("port set must not be empty")
    if len(set(checked)) != len(checked):
        raise ValidationError(f"port set contains duplicates: {checked}")
    return checked


def validate_active_ports(L: int, n_ports: int) -> int:
    """Validate the number of active ports (RF chains)."""
    if isinstance(L, bool) or not isinstance(L, (int, np.integer)):
        raise ValidationError(f"L must be an integer, got {L!r}")
    if not 1 <= L <= n_ports:
        raise ValidationError(f"L must satisfy 1 <= L <= N={n_ports}, got {L}")
    return int(L)


def validate_positive(value: float, name: str) -> float:
    """Validate a finite, strictly positive real."""
    if not isinstance(value, (int, float, np.floating, np.integer)) or isinstance(value, bool):
        raise ValidationError(f"{name} must be a number, got {value!r}")
    if not math.isfinite(value) or value <= 0:
        raise ValidationError(f"{name} must be finite and > 0, got {value}")
    return float(value)


def validate_strictly_increasing(values: Sequence[float], name: str) -> tuple:
    """Validate a non-empty, strictly increasing sequence."""
    values = tuple(values)
    if not values:
        raise ValidationError(f"{name} must not be empty")
    for prev, cur in zip(values, values[1:]):
        if not cur > prev:
            raise ValidationError(f"{name} must be strictly increasing, got {values}")
    return values


def validate_square(matrix: np.ndarray, name: str = "matrix") -> np.ndarray:
    """Validate a finite square 2-D array.

    Raises:
        ValidationError: If not square or containing non-finite entries
    """
    matrix = np.asarray(matrix)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] == 0:
        raise ValidationError(f"{name} must be a non-empty square matrix, got shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ValidationError(f"{name} contains non-finite entries")
    return matrix
