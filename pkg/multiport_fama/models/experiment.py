"""Experiment description and aggregated sweep results."""

import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, Optional, Tuple

from multiport_fama.models.channel import PortTopology
from multiport_fama.models.receiver import GeportOptions
from multiport_fama.utils.conversions import db_to_linear
from multiport_fama.utils.exceptions import ValidationError
from multiport_fama.utils.validators import (
    validate_active_ports,
    validate_positive,
    validate_strictly_increasing,
)

SWEEP_AXES = ("snr_db", "L", "N")

KNOWN_STRATEGIES = ("slow_fama", "mrc", "dc", "geport", "oracle")


@dataclass(frozen=True)
class SystemConfig:
    """Downlink system: M BS antennas serving K single-stream users.

    ``snr`` is the linear transmit SNR. Precoders are canonical, so user k
    is served by BS antenna k and M must equal K.
    """

    M: int
    K: int
    L: int
    snr: float
    topology: PortTopology

    def __post_init__(self):
        if self.M < 1 or self.K < 1:
            raise ValidationError(f"M and K must be >= 1, got M={self.M}, K={self.K}")
        if self.M != self.K:
            raise ValidationError(f"M must equal K, got M={self.M}, K={self.K}")
        validate_active_ports(self.L, self.topology.n_ports)
        validate_positive(self.snr, "snr")

    @property
    def N(self) -> int:
        return self.topology.n_ports

    def at(self, axis: str, value: float) -> "SystemConfig":
        """Copy of this config moved to one sweep point."""
        if axis == "snr_db":
            return replace(self, snr=db_to_linear(value))
        if axis == "L":
            return replace(self, L=int(value))
        if axis == "N":
            return replace(self, topology=self.topology.with_ports(int(value)))
        raise ValidationError(f"unknown sweep axis '{axis}'")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "M": self.M,
            "K": self.K,
            "L": self.L,
            "snr": self.snr,
            "topology": self.topology.to_dict(),
        }


@dataclass(frozen=True)
class ExperimentSpec:
    """A Monte-Carlo sweep along one axis.

    SNR sweep values are in dB; L and N values are integers.
    ``target_user`` None averages the SE over all users.
    """

    base: SystemConfig
    axis: str
    values: Tuple[float, ...]
    strategies: Tuple[str, ...] = ("slow_fama", "mrc", "dc", "geport")
    trials: int = 2000
    master_seed: int = 0
    target_user: Optional[int] = None
    geport: GeportOptions = field(default_factory=GeportOptions)

    def __post_init__(self):
        """Validate spec after initialization."""
        if self.axis not in SWEEP_AXES:
            raise ValidationError(f"unknown sweep axis '{self.axis}', expected one of {SWEEP_AXES}")
        values = validate_strictly_increasing(self.values, f"{self.axis} sweep values")
        if self.axis in ("L", "N"):
            if any(int(v) != v or v < 1 for v in values):
                raise ValidationError(f"{self.axis} sweep values must be positive integers, got {values}")
            values = tuple(int(v) for v in values)
        else:
            values = tuple(float(v) for v in values)
        if self.axis == "L":
            for v in values:
                validate_active_ports(v, self.base.N)
        if self.axis == "N":
            if self.base.topology.kind != "line":
                raise ValidationError("N sweeps are defined for line topologies only")
            if values[0] < self.base.L:
                raise ValidationError(f"every N must be >= L={self.base.L}, got {values}")
            if values[-1] >= 2 and self.base.topology.extent[0] <= 0:
                raise ValidationError("N sweep needs a positive aperture")
        strategies = tuple(self.strategies)
        if not strategies:
            raise ValidationError("strategy set must not be empty")
        unknown = [s for s in strategies if s not in KNOWN_STRATEGIES]
        if unknown:
            raise ValidationError(f"unknown strategies {unknown}, expected a subset of {KNOWN_STRATEGIES}")
        if len(set(strategies)) != len(strategies):
            raise ValidationError(f"duplicate strategies in {strategies}")
        if self.trials < 1:
            raise ValidationError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= self.master_seed < 2 ** 64:
            raise ValidationError(f"master_seed must be a 64-bit unsigned integer, got {self.master_seed}")
        if self.target_user is not None and not 0 <= self.target_user < self.base.K:
            raise ValidationError(f"target_user {self.target_user} out of range [0, {self.base.K})")
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "strategies", strategies)

    def system_at(self, value: float) -> SystemConfig:
        return self.base.at(self.axis, value)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "base": self.base.to_dict(),
            "axis": self.axis,
            "values": list(self.values),
            "strategies": list(self.strategies),
            "trials": self.trials,
            "master_seed": self.master_seed,
            "target_user": self.target_user,
            "geport": self.geport.to_dict(),
        }


@dataclass(frozen=True)
class SweepCell:
    """Aggregate SE of one strategy at one sweep point."""

    sweep_value: float
    strategy: str
    mean_se: float
    std_se: float
    trials: int

    @property
    def stderr(self) -> float:
        return self.std_se / math.sqrt(self.trials)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sweep_value": self.sweep_value,
            "strategy": self.strategy,
            "mean_se": self.mean_se,
            "std_se": self.std_se,
            "trials": self.trials,
        }


@dataclass(frozen=True)
class SweepResult:
    """All cells of a finished sweep, in (sweep value, strategy) order."""

    axis: str
    cells: Tuple[SweepCell, ...]
    spec: Optional[ExperimentSpec] = None

    def __post_init__(self):
        object.__setattr__(self, "cells", tuple(self.cells))
        if self.spec is not None:
            for cell in self.cells:
                if cell.trials != self.spec.trials:
                    raise ValidationError(
                        f"cell ({cell.sweep_value}, {cell.strategy}) has {cell.trials} trials, "
                        f"expected {self.spec.trials}"
                    )

    @property
    def seed(self) -> Optional[int]:
        return None if self.spec is None else self.spec.master_seed

    def values(self) -> List[float]:
        seen: List[float] = []
        for cell in self.cells:
            if cell.sweep_value not in seen:
                seen.append(cell.sweep_value)
        return seen

    def strategies(self) -> List[str]:
        seen: List[str] = []
        for cell in self.cells:
            if cell.strategy not in seen:
                seen.append(cell.strategy)
        return seen

    def cell(self, sweep_value: float, strategy: str) -> SweepCell:
        for cell in self.cells:
            if cell.sweep_value == sweep_value and cell.strategy == strategy:
                return cell
        raise KeyError((sweep_value, strategy))

    def curve(self, strategy: str) -> List[float]:
        """Mean SE of one strategy at every sweep value."""
        return [self.cell(v, strategy).mean_se for v in self.values()]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "axis": self.axis,
            "seed": self.seed,
            "cells": [c.to_dict() for c in self.cells],
            "spec": None if self.spec is None else self.spec.to_dict(),
        }
