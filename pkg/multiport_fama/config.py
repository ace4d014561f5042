"""Configuration settings for multiport-fama.

Two layers live here: ``NumericsConfig`` holds the solver tolerances used as
library defaults, and the pydantic models describe the JSON experiment files
read by the command line.
"""

import json
from dataclasses import dataclass, fields
from pathlib import Path
from typing import TYPE_CHECKING, Any, Dict, List, Literal, Optional, Sequence, Union

from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    NonNegativeFloat,
    NonNegativeInt,
    PositiveFloat,
    PositiveInt,
    model_validator,
)
from pydantic import ValidationError as PydanticValidationError

from multiport_fama.utils.conversions import db_to_linear
from multiport_fama.utils.exceptions import ConfigurationError, ValidationError

if TYPE_CHECKING:
    from multiport_fama.models.channel import PortTopology
    from multiport_fama.models.experiment import ExperimentSpec, SystemConfig
    from multiport_fama.models.receiver import GeportOptions


@dataclass
class NumericsConfig:
    """Tolerances and limits for the numerical kernels."""

    # Hermitian input check, relative to the largest entry
    hermitian_tol: float = 1e-12

    # Eigensolver settings
    eig_method: str = "auto"
    jacobi_max_dim: int = 256
    jacobi_off_tol: float = 1e-13
    jacobi_rotation_factor: int = 100

    # Power method settings
    power_tol: float = 1e-10
    power_max_iter: int = 10_000
    power_residual_tol: float = 1e-8

    # Correlation matrix PSD repair, relative to the largest eigenvalue
    psd_clamp_tol: float = 1e-10

    # Brute-force guards
    oracle_max_subsets: int = 1_000_000
    oracle_max_dim: int = 16

    @classmethod
    def from_dict(cls, config_dict: Dict[str, Any]) -> "NumericsConfig":
        """Create NumericsConfig from dictionary, ignoring unknown keys."""
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in config_dict.items() if k in known})

    def to_dict(self) -> Dict[str, Any]:
        """Convert NumericsConfig to dictionary."""
        return {f.name: getattr(self, f.name) for f in fields(self)}


DEFAULT_NUMERICS = NumericsConfig()

DEFAULT_SNR_DB_GRID = (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0)
DEFAULT_L_GRID = (1, 2, 4, 6, 8)
DEFAULT_N_GRID = (25, 50, 100, 200, 400)
DEFAULT_GRIDS = {"snr_db": DEFAULT_SNR_DB_GRID, "L": DEFAULT_L_GRID, "N": DEFAULT_N_GRID}

StrategyName = Literal["slow_fama", "mrc", "dc", "geport", "oracle"]


class _Settings(BaseModel):
    model_config = ConfigDict(extra="forbid")


class TopologySettings(_Settings):
    """Fluid-antenna port layout as written in a config file."""

    kind: Literal["line", "grid"] = "line"
    counts: List[PositiveInt] = Field(default_factory=lambda: [100])
    extent: List[NonNegativeFloat] = Field(default_factory=lambda: [4.0])

    def build(self) -> "PortTopology":
        from multiport_fama.models.channel import PortTopology

        return PortTopology(self.kind, tuple(self.counts), tuple(self.extent))


class SystemSettings(_Settings):
    """Base station, users and receiver front end."""

    M: PositiveInt = 4
    K: PositiveInt = 4
    L: PositiveInt = 2
    snr_db: float = 15.0
    topology: TopologySettings = Field(default_factory=TopologySettings)

    @model_validator(mode="after")
    def _antennas_match_users(self) -> "SystemSettings":
        if self.M != self.K:
            raise ValueError(f"M must equal K (one BS antenna per user), got M={self.M}, K={self.K}")
        return self


class SweepSettings(_Settings):
    """Sweep grids; a missing grid falls back to the built-in default."""

    snr_db: Optional[List[float]] = None
    L: Optional[List[PositiveInt]] = None
    N: Optional[List[PositiveInt]] = None


class GeportSettings(_Settings):
    vector: Literal["whitened", "raw"] = "whitened"
    loss_budget: Optional[NonNegativeFloat] = None
    tol: PositiveFloat = 1e-10
    max_iter: PositiveInt = 10_000
    seed: NonNegativeInt = 0
    warm_start: bool = True
    solver: Literal["power", "inverse_update"] = "power"

    def to_options(self) -> "GeportOptions":
        from multiport_fama.models.receiver import GeportOptions

        return GeportOptions(
            vector=self.vector,
            loss_budget=self.loss_budget,
            tol=self.tol,
            max_iter=self.max_iter,
            seed=self.seed,
            warm_start=self.warm_start,
            solver=self.solver,
        )


class ExperimentConfig(_Settings):
    """Top-level experiment file schema."""

    system: SystemSettings = Field(default_factory=SystemSettings)
    sweep: SweepSettings = Field(default_factory=SweepSettings)
    strategies: List[StrategyName] = Field(
        default_factory=lambda: ["slow_fama", "mrc", "dc", "geport"], min_length=1
    )
    trials: PositiveInt = 2000
    seed: int = Field(0, ge=0, lt=2 ** 64)
    target_user: Optional[NonNegativeInt] = None
    geport: GeportSettings = Field(default_factory=GeportSettings)

    def build_system(self) -> "SystemConfig":
        """Build the library SystemConfig, converting the SNR from dB."""
        from multiport_fama.models.experiment import SystemConfig

        try:
            return SystemConfig(
                M=self.system.M,
                K=self.system.K,
                L=self.system.L,
                snr=db_to_linear(self.system.snr_db),
                topology=self.system.topology.build(),
            )
        except ValidationError as exc:
            raise ConfigurationError(str(exc), location="system") from exc

    def to_spec(self, axis: str) -> "ExperimentSpec":
        """Build the ExperimentSpec for a sweep along ``axis``.

        Args:
            axis: One of ``snr_db``, ``L`` or ``N``

        Raises:
            ConfigurationError: If the resulting spec is invalid
        """
        from multiport_fama.models.experiment import SWEEP_AXES, ExperimentSpec

        if axis not in SWEEP_AXES:
            raise ConfigurationError(f"unknown sweep axis '{axis}'")
        values = getattr(self.sweep, axis) or DEFAULT_GRIDS[axis]
        base = self.build_system()
        try:
            return ExperimentSpec(
                base=base,
                axis=axis,
                values=tuple(values),
                strategies=tuple(self.strategies),
                trials=self.trials,
                master_seed=self.seed,
                target_user=self.target_user,
                geport=self.geport.to_options(),
            )
        except ValidationError as exc:
            raise ConfigurationError(str(exc), location=f"sweep.{axis}") from exc


def _parse_override(key: str, raw: str) -> Any:
    if key in ("seed", "trials", "L"):
        return int(raw)
    if key == "snr_db":
        return float(raw)
    if key == "strategies":
        return [s.strip() for s in raw.split(",") if s.strip()]
    if key == "target_user":
        return None if raw.lower() in ("all", "none", "") else int(raw)
    raise ConfigurationError(
        "unknown override key (expected seed, trials, strategies, target_user, snr_db or L)",
        location=key,
    )


def apply_overrides(data: Dict[str, Any], overrides: Sequence[str]) -> Dict[str, Any]:
    """Apply ``key=value`` overrides to a raw config dictionary."""
    data = json.loads(json.dumps(data))
    for item in overrides:
        if "=" not in item:
            raise ConfigurationError(f"override '{item}' is not of the form key=value")
        key, raw = (part.strip() for part in item.split("=", 1))
        try:
            value = _parse_override(key, raw)
        except ValueError as exc:
            raise ConfigurationError(f"bad value '{raw}': {exc}", location=key) from exc
        if key in ("snr_db", "L"):
            data.setdefault("system", {})[key] = value
        else:
            data[key] = value
    return data


def _format_location(loc: Sequence[Union[str, int]]) -> str:
    return ".".join(str(part) for part in loc) or "config"


def parse_experiment_config(data: Any, overrides: Sequence[str] = ()) -> ExperimentConfig:
    """Validate a raw config mapping (or a run manifest) into an ExperimentConfig."""
    if not isinstance(data, dict):
        raise ConfigurationError("top level must be a JSON object")
    if "config" in data and "tool" in data:
        data = data["config"]
    data = apply_overrides(data, overrides)
    try:
        return ExperimentConfig.model_validate(data)
    except PydanticValidationError as exc:
        first = exc.errors()[0]
        raise ConfigurationError(first["msg"], location=_format_location(first["loc"])) from exc


def load_experiment_config(path: Union[str, Path], overrides: Sequence[str] = ()) -> ExperimentConfig:
    """Load and validate a JSON experiment config file.

    Args:
        path: Config file (or a previously written manifest.json)
        overrides: ``key=value`` strings applied after loading

    Returns:
        Validated ExperimentConfig

    Raises:
        ConfigurationError: With line/column or field location on failure
    """
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigurationError(f"cannot read config: {exc}", location=str(path)) from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigurationError(
            exc.msg, location=f"{path.name}: line {exc.lineno}, column {exc.colno}"
        ) from exc
    return parse_experiment_config(data, overrides)
