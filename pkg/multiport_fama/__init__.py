"""multiport-fama - multiport fluid-antenna receivers for slow-FAMA downlinks."""

from multiport_fama._version import __version__
from multiport_fama.config import NumericsConfig, ExperimentConfig, load_experiment_config
from multiport_fama.models import (
    PortTopology,
    SystemConfig,
    ExperimentSpec,
    SweepResult,
    SignalMatrixPair,
    ReceiverDesign,
    GeportOptions,
)
from multiport_fama.simulator import FamaSimulator
from multiport_fama.core.harness import run_experiment, compare_strategies
from multiport_fama.core.output_handler import OutputHandler

__all__ = [
    "__version__",
    "FamaSimulator",
    "NumericsConfig",
    "ExperimentConfig",
    "load_experiment_config",
    "PortTopology",
    "SystemConfig",
    "ExperimentSpec",
    "SweepResult",
    "SignalMatrixPair",
    "ReceiverDesign",
    "GeportOptions",
    "run_experiment",
    "compare_strategies",
    "OutputHandler",
]
