"""Domain types for multiport-fama."""

from multiport_fama.models.spectra import (
    HermitianMatrix,
    EigenDecomposition,
    GeneralizedEigenPair,
    IdentityCheck,
)
from multiport_fama.models.channel import PortTopology, CorrelationMatrix, ChannelRealization
from multiport_fama.models.receiver import (
    SignalMatrixPair,
    CombinerSolution,
    ReceiverDesign,
    DropReport,
    GeportOptions,
)
from multiport_fama.models.experiment import (
    SWEEP_AXES,
    SystemConfig,
    ExperimentSpec,
    SweepCell,
    SweepResult,
)

__all__ = [
    "HermitianMatrix",
    "EigenDecomposition",
    "GeneralizedEigenPair",
    "IdentityCheck",
    "PortTopology",
    "CorrelationMatrix",
    "ChannelRealization",
    "SignalMatrixPair",
    "CombinerSolution",
    "ReceiverDesign",
    "DropReport",
    "GeportOptions",
    "SWEEP_AXES",
    "SystemConfig",
    "ExperimentSpec",
    "SweepCell",
    "SweepResult",
]
