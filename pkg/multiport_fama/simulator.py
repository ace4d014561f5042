"""Simulator that ties channel draws to the receiver strategies."""

import logging
from typing import Dict, Iterable, List, Optional, Sequence

from multiport_fama.config import DEFAULT_NUMERICS, NumericsConfig
from multiport_fama.core.channel import RngStream, correlation_matrix, sample_channels
from multiport_fama.core.receivers import build_pair
from multiport_fama.models.channel import ChannelRealization, CorrelationMatrix
from multiport_fama.models.experiment import SystemConfig
from multiport_fama.models.receiver import GeportOptions, ReceiverDesign, SignalMatrixPair
from multiport_fama.strategies import ReceiverStrategy, get_strategy

logger = logging.getLogger(__name__)


class FamaSimulator:
    """Orchestrates channel synthesis and per-user receiver design."""

    def __init__(
        self,
        system: SystemConfig,
        strategies: Sequence[str] = ("slow_fama", "mrc", "dc", "geport"),
        geport: Optional[GeportOptions] = None,
        numerics: NumericsConfig = DEFAULT_NUMERICS,
        correlation: Optional[CorrelationMatrix] = None,
    ):
        """Initialize the simulator.

        Args:
            system: System configuration
            strategies: Names of the strategies to evaluate
            geport: GEPort settings
            numerics: Solver tolerances
            correlation: Precomputed port correlation (built from the topology otherwise)
        """
        self.system = system
        self.numerics = numerics
        self.geport_options = geport or GeportOptions()
        self.correlation = correlation or correlation_matrix(system.topology, numerics)
        self.strategies: Dict[str, ReceiverStrategy] = {}
        for name in strategies:
            kwargs = {}
            if name == "geport":
                kwargs["options"] = self.geport_options
            elif name == "oracle":
                kwargs["numerics"] = numerics
            self.strategies[name] = get_strategy(name, **kwargs)
        logger.debug("simulator ready: %s, strategies %s", system.topology, list(self.strategies))

    def draw_channels(self, streams: RngStream) -> ChannelRealization:
        """Draw one channel realization for all users."""
        return sample_channels(self.correlation, self.system.M, self.system.K, streams)

    def pair(self, H: ChannelRealization, k: int, snr: Optional[float] = None) -> SignalMatrixPair:
        return build_pair(H, k, self.system.snr if snr is None else snr)

    def design_user(
        self,
        H: ChannelRealization,
        k: int,
        strategy: str,
        snr: Optional[float] = None,
        L: Optional[int] = None,
        pair: Optional[SignalMatrixPair] = None,
    ) -> ReceiverDesign:
        """Design the receiver of user ``k`` with one strategy."""
        pair = pair if pair is not None else self.pair(H, k, snr)
        return self.strategies[strategy].design(pair, self.system.L if L is None else L)

    def evaluate(
        self, H: ChannelRealization, users: Optional[Iterable[int]] = None
    ) -> Dict[str, List[ReceiverDesign]]:
        """Designs of every strategy for every (or the given) user."""
        users = list(range(self.system.K)) if users is None else list(users)
        pairs = [self.pair(H, k) for k in users]
        return {
            name: [self.design_user(H, k, name, pair=p) for k, p in zip(users, pairs)]
            for name in self.strategies
        }
