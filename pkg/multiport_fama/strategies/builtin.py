"""The receiver strategies shipped with multiport-fama."""

from typing import Any, Dict, Optional

from multiport_fama.config import DEFAULT_NUMERICS, NumericsConfig
from multiport_fama.core.oracle import exhaustive_best_subset
from multiport_fama.core.receivers import design_dc, design_geport, design_mrc, design_slow_fama
from multiport_fama.models.receiver import GeportOptions, ReceiverDesign, SignalMatrixPair
from multiport_fama.strategies.base import ReceiverStrategy, StrategyMetadata


class SlowFamaStrategy(ReceiverStrategy):
    """Best single port; ignores L."""

    def get_metadata(self) -> StrategyMetadata:
        return StrategyMetadata(
            name="slow_fama",
            description="single port with the highest SINR",
            uses_all_rf_chains=False,
        )

    def design(self, pair: SignalMatrixPair, L: int) -> ReceiverDesign:
        return design_slow_fama(pair)


class MrcStrategy(ReceiverStrategy):

    def get_metadata(self) -> StrategyMetadata:
        return StrategyMetadata(
            name="mrc",
            description="L strongest ports, maximum-ratio combining",
        )

    def design(self, pair: SignalMatrixPair, L: int) -> ReceiverDesign:
        return design_mrc(pair, L)


class DigitalCombiningStrategy(ReceiverStrategy):

    def get_metadata(self) -> StrategyMetadata:
        return StrategyMetadata(
            name="dc",
            description="L best per-port-SINR ports, SINR-optimal combining",
        )

    def design(self, pair: SignalMatrixPair, L: int) -> ReceiverDesign:
        return design_dc(pair, L)


class GeportStrategy(ReceiverStrategy):
    """Greedy generalized-eigenvector port removal."""

    def __init__(self, options: Optional[GeportOptions] = None):
        self.geport_options = options or GeportOptions()
        super().__init__()

    def get_metadata(self) -> StrategyMetadata:
        return StrategyMetadata(
            name="geport",
            description="greedy removal by dominant generalized eigenvector entries",
        )

    def design(self, pair: SignalMatrixPair, L: int) -> ReceiverDesign:
        return design_geport(pair, L, self.geport_options)

    def options(self) -> Dict[str, Any]:
        return self.geport_options.to_dict()


class ExhaustiveStrategy(ReceiverStrategy):
    """Best L-subset by brute force; only for small N."""

    def __init__(self, numerics: NumericsConfig = DEFAULT_NUMERICS):
        self.numerics = numerics
        super().__init__()

    def get_metadata(self) -> StrategyMetadata:
        return StrategyMetadata(
            name="oracle",
            description="exhaustive search over all L-port subsets",
        )

    def design(self, pair: SignalMatrixPair, L: int) -> ReceiverDesign:
        return exhaustive_best_subset(pair, L, self.numerics).to_design()

    def options(self) -> Dict[str, Any]:
        return {"max_subsets": self.numerics.oracle_max_subsets}
