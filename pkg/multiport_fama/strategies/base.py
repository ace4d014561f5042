"""Base class for receiver strategies."""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Dict

from multiport_fama.models.receiver import ReceiverDesign, SignalMatrixPair


@dataclass
class StrategyMetadata:
    """Metadata for a receiver strategy."""
    name: str
    description: str
    uses_all_rf_chains: bool = True

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "name": self.name,
            "description": self.description,
            "uses_all_rf_chains": self.uses_all_rf_chains,
        }


class ReceiverStrategy(ABC):
    """Turns a user's signal matrix pair into a receiver design."""

    def __init__(self):
        """Initialize the strategy."""
        self.metadata = self.get_metadata()

    @property
    def name(self) -> str:
        return self.metadata.name

    @abstractmethod
    def get_metadata(self) -> StrategyMetadata:
        """Return strategy metadata.

        Returns:
            StrategyMetadata object
        """
        pass

    @abstractmethod
    def design(self, pair: SignalMatrixPair, L: int) -> ReceiverDesign:
        """Select ports and a combiner.

        Args:
            pair: Signal matrix pair of one user
            L: Number of RF chains available

        Returns:
            ReceiverDesign for the user
        """
        pass

    def options(self) -> Dict[str, Any]:
        """Strategy settings echoed into run manifests."""
        return {}

    def __repr__(self) -> str:
        return f"{type(self).__name__}(name='{self.name}')"
