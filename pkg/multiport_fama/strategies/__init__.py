"""Receiver strategy registry."""

from typing import Dict, List, Type

from multiport_fama.strategies.base import ReceiverStrategy, StrategyMetadata
from multiport_fama.strategies.builtin import (
    DigitalCombiningStrategy,
    ExhaustiveStrategy,
    GeportStrategy,
    MrcStrategy,
    SlowFamaStrategy,
)
from multiport_fama.utils.exceptions import ValidationError

_REGISTRY: Dict[str, Type[ReceiverStrategy]] = {
    "slow_fama": SlowFamaStrategy,
    "mrc": MrcStrategy,
    "dc": DigitalCombiningStrategy,
    "geport": GeportStrategy,
    "oracle": ExhaustiveStrategy,
}


def available_strategies() -> List[str]:
    return list(_REGISTRY)


def get_strategy(name: str, **options) -> ReceiverStrategy:
    """Instantiate a strategy by name.

    Args:
        name: Registered strategy name
        **options: Constructor arguments (e.g. ``options=GeportOptions(...)``)

    Raises:
        ValidationError: If the name is unknown
    """
    try:
        cls = _REGISTRY[name]
    except KeyError:
        raise ValidationError(
            f"unknown strategy '{name}', expected one of {available_strategies()}"
        ) from None
    return cls(**options)


__all__ = [
    "ReceiverStrategy",
    "StrategyMetadata",
    "SlowFamaStrategy",
    "MrcStrategy",
    "DigitalCombiningStrategy",
    "GeportStrategy",
    "ExhaustiveStrategy",
    "available_strategies",
    "get_strategy",
]
