"""Tests for the strategy registry and the simulator facade."""

import pytest

from multiport_fama import FamaSimulator
from multiport_fama.core.channel import trial_streams
from multiport_fama.core.receivers import design_dc, design_geport
from multiport_fama.models import GeportOptions, PortTopology, ReceiverDesign, SystemConfig
from multiport_fama.strategies import (
    GeportStrategy,
    ReceiverStrategy,
    available_strategies,
    get_strategy,
)
from multiport_fama.utils.exceptions import ValidationError


@pytest.fixture
def simulator():
    system = SystemConfig(M=3, K=3, L=2, snr=20.0, topology=PortTopology.line(8, 2.0))
    return FamaSimulator(system, strategies=("slow_fama", "mrc", "dc", "geport", "oracle"))


class TestRegistry:
    """Test cases for the strategy registry."""

    def test_available(self):
        """Built-in strategies in registration order."""
        assert available_strategies() == ["slow_fama", "mrc", "dc", "geport", "oracle"]

    def test_unknown(self):
        """Unknown names raise."""
        with pytest.raises(ValidationError):
            get_strategy("cuma")

    def test_metadata(self):
        """Metadata tells single-port from multiport strategies."""
        slow = get_strategy("slow_fama")
        assert isinstance(slow, ReceiverStrategy)
        assert slow.name == "slow_fama"
        assert not slow.metadata.uses_all_rf_chains
        assert get_strategy("dc").metadata.uses_all_rf_chains

    def test_geport_options(self):
        """GEPort exposes its options, others none."""
        strategy = get_strategy("geport", options=GeportOptions(solver="inverse_update"))
        assert isinstance(strategy, GeportStrategy)
        assert strategy.options()["solver"] == "inverse_update"
        assert get_strategy("dc").options() == {}

    def test_abstract_base(self):
        """The base class cannot be instantiated."""
        with pytest.raises(TypeError):
            ReceiverStrategy()


class TestFamaSimulator:
    """Test cases for FamaSimulator."""

    def test_evaluate(self, simulator):
        """evaluate returns one design per user and strategy."""
        H = simulator.draw_channels(trial_streams(3, 0, 3))
        designs = simulator.evaluate(H)
        assert list(designs) == ["slow_fama", "mrc", "dc", "geport", "oracle"]
        for name, per_user in designs.items():
            assert len(per_user) == 3
            assert all(isinstance(d, ReceiverDesign) and d.strategy == name for d in per_user)
        assert all(d.L == 1 for d in designs["slow_fama"])
        assert all(d.L == 2 for d in designs["dc"])

    def test_oracle_dominates(self, simulator):
        """No strategy beats the oracle on the same pair."""
        H = simulator.draw_channels(trial_streams(3, 1, 3))
        designs = simulator.evaluate(H, users=[0, 2])
        for i in range(2):
            best = designs["oracle"][i].achieved_sinr
            for name in ("slow_fama", "mrc", "dc", "geport"):
                assert designs[name][i].achieved_sinr <= best * (1 + 1e-9) + 1e-12

    def test_design_user_matches_library(self, simulator):
        """Simulator designs match the receiver functions."""
        H = simulator.draw_channels(trial_streams(3, 2, 3))
        pair = simulator.pair(H, 1)
        assert simulator.design_user(H, 1, "dc").ports == design_dc(pair, 2).ports
        geport = simulator.design_user(H, 1, "geport", L=3)
        assert geport.ports == design_geport(pair, 3).ports

    def test_correlation_shared(self, simulator):
        """Correlation is built once from the topology."""
        assert simulator.correlation.dim == 8
        assert simulator.correlation.topology == simulator.system.topology

    def test_unknown_strategy(self):
        """Unknown strategy names fail at construction."""
        system = SystemConfig(M=1, K=1, L=1, snr=1.0, topology=PortTopology.line(2, 0.5))
        with pytest.raises(ValidationError):
            FamaSimulator(system, strategies=("cuma",))
