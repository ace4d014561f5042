"""Seeded Monte-Carlo sweeps over SNR, active ports and port density."""

import logging
import math
from dataclasses import dataclass
from itertools import combinations
from multiprocessing import Pool
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from multiport_fama.config import DEFAULT_NUMERICS, NumericsConfig
from multiport_fama.core.channel import trial_streams
from multiport_fama.core.receivers import spectral_efficiency
from multiport_fama.models.experiment import ExperimentSpec, SweepCell, SweepResult
from multiport_fama.models.receiver import SignalMatrixPair
from multiport_fama.simulator import FamaSimulator
from multiport_fama.utils.conversions import db_to_linear
from multiport_fama.utils.exceptions import ExperimentError, FamaError, ValidationError

logger = logging.getLogger(__name__)


class TrialRunner:
    """Evaluates every (sweep point, strategy) cell of one trial."""

    def __init__(self, spec: ExperimentSpec, numerics: NumericsConfig = DEFAULT_NUMERICS):
        self.spec = spec
        kwargs = dict(strategies=spec.strategies, geport=spec.geport, numerics=numerics)
        if spec.axis == "N":
            self.simulators = [FamaSimulator(spec.system_at(v), **kwargs) for v in spec.values]
        else:
            shared = FamaSimulator(spec.base, **kwargs)
            self.simulators = [shared] * len(spec.values)
        self.users = (
            list(range(spec.base.K)) if spec.target_user is None else [spec.target_user]
        )

    def _pairs(self, sim: FamaSimulator, H, snr: float) -> List[SignalMatrixPair]:
        return [sim.pair(H, k, snr) for k in self.users]

    def run(self, trial: int) -> np.ndarray:
        """Mean SE over the evaluated users, shape (points, strategies)."""
        spec = self.spec
        out = np.empty((len(spec.values), len(spec.strategies)))
        base_snr = spec.base.snr
        shared_pairs = None
        H = None
        if spec.axis != "N":
            sim = self.simulators[0]
            H = sim.draw_channels(trial_streams(spec.master_seed, trial, spec.base.K))
            if spec.axis == "L":
                shared_pairs = self._pairs(sim, H, base_snr)
        for p, value in enumerate(spec.values):
            sim = self.simulators[p]
            L = spec.base.L
            if spec.axis == "snr_db":
                pairs = self._pairs(sim, H, db_to_linear(value))
            elif spec.axis == "L":
                pairs, L = shared_pairs, int(value)
            else:
                H = sim.draw_channels(trial_streams(spec.master_seed, trial, spec.base.K, point=p))
                pairs = self._pairs(sim, H, base_snr)
            for s, name in enumerate(spec.strategies):
                try:
                    designs = [sim.strategies[name].design(pair, L) for pair in pairs]
                except (FamaError, np.linalg.LinAlgError, ValueError) as exc:
                    raise ExperimentError(str(exc), trial, value, name) from exc
                out[p, s] = math.fsum(spectral_efficiency(d.achieved_sinr) for d in designs) / len(designs)
        return out


_RUNNER: Optional[TrialRunner] = None


def _init_worker(spec: ExperimentSpec, numerics: NumericsConfig) -> None:
    global _RUNNER
    _RUNNER = TrialRunner(spec, numerics)


def _run_trial(trial: int) -> np.ndarray:
    return _RUNNER.run(trial)


def _aggregate(spec: ExperimentSpec, samples: np.ndarray) -> List[SweepCell]:
    cells = []
    for p, value in enumerate(spec.values):
        for s, name in enumerate(spec.strategies):
            column = samples[:, p, s]
            mean = math.fsum(column) / spec.trials
            if spec.trials > 1:
                std = math.sqrt(math.fsum((x - mean) ** 2 for x in column) / (spec.trials - 1))
            else:
                std = 0.0
            cells.append(SweepCell(value, name, mean, std, spec.trials))
    return cells


def run_experiment(
    spec: ExperimentSpec, workers: int = 1, numerics: NumericsConfig = DEFAULT_NUMERICS
) -> SweepResult:
    """Run all trials and aggregate mean and standard deviation of the SE.

    Trial t draws its channels from streams keyed by (master_seed, t), and
    results are reduced in trial order, so the outcome does not depend on
    ``workers``.

    Args:
        spec: Experiment specification
        workers: Worker processes (1 runs in-process)
        numerics: Solver tolerances

    Returns:
        SweepResult with one cell per (sweep value, strategy)

    Raises:
        ExperimentError: If any receiver fails, with its trial, sweep value and strategy
    """
    logger.info(
        "running %s sweep: %d points, %d strategies, %d trials, %d worker(s)",
        spec.axis, len(spec.values), len(spec.strategies), spec.trials, workers,
    )
    if workers <= 1:
        runner = TrialRunner(spec, numerics)
        rows = [runner.run(t) for t in range(spec.trials)]
    else:
        chunksize = max(1, spec.trials // (workers * 8))
        with Pool(processes=workers, initializer=_init_worker, initargs=(spec, numerics)) as pool:
            rows = list(pool.imap(_run_trial, range(spec.trials), chunksize=chunksize))
    result = SweepResult(spec.axis, _aggregate(spec, np.stack(rows)), spec)
    logger.info("sweep finished")
    return result


@dataclass(frozen=True)
class StrategyStanding:
    """Rank of a strategy at one sweep point (1 is best)."""
    rank: int
    strategy: str
    mean_se: float
    stderr: float


@dataclass(frozen=True)
class PairwiseGap:
    """Mean-SE difference between two strategies at one sweep point."""
    leader: str
    follower: str
    difference: float
    stderr: float

    def exceeds(self, n_stderr: float = 2.0) -> bool:
        """True if the difference is larger than ``n_stderr`` standard errors."""
        return self.difference > n_stderr * self.stderr


@dataclass(frozen=True)
class SweepComparison:
    sweep_value: float
    standings: Tuple[StrategyStanding, ...]
    gaps: Tuple[PairwiseGap, ...]

    def gap(self, leader: str, follower: str) -> PairwiseGap:
        """Signed gap of ``leader`` over ``follower``, whichever ranks higher."""
        for g in self.gaps:
            if (g.leader, g.follower) == (leader, follower):
                return g
            if (g.leader, g.follower) == (follower, leader):
                return PairwiseGap(leader, follower, -g.difference, g.stderr)
        raise KeyError((leader, follower))

    def order(self) -> List[str]:
        return [s.strategy for s in self.standings]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "sweep_value": self.sweep_value,
            "order": self.order(),
            "gaps": [g.__dict__ for g in self.gaps],
        }


def compare_strategies(result: SweepResult) -> List[SweepComparison]:
    """Rank strategies by mean SE at every sweep point, with pairwise gaps.

    Raises:
        ValidationError: If fewer than two strategies are present
    """
    strategies: Sequence[str] = result.strategies()
    if len(strategies) < 2:
        raise ValidationError("comparing strategies needs at least two of them")
    report = []
    for value in result.values():
        cells = [result.cell(value, name) for name in strategies]
        ranked = sorted(cells, key=lambda c: -c.mean_se)
        standings = tuple(
            StrategyStanding(i + 1, c.strategy, c.mean_se, c.stderr) for i, c in enumerate(ranked)
        )
        gaps = tuple(
            PairwiseGap(a.strategy, b.strategy, a.mean_se - b.mean_se,
                        math.sqrt(a.stderr ** 2 + b.stderr ** 2))
            for a, b in combinations(ranked, 2)
        )
        report.append(SweepComparison(value, standings, gaps))
    return report
