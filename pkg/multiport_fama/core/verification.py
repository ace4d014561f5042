"""Randomized self-checks of the eigen identities and receiver guarantees."""

import logging
from dataclasses import dataclass
from typing import Any, Callable, Dict, List

import numpy as np

from multiport_fama.core import oracle
from multiport_fama.core.linalg import (
    eigenvector_eigenvalue_identity_check,
    interlacing_check,
    power_method_gen,
    whiten_pair,
)
from multiport_fama.core.receivers import (
    design_dc,
    design_geport,
    rayleigh_quotient,
    sinr_drop_bound,
    sinr_drop_exact,
    solve_combiner,
)
from multiport_fama.models.receiver import SignalMatrixPair
from multiport_fama.models.spectra import HermitianMatrix

logger = logging.getLogger(__name__)

IDENTITY_TOL = 1e-8
PRODUCT_FORM_TOL = 1e-7
BOUND_SLACK = 1e-9
TIGHTNESS_TOL = 1e-8
COMBINER_TOL = 1e-8
DOMINANCE_SLACK = 1e-9


def random_complex(rng: np.random.Generator, shape) -> np.ndarray:
    """Unit-power circular complex Gaussian samples."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def random_hermitian(rng: np.random.Generator, n: int) -> HermitianMatrix:
    x = random_complex(rng, (n, n))
    return HermitianMatrix(0.5 * (x + x.conj().T))


def random_pd(rng: np.random.Generator, n: int, floor: float = 0.1) -> HermitianMatrix:
    """G G^H + floor * I for a square Gaussian G."""
    g = random_complex(rng, (n, n))
    b = g @ g.conj().T + floor * np.eye(n)
    return HermitianMatrix(0.5 * (b + b.conj().T))


def random_fama_pair(rng: np.random.Generator, n: int, K: int = 4, snr: float = None) -> SignalMatrixPair:
    """Rank-one pair shaped like a user with K-1 interferers."""
    snr = snr if snr is not None else float(10.0 ** rng.uniform(-1.0, 2.0))
    a = random_complex(rng, n)
    g = random_complex(rng, (n, K - 1))
    b = g @ g.conj().T + np.eye(n) / snr
    return SignalMatrixPair.rank_one(a, 0.5 * (b + b.conj().T), snr=snr)


def random_full_rank_pair(rng: np.random.Generator, n: int) -> SignalMatrixPair:
    x = random_complex(rng, (n, n))
    a = x @ x.conj().T
    return SignalMatrixPair.from_matrices(0.5 * (a + a.conj().T), random_pd(rng, n))


@dataclass(frozen=True)
class CheckOutcome:
    """Summary of one randomized check."""

    name: str
    instances: int
    worst_error: float
    tolerance: float
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "instances": self.instances,
            "worst_error": self.worst_error,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def _outcome(name: str, instances: int, errors: List[float], tolerance: float) -> CheckOutcome:
    worst = max(errors) if errors else 0.0
    outcome = CheckOutcome(name, instances, worst, tolerance, bool(worst <= tolerance))
    logger.info("%s: %d instances, worst %.3e (tol %.1e)", name, instances, worst, tolerance)
    return outcome


def check_identity(rng: np.random.Generator, instances: int) -> CheckOutcome:
    """Eigenvector-eigenvalue identity on random Hermitian matrices, dims 3 to 10."""
    errors = []
    for _ in range(instances):
        C = random_hermitian(rng, int(rng.integers(3, 11)))
        for i in range(C.dim):
            for l in range(C.dim):
                check = eigenvector_eigenvalue_identity_check(C, i, l)
                if not check.degenerate:
                    errors.append(check.error())
    return _outcome("eigenvector-eigenvalue identity", instances, errors, IDENTITY_TOL)


def check_product_form(rng: np.random.Generator, instances: int) -> CheckOutcome:
    """Product-form drop equals the direct eigenvalue difference."""
    errors = []
    for j in range(instances):
        n = int(rng.integers(2, 13))
        pair = random_fama_pair(rng, n) if j % 2 == 0 else random_full_rank_pair(rng, n)
        for l in range(n):
            check = oracle.drop_both_sides(pair, l)
            if not check.ill_conditioned:
                errors.append(check.error())
    return _outcome("SINR drop product form", instances, errors, PRODUCT_FORM_TOL)


def check_interlacing(rng: np.random.Generator, instances: int) -> CheckOutcome:
    """Whitened matrices interlace with every principal minor; error counts violations."""
    violations = 0
    for j in range(instances):
        n = int(rng.integers(2, 13))
        pair = random_fama_pair(rng, n) if j % 2 == 0 else random_full_rank_pair(rng, n)
        C, _, _ = whiten_pair(pair.A, pair.B)
        violations += sum(not interlacing_check(C, l) for l in range(n))
    return _outcome("interlacing", instances, [float(violations)], 0.0)


def check_drop_bound(rng: np.random.Generator, instances: int) -> CheckOutcome:
    """Bound never exceeds the exact drop and is tight for rank-one pairs."""
    errors = []
    violations = 0
    for j in range(instances):
        n = int(rng.integers(2, 13))
        rank_one = j % 2 == 0
        pair = random_fama_pair(rng, n) if rank_one else random_full_rank_pair(rng, n)
        for l in range(n):
            exact = sinr_drop_exact(pair, l)
            bound = sinr_drop_bound(pair, l)
            scale = max(1.0, abs(exact))
            if bound > exact + BOUND_SLACK * scale:
                violations += 1
            if rank_one:
                errors.append(abs(bound - exact) / scale)
    outcome = _outcome("SINR drop bound", instances, errors, TIGHTNESS_TOL)
    if violations:
        logger.info("SINR drop bound exceeded the exact drop %d times", violations)
        return CheckOutcome(outcome.name, instances, float("inf"), TIGHTNESS_TOL, False)
    return outcome


def check_combiner(rng: np.random.Generator, instances: int, probes: int = 200) -> CheckOutcome:
    """Closed-form combiner beats random probes and matches power iteration."""
    errors = []
    for _ in range(instances):
        pair = random_fama_pair(rng, 10).restrict([0, 1, 2])
        solution = solve_combiner(pair, range(3))
        reference = power_method_gen(pair.A, pair.B, seed=int(rng.integers(2 ** 31)))
        errors.append(abs(solution.sinr - reference.eigenvalue) / max(reference.eigenvalue, 1e-300))
        w = random_complex(rng, (probes, 3))
        best_probe = max(rayleigh_quotient(pair.A, pair.B, row) for row in w)
        errors.append(max(best_probe - solution.sinr, 0.0) / max(solution.sinr, 1.0))
    return _outcome("combiner optimality", instances, errors, COMBINER_TOL)


def check_oracle_dominance(rng: np.random.Generator, instances: int, n: int = 8, L: int = 2) -> CheckOutcome:
    """Exhaustive search is never beaten by DC or GEPort."""
    errors = []
    for _ in range(instances):
        pair = random_fama_pair(rng, n, snr=10.0 ** 1.5)
        best = oracle.exhaustive_best_subset(pair, L).best_sinr
        scale = max(1.0, best)
        for design in (design_dc(pair, L), design_geport(pair, L)):
            errors.append(max(design.achieved_sinr - best, 0.0) / scale)
    return _outcome("oracle dominance", instances, errors, DOMINANCE_SLACK)


QUICK_CHECKS: Dict[str, Callable[[np.random.Generator, int], CheckOutcome]] = {
    "identity": check_identity,
    "interlacing": check_interlacing,
    "product_form": check_product_form,
    "bound": check_drop_bound,
    "combiner": check_combiner,
    "oracle": check_oracle_dominance,
}


def run_quick_suite(instances: int = 20, seed: int = 0) -> List[CheckOutcome]:
    """Run every quick check with its own child generator."""
    children = np.random.SeedSequence(seed).spawn(len(QUICK_CHECKS))
    return [
        check(np.random.default_rng(child), instances)
        for child, check in zip(children, QUICK_CHECKS.values())
    ]
