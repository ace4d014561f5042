"""Brute-force references for port selection and SINR-drop formulas."""

import logging
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Any, Dict, Sequence, Tuple

import numpy as np

from multiport_fama.config import DEFAULT_NUMERICS, NumericsConfig
from multiport_fama.core.linalg import hermitian_eig, principal_minor, whiten_pair
from multiport_fama.core.receivers import solve_combiner
from multiport_fama.models.receiver import ReceiverDesign, SignalMatrixPair
from multiport_fama.utils.exceptions import OracleLimitError, ValidationError
from multiport_fama.utils.validators import validate_active_ports, validate_port_index

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class OracleResult:
    """Best L-port subset found by exhaustive search."""

    best_ports: Tuple[int, ...]
    best_sinr: float
    evaluated_subsets: int
    w: np.ndarray = None
    degenerate: bool = False

    def to_design(self) -> ReceiverDesign:
        return ReceiverDesign(self.best_ports, self.w, self.best_sinr,
                              strategy="oracle", degenerate=self.degenerate)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "best_ports": list(self.best_ports),
            "best_sinr": self.best_sinr,
            "evaluated_subsets": self.evaluated_subsets,
        }


def exhaustive_best_subset(
    pair: SignalMatrixPair, L: int, numerics: NumericsConfig = DEFAULT_NUMERICS
) -> OracleResult:
    """Evaluate the optimal combiner on every L-subset, in lexicographic order.

    The first subset reaching the maximum wins.

    Raises:
        OracleLimitError: If C(N, L) exceeds the subset guard
    """
    L = validate_active_ports(L, pair.dim)
    total = math.comb(pair.dim, L)
    if total > numerics.oracle_max_subsets:
        raise OracleLimitError(
            f"C({pair.dim}, {L}) = {total} subsets exceeds the limit of {numerics.oracle_max_subsets}"
        )
    best = None
    best_subset: Sequence[int] = ()
    evaluated = 0
    for subset in combinations(range(pair.dim), L):
        solution = solve_combiner(pair, subset)
        evaluated += 1
        if best is None or solution.sinr > best.sinr:
            best, best_subset = solution, subset
    logger.debug("oracle evaluated %d subsets, best SINR %.6g", evaluated, best.sinr)
    return OracleResult(
        best_ports=tuple(pair.ports[i] for i in best_subset),
        best_sinr=best.sinr,
        evaluated_subsets=evaluated,
        w=best.w,
        degenerate=best.degenerate,
    )


@dataclass(frozen=True)
class ProductFormCheck:
    """Product-form and direct SINR drop for one port."""

    product_form: float
    direct_form: float
    ill_conditioned: bool = False

    def error(self) -> float:
        return abs(self.product_form - self.direct_form) / max(
            abs(self.product_form), abs(self.direct_form), 1.0
        )


def drop_product_form(weight: float, lambdas: np.ndarray, alphas: np.ndarray) -> float:
    """Drop from the full and reduced spectra.

    ``weight * (lam_N - lam_{N-1}) * prod_{t <= N-2} (lam_N - lam_t) / (lam_N - alpha_t)``
    with both spectra ascending.
    """
    lambdas = np.asarray(lambdas, dtype=float)
    alphas = np.asarray(alphas, dtype=float)
    if alphas.size != lambdas.size - 1:
        raise ValidationError(f"expected {lambdas.size - 1} reduced eigenvalues, got {alphas.size}")
    top = lambdas[-1]
    ratios = (top - lambdas[:-2]) / (top - alphas[:-1])
    return float(weight * (top - lambdas[-2]) * np.prod(ratios))


def drop_both_sides(
    pair: SignalMatrixPair, l: int, numerics: NumericsConfig = DEFAULT_NUMERICS
) -> ProductFormCheck:
    """Recompute the drop of port ``l`` from dense spectra, both ways.

    The pair is whitened with port l factorized last, so deleting the last
    row and column of the whitened matrix is exactly the reduced pair.

    Raises:
        OracleLimitError: If the pair has more than ``oracle_max_dim`` ports
    """
    if pair.dim > numerics.oracle_max_dim:
        raise OracleLimitError(f"dense drop check limited to {numerics.oracle_max_dim} ports, got {pair.dim}")
    if pair.dim < 2:
        raise ValidationError("drop check needs at least two ports")
    l = validate_port_index(l, pair.dim)
    C, _, _ = whiten_pair(pair.A, pair.B, last_port=l)
    eig = hermitian_eig(C, method="jacobi", numerics=numerics)
    lambdas = eig.eigenvalues
    alphas = hermitian_eig(principal_minor(C, C.dim - 1), method="jacobi", numerics=numerics).eigenvalues
    weight = float(np.abs(eig.eigenvectors[-1, -1]) ** 2)
    spread = eig.spread()
    ill = spread == 0.0 or (lambdas[-1] - lambdas[-2]) < 1e-9 * spread
    return ProductFormCheck(
        product_form=drop_product_form(weight, lambdas, alphas),
        direct_form=float(lambdas[-1] - alphas[-1]),
        ill_conditioned=bool(ill),
    )
