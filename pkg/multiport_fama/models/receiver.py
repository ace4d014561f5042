"""Receiver-side data types: signal matrix pairs and receiver designs."""

import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np

from multiport_fama.config import DEFAULT_NUMERICS
from multiport_fama.models.spectra import ArrayLike, HermitianMatrix
from multiport_fama.utils.exceptions import ValidationError
from multiport_fama.utils.validators import validate_port_index, validate_port_set

UNIT_NORM_TOL = 1e-12

EIGENVECTOR_CONVENTIONS = ("whitened", "raw")

GEPORT_SOLVERS = ("power", "inverse_update")

# Relative slack of the drop ordering checks in DropReport
DROP_REPORT_TOL = 1e-7


@dataclass(eq=False)
class SignalMatrixPair:
    """Desired-signal matrix A and interference-plus-noise matrix B of one user.

    ``a_vec`` is set when A = a a^H is known to be rank one, which lets the
    receivers use closed forms. ``ports`` maps local rows back to the
    original port indices after restriction.
    """

    A: HermitianMatrix
    B: HermitianMatrix
    a_vec: Optional[np.ndarray] = None
    user: Optional[int] = None
    snr: Optional[float] = None
    ports: Tuple[int, ...] = field(default=None)

    def __post_init__(self):
        self.A = HermitianMatrix.coerce(self.A)
        self.B = HermitianMatrix.coerce(self.B)
        if self.A.dim != self.B.dim:
            raise ValidationError(f"A is {self.A.dim}x{self.A.dim} but B is {self.B.dim}x{self.B.dim}")
        if self.a_vec is not None:
            self.a_vec = np.asarray(self.a_vec, dtype=complex).reshape(-1)
            if self.a_vec.size != self.dim:
                raise ValidationError(f"a_vec has {self.a_vec.size} entries, expected {self.dim}")
        if self.ports is None:
            self.ports = tuple(range(self.dim))
        elif len(self.ports) != self.dim:
            raise ValidationError(f"{len(self.ports)} port labels for a {self.dim}-port pair")

    @classmethod
    def from_matrices(cls, A: ArrayLike, B: ArrayLike, **kwargs: Any) -> "SignalMatrixPair":
        """Build a pair from arbitrary Hermitian A (PSD) and positive definite B."""
        return cls(HermitianMatrix.coerce(A), HermitianMatrix.coerce(B), **kwargs)

    @classmethod
    def rank_one(cls, a_vec: np.ndarray, B: ArrayLike, **kwargs: Any) -> "SignalMatrixPair":
        """Build a pair with A = a a^H."""
        a_vec = np.asarray(a_vec, dtype=complex).reshape(-1)
        return cls(HermitianMatrix(np.outer(a_vec, a_vec.conj())), HermitianMatrix.coerce(B),
                   a_vec=a_vec, **kwargs)

    @property
    def dim(self) -> int:
        return self.A.dim

    @property
    def is_rank_one(self) -> bool:
        return self.a_vec is not None

    def port_sinrs(self) -> np.ndarray:
        """Single-port SINRs A_rr / B_rr for every row."""
        return self.A.entries.diagonal().real / self.B.entries.diagonal().real

    def restrict(self, ports: Sequence[int]) -> "SignalMatrixPair":
        """Principal sub-pair on the given local row indices, in the given order."""
        idx = np.asarray(validate_port_set(ports, self.dim), dtype=int)
        sub = np.ix_(idx, idx)
        return SignalMatrixPair(
            HermitianMatrix(self.A.entries[sub]),
            HermitianMatrix(self.B.entries[sub]),
            a_vec=None if self.a_vec is None else self.a_vec[idx],
            user=self.user,
            snr=self.snr,
            ports=tuple(self.ports[i] for i in idx),
        )

    def without(self, l: int) -> "SignalMatrixPair":
        """Sub-pair with local row/column ``l`` deleted."""
        l = validate_port_index(l, self.dim)
        if self.dim < 2:
            raise ValidationError("cannot remove a port from a single-port pair")
        return self.restrict([i for i in range(self.dim) if i != l])


@dataclass(frozen=True, eq=False)
class CombinerSolution:
    """Optimal combiner on a fixed port set."""

    w: np.ndarray
    sinr: float
    degenerate: bool = False


@dataclass(frozen=True, eq=False)
class ReceiverDesign:
    """Selected ports plus unit-norm combiner for one user.

    Attributes:
        ports: Original port indices, ascending (0-based)
        w: Unit-norm combining weights aligned with ``ports``
        achieved_sinr: SINR reached by this design
        strategy: Name of the strategy that produced it
        degenerate: True when no desired signal reaches the selected ports
        removed_ports: GEPort removal order (empty for other strategies)
        loss_trace: Accumulated SINR loss after each GEPort removal, starting at 0
    """

    ports: Tuple[int, ...]
    w: np.ndarray
    achieved_sinr: float
    strategy: str = ""
    degenerate: bool = False
    removed_ports: Tuple[int, ...] = ()
    loss_trace: Tuple[float, ...] = ()

    def __post_init__(self):
        """Validate design after initialization."""
        ports = tuple(int(p) for p in self.ports)
        if not ports or min(ports) < 0 or len(set(ports)) != len(ports):
            raise ValidationError(f"ports must be distinct non-negative indices, got {ports}")
        w = np.asarray(self.w, dtype=complex).reshape(-1)
        if w.size != len(ports):
            raise ValidationError(f"combiner has {w.size} entries for {len(ports)} ports")
        norm = float(np.linalg.norm(w))
        if abs(norm - 1.0) > UNIT_NORM_TOL:
            raise ValidationError(f"combiner must have unit norm, got {norm:.15g}")
        if not math.isfinite(self.achieved_sinr) or self.achieved_sinr < 0:
            raise ValidationError(f"achieved SINR must be finite and >= 0, got {self.achieved_sinr}")
        object.__setattr__(self, "ports", ports)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "achieved_sinr", float(self.achieved_sinr))

    @property
    def L(self) -> int:
        return len(self.ports)

    @property
    def spectral_efficiency(self) -> float:
        return math.log2(1.0 + self.achieved_sinr)

    def to_dict(self) -> Dict[str, Any]:
        """Convert design to dictionary."""
        return {
            "strategy": self.strategy,
            "ports": list(self.ports),
            "w": [[z.real, z.imag] for z in self.w],
            "sinr": self.achieved_sinr,
            "se": self.spectral_efficiency,
            "degenerate": self.degenerate,
            "removed_ports": list(self.removed_ports),
            "loss_trace": list(self.loss_trace),
        }

    def __str__(self) -> str:
        return (f"{self.strategy or 'design'}: ports {list(self.ports)}, "
                f"SINR {self.achieved_sinr:.6g}, SE {self.spectral_efficiency:.4f}")


@dataclass(frozen=True)
class DropReport:
    """SINR loss from deactivating one port, exact and bounded."""

    port: int
    exact_drop: float
    lower_bound: float

    def __post_init__(self):
        """Validate report after initialization."""
        if self.port < 0:
            raise ValidationError(f"port must be >= 0, got {self.port}")
        if not (math.isfinite(self.exact_drop) and math.isfinite(self.lower_bound)):
            raise ValidationError(f"non-finite drop for port {self.port}")
        slack = DROP_REPORT_TOL * max(1.0, abs(self.exact_drop), abs(self.lower_bound))
        if self.exact_drop < -slack:
            raise ValidationError(f"negative SINR drop {self.exact_drop:.6g} for port {self.port}")
        if self.lower_bound > self.exact_drop + slack:
            raise ValidationError(
                f"lower bound {self.lower_bound:.6g} exceeds exact drop {self.exact_drop:.6g} "
                f"for port {self.port}"
            )

    def to_dict(self) -> Dict[str, Any]:
        return {"port": self.port, "exact_drop": self.exact_drop, "lower_bound": self.lower_bound}


@dataclass(frozen=True)
class GeportOptions:
    """Settings for greedy generalized-eigenvector port removal.

    Attributes:
        vector: ``whitened`` ranks ports by the whitened eigenvector entries,
            ``raw`` by the generalized eigenvector entries
        loss_budget: Stop removing ports before the accumulated SINR loss
            would exceed this value (None disables the check)
        tol: Power-method Rayleigh-quotient tolerance
        max_iter: Power-method iteration cap per removal step
        seed: Start-vector seed of the first power-method call
        warm_start: Start each step from the previous eigenvector
        solver: ``power`` iterates every step; ``inverse_update`` downdates
            B^-1 in closed form and needs a rank-one pair
    """

    vector: str = "whitened"
    loss_budget: Optional[float] = None
    tol: float = DEFAULT_NUMERICS.power_tol
    max_iter: int = DEFAULT_NUMERICS.power_max_iter
    seed: int = 0
    warm_start: bool = True
    solver: str = "power"

    def __post_init__(self):
        if self.vector not in EIGENVECTOR_CONVENTIONS:
            raise ValidationError(f"Invalid eigenvector convention: {self.vector}")
        if self.solver not in GEPORT_SOLVERS:
            raise ValidationError(f"Invalid GEPort solver: {self.solver}")
        if self.loss_budget is not None and not self.loss_budget >= 0:
            raise ValidationError(f"loss_budget must be >= 0, got {self.loss_budget}")
        if not self.tol > 0:
            raise ValidationError(f"tol must be > 0, got {self.tol}")
        if self.max_iter < 1:
            raise ValidationError(f"max_iter must be >= 1, got {self.max_iter}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "vector": self.vector,
            "loss_budget": self.loss_budget,
            "tol": self.tol,
            "max_iter": self.max_iter,
            "seed": self.seed,
            "warm_start": self.warm_start,
            "solver": self.solver,
        }
