"""Fluid-antenna port geometry, spatial correlation and channel draws."""

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Dict, Sequence, Tuple, Union

import numpy as np

from multiport_fama.models.spectra import HermitianMatrix
from multiport_fama.utils.exceptions import ValidationError

MAX_PORTS = 65536

TOPOLOGY_KINDS = ("line", "grid")


def _as_tuple(value: Union[int, float, Sequence]) -> tuple:
    if isinstance(value, (list, tuple, np.ndarray)):
        return tuple(value)
    return (value,)


@dataclass(frozen=True)
class PortTopology:
    """Equally spaced ports on a line or a rectangular grid.

    Extents are in wavelengths. Grid ports are flattened row-major, so the
    port at (i, j) has linear index ``i * counts[1] + j``.
    """

    kind: str
    counts: Tuple[int, ...]
    extent: Tuple[float, ...]

    def __post_init__(self):
        """Validate the layout after initialization."""
        if self.kind not in TOPOLOGY_KINDS:
            raise ValidationError(f"Invalid topology kind: {self.kind}")
        counts = _as_tuple(self.counts)
        extent = _as_tuple(self.extent)
        expected = 1 if self.kind == "line" else 2
        if len(counts) != expected or len(extent) != expected:
            raise ValidationError(
                f"{self.kind} topology needs {expected} count(s) and extent(s), "
                f"got counts={counts}, extent={extent}"
            )
        for n in counts:
            if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < 1:
                raise ValidationError(f"port counts must be integers >= 1, got {counts}")
        for w in extent:
            if not np.isfinite(w) or w < 0:
                raise ValidationError(f"extent must be finite and >= 0, got {extent}")
        total = int(np.prod([int(n) for n in counts], dtype=object))
        if total > MAX_PORTS:
            raise ValidationError(f"{total} ports exceeds the limit of {MAX_PORTS}")
        for n, w in zip(counts, extent):
            if n >= 2 and w <= 0:
                raise ValidationError("a dimension with 2 or more ports needs extent > 0")
        object.__setattr__(self, "counts", tuple(int(n) for n in counts))
        object.__setattr__(self, "extent", tuple(float(w) for w in extent))

    @classmethod
    def line(cls, n_ports: int, length: float) -> "PortTopology":
        return cls("line", (n_ports,), (length,))

    @classmethod
    def grid(cls, n1: int, n2: int, w1: float, w2: float) -> "PortTopology":
        return cls("grid", (n1, n2), (w1, w2))

    @property
    def n_ports(self) -> int:
        return int(np.prod(self.counts))

    @property
    def spacing(self) -> Tuple[float, ...]:
        """Inter-port distance along each dimension (0 for a single port)."""
        return tuple(w / (n - 1) if n > 1 else 0.0 for n, w in zip(self.counts, self.extent))

    @property
    def index_grid(self) -> np.ndarray:
        """Integer (row, column) coordinates of every port, shape (N, d)."""
        axes = [np.arange(n) for n in self.counts]
        mesh = np.meshgrid(*axes, indexing="ij")
        return np.stack([m.ravel() for m in mesh], axis=1)

    @property
    def positions(self) -> np.ndarray:
        """Port coordinates in wavelengths, shape (N, 2)."""
        coords = self.index_grid * np.asarray(self.spacing)
        if coords.shape[1] == 1:
            coords = np.hstack([coords, np.zeros_like(coords)])
        return coords.astype(float)

    def with_ports(self, n_ports: int) -> "PortTopology":
        """Same line aperture with a different number of ports."""
        if self.kind != "line":
            raise ValidationError("changing the port count is only defined for line topologies")
        return PortTopology.line(n_ports, self.extent[0])

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "counts": list(self.counts), "extent": list(self.extent)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "PortTopology":
        return cls(data["kind"], tuple(data["counts"]), tuple(data["extent"]))

    def __str__(self) -> str:
        dims = " x ".join(str(n) for n in self.counts)
        span = " x ".join(f"{w:g}" for w in self.extent)
        return f"{self.kind} {dims} ports over {span} wavelengths"


@dataclass(eq=False)
class CorrelationMatrix:
    """Real symmetric spatial correlation matrix with a PSD square root.

    ``eigenvalues`` are already clamped at zero; ``sqrt_factor`` is
    V diag(sqrt(lambda)) V^H.
    """

    sigma: HermitianMatrix
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    clamped: int = 0
    topology: PortTopology = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.sigma.dim

    @cached_property
    def sqrt_factor(self) -> np.ndarray:
        v = self.eigenvectors
        factor = (v * np.sqrt(self.eigenvalues)) @ v.conj().T
        return np.ascontiguousarray(factor.real)


@dataclass(frozen=True, eq=False)
class ChannelRealization:
    """One draw of all users' channels, ``matrices[k]`` is H_k (N x M)."""

    matrices: np.ndarray

    def __post_init__(self):
        if self.matrices.ndim != 3:
            raise ValidationError(
                f"channel array must have shape (K, N, M), got {self.matrices.shape}"
            )

    @property
    def n_users(self) -> int:
        return self.matrices.shape[0]

    @property
    def n_ports(self) -> int:
        return self.matrices.shape[1]

    @property
    def n_antennas(self) -> int:
        return self.matrices.shape[2]

    def user(self, k: int) -> np.ndarray:
        return self.matrices[k]

    @classmethod
    def from_user_matrices(cls, matrices: Sequence[np.ndarray]) -> "ChannelRealization":
        return cls(np.stack([np.asarray(h, dtype=complex) for h in matrices]))
