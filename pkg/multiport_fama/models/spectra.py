"""Spectral data types: Hermitian matrices and their eigen-decompositions."""

from dataclasses import dataclass, field
from typing import Any, Dict, NamedTuple, Optional, Union

import numpy as np

from multiport_fama.config import DEFAULT_NUMERICS
from multiport_fama.utils.exceptions import ValidationError
from multiport_fama.utils.validators import validate_square

ArrayLike = Union[np.ndarray, "HermitianMatrix"]


@dataclass(eq=False)
class HermitianMatrix:
    """A dense complex Hermitian matrix.

    The input is checked against its conjugate transpose relative to the
    largest entry, then symmetrized so the stored entries are exactly
    Hermitian with a real diagonal.
    """

    entries: np.ndarray
    tol: float = field(default=DEFAULT_NUMERICS.hermitian_tol, repr=False)

    def __post_init__(self):
        """Validate and symmetrize the entries."""
        matrix = validate_square(np.asarray(self.entries, dtype=complex), "Hermitian matrix")
        scale = float(np.max(np.abs(matrix)))
        asymmetry = float(np.max(np.abs(matrix - matrix.conj().T)))
        if asymmetry > self.tol * max(scale, np.finfo(float).tiny):
            raise ValidationError(
                f"matrix is not Hermitian: max |E - E^H| = {asymmetry:.3e} "
                f"exceeds {self.tol:g} x max |E| = {scale:.3e}"
            )
        matrix = 0.5 * (matrix + matrix.conj().T)
        np.fill_diagonal(matrix, matrix.diagonal().real)
        matrix.setflags(write=False)
        self.entries = matrix

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def coerce(cls, value: ArrayLike) -> "HermitianMatrix":
        """Return ``value`` unchanged if already Hermitian, else wrap it."""
        if isinstance(value, cls):
            return value
        return cls(np.asarray(value))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "real": self.entries.real.tolist(),
            "imag": self.entries.imag.tolist(),
        }

    def __repr__(self) -> str:
        return f"HermitianMatrix(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class EigenDecomposition:
    """Ascending eigenvalues with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    method: str = "jacobi"
    rotations: int = 0

    def __post_init__(self):
        if self.eigenvectors.shape != (self.eigenvalues.size, self.eigenvalues.size):
            raise ValidationError(
                f"eigenvector shape {self.eigenvectors.shape} does not match "
                f"{self.eigenvalues.size} eigenvalues"
            )

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    def reconstruct(self) -> np.ndarray:
        """Return V diag(lambda) V^H."""
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T

    def spread(self) -> float:
        """Distance between the extreme eigenvalues."""
        return float(self.eigenvalues[-1] - self.eigenvalues[0])


@dataclass(frozen=True, eq=False)
class GeneralizedEigenPair:
    """Dominant solution of A u = lambda B u.

    Attributes:
        eigenvalue: Dominant generalized eigenvalue
        eigenvector_c: Unit eigenvector of the Cholesky-whitened matrix
            C = L^-1 A L^-H, where B = L L^H
        eigenvector_gen: Generalized eigenvector u (unit 2-norm)
        iterations: Power-method iterations spent (0 for closed forms)
        seed: Seed of the start vector, if one was drawn
    """

    eigenvalue: float
    eigenvector_c: np.ndarray
    eigenvector_gen: np.ndarray
    iterations: int = 0
    seed: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "eigenvalue": self.eigenvalue,
            "eigenvector_c": [[z.real, z.imag] for z in self.eigenvector_c],
            "eigenvector_gen": [[z.real, z.imag] for z in self.eigenvector_gen],
            "iterations": self.iterations,
            "seed": self.seed,
        }


class IdentityCheck(NamedTuple):
    """Both sides of the eigenvector-eigenvalue identity for one (i, l)."""

    lhs: float
    rhs: float
    degenerate: bool = False

    def error(self) -> float:
        """Absolute disagreement scaled by max(|lhs|, |rhs|, 1)."""
        return abs(self.lhs - self.rhs) / max(abs(self.lhs), abs(self.rhs), 1.0)
