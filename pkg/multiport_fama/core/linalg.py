"""Dense Hermitian linear algebra: eigensolvers, factorizations, power iteration."""

import logging
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from scipy import linalg as sla
from scipy.linalg import lapack

from multiport_fama.config import DEFAULT_NUMERICS, NumericsConfig
from multiport_fama.core._jacobi import jacobi_eig
from multiport_fama.models.spectra import (
    ArrayLike,
    EigenDecomposition,
    GeneralizedEigenPair,
    HermitianMatrix,
    IdentityCheck,
)
from multiport_fama.utils.exceptions import (
    ConvergenceError,
    NotPositiveDefiniteError,
    ValidationError,
    ZeroEigenvalueError,
)
from multiport_fama.utils.validators import validate_port_index

logger = logging.getLogger(__name__)

EIG_METHODS = ("auto", "jacobi", "lapack")

# Entries below this fraction of the largest magnitude do not fix the phase
_PHASE_NEGLIGIBLE = 1e-10


def _entries(matrix: ArrayLike) -> np.ndarray:
    if isinstance(matrix, HermitianMatrix):
        return matrix.entries
    return np.asarray(matrix, dtype=complex)


def as_hermitian(matrix: np.ndarray) -> HermitianMatrix:
    """Symmetrize a numerically Hermitian product and wrap it."""
    matrix = np.asarray(matrix, dtype=complex)
    return HermitianMatrix(0.5 * (matrix + matrix.conj().T))


def canonical_phase(vector: np.ndarray) -> np.ndarray:
    """Rotate a vector so its first non-negligible entry is real positive."""
    vector = np.asarray(vector, dtype=complex)
    mags = np.abs(vector)
    peak = mags.max() if mags.size else 0.0
    if peak == 0.0:
        return vector.copy()
    first = int(np.argmax(mags > _PHASE_NEGLIGIBLE * peak))
    return vector * (np.conj(vector[first]) / mags[first])


def hermitian_eig(
    C: ArrayLike,
    method: Optional[str] = None,
    numerics: NumericsConfig = DEFAULT_NUMERICS,
) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix.

    Args:
        C: Hermitian matrix
        method: ``jacobi``, ``lapack`` or ``auto`` (default from numerics)
        numerics: Tolerances

    Returns:
        EigenDecomposition with ascending eigenvalues and canonically
        phased orthonormal eigenvectors

    Raises:
        ConvergenceError: If Jacobi hits its rotation cap
    """
    C = HermitianMatrix.coerce(C)
    n = C.dim
    method = method or numerics.eig_method
    if method not in EIG_METHODS:
        raise ValidationError(f"Invalid eigensolver method: {method}")
    if method == "auto":
        method = "jacobi" if n <= numerics.jacobi_max_dim else "lapack"

    rotations = 0
    if method == "jacobi":
        scale = float(np.linalg.norm(C.entries))
        off_tol = numerics.jacobi_off_tol * scale
        cap = numerics.jacobi_rotation_factor * n * n
        values, vectors, rotations, off = jacobi_eig(C.entries, off_tol, off_tol / n, cap)
        if off > off_tol:
            raise ConvergenceError(
                "Jacobi eigensolver did not converge", iterations=rotations, residual=off
            )
    else:
        values, vectors = sla.eigh(C.entries)

    order = np.argsort(values, kind="stable")
    values = np.asarray(values, dtype=float)[order]
    vectors = vectors[:, order]
    for j in range(n):
        vectors[:, j] = canonical_phase(vectors[:, j])
    return EigenDecomposition(values, vectors, method=method, rotations=rotations)


def cholesky_pd(B: ArrayLike) -> np.ndarray:
    """Lower Cholesky factor L with L L^H = B.

    Raises:
        NotPositiveDefiniteError: With the failing pivot and its Schur value
    """
    b = np.array(_entries(B), dtype=np.complex128, copy=True)
    factor, info = lapack.zpotrf(b, lower=1, clean=1)
    if info < 0:
        raise ValidationError(f"potrf rejected argument {-info}")
    if info > 0:
        k = info - 1
        value = float(b[k, k].real)
        if k > 0:
            head = np.tril(factor[:k, :k])
            x = sla.solve_triangular(head, b[:k, k], lower=True)
            value -= float(np.vdot(x, x).real)
        raise NotPositiveDefiniteError(k, value)
    return np.tril(factor)


def inv_sqrt_pd(B: ArrayLike, numerics: NumericsConfig = DEFAULT_NUMERICS) -> HermitianMatrix:
    """Inverse principal square root V diag(lambda^-1/2) V^H.

    Raises:
        NotPositiveDefiniteError: If an eigenvalue is not positive
    """
    eig = hermitian_eig(B, numerics=numerics)
    if eig.eigenvalues[0] <= 0:
        raise NotPositiveDefiniteError(0, float(eig.eigenvalues[0]))
    v = eig.eigenvectors
    return as_hermitian((v / np.sqrt(eig.eigenvalues)) @ v.conj().T)


def principal_minor(matrix: ArrayLike, l: int) -> HermitianMatrix:
    """Matrix with row and column ``l`` deleted."""
    entries = _entries(matrix)
    l = validate_port_index(l, entries.shape[0])
    keep = np.delete(np.arange(entries.shape[0]), l)
    return HermitianMatrix(entries[np.ix_(keep, keep)])


def whiten_pair(
    A: ArrayLike, B: ArrayLike, last_port: Optional[int] = None
) -> Tuple[HermitianMatrix, np.ndarray, np.ndarray]:
    """Cholesky whitening C = L^-1 A L^-H.

    Args:
        A: Hermitian numerator matrix
        B: Positive definite denominator matrix
        last_port: Port moved to the last position before factorizing

    Returns:
        (C, L, permutation) where row i of C corresponds to port permutation[i]
    """
    a = _entries(A)
    n = a.shape[0]
    perm = np.arange(n)
    if last_port is not None:
        last_port = validate_port_index(last_port, n)
        perm = np.append(np.delete(perm, last_port), last_port)
    a = a[np.ix_(perm, perm)]
    factor = cholesky_pd(_entries(B)[np.ix_(perm, perm)])
    x = sla.solve_triangular(factor, a, lower=True)
    c = sla.solve_triangular(factor, x.conj().T, lower=True).conj().T
    return as_hermitian(c), factor, perm


def generalized_eigvalsh(A: ArrayLike, B: ArrayLike) -> np.ndarray:
    """Ascending eigenvalues of the Hermitian-definite pair (A, B)."""
    return sla.eigh(_entries(A), _entries(B), eigvals_only=True)


def port_drop_weights(B: ArrayLike, u: np.ndarray) -> np.ndarray:
    """Whitened eigenvector entry magnitudes for every port.

    For the dominant generalized eigenvector ``u`` the weight of port l is
    ``|u_l|^2 / ((B^-1)_ll * u^H B u)``, which is the squared last entry of
    the whitened dominant eigenvector when port l is factorized last.
    """
    b = _entries(B)
    factor = cholesky_pd(b)
    inv_factor = sla.solve_triangular(factor, np.eye(b.shape[0], dtype=complex), lower=True)
    binv_diag = np.sum(np.abs(inv_factor) ** 2, axis=0)
    energy = float(np.vdot(u, b @ u).real)
    return np.abs(u) ** 2 / (binv_diag * energy)


def power_method_gen(
    A: ArrayLike,
    B: ArrayLike,
    tol: float = DEFAULT_NUMERICS.power_tol,
    max_iter: int = DEFAULT_NUMERICS.power_max_iter,
    seed: int = 0,
    start: Optional[np.ndarray] = None,
    residual_tol: float = DEFAULT_NUMERICS.power_residual_tol,
) -> GeneralizedEigenPair:
    """Dominant generalized eigenpair by iterating t <- B^-1 A t.

    The eigenvalue is the Rayleigh quotient t^H A t / t^H B t. Iteration
    stops when it changes by at most ``tol * max(lambda, 1)`` and the
    residual ||A t - lambda B t|| is at most ``residual_tol * ||A||_F``.

    Args:
        A: Hermitian positive semidefinite matrix
        B: Hermitian positive definite matrix
        tol: Rayleigh-quotient tolerance
        max_iter: Iteration cap
        seed: Seed of the pseudo-random start vector
        start: Explicit start vector (overrides the seeded draw)
        residual_tol: Residual tolerance relative to ||A||_F

    Raises:
        ZeroEigenvalueError: If A is zero
        ConvergenceError: If the cap is hit
        NotPositiveDefiniteError: If B is not positive definite
    """
    a = _entries(A)
    b = _entries(B)
    n = a.shape[0]
    norm_a = float(np.linalg.norm(a))
    if norm_a == 0.0:
        raise ZeroEigenvalueError("zero dominant eigenvalue: numerator matrix is zero")
    factor = cholesky_pd(b)
    rng = np.random.default_rng(seed)

    def draw() -> np.ndarray:
        return rng.standard_normal(n) + 1j * rng.standard_normal(n)

    t = draw() if start is None or not np.any(start) else np.asarray(start, dtype=complex)
    t = t / np.linalg.norm(t)
    reseeded = False
    previous = None
    lam = 0.0
    residual = np.inf
    for iteration in range(1, max_iter + 1):
        y = a @ t
        if not np.any(np.abs(y) > 0):
            if reseeded:
                raise ConvergenceError("start vector stays in the null space of A",
                                       iterations=iteration, residual=residual)
            logger.debug("start vector annihilated by A, drawing a new one")
            reseeded = True
            t = draw()
            t = t / np.linalg.norm(t)
            continue
        t = sla.cho_solve((factor, True), y)
        t = t / np.linalg.norm(t)
        at = a @ t
        bt = b @ t
        lam = float(np.vdot(t, at).real / np.vdot(t, bt).real)
        residual = float(np.linalg.norm(at - lam * bt))
        if (
            previous is not None
            and abs(lam - previous) <= tol * max(lam, 1.0)
            and residual <= residual_tol * norm_a
        ):
            logger.debug("power method converged in %d iterations, lambda=%.6g", iteration, lam)
            u = canonical_phase(t)
            v = factor.conj().T @ u
            return GeneralizedEigenPair(
                eigenvalue=max(lam, 0.0),
                eigenvector_c=v / np.linalg.norm(v),
                eigenvector_gen=u,
                iterations=iteration,
                seed=seed if start is None else None,
            )
        previous = lam
    raise ConvergenceError("power method did not converge", iterations=max_iter, residual=residual)


def eigenvector_eigenvalue_identity_check(
    C: ArrayLike, i: int, l: int, numerics: NumericsConfig = DEFAULT_NUMERICS
) -> IdentityCheck:
    """Both sides of the eigenvector-eigenvalue identity.

    lhs = |v_{i,l}|^2 prod_{n != i} (lambda_i - lambda_n) and
    rhs = prod_n (lambda_i - alpha_n), where alpha are the eigenvalues of C
    with row/column l deleted. ``degenerate`` flags a spectrum whose
    smallest gap is below 1e-9 of its spread.
    """
    C = HermitianMatrix.coerce(C)
    if C.dim < 2:
        raise ValidationError("identity check needs dim >= 2")
    i = validate_port_index(i, C.dim, "eigen")
    l = validate_port_index(l, C.dim)
    eig = hermitian_eig(C, numerics=numerics)
    lam = eig.eigenvalues
    alpha = hermitian_eig(principal_minor(C, l), numerics=numerics).eigenvalues
    lhs = float(np.abs(eig.eigenvectors[l, i]) ** 2 * np.prod(np.delete(lam[i] - lam, i)))
    rhs = float(np.prod(lam[i] - alpha))
    spread = eig.spread()
    degenerate = spread == 0.0 or float(np.min(np.diff(lam))) < 1e-9 * spread
    if degenerate:
        logger.debug("identity check on a degenerate spectrum (i=%d, l=%d)", i, l)
    return IdentityCheck(lhs, rhs, degenerate)


def interlacing_check(C: ArrayLike, l: int, numerics: NumericsConfig = DEFAULT_NUMERICS) -> bool:
    """True iff the eigenvalues of the minor without ``l`` interlace those of C."""
    C = HermitianMatrix.coerce(C)
    if C.dim < 2:
        raise ValidationError("interlacing needs dim >= 2")
    lam = hermitian_eig(C, numerics=numerics).eigenvalues
    alpha = hermitian_eig(principal_minor(C, l), numerics=numerics).eigenvalues
    scale = float(np.max(np.abs(lam)))
    slack = 1e-10 * (lam[-1] - lam[0]) + 4 * np.finfo(float).eps * scale
    return bool(np.all(lam[:-1] - slack <= alpha) and np.all(alpha <= lam[1:] + slack))


def subset_entries(matrix: ArrayLike, ports: Union[Sequence[int], np.ndarray]) -> np.ndarray:
    """Principal submatrix on ``ports`` as a plain array."""
    idx = np.asarray(ports, dtype=int)
    return _entries(matrix)[np.ix_(idx, idx)]
