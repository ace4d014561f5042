"""Spatially correlated Rayleigh channels for fluid-antenna ports."""

import logging
from typing import List, Optional, Sequence, Union

import numpy as np
from scipy.special import j0

from multiport_fama.config import DEFAULT_NUMERICS, NumericsConfig
from multiport_fama.core.linalg import hermitian_eig
from multiport_fama.models.channel import ChannelRealization, CorrelationMatrix, PortTopology
from multiport_fama.models.spectra import ArrayLike, HermitianMatrix
from multiport_fama.utils.exceptions import ModelError, ValidationError

logger = logging.getLogger(__name__)

RngStream = Union[np.random.Generator, Sequence[np.random.Generator]]


def build_topology(kind: str, counts, extent) -> PortTopology:
    """Build a line or grid topology; scalars are accepted for lines."""
    return PortTopology(kind, counts, extent)


def port_distances(topology: PortTopology) -> np.ndarray:
    """Euclidean inter-port distances in wavelengths.

    Distances come from integer index offsets, so a line gives an exactly
    Toeplitz matrix.
    """
    idx = topology.index_grid
    offsets = (idx[:, None, :] - idx[None, :, :]) * np.asarray(topology.spacing)
    return np.sqrt(np.sum(offsets ** 2, axis=-1))


def correlation_from_sigma(
    sigma: ArrayLike,
    topology: Optional[PortTopology] = None,
    numerics: NumericsConfig = DEFAULT_NUMERICS,
) -> CorrelationMatrix:
    """Wrap a correlation matrix, zeroing slightly negative eigenvalues.

    Raises:
        ModelError: If an eigenvalue is below -psd_clamp_tol * largest
    """
    sigma = HermitianMatrix.coerce(sigma)
    eig = hermitian_eig(sigma, numerics=numerics)
    values = eig.eigenvalues.copy()
    largest = max(float(values[-1]), 0.0)
    floor = -numerics.psd_clamp_tol * largest
    if values[0] < floor:
        raise ModelError(
            f"correlation matrix eigenvalue {values[0]:.3e} is below the clamp floor {floor:.3e}"
        )
    negative = values < 0
    clamped = int(np.count_nonzero(negative))
    if clamped:
        logger.debug("clamped %d negative correlation eigenvalues (min %.3e)", clamped, values[0])
        values[negative] = 0.0
    return CorrelationMatrix(sigma, values, eig.eigenvectors, clamped=clamped, topology=topology)


def correlation_matrix(
    topology: PortTopology, numerics: NumericsConfig = DEFAULT_NUMERICS
) -> CorrelationMatrix:
    """Isotropic-scattering correlation J0(2 pi d) between every pair of ports."""
    sigma = j0(2.0 * np.pi * port_distances(topology))
    np.fill_diagonal(sigma, 1.0)
    return correlation_from_sigma(sigma.astype(complex), topology=topology, numerics=numerics)


def trial_streams(
    master_seed: int, trial: int, n_users: int, point: Optional[int] = None
) -> List[np.random.Generator]:
    """Independent per-user generators keyed by (seed, trial[, point], user)."""
    prefix = (trial,) if point is None else (trial, point)
    return [
        np.random.Generator(
            np.random.Philox(np.random.SeedSequence(master_seed, spawn_key=prefix + (k,)))
        )
        for k in range(n_users)
    ]


def _unit_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def sample_channels(corr: CorrelationMatrix, M: int, K: int, rng_stream: RngStream) -> ChannelRealization:
    """Draw H_k = F Z_k for every user, with F the PSD square root of Sigma.

    Args:
        corr: Port correlation
        M: BS antennas (columns of each H_k)
        K: Users
        rng_stream: One generator shared by all users, or one per user

    Returns:
        ChannelRealization with matrices of shape (K, N, M)
    """
    if M < 1 or K < 1:
        raise ValidationError(f"M and K must be >= 1, got M={M}, K={K}")
    n = corr.dim
    if isinstance(rng_stream, np.random.Generator):
        z = _unit_gaussian(rng_stream, (K, n, M))
    else:
        streams = list(rng_stream)
        if len(streams) != K:
            raise ValidationError(f"{len(streams)} streams for {K} users")
        z = np.stack([_unit_gaussian(s, (n, M)) for s in streams])
    return ChannelRealization(corr.sqrt_factor @ z)
