"""Per-user SINR evaluation and the port-selection receivers."""

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from scipy import linalg as sla

from multiport_fama.core.linalg import (
    canonical_phase,
    cholesky_pd,
    generalized_eigvalsh,
    port_drop_weights,
    power_method_gen,
    as_hermitian,
    subset_entries,
)
from multiport_fama.models.channel import ChannelRealization
from multiport_fama.models.receiver import (
    CombinerSolution,
    DropReport,
    GeportOptions,
    ReceiverDesign,
    SignalMatrixPair,
)
from multiport_fama.models.spectra import GeneralizedEigenPair
from multiport_fama.utils.exceptions import ConvergenceError, ValidationError
from multiport_fama.utils.validators import (
    validate_active_ports,
    validate_port_index,
    validate_port_set,
    validate_positive,
)

logger = logging.getLogger(__name__)


def _user_matrix(H: ChannelRealization, k: int) -> np.ndarray:
    k = validate_port_index(k, H.n_users, "user")
    if k >= H.n_antennas:
        raise ValidationError(f"user {k} has no precoder column among {H.n_antennas} antennas")
    return H.user(k)


def build_pair(H: ChannelRealization, k: int, snr: float) -> SignalMatrixPair:
    """Signal and interference-plus-noise matrices of user ``k``.

    With canonical precoders the desired signal is column k of H_k and the
    interference comes from its other columns.
    """
    snr = validate_positive(snr, "snr")
    hk = _user_matrix(H, k)
    a_vec = hk[:, k]
    others = np.delete(hk, k, axis=1)
    B = others @ others.conj().T + np.eye(hk.shape[0]) / snr
    return SignalMatrixPair.rank_one(a_vec, as_hermitian(B), user=k, snr=snr)


def per_port_sinr(H: ChannelRealization, k: int, r: int, snr: float) -> float:
    """SINR of user ``k`` when only port ``r`` is active."""
    hk = _user_matrix(H, k)
    r = validate_port_index(r, hk.shape[0])
    row = hk[r]
    desired = abs(row[k]) ** 2
    return float(desired / (np.vdot(row, row).real - desired + 1.0 / snr))


def per_port_sinrs(H: ChannelRealization, k: int, snr: float) -> np.ndarray:
    """Vectorized ``per_port_sinr`` over all ports."""
    hk = _user_matrix(H, k)
    desired = np.abs(hk[:, k]) ** 2
    return desired / (np.sum(np.abs(hk) ** 2, axis=1) - desired + 1.0 / snr)


def sinr_of_combiner(H: ChannelRealization, k: int, ports: Sequence[int], w: np.ndarray, snr: float) -> float:
    """Post-combining SINR of user ``k`` for any nonzero ``w`` on ``ports``.

    The noise term is scaled by ||w||^2, so the value is invariant to
    rescaling w.
    """
    hk = _user_matrix(H, k)
    ports = validate_port_set(ports, hk.shape[0])
    w = np.asarray(w, dtype=complex)
    gains = w.conj() @ hk[list(ports), :]
    desired = abs(gains[k]) ** 2
    interference = float(np.sum(np.abs(gains) ** 2)) - desired
    return float(desired / (interference + np.vdot(w, w).real / snr))


def sinr_of_design(H: ChannelRealization, k: int, design: ReceiverDesign, snr: float) -> float:
    """SINR of user ``k`` under a receiver design."""
    return sinr_of_combiner(H, k, design.ports, design.w, snr)


def rayleigh_quotient(A: np.ndarray, B: np.ndarray, w: np.ndarray) -> float:
    """w^H A w / w^H B w."""
    A = getattr(A, "entries", A)
    B = getattr(B, "entries", B)
    return float(np.vdot(w, A @ w).real / np.vdot(w, B @ w).real)


def spectral_efficiency(sinr: float) -> float:
    """log2(1 + sinr) in bit/s/Hz."""
    if not sinr >= 0:
        raise ValidationError(f"SINR must be >= 0, got {sinr}")
    return math.log2(1.0 + sinr)


def _unit(n: int) -> np.ndarray:
    e = np.zeros(n, dtype=complex)
    e[0] = 1.0
    return e


def _sub(pair: SignalMatrixPair, idx: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    return subset_entries(pair.A, idx), subset_entries(pair.B, idx)


def solve_combiner(pair: SignalMatrixPair, ports: Sequence[int]) -> CombinerSolution:
    """Maximize the Rayleigh quotient of the pair restricted to ``ports``.

    Args:
        pair: Signal matrix pair
        ports: Distinct local row indices of the pair

    Returns:
        CombinerSolution aligned with ``ports``; degenerate when no signal
        reaches the selected ports
    """
    idx = np.asarray(validate_port_set(ports, pair.dim), dtype=int)
    a_sub, b_sub = _sub(pair, idx)
    if pair.is_rank_one:
        a = pair.a_vec[idx]
        if not np.any(a):
            return CombinerSolution(_unit(idx.size), 0.0, degenerate=True)
        x = sla.cho_solve((cholesky_pd(b_sub), True), a)
        sinr = float(np.vdot(a, x).real)
        return CombinerSolution(canonical_phase(x / np.linalg.norm(x)), max(sinr, 0.0))
    if not np.any(a_sub):
        return CombinerSolution(_unit(idx.size), 0.0, degenerate=True)
    cholesky_pd(b_sub)
    values, vectors = sla.eigh(a_sub, b_sub, subset_by_index=[idx.size - 1, idx.size - 1])
    x = vectors[:, 0]
    return CombinerSolution(canonical_phase(x / np.linalg.norm(x)), max(float(values[0]), 0.0))


def dominant_eigenvalue(pair: SignalMatrixPair) -> float:
    """Largest generalized eigenvalue of the full pair (its optimal SINR)."""
    return solve_combiner(pair, range(pair.dim)).sinr


def _design(pair: SignalMatrixPair, local: Sequence[int], solution: CombinerSolution,
            strategy: str) -> ReceiverDesign:
    return ReceiverDesign(
        ports=tuple(pair.ports[i] for i in local),
        w=solution.w,
        achieved_sinr=solution.sinr,
        strategy=strategy,
        degenerate=solution.degenerate,
    )


def _top(scores: np.ndarray, L: int) -> List[int]:
    """Indices of the L largest scores, lowest index first among ties, sorted."""
    return sorted(int(i) for i in np.argsort(-scores, kind="stable")[:L])


def design_slow_fama(pair: SignalMatrixPair) -> ReceiverDesign:
    """Single active port with the best per-port SINR."""
    sinrs = pair.port_sinrs()
    r = int(np.argmax(sinrs))
    solution = CombinerSolution(np.ones(1, dtype=complex), max(float(sinrs[r]), 0.0),
                                degenerate=not sinrs[r] > 0)
    return _design(pair, [r], solution, "slow_fama")


def design_dc(pair: SignalMatrixPair, L: int) -> ReceiverDesign:
    """L best per-port-SINR ports followed by the optimal combiner."""
    L = validate_active_ports(L, pair.dim)
    local = _top(pair.port_sinrs(), L)
    return _design(pair, local, solve_combiner(pair, local), "dc")


def design_mrc(pair: SignalMatrixPair, L: int) -> ReceiverDesign:
    """L strongest desired-signal ports with a matched-filter combiner."""
    L = validate_active_ports(L, pair.dim)
    strength = pair.A.entries.diagonal().real
    local = _top(strength, L)
    idx = np.asarray(local)
    a_sub, b_sub = _sub(pair, idx)
    if pair.is_rank_one:
        matched = pair.a_vec[idx]
    else:
        matched = np.sqrt(np.maximum(a_sub.diagonal().real, 0.0)).astype(complex)
    if not np.any(matched):
        solution = CombinerSolution(_unit(L), 0.0, degenerate=True)
    else:
        w = canonical_phase(matched / np.linalg.norm(matched))
        solution = CombinerSolution(w, max(rayleigh_quotient(a_sub, b_sub, w), 0.0))
    return _design(pair, local, solution, "mrc")


def _dominant_vector(pair: SignalMatrixPair) -> Tuple[float, np.ndarray]:
    """Dominant generalized eigenvalue and eigenvector u of the full pair."""
    if pair.is_rank_one:
        u = sla.cho_solve((cholesky_pd(pair.B.entries), True), pair.a_vec)
        return float(np.vdot(pair.a_vec, u).real), u
    values, vectors = sla.eigh(pair.A.entries, pair.B.entries,
                               subset_by_index=[pair.dim - 1, pair.dim - 1])
    return float(values[0]), vectors[:, 0]


def sinr_drop_exact(pair: SignalMatrixPair, l: int) -> float:
    """Loss of optimal SINR when local port ``l`` is deactivated."""
    if pair.dim < 2:
        raise ValidationError("SINR drop needs at least two ports")
    return dominant_eigenvalue(pair) - dominant_eigenvalue(pair.without(l))


def sinr_drop_bound(pair: SignalMatrixPair, l: int) -> float:
    """Lower bound on the SINR drop from the whitened eigenvector entry and the top gap."""
    if pair.dim < 2:
        raise ValidationError("SINR drop needs at least two ports")
    l = validate_port_index(l, pair.dim)
    lam, u = _dominant_vector(pair)
    if not np.any(u):
        return 0.0
    if pair.is_rank_one:
        gap = lam
    else:
        spectrum = generalized_eigvalsh(pair.A, pair.B)
        gap = float(spectrum[-1] - spectrum[-2])
    return float(port_drop_weights(pair.B, u)[l] * gap)


def drop_report(pair: SignalMatrixPair, l: int) -> DropReport:
    return DropReport(pair.ports[l], sinr_drop_exact(pair, l), sinr_drop_bound(pair, l))


def drop_reports(pair: SignalMatrixPair) -> List[DropReport]:
    """Drop report for every port of the pair."""
    return [drop_report(pair, l) for l in range(pair.dim)]


def _geport_eigenpair(pair: SignalMatrixPair, options: GeportOptions,
                      start: Optional[np.ndarray]) -> GeneralizedEigenPair:
    if not np.any(pair.A.entries):
        e = _unit(pair.dim)
        return GeneralizedEigenPair(0.0, e, e)
    return power_method_gen(pair.A, pair.B, tol=options.tol, max_iter=options.max_iter,
                            seed=options.seed, start=start)


def _geport_inverse_update(pair: SignalMatrixPair, L: int, options: GeportOptions) -> ReceiverDesign:
    """Rank-one GEPort with a Schur-complement downdate of B^-1 per removal."""
    if not pair.is_rank_one:
        raise ValidationError("the inverse_update GEPort solver needs a rank-one pair")
    factor = cholesky_pd(pair.B.entries)
    inv_factor = sla.solve_triangular(factor, np.eye(pair.dim, dtype=complex), lower=True)
    binv = inv_factor.conj().T @ inv_factor
    a = pair.a_vec.copy()
    keep = list(range(pair.dim))
    u = binv @ a
    lam = float(np.vdot(a, u).real)
    full = lam
    removed: List[int] = []
    trace = [0.0]
    while len(keep) > L:
        if options.vector == "whitened" and lam > 0:
            weights = np.abs(u) ** 2 / (binv.diagonal().real * lam)
        else:
            weights = np.abs(u) ** 2
        l = int(np.argmin(weights))
        column = binv[:, l]
        reduced = np.delete(np.delete(binv - np.outer(column, column.conj()) / binv[l, l].real, l, 0), l, 1)
        a_next = np.delete(a, l)
        u_next = reduced @ a_next
        lam_next = float(np.vdot(a_next, u_next).real)
        loss = full - lam_next
        if options.loss_budget is not None and loss > options.loss_budget:
            logger.debug("loss budget %.4g reached with %d ports", options.loss_budget, len(keep))
            break
        removed.append(pair.ports[keep[l]])
        trace.append(loss)
        del keep[l]
        binv, a, u, lam = reduced, a_next, u_next, lam_next

    current = pair.restrict(keep)
    degenerate = not (lam > 0 and np.any(u))
    if degenerate:
        w, achieved = _unit(len(keep)), 0.0
    else:
        w = canonical_phase(u / np.linalg.norm(u))
        achieved = max(rayleigh_quotient(current.A, current.B, w), 0.0)
    return ReceiverDesign(
        ports=current.ports,
        w=w,
        achieved_sinr=achieved,
        strategy="geport",
        degenerate=degenerate,
        removed_ports=tuple(removed),
        loss_trace=tuple(trace),
    )


def design_geport(pair: SignalMatrixPair, L: int,
                  options: Optional[GeportOptions] = None) -> ReceiverDesign:
    """Greedy removal of the port with the smallest dominant-eigenvector entry.

    Each step recomputes the dominant generalized eigenpair of the reduced
    pair by power iteration, warm-started from the previous eigenvector with
    the removed entry deleted.

    Args:
        pair: Full signal matrix pair
        L: Target number of active ports
        options: Eigenvector convention, loss budget, solver and power-method
            settings

    Returns:
        ReceiverDesign with the removal order and the accumulated loss trace

    Raises:
        ConvergenceError: With ``stage`` set to the failing removal step
    """
    options = options or GeportOptions()
    L = validate_active_ports(L, pair.dim)
    if options.solver == "inverse_update":
        return _geport_inverse_update(pair, L, options)
    current = pair
    eigpair = _geport_eigenpair(current, options, None)
    full = eigpair.eigenvalue
    removed: List[int] = []
    trace = [0.0]
    stage = 0
    while current.dim > L:
        u = eigpair.eigenvector_gen
        if options.vector == "whitened" and eigpair.eigenvalue > 0:
            weights = port_drop_weights(current.B, u)
        else:
            weights = np.abs(u) ** 2
        l = int(np.argmin(weights))
        candidate = current.without(l)
        stage += 1
        start = np.delete(u, l) if options.warm_start else None
        try:
            following = _geport_eigenpair(candidate, options, start)
        except ConvergenceError as exc:
            raise ConvergenceError(exc.message, exc.iterations, exc.residual, stage=stage) from exc
        loss = full - following.eigenvalue
        if options.loss_budget is not None and loss > options.loss_budget:
            logger.debug("loss budget %.4g reached with %d ports", options.loss_budget, current.dim)
            break
        logger.debug("removed port %d (weight %.3e), loss %.6g", current.ports[l], weights[l], loss)
        removed.append(current.ports[l])
        trace.append(loss)
        current, eigpair = candidate, following

    degenerate = eigpair.eigenvalue <= 0
    w = canonical_phase(eigpair.eigenvector_gen / np.linalg.norm(eigpair.eigenvector_gen))
    achieved = 0.0 if degenerate else max(rayleigh_quotient(current.A, current.B, w), 0.0)
    return ReceiverDesign(
        ports=current.ports,
        w=w,
        achieved_sinr=achieved,
        strategy="geport",
        degenerate=degenerate,
        removed_ports=tuple(removed),
        loss_trace=tuple(trace),
    )
