"""Compiled cyclic Jacobi kernel for complex Hermitian matrices."""

import math

import numpy as np
from numba import njit


@njit(cache=True)
def off_norm(a):
    """Frobenius norm of the off-diagonal part."""
    n = a.shape[0]
    total = 0.0
    for i in range(n):
        for j in range(n):
            if i != j:
                total += a[i, j].real ** 2 + a[i, j].imag ** 2
    return math.sqrt(total)


@njit(cache=True)
def jacobi_hermitian(a, v, off_tol, skip_tol, max_rotations):
    """Diagonalize ``a`` in place by cyclic complex Jacobi rotations.

    Each rotation G acts on (p, q) as
    ``[[c, s], [-s * conj(e), c * conj(e)]]`` with e = a_pq / |a_pq|, and the
    update is a <- G^H a G, v <- v G. Angles follow
    ``theta = 0.5 * atan2(2 |a_pq|, a_qq - a_pp)``.

    Args:
        a: Hermitian complex128 matrix, overwritten with its diagonal form
        v: complex128 matrix (usually identity), accumulates the rotations
        off_tol: Stop once the off-diagonal Frobenius norm is below this
        skip_tol: Pivots with |a_pq| at or below this are left alone
        max_rotations: Rotation cap

    Returns:
        (rotations performed, final off-diagonal norm)
    """
    n = a.shape[0]
    rotations = 0
    off = off_norm(a)
    while off > off_tol and rotations < max_rotations:
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag <= skip_tol:
                    continue
                e = apq / mag
                app = a[p, p].real
                aqq = a[q, q].real
                theta = 0.5 * math.atan2(2.0 * mag, aqq - app)
                c = math.cos(theta)
                s = math.sin(theta)
                g_pp = complex(c, 0.0)
                g_pq = complex(s, 0.0)
                g_qp = -s * e.conjugate()
                g_qq = c * e.conjugate()

                # a <- a G
                for i in range(n):
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = aip * g_pp + aiq * g_qp
                    a[i, q] = aip * g_pq + aiq * g_qq
                # a <- G^H a
                for j in range(n):
                    apj = a[p, j]
                    aqj = a[q, j]
                    a[p, j] = g_pp.conjugate() * apj + g_qp.conjugate() * aqj
                    a[q, j] = g_pq.conjugate() * apj + g_qq.conjugate() * aqj
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real

                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = vip * g_pp + viq * g_qp
                    v[i, q] = vip * g_pq + viq * g_qq
                rotations += 1
                if rotations >= max_rotations:
                    break
            if rotations >= max_rotations:
                break
        off = off_norm(a)
    return rotations, off


def jacobi_eig(matrix: np.ndarray, off_tol: float, skip_tol: float, max_rotations: int):
    """Run the kernel on a copy; returns (eigenvalues, eigenvectors, rotations, off)."""
    a = np.array(matrix, dtype=np.complex128, order="C", copy=True)
    v = np.eye(a.shape[0], dtype=np.complex128)
    rotations, off = jacobi_hermitian(a, v, float(off_tol), float(skip_tol), int(max_rotations))
    return a.diagonal().real.copy(), v, int(rotations), float(off)
