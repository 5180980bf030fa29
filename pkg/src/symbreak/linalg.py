"""Dense Hermitian eigensolver and small matrix helpers.

Every spectral decomposition in this package goes through
:func:`jacobi_eigh`, a cyclic Jacobi method with a deterministic
row-major sweep order. The sweep kernel is jitted but uses plain IEEE
arithmetic (no fastmath), so seeded runs stay byte-identical.
"""

from __future__ import annotations

import math

import numba
import numpy as np

OFF_DIAGONAL_TOL = 1e-12
MAX_SWEEPS = 100
DEGENERACY_TOL = 1e-9


def max_abs(matrix) -> float:
    """Largest entry magnitude; the norm used by tolerance checks."""
    arr = np.asarray(matrix)
    if arr.size == 0:
        return 0.0
    return float(np.max(np.abs(arr)))


def is_hermitian(matrix, tol: float = 1e-12) -> bool:
    arr = np.asarray(matrix)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        return False
    return max_abs(arr - arr.conj().T) <= tol


def off_diagonal_norm(matrix) -> float:
    """Frobenius norm of the off-diagonal part."""
    arr = np.asarray(matrix)
    off = arr - np.diag(np.diag(arr))
    return float(np.linalg.norm(off))


@numba.njit(cache=True)
def _jacobi_sweeps(a, v, tol, max_sweeps):  # pragma: no cover - exercised via jacobi_eigh
    n = a.shape[0]
    skip = tol / (n * n)
    for _ in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    x = a[i, j]
                    off += x.real * x.real + x.imag * x.imag
        if math.sqrt(off) < tol:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = math.sqrt(apq.real * apq.real + apq.imag * apq.imag)
                if mag <= skip:
                    continue
                phase = apq / mag
                tau = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if tau >= 0.0:
                    t = 1.0 / (tau + math.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + math.sqrt(1.0 + tau * tau))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = t * c
                # 2x2 unitary on the (p, q) plane: a phase that makes
                # the pivot real, then a real rotation
                u00 = c + 0.0j
                u01 = s + 0.0j
                u10 = -s * np.conj(phase)
                u11 = c * np.conj(phase)
                for i in range(n):
                    aip = a[i, p]
                    aiq = a[i, q]
                    a[i, p] = u00 * aip + u10 * aiq
                    a[i, q] = u01 * aip + u11 * aiq
                for j in range(n):
                    apj = a[p, j]
                    aqj = a[q, j]
                    a[p, j] = np.conj(u00) * apj + np.conj(u10) * aqj
                    a[q, j] = np.conj(u01) * apj + np.conj(u11) * aqj
                a[p, q] = 0.0
                a[q, p] = 0.0
                for i in range(n):
                    vip = v[i, p]
                    viq = v[i, q]
                    v[i, p] = u00 * vip + u10 * viq
                    v[i, q] = u01 * vip + u11 * viq


def jacobi_eigh(matrix, tol: float = OFF_DIAGONAL_TOL, max_sweeps: int = MAX_SWEEPS):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Each pivot (p, q), visited in row-major order, is zeroed by a complex
    Givens rotation. Sweeps stop once the off-diagonal Frobenius norm
    drops below ``tol`` (at most ``max_sweeps`` sweeps).

    Returns ``(values, vectors)`` with eigenvalues ascending and the
    matching orthonormal eigenvectors as columns of ``vectors``.
    """
    a = np.array(matrix, dtype=np.complex128, order="C")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    if n > 1:
        _jacobi_sweeps(a, v, float(tol), int(max_sweeps))
    values = np.diag(a).real.copy()
    order = np.argsort(values, kind="stable")
    return values[order], np.ascontiguousarray(v[:, order])


def degenerate_groups(values, tol: float = DEGENERACY_TOL) -> list[list[int]]:
    """Cluster ascending eigenvalues into degenerate groups.

    Consecutive values closer than ``tol`` are chained into one group;
    each group is a list of indices into ``values``.
    """
    groups: list[list[int]] = []
    prev = None
    for i, val in enumerate(values):
        if prev is not None and val - prev <= tol:
            groups[-1].append(i)
        else:
            groups.append([i])
        prev = val
    return groups
