"""Pure-NumPy versions of the compiled kernels.

Same signatures and results as ``_kernels.pyx``; the loops run over the batch
axis with array operations so the fallback stays usable at desk scale.
"""
from __future__ import annotations

import numpy as np

MAX_SWEEPS = 60
OFF_TOL = 1e-12


def jacobi_eigh(a: np.ndarray, tol: float = OFF_TOL):
    """Cyclic Jacobi eigensolver for a batch of Hermitian matrices.

    ``a`` has shape ``(batch, n, n)``. Returns ``(w, v)`` with eigenvalues
    sorted nonincreasing along the last axis of ``w`` and matching unit
    eigenvectors in the columns of ``v``.
    """
    A = np.array(a, dtype=np.complex128, copy=True)
    if A.ndim != 3 or A.shape[1] != A.shape[2]:
        raise ValueError("expected a (batch, n, n) array")
    batch, n, _ = A.shape
    V = np.broadcast_to(np.eye(n, dtype=np.complex128), A.shape).copy()
    if n > 1 and batch:
        scale = np.sqrt(np.sum(np.abs(A) ** 2, axis=(1, 2)))
        threshold = tol * scale
        offmask = ~np.eye(n, dtype=bool)
        for _ in range(MAX_SWEEPS):
            off = np.sqrt(np.sum(np.abs(A[:, offmask]) ** 2, axis=1))
            # sweep only unconverged matrices so each result is independent of the batch
            todo = np.nonzero(off > threshold)[0]
            if todo.size == 0:
                break
            sub_a, sub_v = A[todo], V[todo]
            for p in range(n - 1):
                for q in range(p + 1, n):
                    _rotate(sub_a, sub_v, p, q)
            A[todo], V[todo] = sub_a, sub_v
    w = A[:, np.arange(n), np.arange(n)].real
    order = np.argsort(-w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    V = np.take_along_axis(V, order[:, None, :], axis=2)
    return w, V


def _rotate(A: np.ndarray, V: np.ndarray, p: int, q: int) -> None:
    apq = A[:, p, q]
    mag = np.abs(apq)
    active = mag > 0.0
    if not np.any(active):
        return
    safe = np.where(active, mag, 1.0)
    phase = np.where(active, apq / safe, 1.0)
    theta = (A[:, q, q].real - A[:, p, p].real) / (2.0 * safe)
    sgn = np.where(theta >= 0.0, 1.0, -1.0)
    t = sgn / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    c = np.where(active, c, 1.0)
    s = np.where(active, s, 0.0)
    pc = np.conj(phase)

    # columns: A <- A V, with V = [[c, s], [-s conj(e), c conj(e)]]
    colp = A[:, :, p].copy()
    colq = A[:, :, q].copy()
    A[:, :, p] = c[:, None] * colp - (s * pc)[:, None] * colq
    A[:, :, q] = s[:, None] * colp + (c * pc)[:, None] * colq
    rowp = A[:, p, :].copy()
    rowq = A[:, q, :].copy()
    A[:, p, :] = c[:, None] * rowp - (s * phase)[:, None] * rowq
    A[:, q, :] = s[:, None] * rowp + (c * phase)[:, None] * rowq
    A[:, p, q] = 0.0
    A[:, q, p] = 0.0
    A[:, p, p] = A[:, p, p].real
    A[:, q, q] = A[:, q, q].real

    vp = V[:, :, p].copy()
    vq = V[:, :, q].copy()
    V[:, :, p] = c[:, None] * vp - (s * pc)[:, None] * vq
    V[:, :, q] = s[:, None] * vp + (c * pc)[:, None] * vq


def walks_from_uniforms(cum_adj: np.ndarray, degree: int, uniforms: np.ndarray) -> np.ndarray:
    """Turn uniforms of shape ``(trials, length)`` into stationary walks.

    ``cum_adj[v, j]`` is the number of edge endpoints from ``v`` to vertices
    ``0..j``. Column 0 of ``uniforms`` picks the uniform start vertex, every
    later column picks one of the ``degree`` incident edges.
    """
    cum_adj = np.asarray(cum_adj, dtype=np.int64)
    u = np.asarray(uniforms, dtype=np.float64)
    trials, length = u.shape
    n = cum_adj.shape[0]
    walks = np.empty((trials, length), dtype=np.int64)
    if length == 0:
        return walks
    walks[:, 0] = np.minimum((u[:, 0] * n).astype(np.int64), n - 1)
    for j in range(1, length):
        target = np.minimum((u[:, j] * degree).astype(np.int64), degree - 1)
        rows = cum_adj[walks[:, j - 1]]
        walks[:, j] = np.sum(rows <= target[:, None], axis=1)
    return walks
