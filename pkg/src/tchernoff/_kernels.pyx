# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: batched Hermitian Jacobi eigensolver and walk stepping."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, fabs

cnp.import_array()

DEF MAX_SWEEPS = 60


cdef inline double _abs2(double complex z) nogil:
    return z.real * z.real + z.imag * z.imag


cdef void _jacobi_one(double complex[:, ::1] A, double complex[:, ::1] V, double tol) nogil:
    cdef Py_ssize_t n = A.shape[0]
    cdef Py_ssize_t i, j, p, q, sweep
    cdef double total, off, mag, theta, t, c, s
    cdef double complex e, ec, xp, xq
    for i in range(n):
        for j in range(n):
            V[i, j] = 1.0 if i == j else 0.0
    total = 0.0
    for i in range(n):
        for j in range(n):
            total += _abs2(A[i, j])
    total = sqrt(total)
    for sweep in range(MAX_SWEEPS):
        off = 0.0
        for i in range(n):
            for j in range(n):
                if i != j:
                    off += _abs2(A[i, j])
        if sqrt(off) <= tol * total:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                mag = sqrt(_abs2(A[p, q]))
                if mag == 0.0:
                    continue
                e = A[p, q] / mag
                ec = e.conjugate()
                theta = (A[q, q].real - A[p, p].real) / (2.0 * mag)
                if theta >= 0.0:
                    t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + sqrt(theta * theta + 1.0))
                c = 1.0 / sqrt(t * t + 1.0)
                s = t * c
                for i in range(n):
                    xp = A[i, p]
                    xq = A[i, q]
                    A[i, p] = c * xp - s * ec * xq
                    A[i, q] = s * xp + c * ec * xq
                for j in range(n):
                    xp = A[p, j]
                    xq = A[q, j]
                    A[p, j] = c * xp - s * e * xq
                    A[q, j] = s * xp + c * e * xq
                A[p, q] = 0.0
                A[q, p] = 0.0
                A[p, p] = A[p, p].real
                A[q, q] = A[q, q].real
                for i in range(n):
                    xp = V[i, p]
                    xq = V[i, q]
                    V[i, p] = c * xp - s * ec * xq
                    V[i, q] = s * xp + c * ec * xq


def jacobi_eigh(a, double tol=1e-12):
    """Cyclic Jacobi eigensolver for a batch of Hermitian matrices.

    ``a`` has shape ``(batch, n, n)``. Returns ``(w, v)`` with eigenvalues
    sorted nonincreasing and matching unit eigenvectors in the columns of ``v``.
    """
    A_arr = np.array(a, dtype=np.complex128, order="C", copy=True)
    if A_arr.ndim != 3 or A_arr.shape[1] != A_arr.shape[2]:
        raise ValueError("expected a (batch, n, n) array")
    cdef Py_ssize_t batch = A_arr.shape[0]
    cdef Py_ssize_t n = A_arr.shape[1]
    V_arr = np.empty_like(A_arr)
    cdef double complex[:, :, ::1] A = A_arr
    cdef double complex[:, :, ::1] V = V_arr
    cdef Py_ssize_t b
    with nogil:
        for b in range(batch):
            _jacobi_one(A[b], V[b], tol)
    idx = np.arange(n)
    w = A_arr[:, idx, idx].real.copy()
    order = np.argsort(-w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    V_arr = np.take_along_axis(V_arr, order[:, None, :], axis=2)
    return w, V_arr


def walks_from_uniforms(cum_adj, long long degree, uniforms):
    """Turn uniforms of shape ``(trials, length)`` into stationary walks.

    ``cum_adj[v, j]`` counts edge endpoints from ``v`` to vertices ``0..j``.
    Column 0 picks the start vertex, later columns pick an incident edge.
    """
    cdef cnp.int64_t[:, ::1] cum = np.ascontiguousarray(cum_adj, dtype=np.int64)
    cdef double[:, ::1] u = np.ascontiguousarray(uniforms, dtype=np.float64)
    cdef Py_ssize_t trials = u.shape[0]
    cdef Py_ssize_t length = u.shape[1]
    cdef Py_ssize_t n = cum.shape[0]
    out_arr = np.empty((trials, length), dtype=np.int64)
    cdef cnp.int64_t[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, v
    cdef long long target, cur
    if length == 0:
        return out_arr
    with nogil:
        for i in range(trials):
            cur = <long long>(u[i, 0] * n)
            if cur > n - 1:
                cur = n - 1
            out[i, 0] = cur
            for j in range(1, length):
                target = <long long>(u[i, j] * degree)
                if target > degree - 1:
                    target = degree - 1
                v = 0
                while cum[cur, v] <= target:
                    v += 1
                cur = v
                out[i, j] = cur
    return out_arr
