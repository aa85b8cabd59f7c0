# cython: boundscheck=False, wraparound=False, cdivision=True
# cython: language_level=3
"""Compiled twin of py_kernels: LAPACK zheevd sweeps without per-call overhead.

Same contract and the same EIG_CUTOFF as renyicq.backend.py_kernels; the
matrices involved are small (k <= 64), so hand-rolled O(k^3) products beat
the dispatch cost of vendored BLAS calls.
"""

import numpy as np

cimport numpy as cnp
from libc.math cimport pow as cpow
from scipy.linalg.cython_lapack cimport zheevd

cnp.import_array()

NAME = "compiled"
EIG_CUTOFF = 1e-14  # mirrored below as a C constant for nogil use

cdef double _CUT = 1e-14


cdef int _eigh(double complex* a, double* w, int n,
               double complex* work, int lwork,
               double* rwork, int lrwork,
               int* iwork, int liwork) noexcept nogil:
    # The row-major buffer is read column-major by LAPACK, i.e. as conj(A);
    # eigenvalues agree and the stored vectors are conjugates of A's.
    cdef char jobz = b'V'
    cdef char uplo = b'L'
    cdef int info = 0
    zheevd(&jobz, &uplo, &n, a, &n, w, work, &lwork, rwork, &lrwork, iwork, &liwork, &info)
    return info


cdef void _spectral_power(double complex* z, double* w, int n, double expo,
                          double complex* out, double* fw) noexcept nogil:
    # out = V diag(w^expo) V^dagger with V = conj(Z), powers on the support.
    cdef double wmax = w[n - 1]
    cdef double cut = wmax * _CUT
    cdef int m, i, j
    cdef double complex acc
    for m in range(n):
        if wmax > 0.0 and w[m] > cut:
            fw[m] = cpow(w[m], expo)
        else:
            fw[m] = 0.0
    for i in range(n):
        for j in range(n):
            acc = 0
            for m in range(n):
                acc = acc + z[m * n + i].conjugate() * fw[m] * z[m * n + j]
            out[i * n + j] = acc


cdef void _matmul(double complex* a, double complex* b, double complex* c, int n) noexcept nogil:
    cdef int i, j, m
    cdef double complex aim
    for i in range(n):
        for j in range(n):
            c[i * n + j] = 0
        for m in range(n):
            aim = a[i * n + m]
            for j in range(n):
                c[i * n + j] = c[i * n + j] + aim * b[m * n + j]


cdef void _hermitize(double complex* a, int n) noexcept nogil:
    cdef int i, j
    cdef double complex avg
    for i in range(n):
        a[i * n + i] = a[i * n + i].real
        for j in range(i + 1, n):
            avg = 0.5 * (a[i * n + j] + a[j * n + i].conjugate())
            a[i * n + j] = avg
            a[j * n + i] = avg.conjugate()


def center_sweep(sigma, wpows, probs, double z, double spow):
    """One pass of the weighted-center maps; see py_kernels.center_sweep."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] sig = np.ascontiguousarray(sigma, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=3] wp = np.ascontiguousarray(wpows, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] pr = np.ascontiguousarray(probs, dtype=np.float64)
    cdef int n = sig.shape[0]
    cdef int m = pr.shape[0]
    cdef int lwork = n * n + 2 * n
    cdef int lrwork = 2 * n * n + 5 * n + 1
    cdef int liwork = 5 * n + 3

    cdef cnp.ndarray[cnp.complex128_t, ndim=2] buf = np.empty((n, n), dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] shalf = np.empty((n, n), dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] t1 = np.empty((n, n), dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] t2 = np.empty((n, n), dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] g = np.empty((n, n), dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] phi_d = np.zeros((n, n), dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] phi_t = np.zeros((n, n), dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] fw = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] q = np.zeros(m, dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] work = np.empty(lwork, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rwork = np.empty(lrwork, dtype=np.float64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] iwork = np.empty(liwork, dtype=np.int32)

    cdef double complex* buf_p = &buf[0, 0]
    cdef double complex* work_p = &work[0]
    cdef double* rwork_p = &rwork[0]
    cdef int* iwork_p = <int*> &iwork[0]
    cdef int info, x, i, j
    cdef double qx, px

    buf[:, :] = sig
    info = _eigh(buf_p, &w[0], n, work_p, lwork, rwork_p, lrwork, iwork_p, liwork)
    if info != 0:
        raise RuntimeError(f"zheevd failed with info={info}")
    _spectral_power(buf_p, &w[0], n, spow, &shalf[0, 0], &fw[0])

    for x in range(m):
        _matmul(&shalf[0, 0], &wp[x, 0, 0], &t1[0, 0], n)
        _matmul(&t1[0, 0], &shalf[0, 0], &t2[0, 0], n)
        _hermitize(&t2[0, 0], n)
        buf[:, :] = t2
        info = _eigh(buf_p, &w[0], n, work_p, lwork, rwork_p, lrwork, iwork_p, liwork)
        if info != 0:
            raise RuntimeError(f"zheevd failed with info={info}")
        _spectral_power(buf_p, &w[0], n, z, &g[0, 0], &fw[0])
        qx = 0.0
        for i in range(n):
            qx += fw[i]
        q[x] = qx
        px = pr[x]
        for i in range(n):
            for j in range(n):
                phi_t[i, j] = phi_t[i, j] + px * g[i, j]
        if qx > 0.0:
            for i in range(n):
                for j in range(n):
                    phi_d[i, j] = phi_d[i, j] + (px / qx) * g[i, j]
    return np.asarray(phi_d), np.asarray(phi_t), np.asarray(q)


def q_sweep(sigma, wpows, double z, double spow):
    """Trace values of the sandwiched products for every symbol."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] sig = np.ascontiguousarray(sigma, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=3] wp = np.ascontiguousarray(wpows, dtype=np.complex128)
    cdef int n = sig.shape[0]
    cdef int m = wp.shape[0]
    cdef int lwork = n * n + 2 * n
    cdef int lrwork = 2 * n * n + 5 * n + 1
    cdef int liwork = 5 * n + 3

    cdef cnp.ndarray[cnp.complex128_t, ndim=2] buf = np.empty((n, n), dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] shalf = np.empty((n, n), dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] t1 = np.empty((n, n), dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=2] t2 = np.empty((n, n), dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] w = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] fw = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] q = np.zeros(m, dtype=np.float64)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] work = np.empty(lwork, dtype=np.complex128)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] rwork = np.empty(lrwork, dtype=np.float64)
    cdef cnp.ndarray[cnp.int32_t, ndim=1] iwork = np.empty(liwork, dtype=np.int32)

    cdef double complex* buf_p = &buf[0, 0]
    cdef int info, x, i
    cdef double wmax, cut, qx

    buf[:, :] = sig
    info = _eigh(buf_p, &w[0], n, &work[0], lwork, &rwork[0], lrwork, <int*> &iwork[0], liwork)
    if info != 0:
        raise RuntimeError(f"zheevd failed with info={info}")
    _spectral_power(buf_p, &w[0], n, spow, &shalf[0, 0], &fw[0])

    for x in range(m):
        _matmul(&shalf[0, 0], &wp[x, 0, 0], &t1[0, 0], n)
        _matmul(&t1[0, 0], &shalf[0, 0], &t2[0, 0], n)
        _hermitize(&t2[0, 0], n)
        buf[:, :] = t2
        info = _eigh(buf_p, &w[0], n, &work[0], lwork, &rwork[0], lrwork, <int*> &iwork[0], liwork)
        if info != 0:
            raise RuntimeError(f"zheevd failed with info={info}")
        wmax = w[n - 1]
        cut = wmax * _CUT
        qx = 0.0
        if wmax > 0.0:
            for i in range(n):
                if w[i] > cut:
                    qx += cpow(w[i], z)
        q[x] = qx
    return np.asarray(q)
