# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the optimizer kernels; see ``_pykernels`` for semantics."""
import numpy as np
cimport numpy as cnp
from libc.math cimport log, fabs
from scipy.linalg.cython_blas cimport zgemm
from scipy.linalg.cython_lapack cimport zheev

cnp.import_array()


def log_divided_differences(const double[::1] lam):
    cdef Py_ssize_t n = lam.shape[0], i, j
    cdef double li, lj, m
    out = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] o = out
    cdef double[::1] logs = np.empty(n)
    for i in range(n):
        logs[i] = log(lam[i])
    for i in range(n):
        li = lam[i]
        o[i, i] = 1.0 / li
        for j in range(i + 1, n):
            lj = lam[j]
            m = li if li > lj else lj
            if fabs(li - lj) <= 1e-12 * m:
                o[i, j] = 2.0 / (li + lj)
            else:
                o[i, j] = (logs[i] - logs[j]) / (li - lj)
            o[j, i] = o[i, j]
    return out


def khatri_rao(const double complex[:, ::1] V, dims):
    cdef Py_ssize_t B = len(dims), K = V.shape[1]
    cdef Py_ssize_t[::1] d = np.asarray(dims, dtype=np.intp)
    cdef Py_ssize_t[::1] off = np.zeros(B + 1, dtype=np.intp)
    cdef Py_ssize_t D = 1, b, i, k, rem, idx
    for b in range(B):
        off[b + 1] = off[b] + d[b]
        D *= d[b]
    out = np.empty((D, K), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    cdef double complex acc
    for i in range(D):
        for k in range(K):
            acc = 1.0
            rem = i
            for b in range(B - 1, -1, -1):
                idx = rem % d[b]
                rem //= d[b]
                acc = acc * V[off[b] + idx, k]
            o[i, k] = acc
    return out


def khatri_rao_grad(const double complex[:, ::1] R, const double complex[:, ::1] V, dims):
    cdef Py_ssize_t B = len(dims), K = V.shape[1], D = R.shape[0]
    cdef Py_ssize_t[::1] d = np.asarray(dims, dtype=np.intp)
    cdef Py_ssize_t[::1] off = np.zeros(B + 1, dtype=np.intp)
    cdef Py_ssize_t b, i, k, rem
    for b in range(B):
        off[b + 1] = off[b] + d[b]
    cdef Py_ssize_t[::1] row = np.empty(B, dtype=np.intp)
    G = np.zeros((V.shape[0], K), dtype=np.complex128)
    cdef double[:, ::1] g = G.view(np.float64)
    cdef const double[:, ::1] v = np.asarray(V).view(np.float64)
    cdef const double[:, ::1] r = np.asarray(R).view(np.float64)
    # per row i, whole columns at once: pre[b] = r * prod_{c<b} conj(v_c), suffix product on the way back
    cdef double[:, ::1] pre = np.empty((B, 2 * K))
    cdef double[::1] suf = np.empty(2 * K)
    cdef double xr, xi, pr, pi, sr, si
    for i in range(D):
        rem = i
        for b in range(B - 1, -1, -1):
            row[b] = off[b] + rem % d[b]
            rem //= d[b]
        for k in range(2 * K):
            pre[0, k] = r[i, k]
        for b in range(1, B):
            for k in range(K):
                pr = pre[b - 1, 2 * k]; pi = pre[b - 1, 2 * k + 1]
                xr = v[row[b - 1], 2 * k]; xi = -v[row[b - 1], 2 * k + 1]
                pre[b, 2 * k] = pr * xr - pi * xi
                pre[b, 2 * k + 1] = pr * xi + pi * xr
        for k in range(K):
            suf[2 * k] = 1.0
            suf[2 * k + 1] = 0.0
        for b in range(B - 1, -1, -1):
            for k in range(K):
                pr = pre[b, 2 * k]; pi = pre[b, 2 * k + 1]
                sr = suf[2 * k]; si = suf[2 * k + 1]
                g[row[b], 2 * k] += pr * sr - pi * si
                g[row[b], 2 * k + 1] += pr * si + pi * sr
            if b > 0:
                for k in range(K):
                    sr = suf[2 * k]; si = suf[2 * k + 1]
                    xr = v[row[b], 2 * k]; xi = -v[row[b], 2 * k + 1]
                    suf[2 * k] = sr * xr - si * xi
                    suf[2 * k + 1] = sr * xi + si * xr
    return G


def relent_objective(const double complex[:, ::1] Phi, const double complex[:, ::1] rho, double neg_entropy, double delta):
    # BLAS/LAPACK are column-major: a C-ordered array is seen as its transpose,
    # which for the Hermitian matrices here is the complex conjugate.
    cdef int D = <int>Phi.shape[0], K = <int>Phi.shape[1]
    cdef Py_ssize_t i, j
    cdef double complex one = 1.0, zero = 0.0
    cdef char tn = b'N', tc = b'C'
    # column-major a = Phi^H-view products = conj(sigma) without delta
    a_arr = np.empty((D, D), dtype=np.complex128)
    cdef double complex[:, ::1] a = a_arr
    zgemm(&tc, &tn, &D, &D, &K, &one, <double complex*>&Phi[0, 0], &K,
          <double complex*>&Phi[0, 0], &K, &zero, &a[0, 0], &D)
    for i in range(D):
        a[i, i] = a[i, i] + delta
    cdef double[::1] w = np.empty(D)
    cdef int lwork = 4 * D, info = 0
    cdef double complex[::1] work = np.empty(lwork, dtype=np.complex128)
    cdef double[::1] rwork = np.empty(max(1, 3 * D - 2))
    cdef char jobz = b'V', uplo = b'U'
    zheev(&jobz, &uplo, &D, &a[0, 0], &D, &w[0], &work[0], &lwork, &rwork[0], &info)
    if info != 0:
        raise np.linalg.LinAlgError(f"zheev failed with info={info}")
    for j in range(D):
        if w[j] < 0.5 * delta:
            w[j] = 0.5 * delta
    # columns of Z = a (column-major) are conj of sigma's eigenvectors, Z = conj(U).
    # conj(rt) = Z^H conj(rho) Z, and its C-order array reads back as rt itself.
    tmp_arr = np.empty((D, D), dtype=np.complex128)
    rt_arr = np.empty((D, D), dtype=np.complex128)
    cdef double complex[:, ::1] tmp = tmp_arr
    cdef double complex[:, ::1] rt = rt_arr
    zgemm(&tn, &tn, &D, &D, &D, &one, <double complex*>&rho[0, 0], &D, &a[0, 0], &D, &zero, &tmp[0, 0], &D)
    zgemm(&tc, &tn, &D, &D, &D, &one, &a[0, 0], &D, &tmp[0, 0], &D, &zero, &rt[0, 0], &D)
    cdef double f = neg_entropy - 1.0
    for i in range(D):
        f += w[i] - rt[i, i].real * log(w[i])
    gamma = log_divided_differences(np.asarray(w))
    cdef double[:, ::1] g = gamma
    for i in range(D):
        for j in range(D):
            rt[i, j] = rt[i, j] * g[i, j]
    # conj(M) = Z conj(gamma o rt) Z^H, again read back as M
    M_arr = np.empty((D, D), dtype=np.complex128)
    cdef double complex[:, ::1] M = M_arr
    zgemm(&tn, &tn, &D, &D, &D, &one, &a[0, 0], &D, &rt[0, 0], &D, &zero, &tmp[0, 0], &D)
    zgemm(&tn, &tc, &D, &D, &D, &one, &tmp[0, 0], &D, &a[0, 0], &D, &zero, &M[0, 0], &D)
    return f, M_arr
