# cython: language_level=3
"""Compiled inner loops; semantics mirror _kernels_py exactly."""
import numpy as np
cimport numpy as cnp
from libc.math cimport log, pow, sqrt, fabs

cnp.import_array()


cdef inline double _poly(const double[:] c, double x) noexcept nogil:
    cdef Py_ssize_t k
    cdef double acc = 0.0
    for k in range(c.shape[0] - 1, -1, -1):
        acc = acc * x + c[k]
    return acc


def conv_sum(double zeta, double eta, long R, double[:] coeffs):
    """Neumaier-compensated sum_{r=1}^{R-1} P(ln r) r^-zeta (R-r)^-eta."""
    cdef double s = 0.0, comp = 0.0, term, t
    cdef long r
    with nogil:
        for r in range(1, R):
            term = _poly(coeffs, log(<double>r)) * pow(<double>r, -zeta) * pow(<double>(R - r), -eta)
            t = s + term
            if fabs(s) >= fabs(term):
                comp += (s - t) + term
            else:
                comp += (term - t) + s
            s = t
    return s + comp


def fse_sum_1d(double alpha, double alpha1, long R, double[:] coeffs):
    """Neumaier-compensated sum_{i=1}^{R+1} P(ln i) i^-alpha1 (R+2-i)^(1-alpha)."""
    cdef double s = 0.0, comp = 0.0, term, t
    cdef long i
    with nogil:
        for i in range(1, R + 2):
            term = _poly(coeffs, log(<double>i)) * pow(<double>i, -alpha1) * pow(<double>(R + 2 - i), 1.0 - alpha)
            t = s + term
            if fabs(s) >= fabs(term):
                comp += (s - t) + term
            else:
                comp += (term - t) + s
            s = t
    return s + comp


def pair_sum(double[:, :] inside, double[:, :] outside, double alpha, double alpha1, double[:] coeffs):
    """sum over x in inside, z in outside of P(ln max(|x|,1)) max(|x|,1)^-alpha1 |z - x|^-alpha."""
    cdef Py_ssize_t i, j, k, n = inside.shape[0], m = outside.shape[0], D = inside.shape[1]
    cdef double s = 0.0, comp = 0.0, rx, dz, w, inner, term, t, d2
    with nogil:
        for i in range(n):
            d2 = 0.0
            for k in range(D):
                d2 = d2 + inside[i, k] * inside[i, k]
            rx = sqrt(d2)
            if rx < 1.0:
                rx = 1.0
            w = _poly(coeffs, log(rx)) * pow(rx, -alpha1)
            inner = 0.0
            for j in range(m):
                d2 = 0.0
                for k in range(D):
                    dz = outside[j, k] - inside[i, k]
                    d2 = d2 + dz * dz
                inner = inner + pow(d2, -0.5 * alpha)
            term = w * inner
            t = s + term
            if fabs(s) >= fabs(term):
                comp += (s - t) + term
            else:
                comp += (term - t) + s
            s = t
    return s + comp


def zz_diagonal(double[:, :] J, long N):
    """Diagonal of sum_{i<j} J_ij Z_i Z_j in the computational basis (site 0 = most significant bit)."""
    cdef long dim = 1 << N
    out = np.zeros(dim, dtype=np.float64)
    cdef double[:] o = out
    cdef long s, i, j
    cdef int zi, zj
    cdef double acc
    with nogil:
        for s in range(dim):
            acc = 0.0
            for i in range(N):
                zi = 1 - 2 * ((s >> (N - 1 - i)) & 1)
                for j in range(i + 1, N):
                    if J[i, j] != 0.0:
                        zj = 1 - 2 * ((s >> (N - 1 - j)) & 1)
                        acc = acc + J[i, j] * zi * zj
            o[s] = acc
    return out
