# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled classical RK4 for the linear system dy/dt = L y (complex, dense)."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline void _matvec(const double complex[:, ::1] a, const double complex[::1] x,
                         double complex[::1] out, Py_ssize_t n) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double complex acc
    for i in range(n):
        acc = 0
        for j in range(n):
            acc = acc + a[i, j] * x[j]
        out[i] = acc


def rk4_steps(const double complex[:, ::1] generator, y0, double h, Py_ssize_t nsteps):
    """Take ``nsteps`` RK4 steps of size ``h`` from ``y0``; returns a new array."""
    cdef Py_ssize_t n = generator.shape[0]
    if generator.shape[1] != n:
        raise ValueError("generator must be square")
    y_arr = np.array(y0, dtype=np.complex128, copy=True)
    if y_arr.shape[0] != n:
        raise ValueError("state size does not match generator")
    cdef double complex[::1] y = y_arr
    cdef double complex[::1] k1 = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] k2 = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] k3 = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] k4 = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] tmp = np.empty(n, dtype=np.complex128)
    cdef double half = 0.5 * h
    cdef double sixth = h / 6.0
    cdef Py_ssize_t s, i
    with nogil:
        for s in range(nsteps):
            _matvec(generator, y, k1, n)
            for i in range(n):
                tmp[i] = y[i] + half * k1[i]
            _matvec(generator, tmp, k2, n)
            for i in range(n):
                tmp[i] = y[i] + half * k2[i]
            _matvec(generator, tmp, k3, n)
            for i in range(n):
                tmp[i] = y[i] + h * k3[i]
            _matvec(generator, tmp, k4, n)
            for i in range(n):
                y[i] = y[i] + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
    return y_arr
