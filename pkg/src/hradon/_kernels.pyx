# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled versions of the table kernels; see _kernels_py for the reference."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs

cnp.import_array()


cdef inline double _eval_one(const double[:, ::1] table, double delta, double wmax,
                             double w) noexcept nogil:
    cdef double a = fabs(w)
    cdef Py_ssize_t idx, m, deg
    cdef double x, x2, b1, b2, tmp
    if a >= wmax:
        return 0.0
    idx = <Py_ssize_t>(a / delta)
    if idx > table.shape[0] - 1:
        idx = table.shape[0] - 1
    x = (a - (idx + 0.5) * delta) * (2.0 / delta)
    x2 = 2.0 * x
    deg = table.shape[1] - 1
    b1 = 0.0
    b2 = 0.0
    for m in range(deg, 0, -1):
        tmp = table[idx, m] + x2 * b1 - b2
        b2 = b1
        b1 = tmp
    tmp = table[idx, 0] + x * b1 - b2
    if w < 0:
        return -tmp
    if w > 0:
        return tmp
    return 0.0


def table_eval(const double[:, ::1] table, double delta, double wmax, omega):
    cdef const double[::1] om = np.ascontiguousarray(omega, dtype=np.float64).ravel()
    out = np.zeros(om.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t i
    with nogil:
        for i in range(om.shape[0]):
            o[i] = _eval_one(table, delta, wmax, om[i])
    return out.reshape(np.shape(omega))


def table_dyadic_sum(const double[:, ::1] table, double delta, double wmax, x, scales):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64).ravel()
    cdef const double[::1] sc = np.ascontiguousarray(scales, dtype=np.float64).ravel()
    out = np.zeros(xv.shape[0])
    cdef double[::1] o = out
    cdef Py_ssize_t i, s
    cdef double acc
    with nogil:
        for i in range(xv.shape[0]):
            acc = 0.0
            for s in range(sc.shape[0]):
                acc = acc + _eval_one(table, delta, wmax, sc[s] * xv[i])
            o[i] = acc
    return out.reshape(np.shape(x))
