# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled reduced-propagation kernel.

Evaluates, for every time row ``t`` and form ``p``,

    out[t, p] = sum_{m,n} u[t, m] * forms[p, m, n] * conj(u[t, n])

which is the matrix element of a reduced state once the total state has been
expressed in the eigenbasis of the (Hermitian) generator and ``u`` holds the
phases ``exp(-i E_m t)``.

The terms ``(m, n)`` and ``(n, m)`` share the phase product
``w = u[t, m] conj(u[t, n])`` up to conjugation, so each unordered pair costs
a single complex-sized update.  The time index is the innermost loop and runs
over contiguous real and imaginary planes, which the compiler vectorises
without reassociating sums.
"""

import numpy as np


def quadratic_forms(double complex[:, :, ::1] forms, double complex[:, ::1] phases):
    cdef Py_ssize_t n_forms = forms.shape[0]
    cdef Py_ssize_t n = forms.shape[1]
    cdef Py_ssize_t n_times = phases.shape[0]
    if forms.shape[2] != n or phases.shape[1] != n:
        raise ValueError("forms must be (P, n, n) and phases (T, n)")
    ph = np.asarray(phases)
    cdef double[:, ::1] ur = np.ascontiguousarray(ph.real.T)
    cdef double[:, ::1] ui = np.ascontiguousarray(ph.imag.T)
    acc_r_arr = np.zeros((n_forms, n_times))
    acc_i_arr = np.zeros((n_forms, n_times))
    cdef double[:, ::1] acc_r = acc_r_arr
    cdef double[:, ::1] acc_i = acc_i_arr
    cdef double[::1] wr = np.empty(n_times)
    cdef double[::1] wi = np.empty(n_times)
    cdef Py_ssize_t t, p, m, k
    cdef double a1, b1, a2, b2, sr, si, dr, di, c, d
    cdef double *pr
    cdef double *pi
    cdef double *xr
    cdef double *xi
    with nogil:
        for m in range(n):
            for k in range(m, n):
                for t in range(n_times):
                    wr[t] = ur[m, t] * ur[k, t] + ui[m, t] * ui[k, t]
                    wi[t] = ui[m, t] * ur[k, t] - ur[m, t] * ui[k, t]
                xr = &wr[0]
                xi = &wi[0]
                for p in range(n_forms):
                    a1 = forms[p, m, k].real
                    b1 = forms[p, m, k].imag
                    if k == m:
                        a2 = 0.0
                        b2 = 0.0
                    else:
                        a2 = forms[p, k, m].real
                        b2 = forms[p, k, m].imag
                    # F1 w + F2 conj(w)
                    sr = a1 + a2
                    di = b2 - b1
                    dr = a1 - a2
                    si = b1 + b2
                    if sr == 0.0 and di == 0.0 and dr == 0.0 and si == 0.0:
                        continue
                    pr = &acc_r[p, 0]
                    pi = &acc_i[p, 0]
                    for t in range(n_times):
                        c = xr[t]
                        d = xi[t]
                        pr[t] += sr * c + di * d
                        pi[t] += dr * d + si * c
    return np.ascontiguousarray((acc_r_arr + 1j * acc_i_arr).T)
