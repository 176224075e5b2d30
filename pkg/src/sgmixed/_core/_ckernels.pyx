# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled element kernels; same contract as ``_pykernels.local_blocks``."""
import numpy as np
cimport numpy as cnp


def local_blocks(g_in, H_in, w_in, psi_in, gpsi_in):
    cdef double[:, :, :, ::1] g = np.ascontiguousarray(g_in, dtype=np.float64)
    cdef double[:, :, :, :, ::1] H = np.ascontiguousarray(H_in, dtype=np.float64)
    cdef double[:, ::1] w = np.ascontiguousarray(w_in, dtype=np.float64)
    cdef double[:, ::1] psi = np.ascontiguousarray(psi_in, dtype=np.float64)
    cdef double[:, :, ::1] gpsi = np.ascontiguousarray(gpsi_in, dtype=np.float64)
    cdef Py_ssize_t ne = g.shape[0], nq = g.shape[1], nb = g.shape[2]
    cdef Py_ssize_t e, q, a, b, c, d, k, p
    cdef double wq, gg, hh, s

    A_eps_arr = np.zeros((ne, 2 * nb, 2 * nb))
    A_geps_arr = np.zeros((ne, 2 * nb, 2 * nb))
    B0_arr = np.zeros((ne, 3, 2 * nb))
    B2_arr = np.zeros((ne, 3, 2 * nb))
    cdef double[:, :, ::1] A1 = A_eps_arr
    cdef double[:, :, ::1] A2 = A_geps_arr
    cdef double[:, :, ::1] B0 = B0_arr
    cdef double[:, :, ::1] B2 = B2_arr

    with nogil:
        for e in range(ne):
            for q in range(nq):
                wq = w[e, q]
                for a in range(nb):
                    for b in range(a, nb):
                        gg = g[e, q, a, 0] * g[e, q, b, 0] + g[e, q, a, 1] * g[e, q, b, 1]
                        hh = 0.0
                        for c in range(2):
                            for d in range(2):
                                hh = hh + H[e, q, a, c, d] * H[e, q, b, c, d]
                        for c in range(2):
                            for d in range(2):
                                s = 0.5 * g[e, q, a, d] * g[e, q, b, c]
                                if c == d:
                                    s = s + 0.5 * gg
                                A1[e, c * nb + a, d * nb + b] += wq * s
                                s = 0.0
                                for k in range(2):
                                    s = s + H[e, q, a, d, k] * H[e, q, b, k, c]
                                s = 0.5 * s
                                if c == d:
                                    s = s + 0.5 * hh
                                A2[e, c * nb + a, d * nb + b] += wq * s
                    for c in range(2):
                        for p in range(3):
                            B0[e, p, c * nb + a] += wq * psi[q, p] * g[e, q, a, c]
                            B2[e, p, c * nb + a] += wq * (gpsi[e, p, 0] * H[e, q, a, 0, c]
                                                          + gpsi[e, p, 1] * H[e, q, a, 1, c])
            # fill lower triangle of each component block from symmetry
            for a in range(nb):
                for b in range(a):
                    for c in range(2):
                        for d in range(2):
                            A1[e, c * nb + a, d * nb + b] = A1[e, d * nb + b, c * nb + a]
                            A2[e, c * nb + a, d * nb + b] = A2[e, d * nb + b, c * nb + a]
    return A_eps_arr, A_geps_arr, B0_arr, B2_arr
