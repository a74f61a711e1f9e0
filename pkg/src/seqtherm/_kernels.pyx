# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled enumeration kernel for sequential-measurement Fisher information.

Depth-first twin of ``seqtherm._kernels_py.sms_fi_grid``: each of the 2^n
outcome strings is followed with the four reals (w, z, dw, dz) that fully
determine its probability and T-derivative under the population POVM.
O(n) memory per path, no allocations in the hot loop.
"""
import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND_NAME = "cython"

cdef double WEIGHT_FLOOR = 1e-300
DEF MAX_N = 24
DEF STACK_CAP = MAX_N + 2


cdef double _fi_state(double rz0, double E, double dE, double h, double dh,
                      double c, int n) noexcept:
    # explicit DFS stack of pending branches; depth <= n <= MAX_N keeps the
    # stack at most n+1 deep (one sibling per level plus the active node)
    cdef double[STACK_CAP] sw, sz, sdw, sdz
    cdef int[STACK_CAP] sdepth
    cdef double fi = 0.0
    cdef double w, z, dw, dz, zt, dzt
    cdef int depth, sp

    sw[0] = 1.0
    sz[0] = rz0
    sdw[0] = 0.0
    sdz[0] = 0.0
    sdepth[0] = 0
    sp = 1
    while sp > 0:
        sp -= 1
        w = sw[sp]; z = sz[sp]; dw = sdw[sp]; dz = sdz[sp]
        depth = sdepth[sp]
        if depth == n:
            if w > WEIGHT_FLOOR:
                fi += dw * dw / w
            continue
        # free evolution of the unnormalized branch
        zt = E * z + (E - 1.0) * h * w
        dzt = dE * z + E * dz + (dE * h + (E - 1.0) * dh) * w + (E - 1.0) * h * dw
        # push the two measurement branches (s = -1 processed first)
        sw[sp] = 0.5 * (w + c * zt)
        sz[sp] = 0.5 * (c * w + zt)
        sdw[sp] = 0.5 * (dw + c * dzt)
        sdz[sp] = 0.5 * (c * dw + dzt)
        sdepth[sp] = depth + 1
        sp += 1
        sw[sp] = 0.5 * (w - c * zt)
        sz[sp] = 0.5 * (-c * w + zt)
        sdw[sp] = 0.5 * (dw - c * dzt)
        sdz[sp] = 0.5 * (-c * dw + dzt)
        sdepth[sp] = depth + 1
        sp += 1
    return fi


def sms_fi_grid(rz0, E, dE, h, dh, double cos2phi, int n):
    """Fisher information of the n-step sequential scheme; see the
    pure-python twin for the parameter contract.  Returns a (K, m) array."""
    if n > MAX_N:
        raise ValueError("enumeration kernel supports n <= 24")
    cdef double[::1] rz = np.ascontiguousarray(rz0, dtype=np.float64)
    cdef double[::1] Ev = np.ascontiguousarray(E, dtype=np.float64)
    cdef double[::1] dEv = np.ascontiguousarray(dE, dtype=np.float64)
    cdef double[::1] hv = np.ascontiguousarray(h, dtype=np.float64)
    cdef double[::1] dhv = np.ascontiguousarray(dh, dtype=np.float64)
    cdef Py_ssize_t m = rz.shape[0]
    cdef Py_ssize_t K = Ev.shape[0]
    out = np.empty((K, m), dtype=np.float64)
    cdef double[:, ::1] fi = out
    cdef Py_ssize_t k, i
    for k in range(K):
        for i in range(m):
            fi[k, i] = _fi_state(rz[i], Ev[k], dEv[k], hv[k], dhv[k], cos2phi, n)
    return out
