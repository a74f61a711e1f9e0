"""Pure-numpy enumeration kernel for sequential-measurement Fisher information.

For the population POVM every outcome probability involves only the
unnormalized trace ``w`` and z-component ``z`` of a branch, so each of the
2^n outcome strings can be followed with four reals (w, z, dw, dz).  The
tree of branches is expanded breadth-first, vectorized jointly over input
states; memory is kept bounded by splitting the leading outcomes into
subtrees when 2^n times the number of states gets large.

Used as the fallback when the compiled extension is unavailable; see
``seqtherm._kernels`` for the Cython twin.
"""
from __future__ import annotations

import numpy as np

BACKEND_NAME = "python"

_WEIGHT_FLOOR = 1e-300
_MAX_TREE_CELLS = 1 << 22


def _expand_tree(w, z, dw, dz, E, dE, h, dh, c, steps):
    """Run ``steps`` evolve+measure rounds, doubling the branch axis each time.

    Returns the leaf contribution sum( dw^2 / w ) over branches with
    weight above the underflow floor.
    """
    for _ in range(steps):
        # free evolution: z' = E z - (1 - E) h w, trace unchanged
        z, dz = (
            E * z + (E - 1.0) * h * w,
            dE * z + E * dz + (dE * h + (E - 1.0) * dh) * w + (E - 1.0) * h * dw,
        )
        # measurement: branch into s = +1 / -1
        w, z, dw, dz = (
            np.concatenate([0.5 * (w + c * z), 0.5 * (w - c * z)]),
            np.concatenate([0.5 * (c * w + z), 0.5 * (-c * w + z)]),
            np.concatenate([0.5 * (dw + c * dz), 0.5 * (dw - c * dz)]),
            np.concatenate([0.5 * (c * dw + dz), 0.5 * (-c * dw + dz)]),
        )
    alive = w > _WEIGHT_FLOOR
    out = np.zeros(w.shape, dtype=np.float64)
    np.divide(dw * dw, w, out=out, where=alive)
    return out.sum(axis=0)


def _fi_subtree(w, z, dw, dz, E, dE, h, dh, c, steps):
    if (1 << steps) * w.shape[-1] * w.shape[0] <= _MAX_TREE_CELLS:
        return _expand_tree(w, z, dw, dz, E, dE, h, dh, c, steps)
    zt = E * z + (E - 1.0) * h * w
    dzt = dE * z + E * dz + (dE * h + (E - 1.0) * dh) * w + (E - 1.0) * h * dw
    total = 0.0
    for s in (1.0, -1.0):
        total = total + _fi_subtree(
            0.5 * (w + s * c * zt),
            0.5 * (s * c * w + zt),
            0.5 * (dw + s * c * dzt),
            0.5 * (s * c * dw + dzt),
            E, dE, h, dh, c, steps - 1,
        )
    return total


def sms_fi_grid(rz0, E, dE, h, dh, cos2phi, n):
    """Fisher information of the n-step sequential scheme.

    Parameters
    ----------
    rz0 : (m,) array of initial Bloch z-components (coherences are
        irrelevant to outcome statistics for this POVM).
    E, dE, h, dh : (K,) arrays of per-temperature propagation factors and
        their T-derivatives, as produced by ``bloch.decay_factors``.
    cos2phi : measurement sharpness cos(2 phi).
    n : number of measurements (2^n strings enumerated).

    Returns
    -------
    (K, m) array of FI values.
    """
    rz0 = np.ascontiguousarray(rz0, dtype=np.float64)
    m = rz0.shape[0]
    K = len(E)
    fi = np.empty((K, m), dtype=np.float64)
    shape = (1, m)
    for k in range(K):
        w = np.ones(shape)
        z = rz0.reshape(shape).copy()
        dw = np.zeros(shape)
        dz = np.zeros(shape)
        fi[k] = _fi_subtree(w, z, dw, dz, E[k], dE[k], h[k], dh[k], cos2phi, n)
    return fi
