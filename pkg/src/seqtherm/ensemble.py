"""Hilbert-Schmidt sampling of input states and FI band statistics.

Input states are drawn by partial-tracing Haar-random pure states of a
qubit pair, realized through the equivalent Ginibre construction
rho = G G^dag / Tr(G G^dag) with G a 2x2 matrix of standard complex
Gaussians.  Over such an ensemble the min/mean/max of the FI versus
temperature form the bands of the figure reproductions, and the max-min
band widths of the two schemes are compared as a function of n.
"""
from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _backend
from .bloch import BathParams, QubitState, decay_factors
from .povm import MeasurementFamily

__all__ = [
    "EnsembleSpec",
    "BandCurve",
    "BandWidthRatio",
    "DegenerateBandError",
    "sample_states",
    "sample_bloch",
    "band_curve",
    "bandwidth_ratio",
]


class DegenerateBandError(ValueError):
    """Raised when a band-width ratio would divide by a zero IID band."""


@dataclass(frozen=True)
class EnsembleSpec:
    """How many Hilbert-Schmidt samples to draw, from which seed, and
    whether to always append the ground and excited poles."""

    samples: int
    seed: int
    include_poles: bool = True

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError(f"need at least one sample, got {self.samples}")


@dataclass(frozen=True)
class BandCurve:
    """Pointwise min/mean/max of the FI over an input-state ensemble."""

    scheme: str
    n: int
    tau: float
    phi: float
    T_grid: np.ndarray
    fi_min: np.ndarray
    fi_mean: np.ndarray
    fi_max: np.ndarray
    argmin_state: list
    argmax_state: list

    def __post_init__(self):
        # 1-ulp slack: the mean of near-identical values can round past max
        slack = 1e-12 * np.maximum(np.abs(self.fi_max), 1e-300)
        if not np.all((self.fi_min <= self.fi_mean + slack)
                      & (self.fi_mean <= self.fi_max + slack)):
            raise ValueError("band ordering violated: need min <= mean <= max")


@dataclass(frozen=True)
class BandWidthRatio:
    """Delta F_SMS / Delta F_IID per n, evaluated at the temperature where
    the IID mean curve peaks (recorded in ``peak_T``)."""

    n_values: list
    ratio: list
    delta_sms: list
    delta_iid: list
    peak_T: float


def sample_bloch(spec: EnsembleSpec) -> np.ndarray:
    """(m, 3) array of Bloch vectors, Hilbert-Schmidt distributed.

    Deterministic given the seed; poles (ground then excited) are appended
    after the random draws when ``include_poles`` is set.
    """
    rng = np.random.default_rng(spec.seed)
    g = rng.standard_normal((spec.samples, 2, 2)) + 1j * rng.standard_normal(
        (spec.samples, 2, 2)
    )
    rho = g @ np.conj(np.swapaxes(g, 1, 2))
    tr = np.trace(rho, axis1=1, axis2=2).real
    rho /= tr[:, None, None]
    r = np.empty((spec.samples, 3))
    r[:, 0] = 2.0 * rho[:, 0, 1].real
    r[:, 1] = -2.0 * rho[:, 0, 1].imag
    r[:, 2] = (rho[:, 0, 0] - rho[:, 1, 1]).real
    if spec.include_poles:
        r = np.vstack([r, [0.0, 0.0, -1.0], [0.0, 0.0, 1.0]])
    return r


def sample_states(spec: EnsembleSpec) -> list[QubitState]:
    return [QubitState(*row) for row in sample_bloch(spec)]


def _thread_count(threads: int | None) -> int:
    if threads is not None:
        return max(1, threads)
    env = os.environ.get("THERMO_THREADS")
    if env:
        return max(1, int(env))
    return 1


def _fi_matrix(scheme: str, n: int, tau: float, family: MeasurementFamily,
               T_grid: np.ndarray, rz0: np.ndarray, gamma: float,
               threads: int | None = None) -> np.ndarray:
    """(K, m) FI values for every (temperature, input state) pair."""
    T_grid = np.asarray(T_grid, dtype=np.float64)
    factors = np.array([decay_factors(BathParams(T, gamma), tau) for T in T_grid])
    E, dE, h, dh = factors.T
    c = family.cos2phi
    if scheme == "iid":
        sz = E[:, None] * rz0[None, :] + (E - 1.0)[:, None] * h[:, None]
        dsz = (dE[:, None] * rz0[None, :]
               + (dE * h + (E - 1.0) * dh)[:, None])
        denom = 1.0 - sz * sz * c * c
        fi = np.zeros_like(denom)
        ok = denom > 0.0
        np.divide(n * c * c * dsz * dsz, denom, out=fi, where=ok)
        fi[~ok & (dsz != 0.0)] = np.inf
        return fi
    if scheme != "sms":
        raise ValueError(f"unknown scheme {scheme!r}")
    nthreads = _thread_count(threads)
    if nthreads <= 1 or len(T_grid) < 2 * nthreads:
        return _backend.sms_fi_grid(rz0, E, dE, h, dh, c, n)
    # fixed, order-preserving chunking keeps results independent of the
    # thread count
    chunks = np.array_split(np.arange(len(T_grid)), nthreads)
    with ThreadPoolExecutor(max_workers=nthreads) as pool:
        parts = list(pool.map(
            lambda idx: _backend.sms_fi_grid(rz0, E[idx], dE[idx], h[idx],
                                             dh[idx], c, n),
            chunks,
        ))
    return np.vstack(parts)


def band_curve(scheme: str, n: int, tau: float, family: MeasurementFamily,
               T_grid, ensemble: EnsembleSpec, gamma: float = 1.0,
               threads: int | None = None) -> BandCurve:
    """Min/mean/max FI bands over the sampled input states, per grid T."""
    T_grid = np.asarray(T_grid, dtype=np.float64)
    bloch = sample_bloch(ensemble)
    fi = _fi_matrix(scheme, n, tau, family, T_grid, bloch[:, 2], gamma, threads)
    imin = np.argmin(fi, axis=1)
    imax = np.argmax(fi, axis=1)
    return BandCurve(
        scheme=scheme, n=n, tau=tau, phi=family.phi,
        T_grid=T_grid,
        fi_min=fi[np.arange(len(T_grid)), imin],
        fi_mean=fi.mean(axis=1),
        fi_max=fi[np.arange(len(T_grid)), imax],
        argmin_state=[QubitState(*bloch[i]) for i in imin],
        argmax_state=[QubitState(*bloch[i]) for i in imax],
    )


def bandwidth_ratio(n_max: int, tau: float, family: MeasurementFamily,
                    T_grid, ensemble: EnsembleSpec, gamma: float = 1.0,
                    threads: int | None = None) -> BandWidthRatio:
    """Max-min band width of the SMS scheme over that of the IID scheme for
    n = 1..n_max, at the IID-mean-peak temperature."""
    if n_max > 12:
        raise ValueError(f"n_max capped at 12 for band-width scans, got {n_max}")
    T_grid = np.asarray(T_grid, dtype=np.float64)
    bloch = sample_bloch(ensemble)
    rz0 = bloch[:, 2]
    fi1 = _fi_matrix("iid", 1, tau, family, T_grid, rz0, gamma, threads)
    mean1 = fi1.mean(axis=1)
    if not np.any(mean1 > 0.0):
        raise DegenerateBandError("IID mean curve vanishes on the whole grid")
    peak_T = float(T_grid[int(np.argmax(mean1))])
    peak = np.array([peak_T])
    n_values, ratios, dsms, diid = [], [], [], []
    for n in range(1, n_max + 1):
        fi_iid_vals = _fi_matrix("iid", n, tau, family, peak, rz0, gamma)
        fi_sms_vals = _fi_matrix("sms", n, tau, family, peak, rz0, gamma, threads)
        d_iid = float(fi_iid_vals.max() - fi_iid_vals.min())
        d_sms = float(fi_sms_vals.max() - fi_sms_vals.min())
        if d_iid == 0.0:
            raise DegenerateBandError(
                f"IID band width is zero at T={peak_T} for n={n}"
            )
        n_values.append(n)
        dsms.append(d_sms)
        diid.append(d_iid)
        ratios.append(d_sms / d_iid)
    return BandWidthRatio(n_values, ratios, dsms, diid, peak_T)
