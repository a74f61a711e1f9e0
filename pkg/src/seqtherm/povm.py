"""Two-outcome noisy population measurement on the probe qubit.

The Kraus pair interpolates between a projective readout of sigma_z
(phi = 0) and a completely uninformative coin flip (phi = pi/4):

    M_+ = cos(phi) P_+ + sin(phi) P_-,
    M_- = sin(phi) P_+ + cos(phi) P_-,

with P_+- the energy projectors.  Outcome probabilities depend on the
state only through r_z: P(s|rho) = (1 + s r_z cos(2 phi)) / 2.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bloch import QubitState, StateTangent, WeightedState

__all__ = ["MeasurementFamily", "OUTCOMES", "probability", "apply", "apply_tangent"]

OUTCOMES = (+1, -1)


@dataclass(frozen=True)
class MeasurementFamily:
    """Sharpness angle phi in [0, pi/4] of the population POVM."""

    phi: float

    def __post_init__(self):
        if not 0.0 <= self.phi <= math.pi / 4:
            raise ValueError(f"phi must lie in [0, pi/4], got {self.phi}")

    @property
    def cos2phi(self) -> float:
        # sin(pi/2 - 2 phi) rather than cos(2 phi): exact 0 at phi = pi/4,
        # exact 1 at phi = 0
        return math.sin(math.pi / 2 - 2.0 * self.phi)

    @property
    def cossin(self) -> float:
        """cos(phi) sin(phi); the coherence scale of both Kraus maps."""
        return 0.5 * math.sin(2.0 * self.phi)

    def kraus_matrices(self) -> tuple[np.ndarray, np.ndarray]:
        """(M_+, M_-) as 2x2 arrays in the (excited, ground) basis."""
        c, s = math.cos(self.phi), math.sin(self.phi)
        return np.diag([c, s]), np.diag([s, c])

    def effect_matrices(self) -> tuple[np.ndarray, np.ndarray]:
        """The two POVM effects M_s^dag M_s."""
        mp, mm = self.kraus_matrices()
        return mp.conj().T @ mp, mm.conj().T @ mm


def probability(family: MeasurementFamily, state: QubitState) -> tuple[float, float]:
    """Outcome probabilities (P(+), P(-)); they sum to 1 exactly."""
    p_plus = 0.5 * (1.0 + family.cos2phi * state.r_z)
    return p_plus, 1.0 - p_plus


def apply(family: MeasurementFamily, state: QubitState, s: int) -> WeightedState:
    """Post-measurement state and branch weight for outcome ``s``.

    Populations are rescaled by (cos^2 phi, sin^2 phi) or the swap thereof;
    coherences pick up a common factor cos(phi) sin(phi).  A zero-probability
    branch is returned with ``impossible=True`` and must be skipped.
    """
    if s not in OUTCOMES:
        raise ValueError(f"outcome must be +1 or -1, got {s}")
    c2 = family.cos2phi
    p = 0.5 * (1.0 + s * c2 * state.r_z)
    if p == 0.0:
        return WeightedState(state, 0.0, impossible=True)
    cs = family.cossin
    post = QubitState(
        cs * state.r_x / p,
        cs * state.r_y / p,
        0.5 * (s * c2 + state.r_z) / p,
    )
    return WeightedState(post, p)


def apply_tangent(
    family: MeasurementFamily, state: QubitState, tangent: StateTangent, s: int
) -> tuple[WeightedState, StateTangent]:
    """Push a state tangent through the measurement update.

    The unnormalized map is linear, so its derivative is the map itself;
    the quotient rule then supplies the tangent of the normalized state.
    The returned tangent's ``dweight`` is the T-derivative of this branch's
    conditional probability.
    """
    weighted = apply(family, state, s)
    if weighted.impossible:
        return weighted, StateTangent(0.0, 0.0, 0.0, 0.0)
    c2 = family.cos2phi
    cs = family.cossin
    p = weighted.weight
    dp = 0.5 * s * c2 * tangent.dr_z
    post = weighted.state
    new_tangent = StateTangent(
        (cs * tangent.dr_x - post.r_x * dp) / p,
        (cs * tangent.dr_y - post.r_y * dp) / p,
        (0.5 * tangent.dr_z - post.r_z * dp) / p,
        dweight=dp,
    )
    return weighted, new_tangent
