"""Exact thermalization dynamics of a qubit probe in Bloch form.

The probe relaxes toward the thermal fixed point of a resonant bosonic
bath.  Populations decay at the total rate ``Gamma = gamma*coth(1/(2T))``
while coherences decay at ``Gamma/2`` and rotate at the probe frequency.
All temperatures are dimensionless (units of the qubit gap), all times
carry units of ``1/gamma`` once ``gamma=1`` is chosen.

Besides the state itself, every propagator here has a *tangent* variant
that transports the exact partial derivative with respect to the bath
temperature alongside the state.  This keeps Fisher-information code free
of finite differences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

__all__ = [
    "QubitState",
    "StateTangent",
    "WeightedState",
    "BathParams",
    "thermal_state",
    "thermal_tangent",
    "decay_factors",
    "evolve",
    "evolve_tangent",
]

_NORM_TOL = 1e-12


@dataclass(frozen=True)
class QubitState:
    """Bloch vector (r_x, r_y, r_z); the density matrix is (1 + r.sigma)/2."""

    r_x: float
    r_y: float
    r_z: float

    def __post_init__(self):
        norm2 = self.r_x**2 + self.r_y**2 + self.r_z**2
        if not norm2 <= 1.0 + _NORM_TOL:
            raise ValueError(f"Bloch vector norm {math.sqrt(norm2):.6g} exceeds 1")

    @property
    def norm(self) -> float:
        return math.sqrt(self.r_x**2 + self.r_y**2 + self.r_z**2)

    @property
    def purity(self) -> float:
        return 0.5 * (1.0 + self.r_x**2 + self.r_y**2 + self.r_z**2)

    @classmethod
    def ground(cls) -> "QubitState":
        return cls(0.0, 0.0, -1.0)

    @classmethod
    def excited(cls) -> "QubitState":
        return cls(0.0, 0.0, 1.0)

    @classmethod
    def maximally_mixed(cls) -> "QubitState":
        return cls(0.0, 0.0, 0.0)


@dataclass(frozen=True)
class StateTangent:
    """Partial derivative of a Bloch vector (and a branch weight) w.r.t. T."""

    dr_x: float
    dr_y: float
    dr_z: float
    dweight: float = 0.0

    def __post_init__(self):
        for v in (self.dr_x, self.dr_y, self.dr_z, self.dweight):
            if not math.isfinite(v):
                raise ValueError("tangent components must be finite")

    @classmethod
    def zero(cls) -> "StateTangent":
        return cls(0.0, 0.0, 0.0, 0.0)


@dataclass(frozen=True)
class WeightedState:
    """Normalized post-measurement state plus the weight of its branch.

    ``impossible`` marks a zero-probability branch; the state carried along
    with it is a placeholder and must not be used.
    """

    state: QubitState
    weight: float
    impossible: bool = False

    def __post_init__(self):
        if not (0.0 <= self.weight <= 1.0 + 1e-12):
            raise ValueError(f"branch weight {self.weight} outside [0, 1]")


@dataclass(frozen=True)
class BathParams:
    """Bath temperature and coupling.

    ``T`` is in units of the qubit gap (so beta = 1/T) and ``gamma`` sets
    the time unit.  ``omega_gamma`` is the coherence rotation rate in units
    of gamma; it never enters any outcome probability for the population
    POVM used here, so it defaults to 0.
    """

    T: float
    gamma: float = 1.0
    omega_gamma: float = 0.0

    def __post_init__(self):
        if not self.T > 0.0:
            raise ValueError(f"temperature must be positive, got {self.T}")
        if not self.gamma > 0.0:
            raise ValueError(f"coupling must be positive, got {self.gamma}")

    @property
    def beta(self) -> float:
        return 1.0 / self.T

    @property
    def n_th(self) -> float:
        """Mean thermal occupation 1/(e^beta - 1)."""
        if self.beta > 700.0:  # avoid expm1 overflow; e^-beta is exact enough
            return math.exp(-self.beta)
        return 1.0 / math.expm1(self.beta)

    @property
    def excitation_rate(self) -> float:
        return self.n_th * self.gamma

    @property
    def decay_rate(self) -> float:
        # written so that decay_rate - excitation_rate == gamma exactly
        return self.excitation_rate + self.gamma

    @property
    def relaxation_rate(self) -> float:
        """Total population relaxation rate gamma*coth(beta/2)."""
        return self.gamma / math.tanh(0.5 * self.beta)


def _tanh_half_beta(T: float) -> tuple[float, float]:
    """tanh(1/(2T)) and its T-derivative, stable down to T -> 0+."""
    x = 0.5 / T
    h = math.tanh(x)
    # sech^2 underflows harmlessly for large x
    ch = math.cosh(x) if x < 350.0 else math.inf
    sech2 = 0.0 if not math.isfinite(ch) else 1.0 / (ch * ch)
    dh = -sech2 * 0.5 / (T * T)
    return h, dh


def decay_factors(bath: BathParams, t: float) -> tuple[float, float, float, float]:
    """Return (E, dE, h, dh) for a propagation time ``t``.

    E = exp(-Gamma t) is the population contraction factor, h = tanh(beta/2)
    fixes the thermal Bloch component -h; dE, dh are their exact derivatives
    with respect to T.
    """
    if t < 0.0:
        raise ValueError(f"propagation time must be nonnegative, got {t}")
    h, dh = _tanh_half_beta(bath.T)
    gamma_t = bath.relaxation_rate
    E = math.exp(-gamma_t * t)
    x = 0.5 / bath.T
    sh = math.sinh(x) if x < 350.0 else math.inf
    csch2 = 0.0 if not math.isfinite(sh) else 1.0 / (sh * sh)
    dgamma = bath.gamma * csch2 * 0.5 / (bath.T * bath.T)
    dE = -t * dgamma * E
    return E, dE, h, dh


def thermal_state(bath: BathParams) -> QubitState:
    """Fixed point of the thermalization map: r = (0, 0, -tanh(beta/2))."""
    h, _ = _tanh_half_beta(bath.T)
    return QubitState(0.0, 0.0, -h)


def thermal_tangent(bath: BathParams) -> StateTangent:
    """Exact T-derivative of the thermal state."""
    _, dh = _tanh_half_beta(bath.T)
    return StateTangent(0.0, 0.0, -dh)


def evolve(state: QubitState, bath: BathParams, t: float) -> QubitState:
    """Propagate a state for time ``t`` under the thermalization map.

    r_z contracts toward -tanh(beta/2) at rate Gamma; coherences contract at
    Gamma/2 and rotate by omega_gamma*gamma*t in the x-y plane.
    """
    E, _, h, _ = decay_factors(bath, t)
    f = math.sqrt(E)
    theta = bath.omega_gamma * bath.gamma * t
    c, s = math.cos(theta), math.sin(theta)
    return QubitState(
        f * (c * state.r_x - s * state.r_y),
        f * (s * state.r_x + c * state.r_y),
        E * state.r_z - (1.0 - E) * h,
    )


def evolve_tangent(
    state: QubitState, tangent: StateTangent, bath: BathParams, t: float
) -> tuple[QubitState, StateTangent]:
    """Jointly propagate a state and its exact T-derivative.

    The tangent picks up contributions both from the incoming derivative
    and from the T-dependence of the contraction factor and of the fixed
    point.  ``dweight`` is untouched: free evolution is trace preserving.
    """
    E, dE, h, dh = decay_factors(bath, t)
    f = math.sqrt(E)
    df = 0.0 if E == 0.0 else 0.5 * dE / f
    theta = bath.omega_gamma * bath.gamma * t
    c, s = math.cos(theta), math.sin(theta)

    new_state = QubitState(
        f * (c * state.r_x - s * state.r_y),
        f * (s * state.r_x + c * state.r_y),
        E * state.r_z - (1.0 - E) * h,
    )
    new_tangent = replace(
        tangent,
        dr_x=df * (c * state.r_x - s * state.r_y) + f * (c * tangent.dr_x - s * tangent.dr_y),
        dr_y=df * (s * state.r_x + c * state.r_y) + f * (s * tangent.dr_x + c * tangent.dr_y),
        dr_z=dE * state.r_z + E * tangent.dr_z + dE * h - (1.0 - E) * dh,
    )
    return new_state, new_tangent
