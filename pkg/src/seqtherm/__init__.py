"""Single-qubit thermometry toolkit: exact outcome statistics and Fisher
information for sequential and measure-and-reprepare estimation protocols."""

__version__ = "0.1.0"

from ._backend import BACKEND_NAME
from .bloch import (
    BathParams,
    QubitState,
    StateTangent,
    WeightedState,
    evolve,
    evolve_tangent,
    thermal_state,
    thermal_tangent,
)
from .ensemble import (
    BandCurve,
    BandWidthRatio,
    DegenerateBandError,
    EnsembleSpec,
    band_curve,
    bandwidth_ratio,
    sample_states,
)
from .fisher import (
    BudgetError,
    FIResult,
    ProtocolSpec,
    fi_iid,
    fi_single,
    fi_sms,
    fi_sms_projective_chain,
    iid_string_probability,
    qfi_diagonal,
    sms_string_probability,
)
from .povm import MeasurementFamily, apply, apply_tangent, probability
from .trajectory import (
    EstimationReport,
    TrajectoryRecord,
    crb_report,
    mle_estimate,
    simulate,
    simulate_many,
)

__all__ = [
    "BACKEND_NAME",
    "BathParams",
    "QubitState",
    "StateTangent",
    "WeightedState",
    "evolve",
    "evolve_tangent",
    "thermal_state",
    "thermal_tangent",
    "MeasurementFamily",
    "probability",
    "apply",
    "apply_tangent",
    "ProtocolSpec",
    "FIResult",
    "BudgetError",
    "fi_single",
    "fi_iid",
    "fi_sms",
    "fi_sms_projective_chain",
    "iid_string_probability",
    "qfi_diagonal",
    "sms_string_probability",
    "EnsembleSpec",
    "BandCurve",
    "BandWidthRatio",
    "DegenerateBandError",
    "sample_states",
    "band_curve",
    "bandwidth_ratio",
    "TrajectoryRecord",
    "EstimationReport",
    "simulate",
    "simulate_many",
    "mle_estimate",
    "crb_report",
]
