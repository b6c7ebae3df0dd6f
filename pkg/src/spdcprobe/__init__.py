"""Quantum-probe simulation: angular correlations of SPDC photon pairs read out
through the trace distance of their polarization states."""

from .errors import SpdcProbeError
from .harness import Scenario, SweepResult, builtin_scenarios, figure4_dataset, run_scenario, write_outputs
from .linalg import (
    DensityMatrix,
    concurrence_two_qubit,
    hermitian_eigenvalues,
    purity,
    trace_distance,
)
from .probe import (
    EvolutionSpec,
    PolarizationPrep,
    TraceDistanceCurve,
    coincidence_probability,
    compute_curve,
    epsilon,
    evolved_state,
    prepare_polarization,
    trace_distance_closed,
    visibility,
)
from .spdc import (
    AngularGrid,
    AngularKernel,
    DeltaMarginal,
    JointDistribution,
    PhysicalConfig,
    angular_correlation,
    angular_kernel,
    angular_purity,
    joint_angular_distribution,
    longitudinal_mismatch,
    pump_amplitude,
    transverse_mismatch,
    wavelength_window_to_freq,
)

__version__ = "0.1.0"

__all__ = [
    "AngularGrid",
    "AngularKernel",
    "DeltaMarginal",
    "DensityMatrix",
    "EvolutionSpec",
    "JointDistribution",
    "PhysicalConfig",
    "PolarizationPrep",
    "Scenario",
    "SpdcProbeError",
    "SweepResult",
    "TraceDistanceCurve",
    "angular_correlation",
    "angular_kernel",
    "angular_purity",
    "builtin_scenarios",
    "coincidence_probability",
    "compute_curve",
    "concurrence_two_qubit",
    "epsilon",
    "evolved_state",
    "figure4_dataset",
    "hermitian_eigenvalues",
    "joint_angular_distribution",
    "longitudinal_mismatch",
    "prepare_polarization",
    "pump_amplitude",
    "purity",
    "run_scenario",
    "trace_distance",
    "trace_distance_closed",
    "transverse_mismatch",
    "visibility",
    "wavelength_window_to_freq",
    "write_outputs",
]
