"""Phase-sensitivity optimization of an unbalanced Mach-Zehnder interferometer.

The package computes, optimizes, and cross-validates the phase sensitivity
of a two-beam-splitter interferometer for pure two-mode product inputs and
three detection schemes (difference intensity, single-mode intensity,
balanced homodyne), bounded by the quantum Fisher information.
"""

from .detection import (
    Scheme,
    SensitivityBreakdown,
    SensitivityCoefficients,
    extinction_rate,
    generic_coefficients,
    mean_output_photons,
    sensitivity_difference,
    sensitivity_from_coefficients,
    sensitivity_homodyne,
    sensitivity_single,
)
from .errors import (
    CutoffExceeded,
    DegenerateFisher,
    EmptyInput,
    FlatObjective,
    IncompatiblePmc,
    MziError,
    NoConvergence,
    WrongConvention,
    ZeroDerivative,
    ZeroDerivativeEverywhere,
)
from .mzi_core import (
    ACoefficients,
    BsAngles,
    Convention,
    KCoefficients,
    PhaseConfig,
    a_coefficients,
    angles_from_transmittances,
    internal_mode_moments,
    k_coefficients,
)
from .optimize import (
    OptimizationReport,
    QuarticSolution,
    joint_optimize,
    optimal_working_point,
    optimize_bs1,
    optimize_bs2_difference,
    optimize_bs2_homodyne,
    optimize_bs2_single,
)
from .qfi import FisherMatrix, QfiKind, QfiReport, fisher_matrix, qfi_report, qfi_vs_theta
from .states import (
    FieldMoments,
    InputState,
    Kind,
    ModeSpec,
    PmcId,
    SchwingerMoments,
    apply_pmc,
    coherent,
    field_moments,
    fock,
    mean_total_photons,
    schwinger_moments,
    squeezed_coherent,
    squeezed_vacuum,
    vacuum,
)

__version__ = "0.1.0"
