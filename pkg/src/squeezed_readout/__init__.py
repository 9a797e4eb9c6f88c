"""Dispersive spin-qubit readout with displaced squeezed microwave probes.

Analytic signal, noise, SNR and fidelity for integrated homodyne
readout; Monte Carlo single-shot cross-validation; operating-point
optimization (squeezing, time, phases); probe back-action figures of
merit; sweep and reference-table generation with a CLI front end.
"""

from .backaction import (
    BackactionReport,
    backaction_report,
    critical_photon_check,
    induced_t1_inverse,
    purcell_rate,
    t2_penalty,
    total_t1,
)
from .dynamics import (
    CoefficientSet,
    coefficient_set,
    envelopes,
    first_integrals,
    propagator,
    rotated_coefficients,
    signal_coefficients,
    steady_first_integrals,
)
from .errors import (
    NumericalError,
    ReadoutError,
    UndefinedPointError,
    ValidationError,
)
from .metrics import (
    ReadoutPoint,
    contrast,
    erf,
    fidelity,
    integrated_signal_mean,
    integrated_variance,
    measurement_mean,
    optimal_squeezing,
    optimal_time_estimate,
    phase_matching_residual,
    readout_point,
    snr,
)
from .params import (
    SystemParams,
    UnitContext,
    from_experimental,
    wrap_angle,
)
from .probe import (
    ProbeState,
    QuadratureStats,
    displacement_from_squeezed_coherent,
    input_covariance,
    input_means,
    mean_photon_number,
    rotated_quadrature_covariance,
    rotated_quadrature_variance,
)
from .shots import (
    BLOCK_SIZE,
    GENERATOR_ID,
    ClassificationResult,
    ShotBatch,
    classify,
    empirical_fidelity,
    sample_shots,
    with_empirical_fidelity,
)
from .sweeps import (
    FigureTable,
    PeakResult,
    SweepFixed,
    SweepResult,
    SweepRow,
    SweepSpec,
    find_peak,
    render_figure_csv,
    render_sweep_csv,
    reproduce_figure2,
    reproduce_figure3,
    run_sweep,
    write_figure_csv,
    write_sweep_csv,
)

__version__ = "0.1.0"

__all__ = [
    "BLOCK_SIZE",
    "BackactionReport",
    "ClassificationResult",
    "CoefficientSet",
    "FigureTable",
    "GENERATOR_ID",
    "NumericalError",
    "PeakResult",
    "ProbeState",
    "QuadratureStats",
    "ReadoutError",
    "ReadoutPoint",
    "ShotBatch",
    "SweepFixed",
    "SweepResult",
    "SweepRow",
    "SweepSpec",
    "SystemParams",
    "UndefinedPointError",
    "UnitContext",
    "ValidationError",
    "backaction_report",
    "classify",
    "coefficient_set",
    "contrast",
    "critical_photon_check",
    "displacement_from_squeezed_coherent",
    "empirical_fidelity",
    "envelopes",
    "erf",
    "fidelity",
    "find_peak",
    "first_integrals",
    "from_experimental",
    "induced_t1_inverse",
    "input_covariance",
    "input_means",
    "integrated_signal_mean",
    "integrated_variance",
    "mean_photon_number",
    "measurement_mean",
    "optimal_squeezing",
    "optimal_time_estimate",
    "phase_matching_residual",
    "propagator",
    "purcell_rate",
    "readout_point",
    "render_figure_csv",
    "render_sweep_csv",
    "reproduce_figure2",
    "reproduce_figure3",
    "rotated_coefficients",
    "rotated_quadrature_covariance",
    "rotated_quadrature_variance",
    "run_sweep",
    "sample_shots",
    "signal_coefficients",
    "snr",
    "steady_first_integrals",
    "t2_penalty",
    "total_t1",
    "with_empirical_fidelity",
    "wrap_angle",
    "write_figure_csv",
    "write_sweep_csv",
]
