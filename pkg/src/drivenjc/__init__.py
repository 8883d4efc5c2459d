"""Damping-basis dynamics of a weakly driven Jaynes-Cummings system.

The library solves the zero-temperature master equation of a resonantly
coupled qubit-cavity pair under weak classical driving by expanding states
over the nine eigenoperators of the generator, and validates every analytic
result against a dense 9x9 superoperator integrated independently.
"""

from ._kernels import BACKEND
from .damping import (
    PAIR_LABELS,
    DampingBasisSet,
    DegenerateRatesWarning,
    ExpansionCoefficients,
    RatePair,
    build_damping_bases,
    evolve_analytic,
    expand_state,
    unvec,
    vec,
)
from .liouvillian import (
    BathSpec,
    DirectRates,
    LiouvillianMatrix,
    OhmicBath,
    Trajectory,
    build_liouvillian,
    gamma_of,
    integrate,
    random_density_matrix,
    transition_rates,
)
from .model import (
    BARE_LABELS,
    WEAK_DRIVE_RATIO_MAX,
    DressedSpectrum,
    ModelParams,
    StrongDriveWarning,
    bare_hamiltonian,
    build_params,
    dressed_spectrum,
)
from .observables import (
    CORRELATION_KINDS,
    CorrelationResult,
    InitialQubitState,
    SpectrumCurve,
    correlation,
    d0_factor,
    decoherence_factor,
    delta_decoherence,
    dominant_angular_frequency,
    excited_population_analytic,
    excited_population_numeric,
    expansion_coefficients_qubit,
    fit_population_components,
    regression_correlation,
    rho_eg,
    spectral_lines,
    spectrum_xx,
    vacuum_splitting,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BARE_LABELS",
    "BathSpec",
    "CORRELATION_KINDS",
    "CorrelationResult",
    "DampingBasisSet",
    "DegenerateRatesWarning",
    "DirectRates",
    "DressedSpectrum",
    "ExpansionCoefficients",
    "InitialQubitState",
    "LiouvillianMatrix",
    "ModelParams",
    "OhmicBath",
    "PAIR_LABELS",
    "RatePair",
    "SpectrumCurve",
    "StrongDriveWarning",
    "Trajectory",
    "WEAK_DRIVE_RATIO_MAX",
    "bare_hamiltonian",
    "build_damping_bases",
    "build_liouvillian",
    "build_params",
    "correlation",
    "d0_factor",
    "decoherence_factor",
    "delta_decoherence",
    "dominant_angular_frequency",
    "dressed_spectrum",
    "evolve_analytic",
    "excited_population_analytic",
    "excited_population_numeric",
    "expand_state",
    "expansion_coefficients_qubit",
    "fit_population_components",
    "gamma_of",
    "integrate",
    "random_density_matrix",
    "regression_correlation",
    "rho_eg",
    "spectral_lines",
    "spectrum_xx",
    "transition_rates",
    "unvec",
    "vacuum_splitting",
    "vec",
]
