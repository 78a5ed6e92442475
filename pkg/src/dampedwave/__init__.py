"""Exact and numerical asymptotic profiles for the linear damped wave
equation: exact rational derivative families, Fourier-multiplier
evaluation, frequency-side norms, and decay-rate verification."""

from .exact import (
    FaaPartition,
    PowerSeries,
    Rational,
    double_factorial,
    enumerate_faa_partitions,
    faa_di_bruno_coefficient,
    l_constant,
)
from .expansion import (
    DiffusivePoly,
    TakedaCoefficients,
    TrigPoly,
    check_equivalence,
    diffusive_derivative,
    diffusive_profile,
    sing_limit,
    takeda_coefficients,
    takeda_expansion,
    wave_Fk_general,
    wave_Ik,
    wave_profile,
)
from .multipliers import (
    CutoffFamily,
    Multiplier,
    comparison_multipliers,
    cutoffs,
    diffusive_profile_multiplier,
    k0_hat,
    k1_hat,
    remainder_multiplier,
    wave_profile_multiplier,
)
from .norms import (
    AccuracyError,
    GridField,
    QuadratureRule,
    RadialProfile,
    ResolutionError,
    data_library,
    evolve_grid,
    l2_norm_radial,
    moment_bound_check,
)
from .ratelab import (
    RateFit,
    SweepResult,
    check_decomposition,
    check_theorem1,
    fit_rate,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError",
    "CutoffFamily",
    "DiffusivePoly",
    "FaaPartition",
    "GridField",
    "Multiplier",
    "PowerSeries",
    "QuadratureRule",
    "RadialProfile",
    "RateFit",
    "Rational",
    "ResolutionError",
    "SweepResult",
    "TakedaCoefficients",
    "TrigPoly",
    "check_decomposition",
    "check_equivalence",
    "check_theorem1",
    "comparison_multipliers",
    "cutoffs",
    "data_library",
    "diffusive_derivative",
    "diffusive_profile",
    "diffusive_profile_multiplier",
    "double_factorial",
    "enumerate_faa_partitions",
    "evolve_grid",
    "faa_di_bruno_coefficient",
    "fit_rate",
    "k0_hat",
    "k1_hat",
    "l2_norm_radial",
    "l_constant",
    "moment_bound_check",
    "remainder_multiplier",
    "sing_limit",
    "sweep",
    "takeda_coefficients",
    "takeda_expansion",
    "wave_Fk_general",
    "wave_Ik",
    "wave_profile",
    "wave_profile_multiplier",
]
