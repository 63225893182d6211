"""Design tools for third-order spontaneous parametric down-conversion in silica nanofibers."""

__version__ = "0.1.0"

from .dispersion import AIR, FUSED_SILICA, DomainError, Material, MaterialKind, Spectral, angular_frequency, index_derivative, refractive_index
from .fibermodes import (
    HE11,
    HE12,
    FiberSpec,
    ModeLabel,
    ModeProfile,
    ModeSolution,
    ModeSolverError,
    NotGuidedError,
    boundary_mismatch,
    group_slowness,
    mode_field,
    propagation_constant,
    solve_mode,
    write_profile_csv,
)
from .nonlinear import (
    CHI3_SILICA,
    GaussianBeam,
    NonInteriorMaximum,
    NonlinearSet,
    NormalizationError,
    effective_area,
    gamma_coefficient,
    gaussian_coupling,
    maximize_coupling,
    nonlinear_set,
    overlap_integral,
    spm_xpm_coefficients,
)
from .phasematch import (
    NoPhasematchError,
    PhasematchSolution,
    PumpSpec,
    find_phasematch_radius,
    find_phasematch_wavelength,
    frequency_sum,
    nonlinear_phase,
    phase_mismatch,
    phasematch_scan,
    pm_function,
    pump_envelope,
    sigma_for_duration,
    sigma_from_ghz_label,
)
from .triplets import (
    GridTooLarge,
    JointSpectrumGrid,
    ModeDispersion,
    QuadratureOptions,
    QuadratureWarning,
    RateResult,
    SourceDesign,
    design_point,
    figure2_design,
    full_joint_amplitude,
    joint_amplitude,
    jsi_grid,
    marginal_spectrum,
    mode_length_factor,
    triplet_rate,
    zeta,
)
