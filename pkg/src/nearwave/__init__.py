"""Evanescent near-field toolkit.

Mode spectra behind an inhomogeneous screen, near-field superpositions,
probe-particle absorption, relativistic evanescence-transfer kinematics,
and finite-mass screen recoil with complex (Gamow) energies and lifetimes.
"""

from .aperture import (
    ApertureProfile,
    GaussianProfile,
    SingleSlitProfile,
    TabulatedProfile,
    TailEstimate,
    slit_te_amplitude_sq,
    tail_probability,
)
from .errors import ConfigError, DegenerateInputError, NearwaveError, QuadratureError
from .kinematics import (
    ProbeState,
    TransferResult,
    absorbable_kx,
    evanescence_transfer,
    ff_exit_momentum,
    grating_match,
    post_absorption_state,
    selection_residual,
    transferred_kz,
)
from .modes import (
    GratingSpec,
    Mode,
    WaveKind,
    classify,
    compressed_wavelength,
    decay_depth,
    decay_depth_conventions,
    grating_modes,
    phase_velocity,
)
from .nearfield import (
    FieldSample,
    cw_fraction_profile,
    field_at,
    field_dx_at,
    probability_current_x,
)
from .probe import (
    GaussianPacket,
    absorption_probability,
    high_kx_limit,
    overlap_integral,
    packet_spread,
    probe_spread_scenario,
)
from .quadrature import QuadResult, adaptive_quad
from .quantities import (
    CONSTANTS,
    DEFAULT_REL_TOL,
    ELECTRON_MASS,
    HBAR,
    C_LIGHT,
    PhysicalConstants,
    ScaledUnits,
    complex_close,
    compton_wavenumber_ratio,
    stable_one_minus_inv_sqrt1p,
)
from .recoil import (
    LifetimeRoutes,
    RecoilSolution,
    ScreenSpec,
    ShortLifetimeResult,
    Threshold,
    TraverseTime,
    critical_threshold,
    decay_width_asymptotic,
    entangled_term,
    gamow_lifetime,
    lifetime_routes,
    lifetime_scenario,
    output_wavenumber,
    recoil_solution,
    root_residual,
    screen_momentum_magnitude,
    short_lifetime_probability,
    traverse_time,
)

__version__ = "0.1.0"

__all__ = [
    "ApertureProfile",
    "GaussianProfile",
    "SingleSlitProfile",
    "TabulatedProfile",
    "TailEstimate",
    "slit_te_amplitude_sq",
    "tail_probability",
    "ConfigError",
    "DegenerateInputError",
    "NearwaveError",
    "QuadratureError",
    "ProbeState",
    "TransferResult",
    "absorbable_kx",
    "evanescence_transfer",
    "ff_exit_momentum",
    "grating_match",
    "post_absorption_state",
    "selection_residual",
    "transferred_kz",
    "GratingSpec",
    "Mode",
    "WaveKind",
    "classify",
    "compressed_wavelength",
    "decay_depth",
    "decay_depth_conventions",
    "grating_modes",
    "phase_velocity",
    "FieldSample",
    "cw_fraction_profile",
    "field_at",
    "field_dx_at",
    "probability_current_x",
    "GaussianPacket",
    "absorption_probability",
    "high_kx_limit",
    "overlap_integral",
    "packet_spread",
    "probe_spread_scenario",
    "QuadResult",
    "adaptive_quad",
    "CONSTANTS",
    "DEFAULT_REL_TOL",
    "ELECTRON_MASS",
    "HBAR",
    "C_LIGHT",
    "PhysicalConstants",
    "ScaledUnits",
    "complex_close",
    "compton_wavenumber_ratio",
    "stable_one_minus_inv_sqrt1p",
    "LifetimeRoutes",
    "RecoilSolution",
    "ScreenSpec",
    "ShortLifetimeResult",
    "Threshold",
    "TraverseTime",
    "critical_threshold",
    "decay_width_asymptotic",
    "entangled_term",
    "gamow_lifetime",
    "lifetime_routes",
    "lifetime_scenario",
    "output_wavenumber",
    "recoil_solution",
    "root_residual",
    "screen_momentum_magnitude",
    "short_lifetime_probability",
    "traverse_time",
]
