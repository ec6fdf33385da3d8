"""Radial solver and flux-curve toolkit for competitive two-component
Liouville systems of Toda type."""

from .algebra import (
    Check,
    ConditionReport,
    DomainError,
    FluxPair,
    SolvabilityReport,
    SystemParams,
    ThresholdSet,
    beta_extremes,
    beta_limits,
    beta_pm,
    beta_star,
    beta_starstar,
    classify_point,
    discriminant,
    ellipse_residual,
    ellipse_scale,
    necessary_conditions,
    phi1,
    phi2,
    psi1,
    psi2,
    solvable_radial,
    tau0,
    tau1,
    thresholds,
)
from .ode import (
    IntegrationError,
    IntegratorConfig,
    LaunchRadiusError,
    RadialState,
    Trajectory,
    choose_launch_radius,
    integrate,
    rhs,
    series_launch,
    tail_correction,
)
from .oracle import profile_flux, radial_family, toda_reference, xi_profile
from .shooting import (
    BracketError,
    LimitsResult,
    SweepResult,
    estimate_limits,
    flux_of_alpha,
    solve_for_target,
    sweep,
)
from .verify import (
    DecayReport,
    DiagnosticsProfile,
    GeneralSystem,
    NormalizedSystem,
    NotConvergedError,
    beta_infty,
    decay_check,
    general_pohozaev_residual,
    normalize_general,
    psi_profile,
    r_quantities,
    symmetrize,
)

__version__ = "0.1.0"
