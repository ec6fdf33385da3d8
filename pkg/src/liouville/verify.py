"""Conserved and monotone diagnostics, plus the general coupling-matrix layer.

The log-variable flow conserves one quadratic combination of the state (psi0,
identically zero along exact trajectories) and keeps two partial combinations
(psi1, psi2) strictly positive; two further quantities (r0, r1) are monotone
on either side of the self-dual coupling and a pivot function h changes sign
exactly once.  Checking these on computed trajectories validates the
integrator far more sharply than eyeballing fluxes.

The general layer handles an arbitrary 2x2 coupling matrix: the flux
constraint it imposes, the decay exponents at infinity, and the normalisation
that maps a collaborating matrix onto the symmetric one-parameter system.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import Check, ConditionReport, DomainError, SystemParams
from .ode import Trajectory

__all__ = [
    "DiagnosticsProfile",
    "RQuantities",
    "DecayReport",
    "GeneralSystem",
    "NormalizedSystem",
    "NotConvergedError",
    "psi_profile",
    "r_quantities",
    "decay_check",
    "general_pohozaev_residual",
    "symmetrize",
    "normalize_general",
    "beta_infty",
]


class NotConvergedError(RuntimeError):
    """The diagnostic needs a converged trajectory."""


def _exponentials(traj: Trajectory) -> tuple[np.ndarray, np.ndarray]:
    n1 = traj.params.bigN + 1.0
    e1 = np.exp(2.0 * n1 * traj.t + traj.z)
    e2 = np.exp(2.0 * traj.t + traj.u)
    return e1, e2


@dataclass
class DiagnosticsProfile:
    """Per-sample conserved-quantity values over one trajectory."""

    t: np.ndarray
    psi0: np.ndarray
    psi1: np.ndarray
    psi2: np.ndarray
    max_abs_psi0: float
    min_psi1: float
    min_psi2: float


def psi_profile(traj: Trajectory) -> DiagnosticsProfile:
    """Evaluate the conserved combination and its two positive parts.

        psi0 = E1 + E2 - 2*(N+1)*f - 2*g + f^2/2 + g^2/2 - tau*f*g
        psi1 = E1 - 2*(N+1)*f + f^2/2
        psi2 = E2 - 2*g + g^2/2

    with E1 = exp(2*(N+1)*t + z), E2 = exp(2*t + u).  psi0 vanishes along
    exact trajectories; its residual measures accumulated integration error.
    As t -> infinity psi0 tends to half the ellipse residual of the fluxes.
    """
    if len(traj) == 0:
        raise DomainError("trajectory has no samples")
    tau, n1 = traj.params.tau, traj.params.bigN + 1.0
    e1, e2 = _exponentials(traj)
    f, g = traj.f, traj.g
    psi1_arr = e1 - 2.0 * n1 * f + 0.5 * f * f
    psi2_arr = e2 - 2.0 * g + 0.5 * g * g
    psi0_arr = psi1_arr + psi2_arr - tau * f * g
    return DiagnosticsProfile(
        t=traj.t, psi0=psi0_arr, psi1=psi1_arr, psi2=psi2_arr,
        max_abs_psi0=float(np.max(np.abs(psi0_arr))),
        min_psi1=float(np.min(psi1_arr)),
        min_psi2=float(np.min(psi2_arr)),
    )


@dataclass
class RQuantities:
    """Monotone comparison quantities and the pivot function over a trajectory.

    d_r0 and d_r1 are centred finite differences of r0 and r1 on the sample
    grid (one-sided at the ends); they cross-validate the analytic derivative
    formulas instead of assuming them.
    """

    t: np.ndarray
    r0: np.ndarray
    r1: np.ndarray
    h: np.ndarray
    d_r0: np.ndarray
    d_r1: np.ndarray

    def d_r0_signs(self) -> np.ndarray:
        return np.sign(self.d_r0)

    def d_r1_signs(self) -> np.ndarray:
        return np.sign(self.d_r1)


def _fd(t: np.ndarray, v: np.ndarray) -> np.ndarray:
    return np.gradient(v, t, edge_order=2)


def r_quantities(traj: Trajectory) -> RQuantities:
    """Evaluate r0, r1 and the pivot h at every sample.

    With bs1 = 4*(N+1) + 8*tau:

        r0 = 2*tau*E1*(g - 4) + (f - 4*(N+1)) * (E1 + f*(f - bs1)/2)
        r1 = 2*tau*E2*(f - bs1) + g * (E2 + (g - 4)*(g - 2*tau*bs1)/2)
        h  = E1 + f*(f - bs1)/2

    Both r quantities vanish in the distant past; for tau < 1/2 the first is
    nonincreasing once g clears 4.  The pivot h decreases while g < 4 and
    increases afterwards (its derivative is tau*E1*(g - 4)), so on genuine
    trajectories, whose final flux stays below bs1, it dips once and keeps a
    single sign.
    """
    if len(traj) == 0:
        raise DomainError("trajectory has no samples")
    tau, n1 = traj.params.tau, traj.params.bigN + 1.0
    e1, e2 = _exponentials(traj)
    f, g = traj.f, traj.g
    bs1 = 4.0 * n1 + 8.0 * tau
    h = e1 + 0.5 * f * (f - bs1)
    r0 = 2.0 * tau * e1 * (g - 4.0) + (f - 4.0 * n1) * h
    r1 = 2.0 * tau * e2 * (f - bs1) + g * (
        e2 + 0.5 * (g - 4.0) * (g - 2.0 * tau * bs1)
    )
    return RQuantities(
        t=traj.t, r0=r0, r1=r1, h=h,
        d_r0=_fd(traj.t, r0), d_r1=_fd(traj.t, r1),
    )


def analytic_r_derivatives(traj: Trajectory) -> tuple[np.ndarray, np.ndarray]:
    """Closed-form dr0/dt and dr1/dt, for cross-checking the finite differences."""
    tau, n1 = traj.params.tau, traj.params.bigN + 1.0
    e1, e2 = _exponentials(traj)
    f, g = traj.f, traj.g
    bs1 = 4.0 * n1 + 8.0 * tau
    d_r0 = -(1.0 - 2.0 * tau) * e1 * (
        0.5 * (2.0 * tau + 1.0) * g * (g - 4.0) + e2
    )
    d_r1 = -(1.0 - 2.0 * tau) * e2 * (
        e1 + 0.5 * (1.0 + 2.0 * tau) * f * (f - bs1)
    )
    return d_r0, d_r1


@dataclass(frozen=True)
class DecayReport:
    sigma1: float
    sigma2: float
    deviation: float
    slopes_above_threshold: bool

    def to_dict(self) -> dict:
        return {
            "sigma1": self.sigma1,
            "sigma2": self.sigma2,
            "deviation": self.deviation,
            "slopes_above_threshold": self.slopes_above_threshold,
        }


def decay_check(traj: Trajectory) -> DecayReport:
    """Compare the final decay slopes against the tail-corrected fluxes.

    The slopes -dz and -du must approach beta1 - tau*beta2 and
    beta2 - tau*beta1; the report carries the larger of the two deviations
    and whether both slopes clear their strict thresholds 2*(N+1) and 2.
    Refuses trajectories that did not converge.
    """
    if not traj.converged:
        raise NotConvergedError("decay_check needs a converged trajectory")
    tau, n1 = traj.params.tau, traj.params.bigN + 1.0
    end = traj.final_state()
    sigma1, sigma2 = -end.dz, -end.du
    b1, b2 = traj.flux.beta1, traj.flux.beta2
    deviation = max(abs(sigma1 - (b1 - tau * b2)), abs(sigma2 - (b2 - tau * b1)))
    return DecayReport(
        sigma1=sigma1, sigma2=sigma2, deviation=deviation,
        slopes_above_threshold=(sigma1 > 2.0 * n1 and sigma2 > 2.0),
    )


# --------------------------------------------------------------------------
# general coupling-matrix layer
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneralSystem:
    """A 2x2 coupling matrix with its two vortex exponents (each > -1)."""

    k11: float
    k12: float
    k21: float
    k22: float
    n1: float
    n2: float

    def __post_init__(self):
        if self.n1 <= -1.0 or self.n2 <= -1.0:
            raise DomainError("vortex exponents must exceed -1")

    @property
    def det(self) -> float:
        return self.k11 * self.k22 - self.k12 * self.k21

    @property
    def is_competitive(self) -> bool:
        return self.k11 > 0 and self.k22 > 0 and self.k12 < 0 and self.k21 < 0


def general_pohozaev_residual(sys: GeneralSystem, beta1: float, beta2: float) -> float:
    """Flux constraint of the general system; zero for any solution's pair.

        k11*|k21|*b1^2 + k22*|k12|*b2^2 + 2*k12*|k21|*b1*b2
          - 4*(n1+1)*|k21|*b1 - 4*(n2+1)*|k12|*b2

    Valid only when the off-diagonal entries do not have opposite signs
    (k12*k21 >= 0); otherwise the identity is not asserted and the call is
    refused.
    """
    if sys.k12 * sys.k21 < 0.0:
        raise DomainError(
            "residual identity requires k12*k21 >= 0 "
            f"(got k12 = {sys.k12}, k21 = {sys.k21})"
        )
    a21, a12 = abs(sys.k21), abs(sys.k12)
    return (
        sys.k11 * a21 * beta1 * beta1
        + sys.k22 * a12 * beta2 * beta2
        + 2.0 * sys.k12 * a21 * beta1 * beta2
        - 4.0 * (sys.n1 + 1.0) * a21 * beta1
        - 4.0 * (sys.n2 + 1.0) * a12 * beta2
    )


def symmetrize(sys: GeneralSystem) -> tuple[GeneralSystem, float, float]:
    """Rescale a k12*k21 > 0 system to its symmetric companion.

    Returns the symmetric matrix with off-diagonal entries +-1 together with
    the flux scale factors (|k21|, |k12|): pairs transform as
    (b1, b2) -> (|k21|*b1, |k12|*b2), and the flux constraint is invariant
    under the exchange.
    """
    if sys.k12 * sys.k21 <= 0.0:
        raise DomainError("symmetrization needs k12*k21 > 0")
    sign = 1.0 if sys.k12 > 0 else -1.0
    hat = GeneralSystem(
        k11=sys.k11 / abs(sys.k21), k12=sign, k21=sign,
        k22=sys.k22 / abs(sys.k12), n1=sys.n1, n2=sys.n2,
    )
    return hat, abs(sys.k21), abs(sys.k12)


@dataclass(frozen=True)
class NormalizedSystem:
    """Result of normalising a general matrix to the one-parameter form."""

    tau1: float
    tau2: float
    beta_scale1: float
    beta_scale2: float
    symmetric: SystemParams | None

    def to_dict(self) -> dict:
        d = {
            "tau1": self.tau1,
            "tau2": self.tau2,
            "beta_scale1": self.beta_scale1,
            "beta_scale2": self.beta_scale2,
        }
        if self.symmetric is not None:
            d["symmetric"] = {"tau": self.symmetric.tau, "bigN": self.symmetric.bigN}
        else:
            d["symmetric"] = None
        return d


def normalize_general(sys: GeneralSystem) -> NormalizedSystem:
    """Map a general matrix to couplings (tau1, tau2) and flux rescalings.

    tau1 = -k12/k22 and tau2 = -k21/k11; the normalised fluxes are k11*beta1
    and k22*beta2.  When the couplings agree to 1e-12 (a collaborating
    matrix), the second exponent vanishes and the resulting tau lies in
    [0, 1), the one-parameter SystemParams is attached as well.
    """
    if sys.k11 <= 0.0 or sys.k22 <= 0.0:
        raise DomainError(
            "normalisation requires positive diagonal entries "
            f"(got k11 = {sys.k11}, k22 = {sys.k22})"
        )
    tau1 = -sys.k12 / sys.k22
    tau2 = -sys.k21 / sys.k11
    symmetric = None
    if abs(tau1 - tau2) <= 1e-12 and sys.n2 == 0.0 and sys.n1 > 0.0 \
            and 0.0 <= tau1 < 1.0:
        symmetric = SystemParams(tau=tau1, bigN=sys.n1)
    return NormalizedSystem(
        tau1=tau1, tau2=tau2,
        beta_scale1=sys.k11, beta_scale2=sys.k22,
        symmetric=symmetric,
    )


def beta_infty(sys: GeneralSystem, beta1: float, beta2: float
               ) -> tuple[float, float, ConditionReport]:
    """Decay exponents at infinity and their strict lower-bound report.

    Each component of a finite-mass solution decays like
    -(k_ii*b_i + k_ij*b_j + 2*n_i)*log|x|, and integrability forces
    k_ii*b_i + k_ij*b_j > 2*(n_i + 1) strictly; the report carries both
    margins (at finite truncation the computed margin can be tiny, so the
    caller decides what to make of near-zero values).
    """
    b1inf = sys.k11 * beta1 + sys.k12 * beta2
    b2inf = sys.k22 * beta2 + sys.k21 * beta1
    m1 = b1inf - 2.0 * (sys.n1 + 1.0)
    m2 = b2inf - 2.0 * (sys.n2 + 1.0)
    report = ConditionReport((
        Check("decay_1", m1 > 0.0, m1, "k11*b1 + k12*b2 > 2*(n1+1)"),
        Check("decay_2", m2 > 0.0, m2, "k22*b2 + k21*b1 > 2*(n2+1)"),
    ))
    return b1inf, b2inf, report
