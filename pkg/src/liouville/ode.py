"""High-accuracy integration of the radial Cauchy problem in the log variable.

With t = log r, z(t) = v1(e^t) and u(t) = v2(e^t), the radial system becomes

    z'' = -exp(2*(N+1)*t + z) + tau*exp(2*t + u)
    u'' = -exp(2*t + u)       + tau*exp(2*(N+1)*t + z)

with the accumulated fluxes f' = exp(2*(N+1)*t + z) and g' = exp(2*t + u)
carried alongside, so the state is (z, u, dz, du, f, g).  The change of
variable removes the singular weight at the origin and turns the far field
into straight-line decay of z and u, which makes both ends cheap: a second
order series launches the trajectory near the origin, and a slope-freezing
tail bound decides when the remaining flux mass is negligible.

Integration itself is delegated to scipy's DOP853 embedded Runge-Kutta pair,
driven in chunks so the tail bound can stop it as soon as both flux integrals
have converged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.integrate import solve_ivp

from .algebra import DomainError, FluxPair, SystemParams

__all__ = [
    "IntegratorConfig",
    "RadialState",
    "Trajectory",
    "TailEstimate",
    "LaunchRadiusError",
    "IntegrationError",
    "rhs",
    "series_launch",
    "choose_launch_radius",
    "integrate",
    "tail_correction",
]

# Above this initial value the problem is rescaled before launching, using the
# exact scale invariance of the system, to keep exponents balanced.
RESCALE_THRESHOLD = 40.0

# Tail bounds are defined only once the decay slopes clear their thresholds
# by this margin.
_SLOPE_MARGIN = 1e-9

# Exponent cap: beyond this math.exp overflows a double.
_EXP_CAP = 700.0

_CHUNK = 2.0


class LaunchRadiusError(DomainError):
    """The requested launch radius is too large for the series remainder."""


class IntegrationError(RuntimeError):
    """The stepper failed (overflow or solver breakdown)."""


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and horizons of one integration run."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    t_max: float = 60.0
    tail_tol: float = 1e-8
    sample_dt: float = 0.25
    launch_tol: float = 1e-12

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "tail_tol", "sample_dt", "launch_tol"):
            if not getattr(self, name) > 0.0:
                raise DomainError(f"{name} must be positive")


@dataclass(frozen=True)
class RadialState:
    """Integrator state at one log-radius t."""

    t: float
    z: float
    u: float
    dz: float
    du: float
    f: float
    g: float


class TailEstimate(NamedTuple):
    """Slope-frozen bounds on the remaining flux mass past the current t."""

    bound1: float
    bound2: float
    sigma1: float
    sigma2: float


@dataclass
class Trajectory:
    """Sampled solution of one Cauchy run plus its tail-corrected fluxes.

    alpha is the requested shooting value v1(0); alpha1/alpha2 are the initial
    values actually launched (they differ from (alpha, 0) by the scale shift
    recorded in `shift` when the run was rescaled to avoid huge exponents;
    fluxes are invariant under that rescaling).
    """

    params: SystemParams
    alpha: float
    alpha1: float
    alpha2: float
    shift: float
    t: np.ndarray
    z: np.ndarray
    u: np.ndarray
    dz: np.ndarray
    du: np.ndarray
    f: np.ndarray
    g: np.ndarray
    flux: FluxPair
    t_end: float
    sigma1: float
    sigma2: float
    converged: bool

    def __len__(self) -> int:
        return len(self.t)

    def sample(self, i: int) -> RadialState:
        return RadialState(
            t=float(self.t[i]), z=float(self.z[i]), u=float(self.u[i]),
            dz=float(self.dz[i]), du=float(self.du[i]),
            f=float(self.f[i]), g=float(self.g[i]),
        )

    def final_state(self) -> RadialState:
        return self.sample(len(self.t) - 1)


def _exp_or_raise(arg: float, t: float) -> float:
    if arg > _EXP_CAP:
        raise IntegrationError(
            f"exponential overflow (exponent {arg:.1f}) at t = {t:.4f}"
        )
    return math.exp(arg)


def rhs(state: RadialState, params: SystemParams) -> tuple[float, ...]:
    """Time derivative of (z, u, dz, du, f, g) at the given state."""
    tau, n1 = params.tau, params.bigN + 1.0
    e1 = _exp_or_raise(2.0 * n1 * state.t + state.z, state.t)
    e2 = _exp_or_raise(2.0 * state.t + state.u, state.t)
    return (state.dz, state.du, -e1 + tau * e2, -e2 + tau * e1, e1, e2)


def _make_rhs(params: SystemParams):
    tau, n1 = params.tau, params.bigN + 1.0
    two_n1 = 2.0 * n1

    def fun(t, y):
        a1 = two_n1 * t + y[0]
        a2 = 2.0 * t + y[1]
        if a1 > _EXP_CAP or a2 > _EXP_CAP:
            raise IntegrationError(
                f"exponential overflow at t = {t:.4f} "
                f"(exponents {a1:.1f}, {a2:.1f})"
            )
        e1 = math.exp(a1)
        e2 = math.exp(a2)
        return (y[2], y[3], -e1 + tau * e2, -e2 + tau * e1, e1, e2)

    return fun


# --------------------------------------------------------------------------
# launch
# --------------------------------------------------------------------------


def _launch_remainder(params: SystemParams, alpha1: float, alpha2: float,
                      r0: float) -> float:
    # magnitude of the first neglected correction: products of the two
    # leading source integrals
    n1 = params.bigN + 1.0
    a = math.exp(min(alpha1 + 2.0 * n1 * math.log(r0), _EXP_CAP)) / (2.0 * n1) ** 2
    b = math.exp(min(alpha2 + 2.0 * math.log(r0), _EXP_CAP)) / 4.0
    return (a + b) ** 2


def choose_launch_radius(params: SystemParams, alpha: float,
                         v2_init: float = 0.0,
                         launch_tol: float = 1e-12) -> float:
    """Largest convenient launch radius meeting the series remainder bound.

    Starts from min(0.3, 0.3*exp(-alpha/(2N+2)), 0.3*exp(-v2_init/2)), which
    respects the concentration scale of either component for large initial
    values, then halves until the documented remainder (for v2_init = 0:
    roughly exp(alpha)*r0^(2N+4) + r0^4) drops below launch_tol.
    """
    n1 = params.bigN + 1.0
    r0 = 0.3 * min(1.0, math.exp(-alpha / (2.0 * n1)), math.exp(-v2_init / 2.0))
    for _ in range(400):
        if _launch_remainder(params, alpha, v2_init, r0) < launch_tol:
            return r0
        r0 *= 0.5
    raise LaunchRadiusError(
        f"no launch radius satisfies the remainder bound {launch_tol:g} "
        f"for alpha = {alpha}, v2_init = {v2_init}"
    )


def series_launch(params: SystemParams, alpha: float, r0: float,
                  v2_init: float = 0.0,
                  launch_tol: float = 1e-12) -> RadialState:
    """Series state at t0 = log(r0) for initial data (alpha, v2_init).

    Integrating the radial equations once with the unknowns frozen at their
    initial values gives the leading picture

        v1(r) ~ alpha   - e^alpha * r^(2N+2) / (2N+2)^2 + tau * e^v20 * r^2 / 4
        v2(r) ~ v2_init - e^v20   * r^2 / 4 + tau * e^alpha * r^(2N+2) / (2N+2)^2

    with fluxes f ~ e^alpha*r^(2N+2)/(2N+2) and g ~ e^v20*r^2/2.  One more
    integration pass through these corrections is carried as well, so the
    launch error sits one order beyond the documented remainder bound and the
    conserved quadratic combination vanishes to third order at launch.  The
    slope first integrals dz = -(f - tau*g) and du = -(g - tau*f) hold exactly
    by construction.
    """
    if not r0 > 0.0:
        raise DomainError(f"launch radius must be positive, got {r0}")
    rem = _launch_remainder(params, alpha, v2_init, r0)
    if rem >= launch_tol:
        suggested = r0 * (0.5 * launch_tol / rem) ** 0.25
        raise LaunchRadiusError(
            f"launch radius {r0:g} too large: series remainder {rem:.3e} "
            f">= {launch_tol:g}; try r0 <= {suggested:.3e}"
        )
    tau, n1 = params.tau, params.bigN + 1.0
    t0 = math.log(r0)
    m = 2.0 * n1  # power of the weighted source
    ea = math.exp(alpha)
    eb = math.exp(v2_init)
    rm = r0 ** m
    r2 = r0 * r0

    # f = c1*r^m + c2*r^(2m) + c3*r^(m+2),  g = d1*r^2 + d2*r^4 + d3*r^(m+2)
    c1 = ea / m
    c2 = -ea * ea / (m * m * 2.0 * m)
    c3 = tau * ea * eb / (4.0 * (m + 2.0))
    d1 = eb / 2.0
    d2 = -eb * eb / 16.0
    d3 = tau * ea * eb / (m * m * (m + 2.0))
    f0 = c1 * rm + c2 * rm * rm + c3 * rm * r2
    g0 = d1 * r2 + d2 * r2 * r2 + d3 * rm * r2

    # v_i(r) = init - int (f - tau*g)/s resp. -(g - tau*f)/s, term by term
    int_f = c1 * rm / m + c2 * rm * rm / (2.0 * m) + c3 * rm * r2 / (m + 2.0)
    int_g = d1 * r2 / 2.0 + d2 * r2 * r2 / 4.0 + d3 * rm * r2 / (m + 2.0)
    z0 = alpha - int_f + tau * int_g
    u0 = v2_init - int_g + tau * int_f
    return RadialState(
        t=t0, z=z0, u=u0,
        dz=-(f0 - tau * g0), du=-(g0 - tau * f0),
        f=f0, g=g0,
    )


# --------------------------------------------------------------------------
# tail bound
# --------------------------------------------------------------------------


def _tail_bounds(state: RadialState, params: SystemParams) -> TailEstimate | None:
    tau, n1 = params.tau, params.bigN + 1.0
    sigma1 = -state.dz
    sigma2 = -state.du
    if sigma1 <= 2.0 * n1 + _SLOPE_MARGIN or sigma2 <= 2.0 + _SLOPE_MARGIN:
        return None
    e1 = _exp_or_raise(2.0 * n1 * state.t + state.z, state.t)
    e2 = _exp_or_raise(2.0 * state.t + state.u, state.t)
    return TailEstimate(
        bound1=float(e1 / (sigma1 - 2.0 * n1)),
        bound2=float(e2 / (sigma2 - 2.0)),
        sigma1=float(sigma1),
        sigma2=float(sigma2),
    )


def tail_correction(traj: Trajectory) -> TailEstimate | None:
    """Tail bounds at the last sample of a trajectory, or None if unavailable.

    The bounds freeze the current decay slopes sigma1 = f - tau*g and
    sigma2 = g - tau*f: past t the sources decay no slower than
    exp(-(sigma1 - 2*(N+1))*(s - t)) resp. exp(-(sigma2 - 2)*(s - t)), so the
    remaining masses are bounded by exp(2*(N+1)*t + z)/(sigma1 - 2*(N+1)) and
    exp(2*t + u)/(sigma2 - 2).  Returns None while either slope is still at or
    below its threshold, in which case the caller keeps integrating.
    """
    return _tail_bounds(traj.final_state(), params=traj.params)


# --------------------------------------------------------------------------
# integration
# --------------------------------------------------------------------------


def integrate(params: SystemParams, alpha: float,
              config: IntegratorConfig | None = None,
              v2_init: float = 0.0) -> Trajectory:
    """Integrate the Cauchy problem with v1(0) = alpha, v2(0) = v2_init.

    Advances the six-dimensional log-variable state from a series launch until
    both tail bounds drop below config.tail_tol (converged) or t reaches
    config.t_max (returned flagged, not raised).  The returned fluxes carry
    half of each tail bound as correction and the other half as the error
    estimate.  Initial data with components beyond +-40 are rescaled through
    the exact scale invariance before launching; fluxes are unaffected.
    """
    cfg = config or IntegratorConfig()
    n1 = params.bigN + 1.0

    a1, a2 = float(alpha), float(v2_init)
    shift = 0.0
    if max(abs(a1), abs(a2)) >= RESCALE_THRESHOLD:
        shift = -(a1 + a2) / (2.0 * (n1 + 1.0))
        a1 += 2.0 * n1 * shift
        a2 += 2.0 * shift

    r0 = choose_launch_radius(params, a1, a2, cfg.launch_tol)
    st = series_launch(params, a1, r0, v2_init=a2, launch_tol=cfg.launch_tol)
    if st.t >= cfg.t_max:
        raise DomainError(
            f"t_max = {cfg.t_max} does not exceed the launch point t0 = {st.t:.3f}"
        )

    fun = _make_rhs(params)
    t = st.t
    y = np.array([st.z, st.u, st.dz, st.du, st.f, st.g], dtype=float)
    ts = [t]
    ys = [y.copy()]
    converged = False
    tail: TailEstimate | None = None

    while t < cfg.t_max - 1e-12:
        t_next = min(t + _CHUNK, cfg.t_max)
        n_pts = max(2, int(round((t_next - t) / cfg.sample_dt)) + 1)
        sol = solve_ivp(
            fun, (t, t_next), y, method="DOP853",
            rtol=cfg.rel_tol, atol=cfg.abs_tol,
            t_eval=np.linspace(t, t_next, n_pts),
        )
        if not sol.success:
            raise IntegrationError(f"stepper failed near t = {t:.4f}: {sol.message}")
        for k in range(1, len(sol.t)):
            ts.append(float(sol.t[k]))
            ys.append(sol.y[:, k].copy())
        t = float(sol.t[-1])
        y = sol.y[:, -1]
        tail = _tail_bounds(
            RadialState(t, y[0], y[1], y[2], y[3], y[4], y[5]), params
        )
        if tail is not None and tail.bound1 < cfg.tail_tol \
                and tail.bound2 < cfg.tail_tol:
            converged = True
            break

    arr = np.array(ys).T
    f_end, g_end = float(y[4]), float(y[5])
    if tail is not None:
        flux = FluxPair(
            beta1=f_end + 0.5 * tail.bound1,
            beta2=g_end + 0.5 * tail.bound2,
            err1=0.5 * tail.bound1,
            err2=0.5 * tail.bound2,
        )
        sigma1, sigma2 = tail.sigma1, tail.sigma2
    else:
        flux = FluxPair(beta1=f_end, beta2=g_end, err1=math.inf, err2=math.inf)
        sigma1, sigma2 = -float(y[2]), -float(y[3])

    return Trajectory(
        params=params, alpha=float(alpha), alpha1=a1, alpha2=a2, shift=shift,
        t=np.array(ts), z=arr[0], u=arr[1], dz=arr[2], du=arr[3],
        f=arr[4], g=arr[5],
        flux=flux, t_end=t, sigma1=sigma1, sigma2=sigma2, converged=converged,
    )
