"""Tracing and inverting the flux curve of the shooting parameter.

Every radial solution is, up to rescaling, the solution of the Cauchy problem
with v1(0) = alpha and v2(0) = 0, so the admissible flux pairs form the curve
alpha -> (beta1(alpha), beta2(alpha)).  This module sweeps that curve over a
grid, estimates its limits at alpha -> +-infinity against their closed forms,
and solves for the alpha that hits a prescribed beta1.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import algebra
from .algebra import ConditionReport, DomainError, FluxPair, SystemParams
from .ode import IntegratorConfig, Trajectory, integrate

__all__ = [
    "SweepPoint",
    "SweepResult",
    "LimitEstimate",
    "LimitsResult",
    "TargetResult",
    "BracketError",
    "flux_of_alpha",
    "sweep",
    "estimate_limits",
    "solve_for_target",
]


class BracketError(RuntimeError):
    """The supplied alpha bracket does not straddle the target flux."""


def _num(x: float) -> float | None:
    # JSON has no Infinity; unavailable error estimates serialise as null
    return x if math.isfinite(x) else None


def _thread_count(n_jobs: int) -> int:
    cap = os.environ.get("LIOUVILLE_THREADS")
    if cap is not None:
        try:
            cap_val = int(cap)
        except ValueError as exc:
            raise DomainError(f"LIOUVILLE_THREADS must be an integer, got {cap!r}") from exc
        if cap_val < 1:
            raise DomainError("LIOUVILLE_THREADS must be >= 1")
        return max(1, min(n_jobs, cap_val))
    return max(1, min(n_jobs, os.cpu_count() or 1))


def flux_of_alpha(params: SystemParams, alpha: float,
                  config: IntegratorConfig | None = None) -> FluxPair:
    """Tail-corrected flux pair of the shooting run at this alpha."""
    return integrate(params, alpha, config).flux


@dataclass(frozen=True)
class SweepPoint:
    alpha: float
    flux: FluxPair
    residual: float
    converged: bool
    conditions: ConditionReport

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta1": self.flux.beta1,
            "beta2": self.flux.beta2,
            "err1": _num(self.flux.err1),
            "err2": _num(self.flux.err2),
            "residual": self.residual,
            "converged": self.converged,
            "conditions": self.conditions.to_dict(),
        }


@dataclass
class SweepResult:
    """Curve samples over an alpha grid plus extrapolated end limits."""

    params: SystemParams
    points: list[SweepPoint]
    limit_plus: FluxPair | None = None
    limit_minus: FluxPair | None = None

    def converged_points(self) -> list[SweepPoint]:
        return [p for p in self.points if p.converged]


def _point_of(params: SystemParams, traj: Trajectory) -> SweepPoint:
    flux = traj.flux
    return SweepPoint(
        alpha=traj.alpha,
        flux=flux,
        residual=algebra.ellipse_residual(flux.beta1, flux.beta2, params),
        converged=traj.converged,
        conditions=algebra.necessary_conditions(flux.beta1, flux.beta2, params),
    )


def _fit_limit(pts: list[SweepPoint]) -> FluxPair | None:
    # least-squares intercept of beta against 1/alpha; spread between the fit
    # and the outermost sample doubles as the error estimate
    usable = [p for p in pts if p.converged and abs(p.alpha) > 1e-9]
    if not usable:
        return None
    usable.sort(key=lambda p: abs(p.alpha))
    outer = usable[-1]
    if len(usable) == 1:
        return outer.flux
    x = np.array([1.0 / p.alpha for p in usable])
    design = np.column_stack([np.ones_like(x), x])
    b1 = np.array([p.flux.beta1 for p in usable])
    b2 = np.array([p.flux.beta2 for p in usable])
    c1 = float(np.linalg.lstsq(design, b1, rcond=None)[0][0])
    c2 = float(np.linalg.lstsq(design, b2, rcond=None)[0][0])
    if c1 <= 0.0 or c2 <= 0.0:
        return outer.flux
    return FluxPair(
        beta1=c1, beta2=c2,
        err1=abs(c1 - outer.flux.beta1),
        err2=abs(c2 - outer.flux.beta2),
    )


def sweep(params: SystemParams, alpha_grid, config: IntegratorConfig | None = None,
          threads: int | None = None) -> SweepResult:
    """Integrate every alpha on the grid, in parallel, preserving grid order.

    Per-point failures are recorded as non-converged points and never abort
    the sweep.  The limits at each end are estimated by extrapolating beta
    against 1/alpha over the outer third of the grid.
    """
    grid = [float(a) for a in alpha_grid]
    if not grid:
        raise DomainError("alpha grid must be nonempty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise DomainError("alpha grid must be strictly increasing")

    n_workers = threads if threads is not None else _thread_count(len(grid))

    def one(alpha: float) -> SweepPoint:
        traj = integrate(params, alpha, config)
        return _point_of(params, traj)

    if n_workers > 1 and len(grid) > 1:
        with ThreadPoolExecutor(max_workers=n_workers) as pool:
            points = list(pool.map(one, grid))
    else:
        points = [one(a) for a in grid]

    span = grid[-1] - grid[0]
    hi_cut = grid[-1] - span / 3.0
    lo_cut = grid[0] + span / 3.0
    limit_plus = _fit_limit([p for p in points if p.alpha >= hi_cut and p.alpha > 0])
    limit_minus = _fit_limit([p for p in points if p.alpha <= lo_cut and p.alpha < 0])
    return SweepResult(params=params, points=points,
                       limit_plus=limit_plus, limit_minus=limit_minus)


@dataclass
class LimitEstimate:
    """Extrapolated end limit of the curve from a geometric alpha ladder."""

    flux: FluxPair
    ladder_alpha: list[float]
    ladder_beta1: list[float]
    ladder_beta2: list[float]
    monotone1: bool
    monotone2: bool
    all_converged: bool

    def to_dict(self) -> dict:
        return {
            "beta1": self.flux.beta1,
            "beta2": self.flux.beta2,
            "err1": self.flux.err1,
            "err2": self.flux.err2,
            "ladder_alpha": self.ladder_alpha,
            "ladder_beta1": self.ladder_beta1,
            "ladder_beta2": self.ladder_beta2,
            "monotone1": self.monotone1,
            "monotone2": self.monotone2,
            "all_converged": self.all_converged,
        }


@dataclass
class LimitsResult:
    plus: LimitEstimate
    minus: LimitEstimate
    target_plus: tuple[float, float]
    target_minus: tuple[float, float]
    max_rel_error: float
    reliable: bool

    def to_dict(self) -> dict:
        return {
            "plus": self.plus.to_dict(),
            "minus": self.minus.to_dict(),
            "target_plus": list(self.target_plus),
            "target_minus": list(self.target_minus),
            "max_rel_error": self.max_rel_error,
            "reliable": self.reliable,
        }


def _monotone(values: list[float]) -> bool:
    d = np.diff(values)
    tol = 1e-9 * (1.0 + max(abs(v) for v in values))
    return bool(np.all(d >= -tol) or np.all(d <= tol))


def _extrapolate_rung(betas: list[float]) -> float:
    # ladder alphas double at each rung; under a c/alpha approach the limit is
    # 2*b[last] - b[last-1].  Fall back to the raw last rung when the approach
    # is not monotone.
    if _monotone(betas):
        return 2.0 * betas[-1] - betas[-2]
    return betas[-1]


def estimate_limits(params: SystemParams, alpha_max: float,
                    config: IntegratorConfig | None = None) -> LimitsResult:
    """Estimate both end limits from the ladder +-{alpha_max/4, /2, /1}.

    Convergence in alpha carries no proven rate, so the extrapolation assumes
    a 1/alpha approach and the result is reported together with the raw
    ladder, monotone-trend flags, and the relative distance to the closed-form
    limit values.  Ladder runs default to a longer horizon (t_max = 100) than
    plain integrations because large |alpha| transients are slow.
    """
    if alpha_max < 10.0:
        raise DomainError(f"alpha_max must be >= 10, got {alpha_max}")
    cfg = config or IntegratorConfig(t_max=100.0)
    bl1p, bl2p, bl1m, bl2m = algebra.beta_limits(params)

    def ladder(sign: float) -> LimitEstimate:
        alphas = [sign * alpha_max / 4.0, sign * alpha_max / 2.0, sign * alpha_max]
        trajs = [integrate(params, a, cfg) for a in alphas]
        b1 = [t.flux.beta1 for t in trajs]
        b2 = [t.flux.beta2 for t in trajs]
        lim1 = _extrapolate_rung(b1)
        lim2 = _extrapolate_rung(b2)
        return LimitEstimate(
            flux=FluxPair(lim1, lim2,
                          err1=abs(lim1 - b1[-1]), err2=abs(lim2 - b2[-1])),
            ladder_alpha=alphas, ladder_beta1=b1, ladder_beta2=b2,
            monotone1=_monotone(b1), monotone2=_monotone(b2),
            all_converged=all(t.converged for t in trajs),
        )

    plus = ladder(+1.0)
    minus = ladder(-1.0)
    rel = max(
        abs(plus.flux.beta1 - bl1p) / bl1p,
        abs(plus.flux.beta2 - bl2p) / bl2p,
        abs(minus.flux.beta1 - bl1m) / bl1m,
        abs(minus.flux.beta2 - bl2m) / bl2m,
    )
    return LimitsResult(
        plus=plus, minus=minus,
        target_plus=(bl1p, bl2p), target_minus=(bl1m, bl2m),
        max_rel_error=rel,
        reliable=plus.all_converged and minus.all_converged,
    )


@dataclass(frozen=True)
class TargetResult:
    alpha: float
    flux: FluxPair
    iterations: int

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "beta1": self.flux.beta1,
            "beta2": self.flux.beta2,
            "err1": self.flux.err1,
            "err2": self.flux.err2,
            "iterations": self.iterations,
        }


def solve_for_target(params: SystemParams, target_beta1: float,
                     bracket: tuple[float, float],
                     config: IntegratorConfig | None = None,
                     tol: float = 1e-6, max_iter: int = 100) -> TargetResult:
    """Bisect on alpha until beta1(alpha) hits the target within tol.

    The target must lie strictly inside the solvable interval, and the curve
    is not known to be monotone in alpha, so the caller supplies the bracket;
    if beta1 does not straddle the target across it (and neither endpoint is
    already within tol) the observed range is reported instead of guessing.
    At the self-dual coupling the interval degenerates to the fixed point and
    any bracket works.
    """
    if params.tau == 0.5:
        fixed = 4.0 * (params.bigN + 2.0)
        if abs(target_beta1 - fixed) > tol:
            raise DomainError(
                f"target beta1 = {target_beta1} outside the solvable interval: "
                f"at tau = 1/2 only {fixed} is attainable"
            )
    else:
        bm1, bp1, _, _ = algebra.beta_pm(params)
        if not bm1 < target_beta1 < bp1:
            raise DomainError(
                f"target beta1 = {target_beta1} outside the solvable interval "
                f"({bm1!r}, {bp1!r})"
            )
    lo, hi = float(bracket[0]), float(bracket[1])
    if not lo < hi:
        raise DomainError("bracket must satisfy alpha_lo < alpha_hi")

    flux_lo = flux_of_alpha(params, lo, config)
    if abs(flux_lo.beta1 - target_beta1) <= tol:
        return TargetResult(lo, flux_lo, 0)
    flux_hi = flux_of_alpha(params, hi, config)
    if abs(flux_hi.beta1 - target_beta1) <= tol:
        return TargetResult(hi, flux_hi, 0)

    s_lo = flux_lo.beta1 - target_beta1
    s_hi = flux_hi.beta1 - target_beta1
    if s_lo * s_hi > 0.0:
        raise BracketError(
            f"beta1 does not straddle {target_beta1} on [{lo}, {hi}]: observed "
            f"beta1({lo}) = {flux_lo.beta1!r}, beta1({hi}) = {flux_hi.beta1!r}"
        )

    best = (lo, flux_lo) if abs(s_lo) < abs(s_hi) else (hi, flux_hi)
    for it in range(1, max_iter + 1):
        mid = 0.5 * (lo + hi)
        flux_mid = flux_of_alpha(params, mid, config)
        s_mid = flux_mid.beta1 - target_beta1
        if abs(s_mid) < abs(best[1].beta1 - target_beta1):
            best = (mid, flux_mid)
        if abs(s_mid) <= tol:
            return TargetResult(mid, flux_mid, it)
        if s_lo * s_mid < 0.0:
            hi = mid
        else:
            lo, s_lo = mid, s_mid
        if hi - lo < 1e-13 * (1.0 + abs(hi)):
            break
    raise BracketError(
        f"bisection stalled after {max_iter} iterations; best "
        f"|beta1 - target| = {abs(best[1].beta1 - target_beta1):.3e} at "
        f"alpha = {best[0]!r}"
    )
