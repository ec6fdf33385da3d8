"""Closed-form flux algebra for the competitive two-component radial Liouville system.

The system couples a radially weighted exponential source (weight r^(2N)) to an
unweighted one through a competition parameter tau in (0, 1).  Every finite-mass
solution carries a flux pair (beta1, beta2) that must lie on a fixed ellipse arc
in the first quadrant.  This module evaluates that ellipse, its branch
parametrisations, all distinguished points (axis intersections and their
companions), the four critical couplings where the solvable flux interval
changes its closed form, the interval bounds themselves, and the resulting
solvability predicates.

Everything here is exact closed-form evaluation or bisection on a proven
bracket; no integration is involved.  All functions are pure and thread-safe.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


class DomainError(ValueError):
    """An argument left the domain where a formula is valid."""


@dataclass(frozen=True)
class SystemParams:
    """Coupling strength and vortex exponent of the radial system.

    tau:  competition parameter, 0 <= tau < 1.  tau = 0 decouples the two
          components and is admitted for oracle/validation runs only; the
          interval algebra (beta_pm, beta_limits, solvable_radial) needs
          tau > 0.
    bigN: exponent of the radial weight r^(2N), N > 0.
    """

    tau: float
    bigN: float

    def __post_init__(self):
        if not (0.0 <= self.tau < 1.0):
            raise DomainError(f"tau must lie in [0, 1), got {self.tau}")
        if not self.bigN > 0.0:
            raise DomainError(f"bigN must be positive, got {self.bigN}")


@dataclass(frozen=True)
class FluxPair:
    """A flux pair with absolute tail-error estimates.

    beta1 is the mass of the weighted component, beta2 of the plain one, both
    in the 1/(2*pi) normalisation.  err1/err2 bound the truncation error of a
    numerically computed pair; exact pairs carry zero.
    """

    beta1: float
    beta2: float
    err1: float = 0.0
    err2: float = 0.0

    def __post_init__(self):
        for name in ("beta1", "beta2", "err1", "err2"):
            object.__setattr__(self, name, float(getattr(self, name)))
        if not (self.beta1 > 0.0 and self.beta2 > 0.0):
            raise DomainError(
                f"fluxes must be positive, got ({self.beta1}, {self.beta2})"
            )
        if self.err1 < 0.0 or self.err2 < 0.0:
            raise DomainError("error estimates must be nonnegative")


@dataclass(frozen=True)
class Check:
    """Outcome of a single scalar condition: its name, verdict and margin."""

    name: str
    passed: bool
    margin: float
    detail: str = ""

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.passed))
        object.__setattr__(self, "margin", float(self.margin))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "margin": self.margin,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class ConditionReport:
    """Per-condition pass/fail report with margins."""

    checks: tuple[Check, ...]

    @property
    def all_passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "all_passed": self.all_passed,
            "checks": [c.to_dict() for c in self.checks],
        }


@dataclass(frozen=True)
class SolvabilityReport:
    """Verdict of the radial solvability test plus the witnessing checks."""

    solvable: bool
    checks: tuple[Check, ...]
    near_endpoint: bool = False

    def failed(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "solvable": self.solvable,
            "near_endpoint": self.near_endpoint,
            "checks": [c.to_dict() for c in self.checks],
        }


@dataclass(frozen=True)
class ThresholdSet:
    """Every closed-form tau- and beta-threshold for one (tau, N)."""

    D: float
    beta_under_1: float
    beta_over_1: float
    beta_under_2: float
    beta_over_2: float
    beta_star_1: float
    beta_star_2: float
    beta_starstar_1: float
    beta_starstar_2: float
    tau0_1: float
    tau0_2: float
    tau1_1: float
    tau1_2: float
    beta_minus_1: float
    beta_plus_1: float
    beta_minus_2: float
    beta_plus_2: float
    beta_lim_1_plus: float
    beta_lim_2_plus: float
    beta_lim_1_minus: float
    beta_lim_2_minus: float

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


# --------------------------------------------------------------------------
# elementary quantities
# --------------------------------------------------------------------------


def discriminant(params: SystemParams) -> float:
    """(N+1)^2 + 2*tau*(N+1) + 1, strictly positive for all admissible inputs."""
    n1 = params.bigN + 1.0
    return n1 * n1 + 2.0 * params.tau * n1 + 1.0


def ellipse_residual(beta1: float, beta2: float, params: SystemParams) -> float:
    """beta1^2 + beta2^2 - 2*tau*beta1*beta2 - 4*(N+1)*beta1 - 4*beta2.

    Zero exactly when the pair lies on the flux ellipse.
    """
    tau, n1 = params.tau, params.bigN + 1.0
    return (
        beta1 * beta1
        + beta2 * beta2
        - 2.0 * tau * beta1 * beta2
        - 4.0 * n1 * beta1
        - 4.0 * beta2
    )


def ellipse_scale(beta1: float, beta2: float) -> float:
    """Normalisation used for residual comparisons: 1 + beta1^2 + beta2^2."""
    return 1.0 + beta1 * beta1 + beta2 * beta2


def beta_extremes(params: SystemParams) -> tuple[float, float, float, float]:
    """Extreme fluxes of the first-quadrant ellipse arc.

    Returns (beta_under_1, beta_over_1, beta_under_2, beta_over_2); the under
    values are attained where the arc meets the slope lines, the over values
    are the componentwise maxima.  Guarantees under_i < over_i, over_1 >
    4*(N+1) and over_2 > 4.
    """
    tau, n1 = params.tau, params.bigN + 1.0
    if tau >= 1.0:
        raise DomainError("beta_extremes needs tau < 1 (formulas divide by 1 - tau^2)")
    s = math.sqrt(discriminant(params))
    c = 2.0 / (1.0 - tau * tau)
    bu1 = c * (n1 + tau + tau * s)
    bo1 = c * (n1 + tau + s)
    bu2 = c * (1.0 + tau * n1 + tau * s)
    bo2 = c * (1.0 + tau * n1 + s)
    return bu1, bo1, bu2, bo2


# --------------------------------------------------------------------------
# branch functions
# --------------------------------------------------------------------------

# Roundoff slack for radicands that vanish exactly at the arc extremes.
_RADICAND_SLACK = 1e-10


def _branch(offset: float, radicand: float, sign: str, hi: float, label: str) -> float:
    if radicand < 0.0:
        if radicand > -_RADICAND_SLACK * (1.0 + offset * offset):
            radicand = 0.0
        else:
            raise DomainError(
                f"{label} is outside the branch domain: admissible interval is "
                f"(0, {hi!r}]"
            )
    root = math.sqrt(radicand)
    if sign == "plus":
        return offset + root
    if sign == "minus":
        return offset - root
    raise DomainError(f"sign must be 'plus' or 'minus', got {sign!r}")


def phi1(beta1: float, params: SystemParams, sign: str = "plus") -> float:
    """Solve the ellipse for beta2 given beta1, on the selected branch.

    phi1(., 'plus') maps [beta_under_1, beta_over_1] onto
    [beta_under_2, beta_over_2] strictly decreasingly; its inverse is
    phi2(., 'plus').  phi1(., 'minus') is strictly increasing on
    [4*(N+1), beta_over_1].
    """
    tau, n1 = params.tau, params.bigN + 1.0
    a = 2.0 + tau * beta1
    rad = a * a - beta1 * (beta1 - 4.0 * n1)
    hi = beta_extremes(params)[1]
    return _branch(a, rad, sign, hi, f"beta1={beta1!r}")


def phi2(beta2: float, params: SystemParams, sign: str = "plus") -> float:
    """Solve the ellipse for beta1 given beta2, on the selected branch."""
    tau, n1 = params.tau, params.bigN + 1.0
    a = 2.0 * n1 + tau * beta2
    rad = a * a - beta2 * (beta2 - 4.0)
    hi = beta_extremes(params)[3]
    return _branch(a, rad, sign, hi, f"beta2={beta2!r}")


# --------------------------------------------------------------------------
# distinguished points and critical couplings
# --------------------------------------------------------------------------


def beta_star(params: SystemParams) -> tuple[float, float]:
    """Fluxes where the ellipse meets the lines beta2 = 4 and beta1 = 4*(N+1).

    Returns (beta_star_1, beta_star_2) = (4*(N+1) + 8*tau, 4 + 8*tau*(N+1)).
    """
    tau, n1 = params.tau, params.bigN + 1.0
    return 4.0 * n1 + 8.0 * tau, 4.0 + 8.0 * tau * n1


def beta_starstar(params: SystemParams) -> tuple[float, float]:
    """Companion fluxes 2*tau*beta_star_2 and 2*tau*beta_star_1.

    Together with beta_star they give the four ellipse points
    (4*(N+1), beta_star_2), (beta_star_1, 4), (beta_starstar_1, beta_star_2)
    and (beta_star_1, beta_starstar_2).
    """
    bs1, bs2 = beta_star(params)
    return 2.0 * params.tau * bs2, 2.0 * params.tau * bs1


def tau0(bigN: float) -> tuple[float, float]:
    """Lower critical couplings (tau0_1, tau0_2), 0 < tau0_2 < tau0_1 < 1/2.

    tau0_1 is where beta_starstar_1 crosses 4*(N+1) (equivalently where
    beta_under_1 reaches 4*(N+1)); tau0_2 is the index-2 analogue.
    """
    if not bigN > 0.0:
        raise DomainError(f"bigN must be positive, got {bigN}")
    n1 = bigN + 1.0
    t01 = n1 / (1.0 + math.sqrt(1.0 + 4.0 * n1 * n1))
    t02 = 1.0 / (n1 + math.sqrt(n1 * n1 + 4.0))
    return t01, t02


def psi1(tau: float, bigN: float) -> float:
    """Cubic whose unique root in (1/2, 1/sqrt(2)) is tau1_1.

    psi1 = (beta_star_2 - tau*beta_starstar_1)/2 - 1, expanded.
    """
    return 2.0 * (1.0 - 2.0 * tau * tau) * (1.0 + 2.0 * tau * (bigN + 1.0)) - 1.0


def psi2(tau: float, bigN: float) -> float:
    """Cubic whose unique root in (1/2, 1/sqrt(2)) is tau1_2.

    psi2 = (beta_star_1 - tau*beta_starstar_2)/2 - (N+1), expanded.
    """
    n1 = bigN + 1.0
    return 2.0 * (1.0 - 2.0 * tau * tau) * (n1 + 2.0 * tau) - n1


def _bisect(fn, lo: float, hi: float, tol: float = 1e-12) -> float:
    flo = fn(lo)
    fhi = fn(hi)
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    if flo * fhi > 0.0:
        # cannot occur for bigN > 0; reported defensively
        raise DomainError(
            f"bisection bracket failure: f({lo}) = {flo}, f({hi}) = {fhi}"
        )
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if hi - lo <= tol:
            return mid
        fm = fn(mid)
        if fm == 0.0:
            return mid
        if flo * fm < 0.0:
            hi = mid
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def tau1(bigN: float) -> tuple[float, float]:
    """Upper critical couplings (tau1_1, tau1_2) in (1/2, 1/sqrt(2)).

    Found by bisection to absolute tolerance 1e-12 on the bracket
    (1/2, 1/sqrt(2)), which holds for every N > 0; tau1_2 < tau1_1.
    """
    if not bigN > 0.0:
        raise DomainError(f"bigN must be positive, got {bigN}")
    lo, hi = 0.5, 1.0 / math.sqrt(2.0)
    t11 = _bisect(lambda t: psi1(t, bigN), lo, hi)
    t12 = _bisect(lambda t: psi2(t, bigN), lo, hi)
    return t11, t12


# --------------------------------------------------------------------------
# solvability interval bounds
# --------------------------------------------------------------------------


def _require_interior_tau(params: SystemParams, what: str) -> None:
    if params.tau == 0.0:
        raise DomainError(f"{what} needs tau in (0, 1); tau = 0 decouples the system")


def beta_pm(params: SystemParams) -> tuple[float, float, float, float]:
    """Endpoints of the solvable flux interval, (minus1, plus1, minus2, plus2).

    Piecewise in tau, switching branch at tau0_1, 1/2, tau1_2 for the lower
    index-1 bound and at tau0_2, 1/2, tau1_1 for index 2; the upper bounds
    switch at 1/2 and tau1_1 (index 1) resp. tau1_2 (index 2).  Each function
    is continuous across its breakpoints, and at tau = 1/2 all four collapse
    to 4*(N+2).
    """
    _require_interior_tau(params, "beta_pm")
    tau, n1 = params.tau, params.bigN + 1.0
    t01, t02 = tau0(params.bigN)
    t11, t12 = tau1(params.bigN)
    bu1, bo1, bu2, bo2 = beta_extremes(params)
    bs1, bs2 = beta_star(params)
    bss1, bss2 = beta_starstar(params)

    if tau <= t01:
        bm1 = 4.0 * n1
    elif tau <= 0.5:
        bm1 = bss1
    elif tau < t12:
        bm1 = bs1
    else:
        bm1 = bu1

    if tau <= 0.5:
        bp1 = bs1
    elif tau < t11:
        bp1 = bss1
    else:
        bp1 = bo1

    if tau <= t02:
        bm2 = 4.0
    elif tau <= 0.5:
        bm2 = bss2
    elif tau < t11:
        bm2 = bs2
    else:
        bm2 = bu2

    if tau <= 0.5:
        bp2 = bs2
    elif tau < t12:
        bp2 = bss2
    else:
        bp2 = bo2

    return bm1, bp1, bm2, bp2


def beta_limits(params: SystemParams) -> tuple[float, float, float, float]:
    """Limit fluxes of the shooting curve at the two ends of the parameter line.

    Returns (lim1_plus, lim2_plus, lim1_minus, lim2_minus): the flux pair
    approached as the shooting parameter goes to +infinity and to -infinity.
    Their componentwise min/max recombination reproduces beta_pm.
    """
    _require_interior_tau(params, "beta_limits")
    tau, n1 = params.tau, params.bigN + 1.0
    t01, t02 = tau0(params.bigN)
    t11, t12 = tau1(params.bigN)
    bu1, bo1, bu2, bo2 = beta_extremes(params)
    bs1, bs2 = beta_star(params)
    bss1, bss2 = beta_starstar(params)

    # +infinity end: component 1 blows up at the origin
    if tau <= t01:
        bl1p = 4.0 * n1
    elif tau < t11:
        bl1p = bss1
    else:
        bl1p = bo1
    bl2p = bs2 if tau < t11 else bu2

    # -infinity end: component 2 blows up at the origin
    bl1m = bs1 if tau < t12 else bu1
    if tau <= t02:
        bl2m = 4.0
    elif tau < t12:
        bl2m = bss2
    else:
        bl2m = bo2

    return bl1p, bl2p, bl1m, bl2m


def thresholds(params: SystemParams) -> ThresholdSet:
    """Assemble every threshold of this module for one (tau, N)."""
    _require_interior_tau(params, "thresholds")
    t01, t02 = tau0(params.bigN)
    t11, t12 = tau1(params.bigN)
    bu1, bo1, bu2, bo2 = beta_extremes(params)
    bs1, bs2 = beta_star(params)
    bss1, bss2 = beta_starstar(params)
    bm1, bp1, bm2, bp2 = beta_pm(params)
    bl1p, bl2p, bl1m, bl2m = beta_limits(params)
    return ThresholdSet(
        D=discriminant(params),
        beta_under_1=bu1,
        beta_over_1=bo1,
        beta_under_2=bu2,
        beta_over_2=bo2,
        beta_star_1=bs1,
        beta_star_2=bs2,
        beta_starstar_1=bss1,
        beta_starstar_2=bss2,
        tau0_1=t01,
        tau0_2=t02,
        tau1_1=t11,
        tau1_2=t12,
        beta_minus_1=bm1,
        beta_plus_1=bp1,
        beta_minus_2=bm2,
        beta_plus_2=bp2,
        beta_lim_1_plus=bl1p,
        beta_lim_2_plus=bl2p,
        beta_lim_1_minus=bl1m,
        beta_lim_2_minus=bl2m,
    )


# --------------------------------------------------------------------------
# predicates
# --------------------------------------------------------------------------


def classify_point(
    beta1: float, beta2: float, params: SystemParams, tol: float = 1e-9
) -> str:
    """Locate an on-ellipse point on one of the three arc branches.

    Returns 'interior' (both slope margins strictly positive, the branch that
    carries solutions), 'lower-left' (first margin nonpositive), 'lower-right'
    (second margin nonpositive), or 'off-ellipse' when the residual exceeds
    tol times the quadratic scale.  Points within roundoff of a slope line
    count as that line's boundary branch.
    """
    res = ellipse_residual(beta1, beta2, params)
    if abs(res) > tol * ellipse_scale(beta1, beta2):
        return "off-ellipse"
    tau, n1 = params.tau, params.bigN + 1.0
    band = 1e-12 * (1.0 + abs(beta1) + abs(beta2))
    m1 = beta1 - tau * beta2 - 2.0 * n1
    m2 = beta2 - tau * beta1 - 2.0
    if m1 > band and m2 > band:
        return "interior"
    if m1 <= band and m2 > band:
        return "lower-left"
    if m1 > band and m2 <= band:
        return "lower-right"
    # both margins nonpositive cannot happen on the ellipse
    return "off-ellipse"


def solvable_radial(
    beta1: float, beta2: float, params: SystemParams, tol: float = 1e-8
) -> SolvabilityReport:
    """Decide whether (beta1, beta2) is the flux pair of a radial solution.

    For tau != 1/2 the pair must satisfy beta_minus_1 < beta1 < beta_plus_1
    strictly and sit on the upper branch, |beta2 - phi1(beta1)| <=
    tol*(1 + |beta2|).  At tau = 1/2 the solvable set degenerates to the
    single point (4*(N+2), 4*(N+2)), tested with the same relative tolerance.
    Interval endpoints are excluded; queries within 1e-6 of the interval
    width of an endpoint are flagged near_endpoint.
    """
    _require_interior_tau(params, "solvable_radial")
    n1 = params.bigN + 1.0

    if params.tau == 0.5:
        target = 4.0 * (n1 + 1.0)
        band = tol * (1.0 + target)
        c1 = Check("beta1_at_fixed_point", abs(beta1 - target) <= band,
                   band - abs(beta1 - target),
                   f"|beta1 - {target}| vs tolerance {band:g}")
        c2 = Check("beta2_at_fixed_point", abs(beta2 - target) <= band,
                   band - abs(beta2 - target),
                   f"|beta2 - {target}| vs tolerance {band:g}")
        return SolvabilityReport(c1.passed and c2.passed, (c1, c2))

    bm1, bp1, _, _ = beta_pm(params)
    c_lo = Check("beta1_above_lower", beta1 > bm1, beta1 - bm1,
                 f"open interval ({bm1:g}, {bp1:g})")
    c_hi = Check("beta1_below_upper", beta1 < bp1, bp1 - beta1,
                 f"open interval ({bm1:g}, {bp1:g})")
    try:
        expected = phi1(beta1, params, "plus")
        dev = abs(beta2 - expected)
        band = tol * (1.0 + abs(beta2))
        c_br = Check("on_upper_branch", dev <= band, band - dev,
                     f"expected beta2 = {expected!r}")
    except DomainError as exc:
        c_br = Check("on_upper_branch", False, -math.inf, str(exc))
    near = min(beta1 - bm1, bp1 - beta1) <= 1e-6 * (bp1 - bm1)
    ok = c_lo.passed and c_hi.passed and c_br.passed
    return SolvabilityReport(ok, (c_lo, c_hi, c_br), near_endpoint=near)


def necessary_conditions(
    beta1: float, beta2: float, params: SystemParams
) -> ConditionReport:
    """Evaluate every necessary solvability condition with its margin.

    Covers: tau interior to (0, 1); the ellipse constraint; the two strict
    slope inequalities; and the two strict radial flux lower bounds
    beta1 > 4*(N+1), beta2 > 4.  Margins are signed, positive means satisfied
    strictly.
    """
    tau, n1 = params.tau, params.bigN + 1.0
    res = ellipse_residual(beta1, beta2, params)
    scale = ellipse_scale(beta1, beta2)
    checks = (
        Check("tau_interior", 0.0 < tau < 1.0, min(tau, 1.0 - tau),
              "tau must lie in (0, 1)"),
        Check("ellipse", abs(res) <= 1e-9 * scale, res,
              f"residual {res!r} against scale {scale:g}"),
        Check("slope_1", beta1 - tau * beta2 > 2.0 * n1,
              beta1 - tau * beta2 - 2.0 * n1, "beta1 - tau*beta2 > 2*(N+1)"),
        Check("slope_2", beta2 - tau * beta1 > 2.0,
              beta2 - tau * beta1 - 2.0, "beta2 - tau*beta1 > 2"),
        Check("radial_1", beta1 > 4.0 * n1, beta1 - 4.0 * n1,
              "beta1 > 4*(N+1)"),
        Check("radial_2", beta2 > 4.0, beta2 - 4.0, "beta2 > 4"),
    )
    return ConditionReport(checks)
