"""Machine-readable exports (CSV/JSON) and rendered figures.

Float serialisation uses the shortest round-trip representation so identical
configurations produce byte-identical files.  Figures are rendered straight to
files with matplotlib's object API; no interactive backend is touched.
"""

from __future__ import annotations

import json
import math
from typing import IO

import numpy as np

from . import algebra, verify
from .algebra import SystemParams, ThresholdSet
from .ode import Trajectory
from .shooting import SweepResult

__all__ = [
    "fmt",
    "write_trajectory_csv",
    "write_sweep_csv",
    "sweep_to_dict",
    "solve_to_dict",
    "thresholds_to_dict",
    "write_curve_csv",
    "curve_samples",
    "dump_json",
    "plot_sweep",
    "plot_curve",
    "plot_thresholds",
]


def fmt(x) -> str:
    """Shortest round-trip text for one CSV cell."""
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return repr(float(x))


def _write_rows(stream: IO[str], header: list[str], rows) -> None:
    stream.write(",".join(header) + "\n")
    for row in rows:
        stream.write(",".join(fmt(v) for v in row) + "\n")


def write_trajectory_csv(traj: Trajectory, stream: IO[str],
                         include_r_quantities: bool = False) -> None:
    """Trajectory samples with conserved-quantity columns.

    Columns: t, r, v1, v2, rv1p, rv2p, f1, f2, psi0, psi1, psi2 where r = e^t,
    v1 = z and rv1p = dz (= r * v1'(r)); with include_r_quantities the
    monotone diagnostics r0q, r1q, hq are appended.
    """
    prof = verify.psi_profile(traj)
    header = ["t", "r", "v1", "v2", "rv1p", "rv2p", "f1", "f2",
              "psi0", "psi1", "psi2"]
    cols = [traj.t, np.exp(traj.t), traj.z, traj.u, traj.dz, traj.du,
            traj.f, traj.g, prof.psi0, prof.psi1, prof.psi2]
    if include_r_quantities:
        rq = verify.r_quantities(traj)
        header += ["r0q", "r1q", "hq"]
        cols += [rq.r0, rq.r1, rq.h]
    _write_rows(stream, header, zip(*cols))


def write_sweep_csv(result: SweepResult, stream: IO[str]) -> None:
    """One row per grid point: alpha, beta1, beta2, err1, err2, residual, converged."""
    header = ["alpha", "beta1", "beta2", "err1", "err2", "residual", "converged"]
    rows = (
        (p.alpha, p.flux.beta1, p.flux.beta2, p.flux.err1, p.flux.err2,
         p.residual, p.converged)
        for p in result.points
    )
    _write_rows(stream, header, rows)


def _flux_dict(flux) -> dict | None:
    if flux is None:
        return None
    return {"beta1": flux.beta1, "beta2": flux.beta2,
            "err1": flux.err1, "err2": flux.err2}


def sweep_to_dict(result: SweepResult) -> dict:
    return {
        "tau": result.params.tau,
        "bigN": result.params.bigN,
        "points": [p.to_dict() for p in result.points],
        "limit_estimate_plus": _flux_dict(result.limit_plus),
        "limit_estimate_minus": _flux_dict(result.limit_minus),
    }


def solve_to_dict(traj: Trajectory) -> dict:
    prof = verify.psi_profile(traj)
    flux = traj.flux
    return {
        "tau": traj.params.tau,
        "bigN": traj.params.bigN,
        "alpha": traj.alpha,
        "beta1": flux.beta1,
        "beta2": flux.beta2,
        "err1": flux.err1 if math.isfinite(flux.err1) else None,
        "err2": flux.err2 if math.isfinite(flux.err2) else None,
        "residual": algebra.ellipse_residual(flux.beta1, flux.beta2, traj.params),
        "converged": traj.converged,
        "t_end": traj.t_end,
        "sigma1": traj.sigma1,
        "sigma2": traj.sigma2,
        "max_abs_psi0": prof.max_abs_psi0,
        "min_psi1": prof.min_psi1,
        "min_psi2": prof.min_psi2,
    }


def thresholds_to_dict(bigN: float, tau: float | None = None) -> dict:
    """Threshold values keyed by their conventional symbol names.

    Without tau only the coupling thresholds are emitted; with tau the full
    ThresholdSet appears.
    """
    t01, t02 = algebra.tau0(bigN)
    t11, t12 = algebra.tau1(bigN)
    out: dict = {
        "bigN": bigN,
        "tau0_1": t01,
        "tau0_2": t02,
        "tau1_1": t11,
        "tau1_2": t12,
    }
    if tau is not None:
        ts: ThresholdSet = algebra.thresholds(SystemParams(tau=tau, bigN=bigN))
        out["tau"] = tau
        out.update(ts.to_dict())
    return out


def curve_samples(params: SystemParams, samples: int) -> np.ndarray:
    """(beta1, beta2) pairs along the upper ellipse branch, endpoint inclusive."""
    if samples < 2:
        raise algebra.DomainError("need at least 2 curve samples")
    bu1, bo1, _, _ = algebra.beta_extremes(params)
    b1 = np.linspace(bu1, bo1, samples)
    b2 = np.array([algebra.phi1(float(x), params, "plus") for x in b1])
    return np.column_stack([b1, b2])


def write_curve_csv(params: SystemParams, samples: int, stream: IO[str]) -> None:
    _write_rows(stream, ["beta1", "beta2"], curve_samples(params, samples))


def dump_json(obj: dict, stream: IO[str]) -> None:
    json.dump(obj, stream, indent=2, sort_keys=True)
    stream.write("\n")


# --------------------------------------------------------------------------
# figures
# --------------------------------------------------------------------------


def _new_figure(figsize=(6.0, 4.5)):
    from matplotlib.figure import Figure

    fig = Figure(figsize=figsize, dpi=120)
    return fig, fig.add_subplot(111)


def plot_sweep(result: SweepResult, path: str, curve_points: int = 200) -> None:
    """Swept flux pairs over the admissible branch arc, with interval marks."""
    params = result.params
    fig, ax = _new_figure()
    arc = curve_samples(params, curve_points)
    ax.plot(arc[:, 0], arc[:, 1], "-", color="0.6", lw=1.0, label="branch arc")
    good = [p for p in result.points if p.converged]
    bad = [p for p in result.points if not p.converged]
    if good:
        ax.plot([p.flux.beta1 for p in good], [p.flux.beta2 for p in good],
                "o", ms=3.5, color="tab:blue", label="sweep (converged)")
    if bad:
        ax.plot([p.flux.beta1 for p in bad], [p.flux.beta2 for p in bad],
                "x", ms=4.0, color="tab:red", label="sweep (flagged)")
    if params.tau != 0.0:
        bm1, bp1, _, _ = algebra.beta_pm(params)
        for val, ls in ((bm1, "--"), (bp1, ":")):
            ax.axvline(val, color="tab:green", ls=ls, lw=0.9)
    ax.set_xlabel("beta1")
    ax.set_ylabel("beta2")
    ax.set_title(f"flux curve, tau={params.tau:g}, N={params.bigN:g}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)


def plot_curve(params: SystemParams, path: str, samples: int = 200) -> None:
    """The upper branch arc alone, with the distinguished points marked."""
    fig, ax = _new_figure()
    arc = curve_samples(params, samples)
    ax.plot(arc[:, 0], arc[:, 1], "-", color="tab:blue", lw=1.2)
    n1 = params.bigN + 1.0
    bs1, bs2 = algebra.beta_star(params)
    pts = {
        "(4(N+1), beta2*)": (4.0 * n1, bs2),
        "(beta1*, 4)": (bs1, 4.0),
    }
    for label, (x, y) in pts.items():
        if abs(algebra.ellipse_residual(x, y, params)) < 1e-6:
            ax.plot([x], [y], "s", ms=5, label=label)
    ax.set_xlabel("beta1")
    ax.set_ylabel("beta2")
    ax.set_title(f"admissible flux arc, tau={params.tau:g}, N={params.bigN:g}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)


def plot_thresholds(bigN: float, path: str, samples: int = 400) -> None:
    """Interval endpoints beta1^-/beta1^+ as functions of tau at fixed N."""
    fig, ax = _new_figure()
    t11, _ = algebra.tau1(bigN)
    taus = np.linspace(1e-3, 0.999, samples)
    lo, hi = [], []
    for tau in taus:
        bm1, bp1, _, _ = algebra.beta_pm(SystemParams(tau=float(tau), bigN=bigN))
        lo.append(bm1)
        hi.append(bp1)
    ax.plot(taus, lo, "-", label="beta1^-")
    ax.plot(taus, hi, "-", label="beta1^+")
    ax.axvline(0.5, color="0.6", ls="--", lw=0.8)
    ax.axvline(t11, color="0.8", ls=":", lw=0.8)
    ax.set_xlabel("tau")
    ax.set_ylabel("beta1 interval")
    ax.set_title(f"solvable beta1 interval vs tau, N={bigN:g}")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path)
