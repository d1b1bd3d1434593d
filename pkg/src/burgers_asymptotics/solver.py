"""Exact evaluation of the viscous Burgers solution through the Hopf-Cole formula.

In the rescaled variable ``y`` the solution is a weighted average of the
rescaled datum::

    A f(T z, t) = int A f0(T y) exp(Lam H_t(y, z)) dy / int exp(Lam H_t(y, z)) dy

Both integrals are computed with weights ``exp(Lam (H_t - M))``, ``M`` the
global maximum, restricted to ``Lam (M - H_t) <= log_cutoff``.  Quadrature is a
vectorized adaptive Gauss-Kronrod (7/15) rule on panels seeded at every local
maximum and graded toward ``y = 0`` where the datum's core lives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import AdmissibilityError, AmbiguousBranchError, QuadratureError
from .initial_data import TailFamily
from .landscape import Frame, LandscapeReport, auto_window, phase, scan_landscape

TIE_TOLERANCE = 1e-12

_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KRONROD = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GAUSS = np.zeros(15)
_GAUSS[[1, 3, 5, 7, 9, 11, 13]] = np.concatenate([_WG[:-1], _WG[::-1]])


@dataclass(frozen=True)
class QuadratureOptions:
    log_cutoff: float = 45.0
    panel_refinement: int = 12
    rel_tol: float = 1e-9

    def __post_init__(self) -> None:
        if self.log_cutoff < 30.0:
            raise AdmissibilityError("log_cutoff must be >= 30", log_cutoff=self.log_cutoff)
        if self.panel_refinement < 1:
            raise AdmissibilityError("panel_refinement must be >= 1", panel_refinement=self.panel_refinement)
        if not self.rel_tol > 0:
            raise AdmissibilityError("rel_tol must be > 0", rel_tol=self.rel_tol)


@dataclass(frozen=True)
class SolutionSample:
    """Rescaled solution ``t**(a/(1+a)) f(t**(1/(1+a)) z, t)`` at one frame."""

    frame: Frame
    value: float
    error_estimate: float
    landscape: LandscapeReport
    levels: int = 0

    def to_dict(self) -> dict:
        return {"value": self.value, "error_estimate": self.error_estimate, "frame": self.frame.as_dict()}


def default_alpha0(datum: TailFamily) -> float:
    return datum.leading.alpha if datum.tails else 0.5


def _landscape_covering(datum: TailFamily, frame: Frame, cutoff: float) -> LandscapeReport:
    lam = frame.laplace_param
    lo, hi = auto_window(datum, frame.z)
    for _ in range(60):
        report = scan_landscape(datum, frame, (lo, hi))
        top = report.global_max.h_value
        edge = lam * (top - report.h_grid[[0, -1]])
        if edge[0] > cutoff and edge[1] > cutoff:
            return report
        width = hi - lo
        lo = lo - (width if edge[0] <= cutoff else 0.0)
        hi = hi + (width if edge[1] <= cutoff else 0.0)
    raise QuadratureError("could not bracket the cutoff contour", best_value=math.nan, error_estimate=math.inf)


def _mass_intervals(report: LandscapeReport, cutoff: float) -> list[tuple[float, float]]:
    datum, frame = report.datum, report.frame
    lam = frame.laplace_param
    top = report.global_max.h_value
    inside = lam * (top - report.h_grid) <= cutoff
    grid = report.grid

    def excess(y: float) -> float:
        return lam * (top - float(phase(datum, frame, y))) - cutoff

    intervals = []
    idx = np.flatnonzero(inside)
    runs = np.split(idx, np.flatnonzero(np.diff(idx) > 1) + 1)
    for run in runs:
        i0, i1 = int(run[0]), int(run[-1])
        a = grid[0] if i0 == 0 else brentq(excess, grid[i0 - 1], grid[i0], xtol=1e-13)
        b = grid[-1] if i1 == grid.size - 1 else brentq(excess, grid[i1], grid[i1 + 1], xtol=1e-13)
        intervals.append((a, b))
    return intervals


def _breakpoints(report: LandscapeReport, a: float, b: float) -> np.ndarray:
    datum, frame = report.datum, report.frame
    lam = frame.laplace_param
    pts = [a, b]
    for p in report.maxima:
        if a < p.y < b:
            w = 1.0 / math.sqrt(lam * abs(p.curvature))
            pts += [p.y + s * w for s in (-6.0, -3.0, -1.5, 0.0, 1.5, 3.0, 6.0)]
    if a < 0.0 < b:
        core = datum.core_scale / frame.space_scale
        scale = core
        pts.append(0.0)
        while scale < b - a:
            pts += [-scale, scale]
            scale *= 4.0
    pts = np.unique(np.clip(pts, a, b))
    return pts


def _gk(datum: TailFamily, frame: Frame, top: float, lo: np.ndarray, hi: np.ndarray):
    half = 0.5 * (hi - lo)
    y = (lo + half)[:, None] + half[:, None] * _NODES[None, :]
    lw = frame.laplace_param * (phase(datum, frame, y) - top)
    w = np.exp(lw)
    num = frame.amplitude_scale * datum.value(y * frame.space_scale) * w
    return (
        half * (num @ _KRONROD),
        half * (num @ _GAUSS),
        half * (w @ _KRONROD),
        half * (w @ _GAUSS),
    )


def rescaled_solution(
    datum: TailFamily,
    frame: Frame,
    opts: QuadratureOptions | None = None,
    report: LandscapeReport | None = None,
) -> SolutionSample:
    """Full Hopf-Cole quadrature of the rescaled solution.

    Valid in every regime, including near-ties of the two maxima.  The
    returned ``error_estimate`` is the change between the last two refinement
    levels.

    Raises:
        QuadratureError: ``rel_tol`` not reached within ``panel_refinement`` levels.
    """
    opts = opts or QuadratureOptions()
    if report is None:
        report = _landscape_covering(datum, frame, opts.log_cutoff)
    top = report.global_max.h_value

    edges = [_breakpoints(report, a, b) for a, b in _mass_intervals(report, opts.log_cutoff)]
    lo = np.concatenate([e[:-1] for e in edges])
    hi = np.concatenate([e[1:] for e in edges])
    kn, gn, kd, gd = _gk(datum, frame, top, lo, hi)

    history = []
    for level in range(opts.panel_refinement + 1):
        num, den = kn.sum(), kd.sum()
        ratio = num / den
        history.append(ratio)
        err = (np.abs(kn - gn) + abs(ratio) * np.abs(kd - gd)) / den
        tol = opts.rel_tol * abs(ratio)
        converged = err.sum() <= tol
        if converged and level >= 1:
            return SolutionSample(frame, float(ratio), float(abs(history[-1] - history[-2])), report, level)
        if level == opts.panel_refinement:
            break
        split = np.ones(lo.size, dtype=bool) if converged else err > tol / lo.size
        mid = 0.5 * (lo[split] + hi[split])
        new_lo = np.concatenate([lo[split], mid])
        new_hi = np.concatenate([mid, hi[split]])
        stats = _gk(datum, frame, top, new_lo, new_hi)
        keep = ~split
        lo = np.concatenate([lo[keep], new_lo])
        hi = np.concatenate([hi[keep], new_hi])
        kn, gn, kd, gd = (np.concatenate([old[keep], new]) for old, new in zip((kn, gn, kd, gd), stats))
        order = np.argsort(lo, kind="stable")
        lo, hi, kn, gn, kd, gd = (arr[order] for arr in (lo, hi, kn, gn, kd, gd))

    raise QuadratureError(
        f"rel_tol={opts.rel_tol:g} not reached after {opts.panel_refinement} refinement levels",
        best_value=float(history[-1]),
        error_estimate=float(abs(history[-1] - history[-2])),
        frame=frame.as_dict(),
    )


def laplace_approximation(datum: TailFamily, frame: Frame, report: LandscapeReport | None = None) -> float:
    """One-point Laplace value ``A f0(T y_*)`` at the unique global maximum ``y_*``.

    Raises:
        AmbiguousBranchError: the two highest maxima differ by at most 1e-12.
    """
    report = report or scan_landscape(datum, frame)
    if report.gap is not None and report.gap <= TIE_TOLERANCE:
        raise AmbiguousBranchError(
            "two maxima tie; offset z away from the critical point", gap=report.gap, frame=frame.as_dict()
        )
    return float(frame.amplitude_scale * datum.value(report.global_max.y * frame.space_scale))


def physical_solution(
    datum: TailFamily,
    x: float,
    t: float,
    opts: QuadratureOptions | None = None,
    alpha0: float | None = None,
) -> float:
    """``f(x, t)`` itself, obtained by undoing the self-similar scaling."""
    frame = Frame(default_alpha0(datum) if alpha0 is None else alpha0, t, 0.0)
    frame = frame.at(x / frame.space_scale)
    return rescaled_solution(datum, frame, opts).value / frame.amplitude_scale
