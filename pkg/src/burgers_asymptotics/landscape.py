"""The rescaled Hopf-Cole phase ``H_t(y, z)`` and its critical points.

With ``T = t**(1/(1+a))``, ``A = t**(a/(1+a))`` and ``Lam = t**((1-a)/(1+a))``::

    H_t(y, z)    = -(z - y)**2 / 4 - F0(y T) / (2 Lam)
    d/dy H_t     = (z - y - A f0(y T)) / 2

The rescaled solution is a ratio of integrals of ``exp(Lam * H_t)``, so the
maxima of ``y -> H_t(y, z)`` decide what the solution looks like.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .errors import AdmissibilityError, BranchMissingError, DegenerateLandscapeError
from .initial_data import TailFamily

DEGENERATE_CURVATURE = 1e-10
MIN_CELLS = 1000
DEFAULT_CELLS = 4000


@dataclass(frozen=True)
class Frame:
    """Self-similar frame: leading exponent, time and rescaled position."""

    alpha0: float
    t: float
    z: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha0 < 1.0):
            raise AdmissibilityError(f"alpha0 must lie in (0, 1), got {self.alpha0}", alpha0=self.alpha0)
        if not (math.isfinite(self.t) and self.t > 0):
            raise AdmissibilityError(f"t must be finite and > 0, got {self.t}", t=self.t)
        if not math.isfinite(self.z):
            raise AdmissibilityError(f"z must be finite, got {self.z}", z=self.z)

    @property
    def space_scale(self) -> float:
        return self.t ** (1.0 / (1.0 + self.alpha0))

    @property
    def amplitude_scale(self) -> float:
        return self.t ** (self.alpha0 / (1.0 + self.alpha0))

    @property
    def laplace_param(self) -> float:
        return self.t ** ((1.0 - self.alpha0) / (1.0 + self.alpha0))

    def at(self, z: float) -> "Frame":
        return Frame(self.alpha0, self.t, z)

    def as_dict(self) -> dict:
        return {"alpha0": self.alpha0, "t": self.t, "z": self.z}


def phase(datum: TailFamily, frame: Frame, y):
    """Vectorized ``H_t(y, z)``."""
    y = np.asarray(y, dtype=float)
    return -0.25 * (frame.z - y) ** 2 - 0.5 * datum.antiderivative(y * frame.space_scale) / frame.laplace_param


def phase_slope(datum: TailFamily, frame: Frame, y):
    """Vectorized ``d/dy H_t(y, z)``."""
    y = np.asarray(y, dtype=float)
    return 0.5 * (frame.z - y - frame.amplitude_scale * datum.value(y * frame.space_scale))


def ht_eval(datum: TailFamily, frame: Frame, y: float, channel: str = "value") -> float:
    if not math.isfinite(y):
        raise AdmissibilityError(f"y must be finite, got {y}", y=y)
    if channel == "value":
        return float(phase(datum, frame, y))
    if channel == "dy":
        return float(phase_slope(datum, frame, y))
    raise AdmissibilityError(f"unknown channel {channel!r}", channel=channel)


@dataclass(frozen=True)
class CriticalPoint:
    y: float
    h_value: float
    kind: str
    curvature: float


@dataclass(frozen=True)
class LandscapeReport:
    """Critical points of ``H_t(., z)`` found on a window.

    ``gap`` is the height difference between the global maximum and the next
    highest local maximum (``None`` when there is only one).
    """

    points: tuple[CriticalPoint, ...]
    global_max_index: int
    gap: float | None
    window: tuple[float, float]
    resolution: float
    frame: Frame
    grid: np.ndarray = field(repr=False, compare=False)
    h_grid: np.ndarray = field(repr=False, compare=False)
    datum: TailFamily = field(repr=False, compare=False)

    @property
    def global_max(self) -> CriticalPoint:
        return self.points[self.global_max_index]

    @property
    def maxima(self) -> list[CriticalPoint]:
        return [p for p in self.points if p.kind == "max"]

    def to_dict(self) -> dict:
        return {
            "frame": self.frame.as_dict(),
            "window": list(self.window),
            "resolution": self.resolution,
            "global_max_index": self.global_max_index,
            "gap": self.gap,
            "points": [
                {"y": p.y, "h_value": p.h_value, "kind": p.kind, "curvature": p.curvature} for p in self.points
            ],
        }


def auto_window(datum: TailFamily, z: float) -> tuple[float, float]:
    kappa0 = datum.leading.kappa if datum.tails else 0.0
    half = abs(z) + 5.0 * kappa0 + 5.0
    return (-half, half)


def _curvature(datum: TailFamily, frame: Frame, y: float) -> float:
    h = 1e-5 * (1.0 + abs(y))
    return float((phase_slope(datum, frame, y + h) - phase_slope(datum, frame, y - h)) / (2.0 * h))


def scan_landscape(
    datum: TailFamily,
    frame: Frame,
    window: tuple[float, float] | None = None,
    resolution: float | None = None,
) -> LandscapeReport:
    """Locate and classify every sign change of ``d/dy H_t`` on a uniform grid.

    Roots are polished with Brent's method; classification uses the side signs
    of the slope, cross-checked against a central-difference curvature.

    Raises:
        AdmissibilityError: empty window or fewer than ``MIN_CELLS`` cells.
        DegenerateLandscapeError: a root with ``|curvature| < 1e-10``.
        BranchMissingError: no interior maximum in the window.
    """
    lo, hi = auto_window(datum, frame.z) if window is None else (float(window[0]), float(window[1]))
    if not hi > lo:
        raise AdmissibilityError("empty search window", window=[lo, hi])
    if resolution is None:
        resolution = (hi - lo) / DEFAULT_CELLS
    cells = int(math.ceil((hi - lo) / resolution - 1e-9))
    if cells < MIN_CELLS:
        raise AdmissibilityError(
            f"resolution {resolution:g} gives {cells} cells; need at least {MIN_CELLS}",
            window=[lo, hi],
            resolution=resolution,
        )
    grid = np.linspace(lo, hi, cells + 1)
    slope = phase_slope(datum, frame, grid)
    sgn = np.sign(slope)

    def f(y: float) -> float:
        return float(phase_slope(datum, frame, y))

    roots: list[tuple[float, str]] = []
    for i in np.flatnonzero(sgn == 0):
        left = sgn[i - 1] if i > 0 else 0.0
        right = sgn[i + 1] if i + 1 < len(sgn) else 0.0
        if left * right < 0:
            roots.append((float(grid[i]), "max" if left > 0 else "min"))
    for i in np.flatnonzero(sgn[:-1] * sgn[1:] < 0):
        r = brentq(f, grid[i], grid[i + 1], xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200)
        roots.append((r, "max" if sgn[i] > 0 else "min"))

    points = []
    for y, kind in sorted(roots):
        curv = _curvature(datum, frame, y)
        if abs(curv) < DEGENERATE_CURVATURE or (curv < 0) != (kind == "max"):
            raise DegenerateLandscapeError(
                "degenerate critical point (fold of the phase landscape)",
                y=y,
                curvature=curv,
                frame=frame.as_dict(),
            )
        points.append(CriticalPoint(y=y, h_value=float(phase(datum, frame, y)), kind=kind, curvature=curv))

    maxima = [i for i, p in enumerate(points) if p.kind == "max"]
    if not maxima:
        raise BranchMissingError("no interior maximum of H_t in the window", window=[lo, hi], frame=frame.as_dict())
    ranked = sorted(maxima, key=lambda i: points[i].h_value, reverse=True)
    gap = points[ranked[0]].h_value - points[ranked[1]].h_value if len(ranked) > 1 else None
    return LandscapeReport(
        points=tuple(points),
        global_max_index=ranked[0],
        gap=gap,
        window=(lo, hi),
        resolution=(hi - lo) / cells,
        frame=frame,
        grid=grid,
        h_grid=phase(datum, frame, grid),
        datum=datum,
    )


def max_gap(report: LandscapeReport, exclusion_radius: float) -> float:
    """Height of the global maximum above everything outside a ball around it.

    The supremum over the complement is taken over the scan grid, the ball's
    boundary points and any refined local maxima outside the ball.
    """
    if exclusion_radius <= 0:
        raise AdmissibilityError("exclusion radius must be > 0", exclusion_radius=exclusion_radius)
    lo, hi = report.window
    top = report.global_max
    if top.y - exclusion_radius <= lo and top.y + exclusion_radius >= hi:
        raise AdmissibilityError("exclusion ball covers the whole window", exclusion_radius=exclusion_radius)
    outside = np.abs(report.grid - top.y) > exclusion_radius
    candidates = list(report.h_grid[outside])
    for edge in (top.y - exclusion_radius, top.y + exclusion_radius):
        if lo <= edge <= hi:
            candidates.append(float(phase(report.datum, report.frame, edge)))
    candidates += [p.h_value for p in report.maxima if abs(p.y - top.y) > exclusion_radius]
    return max(0.0, top.h_value - max(candidates))
