"""Direct finite-difference integration of ``f_t + f f_x - f_xx = 0``.

Used only to cross-check the Hopf-Cole evaluator at moderate times.  The
scheme is CNAB2: Crank-Nicolson for diffusion, second-order Adams-Bashforth
for a conservative local Lax-Friedrichs convection flux built on an
unlimited linear reconstruction.  Boundary values are held at ``f0(+-L)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import solve_banded

from .errors import AdmissibilityError, StabilityError
from .initial_data import TailFamily
from .solver import QuadratureOptions, physical_solution

SCHEMES = ("imex_cn_llf",)
MAX_TIME = 1.0e3
MIN_NODES = 1001


@dataclass(frozen=True)
class OracleGrid:
    """Uniform grid on ``[-half_width, half_width]``.

    ``dt=None`` picks the largest step allowed by the stability limits.
    """

    half_width: float = 120.0
    nx: int = 24001
    dt: float | None = None
    scheme: str = "imex_cn_llf"

    def __post_init__(self) -> None:
        if not (math.isfinite(self.half_width) and self.half_width > 0):
            raise AdmissibilityError("half_width must be > 0", half_width=self.half_width)
        if int(self.nx) != self.nx or self.nx < MIN_NODES:
            raise AdmissibilityError(f"nx must be an integer >= {MIN_NODES}", nx=self.nx)
        if self.dt is not None and not (math.isfinite(self.dt) and self.dt > 0):
            raise AdmissibilityError("dt must be > 0", dt=self.dt)
        if self.scheme not in SCHEMES:
            raise AdmissibilityError(f"unknown scheme {self.scheme!r}; expected one of {SCHEMES}", scheme=self.scheme)

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / (self.nx - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(-self.half_width, self.half_width, int(self.nx))

    def stable_dt(self, max_speed: float) -> float:
        """Largest step satisfying ``dt <= 0.4 dx / max|f|`` and ``dt <= dx``."""
        limit = self.dx
        if max_speed > 0:
            limit = min(limit, 0.4 * self.dx / max_speed)
        return limit


@dataclass(frozen=True)
class Snapshot:
    t: float
    values: np.ndarray


def _convection(u: np.ndarray, dx: float) -> np.ndarray:
    """``-(F_{i+1/2} - F_{i-1/2}) / dx`` on interior nodes; flux ``u**2 / 2``."""
    # linear ghost extrapolation keeps the reconstruction stencil defined at the edges
    g = np.concatenate(([2 * u[0] - u[1]], u, [2 * u[-1] - u[-2]]))
    left = g[1:-2] + 0.25 * (g[2:-1] - g[:-3])
    right = g[2:-1] - 0.25 * (g[3:] - g[1:-2])
    speed = np.maximum(np.abs(left), np.abs(right))
    flux = 0.25 * (left**2 + right**2) - 0.5 * speed * (right - left)
    out = np.zeros_like(u)
    out[1:-1] = -(flux[1:] - flux[:-1]) / dx
    return out


def _diffusion(u: np.ndarray, dx: float) -> np.ndarray:
    out = np.zeros_like(u)
    out[1:-1] = (u[2:] - 2.0 * u[1:-1] + u[:-2]) / dx**2
    return out


def _implicit_matrix(n: int, r: float) -> np.ndarray:
    """Banded ``I - (dt/2) D`` with identity rows at the Dirichlet nodes."""
    ab = np.zeros((3, n))
    ab[0, 2:] = -r
    ab[1, :] = 1.0 + 2.0 * r
    ab[2, :-2] = -r
    ab[1, 0] = ab[1, -1] = 1.0
    return ab


def integrate(
    datum: TailFamily,
    grid: OracleGrid,
    t_final: float,
    snapshot_times: Sequence[float] | None = None,
) -> list[Snapshot]:
    """March from ``f0`` at ``t = 0`` to ``t_final``.

    Steps are shortened to land exactly on every requested snapshot time
    (default: ``t_final`` only); Adams-Bashforth weights account for the
    variable step.

    Raises:
        AdmissibilityError: ``t_final`` over the guard or domain too small.
        StabilityError: the step violates a stability bound or the solution
            leaves ``[0, max f0]``.
    """
    if not (math.isfinite(t_final) and 0 < t_final <= MAX_TIME):
        raise AdmissibilityError(f"t_final must lie in (0, {MAX_TIME:g}]", t_final=t_final)
    need = 10.0 * math.sqrt(t_final) + 20.0
    if grid.half_width < need:
        raise AdmissibilityError(f"half_width must be >= 10 sqrt(t_final) + 20 = {need:g}", half_width=grid.half_width)
    times = sorted(set([float(s) for s in (snapshot_times or [])] + [float(t_final)]))
    if times[0] <= 0 or times[-1] > t_final:
        raise AdmissibilityError("snapshot times must lie in (0, t_final]", snapshot_times=list(times))

    x, dx = grid.x, grid.dx
    u = np.asarray(datum.value(x), dtype=float)
    ceiling = float(u.max()) if u.size else 0.0
    max_speed = float(np.abs(u).max())
    dt_max = grid.stable_dt(max_speed)
    if grid.dt is not None:
        if grid.dt > dt_max * (1 + 1e-12):
            raise StabilityError(
                f"dt={grid.dt:g} exceeds the stability limit {dt_max:g}", dt=grid.dt, limit=dt_max, dx=dx
            )
        dt_max = grid.dt

    snaps: list[Snapshot] = []
    t, prev_conv, prev_dt = 0.0, None, None
    cached_dt, ab = None, None
    for target in times:
        while t < target * (1 - 1e-14):
            dt = min(dt_max, target - t)
            if dt != cached_dt:
                ab, cached_dt = _implicit_matrix(u.size, 0.5 * dt / dx**2), dt
            conv = _convection(u, dx)
            if prev_conv is None:
                explicit = conv
            else:
                w = 0.5 * dt / prev_dt
                explicit = (1.0 + w) * conv - w * prev_conv
            rhs = u + 0.5 * dt * _diffusion(u, dx) + dt * explicit
            rhs[0], rhs[-1] = u[0], u[-1]
            u = solve_banded((1, 1), ab, rhs)
            prev_conv, prev_dt = conv, dt
            t += dt
        if u.size and (u.min() < -1e-12 or u.max() > ceiling * (1 + 1e-9) + 1e-12):
            raise StabilityError(
                "solution left [0, max f0]", t=t, min=float(u.min()), max=float(u.max()), ceiling=ceiling
            )
        snaps.append(Snapshot(target, u.copy()))
    return snaps


@dataclass(frozen=True)
class OracleComparison:
    max_abs_diff: float
    rms_diff: float
    xs: np.ndarray
    oracle: np.ndarray
    exact: np.ndarray

    def to_dict(self) -> dict:
        return {"max_abs_diff": self.max_abs_diff, "rms_diff": self.rms_diff, "n": int(self.xs.size)}


def compare(
    datum: TailFamily,
    t: float,
    xs: Sequence[float],
    grid: OracleGrid | None = None,
    opts: QuadratureOptions | None = None,
) -> OracleComparison:
    """Integrate to ``t`` and compare with the Hopf-Cole evaluator at ``xs``.

    Oracle values off the grid are linearly interpolated.
    """
    grid = grid or OracleGrid()
    xs = np.asarray(xs, dtype=float)
    bound = grid.half_width - 10.0
    if xs.size == 0 or np.any(np.abs(xs) > bound):
        raise AdmissibilityError(f"xs must be non-empty and within [-{bound:g}, {bound:g}]", bound=bound)
    snap = integrate(datum, grid, t)[-1]
    oracle = np.interp(xs, grid.x, snap.values)
    if datum.tails:
        exact = np.array([physical_solution(datum, float(x), t, opts) for x in xs])
    else:
        exact = np.zeros_like(xs)
    diff = oracle - exact
    return OracleComparison(
        float(np.max(np.abs(diff))), float(np.sqrt(np.mean(diff**2))), xs, oracle, exact
    )
