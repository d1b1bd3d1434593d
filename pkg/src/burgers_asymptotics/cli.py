"""Command-line front end.

Settings come from four layers, later ones winning: built-in defaults, an INI
file (``--config``), environment variables ``BURGERS_ASYM_<SECTION>_<KEY>``
and command-line flags.  Everything is validated before any computation.

Exit codes: 0 success, 2 invalid input (the message names the key), 1 numerical
failure (error context written to stderr as JSON).
"""

from __future__ import annotations

import argparse
import configparser
import contextlib
import hashlib
import json
import math
import os
import platform
import sys
from dataclasses import dataclass
from importlib import metadata
from typing import Any, Callable, Sequence

import numpy as np

from .asymptotics import (
    extrapolate,
    geometric_times,
    nested_residual,
    rate_fit,
    zoom_exponent,
    zoom_sample,
)
from .critical import (
    LeadingTail,
    P_FORMS,
    find_zc,
    finite_t_maxima,
    p_correction,
    profile_p,
    root_shift_coefficient,
)
from .errors import AdmissibilityError, BurgersError
from .initial_data import DatumSpec, TailFamily, check_two_term, construct_datum, geometric_alphas, zero_datum
from .landscape import Frame, max_gap, scan_landscape
from .oracle import OracleGrid, compare, integrate
from .solver import QuadratureOptions, default_alpha0, rescaled_solution

ENV_PREFIX = "BURGERS_ASYM_"
FAMILIES = ("single", "two_term", "nested", "zero")


class ConfigError(Exception):
    """Invalid user input; maps to exit code 2."""


@dataclass(frozen=True)
class Option:
    section: str
    key: str
    kind: str
    default: Any
    unit: str
    help: str
    choices: tuple[str, ...] | None = None
    flag: str | None = None

    @property
    def flags(self) -> list[str]:
        out = ["--" + self.key.replace("_", "-")]
        if self.flag:
            out.append(self.flag)
        return out


OPTIONS = (
    Option("datum", "family", "choice", "single", "-", "initial datum family", FAMILIES),
    Option("datum", "kappa1", "float", 1.0, "amplitude", "leading tail amplitude"),
    Option("datum", "alpha", "float", 0.5, "exponent", "leading tail exponent, in (0, 1)"),
    Option("datum", "kappa2", "float", 1.0, "amplitude", "second tail amplitude (two_term)"),
    Option("datum", "beta", "float?", None, "exponent", "second tail exponent (two_term), in (alpha, (1+alpha)/2)"),
    Option("datum", "eps", "float", 1.0, "length", "core regularization width"),
    Option("datum", "n_max", "int?", None, "count", "number of nested terms kept (nested)"),
    Option("datum", "alphas", "floats?", None, "exponents", "nested exponent list; empty means the geometric ladder"),
    Option("datum", "alpha_inf", "float?", None, "exponent", "supremum of the nested exponents"),
    Option("solver", "log_cutoff", "float", 45.0, "nats", "discard integrand below exp(-cutoff) of its peak"),
    Option("solver", "panel_refinement", "int", 12, "levels", "maximum adaptive bisection levels"),
    Option("solver", "rel_tol", "float", 1e-9, "relative", "quadrature tolerance"),
    Option("analysis", "t", "float", 1e6, "time", "evaluation time"),
    Option("analysis", "z", "floats", [0.0], "rescaled position", "rescaled positions z = x / t**(1/(1+alpha))"),
    Option("analysis", "x", "floats?", None, "position", "physical positions; overrides z when given"),
    Option("analysis", "window", "floats?", None, "rescaled position", "landscape search window [lo, hi]"),
    Option("analysis", "resolution", "float?", None, "rescaled length", "landscape grid spacing"),
    Option("analysis", "exclusion_radius", "float", 0.5, "rescaled length", "ball excluded around the top maximum"),
    Option("analysis", "t_lo_exp", "float", 5.0, "log10 time", "first time of a sweep"),
    Option("analysis", "t_hi_exp", "float", 9.0, "log10 time", "last time of a sweep"),
    Option("analysis", "per_decade", "int", 6, "count", "sweep points per decade"),
    Option("analysis", "xs", "floats", [-1.0, 1.0], "zoomed position", "zoomed positions x in z = z_c + t**-gamma x"),
    Option("analysis", "betas", "floats", [0.55, 0.6, 0.7], "exponent", "second tail exponents for jump constants"),
    Option("analysis", "orders", "ints", [0, 1, 2], "order", "nested expansion orders N"),
    Option("analysis", "p_form", "choice", "closed", "-", "formula used for the jump constants", P_FORMS),
    Option("analysis", "z_offsets", "floats", [-1.0, -0.5, 0.5, 1.0], "rescaled length", "offsets from z_c for rate fits"),
    Option("analysis", "z_span", "float", 3.0, "rescaled length", "half width of the profile grid around z_c"),
    Option("analysis", "z_points", "int", 121, "count", "profile grid points"),
    Option("analysis", "times", "floats", [1e4, 1e6, 1e8], "time", "finite times shown next to the limit profile"),
    Option("oracle", "t_final", "float", 50.0, "time", "final integration time", flag="--t-final"),
    Option("oracle", "half_width", "float", 120.0, "length", "domain half width L", flag="--L"),
    Option("oracle", "nx", "int", 24001, "nodes", "grid nodes"),
    Option("oracle", "dt", "float?", None, "time", "time step; empty picks the stability limit"),
    Option("oracle", "snapshot_times", "floats?", None, "time", "extra snapshot times"),
    Option("oracle", "output_stride", "int", 1, "nodes", "write every k-th node"),
    Option("oracle", "compare_points", "int", 0, "count", "compare with Hopf-Cole at this many points on [-20, 20]"),
    Option("output", "csv", "str", "", "path", "CSV destination ('-' for stdout)"),
    Option("output", "json", "str", "", "path", "JSON summary destination ('-' for stdout)"),
)
BY_NAME = {(o.section, o.key): o for o in OPTIONS}
SECTIONS = tuple(dict.fromkeys(o.section for o in OPTIONS))
# keys hashed into CSV metadata: everything except where the output goes
_HASHED = tuple(s for s in SECTIONS if s != "output")

COMMON = ("datum", "output")
COMMANDS: dict[str, tuple[str, tuple[tuple[str, str], ...], bool]] = {}


def _command(name: str, doc: str, keys: Sequence[str], table: bool):
    def deco(fn: Callable):
        COMMANDS[name] = (doc, tuple(tuple(k.split(".")) for k in keys), table)
        _RUNNERS[name] = fn
        return fn

    return deco


_RUNNERS: dict[str, Callable] = {}


# ---------------------------------------------------------------- values


def _parse_list(text: str, key: str, cast) -> list:
    text = text.strip()
    try:
        items = json.loads(text) if text.startswith("[") else [s for s in text.split(",") if s.strip()]
        if not isinstance(items, list):
            raise ValueError
        return [cast(v) for v in items]
    except (ValueError, TypeError) as exc:
        raise ConfigError(f"{key}: cannot parse list {text!r}") from exc


def parse_value(opt: Option, text: str) -> Any:
    """Convert a string from a file, environment or flag to the option's type."""
    name = f"[{opt.section}] {opt.key}"
    text = text.strip()
    optional = opt.kind.endswith("?")
    kind = opt.kind.rstrip("?")
    if optional and text.lower() in ("", "none"):
        return None
    try:
        if kind == "float":
            v = float(text)
            if not math.isfinite(v):
                raise ValueError
            return v
        if kind == "int":
            return int(text)
        if kind == "floats":
            return _parse_list(text, name, float)
        if kind == "ints":
            return _parse_list(text, name, int)
        if kind == "choice":
            if text not in opt.choices:
                raise ConfigError(f"{name}: {text!r} is not one of {list(opt.choices)}")
            return text
        return text
    except ValueError as exc:
        raise ConfigError(f"{name}: cannot parse {text!r} as {kind}") from exc


def format_value(opt: Option, value: Any) -> str:
    if value is None:
        return ""
    if isinstance(value, list):
        return json.dumps([float(v) if opt.kind.startswith("floats") else int(v) for v in value])
    if isinstance(value, float):
        return repr(value)
    return str(value)


def defaults() -> dict[tuple[str, str], Any]:
    return {(o.section, o.key): (list(o.default) if isinstance(o.default, list) else o.default) for o in OPTIONS}


def load_file(path: str, cfg: dict) -> None:
    parser = configparser.ConfigParser(interpolation=None, delimiters=("=",))
    parser.optionxform = str
    try:
        with open(path, encoding="utf-8") as fh:
            parser.read_file(fh)
    except (OSError, configparser.Error) as exc:
        raise ConfigError(f"config file {path}: {exc}") from exc
    for section in parser.sections():
        if section not in SECTIONS:
            raise ConfigError(f"unknown section [{section}] in {path}")
        for key, text in parser.items(section):
            opt = BY_NAME.get((section, key))
            if opt is None:
                raise ConfigError(f"unknown key [{section}] {key} in {path}")
            cfg[(section, key)] = parse_value(opt, text)


def load_env(env: dict[str, str], cfg: dict) -> None:
    names = {f"{ENV_PREFIX}{o.section}_{o.key}".upper(): o for o in OPTIONS}
    for var in sorted(env):
        if not var.startswith(ENV_PREFIX):
            continue
        opt = names.get(var)
        if opt is None:
            raise ConfigError(f"unknown environment key {var}")
        cfg[(opt.section, opt.key)] = parse_value(opt, env[var])


def dump_config(cfg: dict, sections: Sequence[str] = SECTIONS) -> str:
    """Canonical INI text of the effective configuration."""
    lines = []
    for section in sections:
        lines.append(f"[{section}]")
        for o in OPTIONS:
            if o.section == section:
                lines.append(f"{o.key} = {format_value(o, cfg[(section, o.key)])}")
        lines.append("")
    return "\n".join(lines)


def config_hash(cfg: dict) -> str:
    return hashlib.sha256(dump_config(cfg, _HASHED).encode("utf-8")).hexdigest()


# ---------------------------------------------------------------- validation


@dataclass(frozen=True)
class Context:
    command: str
    cfg: dict
    datum: TailFamily
    opts: QuadratureOptions

    def get(self, section: str, key: str) -> Any:
        return self.cfg[(section, key)]

    @property
    def times(self) -> np.ndarray:
        return geometric_times(self.get("analysis", "t_lo_exp"), self.get("analysis", "t_hi_exp"), self.get("analysis", "per_decade"))


def _blame(section: str, exc: AdmissibilityError) -> str:
    keys = [k for k in exc.context if (section, k) in BY_NAME]
    where = ", ".join(f"[{section}] {k}" for k in keys) if keys else f"[{section}]"
    return f"{where}: {exc}"


def build_datum(cfg: dict) -> TailFamily:
    g = lambda k: cfg[("datum", k)]  # noqa: E731
    if g("family") == "zero":
        return zero_datum(g("eps"))
    alphas = g("alphas")
    if g("family") == "nested" and alphas is None:
        alphas = geometric_alphas(g("alpha"), g("alpha_inf") or 0.7, 0.08, g("n_max") or 6)
    spec = DatumSpec(
        family=g("family"),
        kappa1=g("kappa1"),
        alpha=g("alpha"),
        kappa2=g("kappa2"),
        beta=g("beta"),
        alphas=None if alphas is None else tuple(alphas),
        alpha_inf=g("alpha_inf"),
        n_max=g("n_max"),
        eps=g("eps"),
    )
    try:
        return construct_datum(spec)
    except AdmissibilityError as exc:
        raise ConfigError(_blame("datum", exc)) from exc


def _require(cond: bool, message: str) -> None:
    if not cond:
        raise ConfigError(message)


def validate(command: str, cfg: dict) -> Context:
    datum = build_datum(cfg)
    try:
        opts = QuadratureOptions(cfg[("solver", "log_cutoff")], cfg[("solver", "panel_refinement")], cfg[("solver", "rel_tol")])
    except AdmissibilityError as exc:
        raise ConfigError(_blame("solver", exc)) from exc
    g = lambda s, k: cfg[(s, k)]  # noqa: E731
    _require(g("analysis", "t") > 0, "[analysis] t: must be > 0")
    _require(g("analysis", "t_lo_exp") < g("analysis", "t_hi_exp"), "[analysis] t_lo_exp: must be below t_hi_exp")
    _require(g("analysis", "per_decade") >= 1, "[analysis] per_decade: must be >= 1")
    _require(g("analysis", "z_points") >= 2, "[analysis] z_points: must be >= 2")
    _require(g("analysis", "z_span") > 0, "[analysis] z_span: must be > 0")
    _require(all(t > 0 for t in g("analysis", "times")), "[analysis] times: must be > 0")
    _require(0 not in g("analysis", "xs"), "[analysis] xs: x = 0 sits on the discontinuity")
    win = g("analysis", "window")
    _require(win is None or (len(win) == 2 and win[0] < win[1]), "[analysis] window: need [lo, hi] with lo < hi")
    csv_to, json_to = g("output", "csv"), g("output", "json")
    _require(not (csv_to == "-" and json_to == "-"), "[output] csv: csv and json cannot both go to stdout")

    need_tails = command not in ("oracle",)
    _require(not need_tails or bool(datum.tails), "[datum] family: 'zero' is only accepted by the oracle command")
    if command in ("critical",):
        alpha = datum.leading.alpha
        for b in g("analysis", "betas"):
            try:
                check_two_term(alpha, b)
            except AdmissibilityError as exc:
                raise ConfigError(_blame("analysis", AdmissibilityError(str(exc), betas=b))) from exc
    if command == "prop11":
        _require(datum.family == "two_term", "[datum] family: prop11 needs family = two_term")
    if command == "thm12":
        _require(datum.family == "nested", "[datum] family: thm12 needs family = nested")
        limit = datum.truncation_count - 2
        bad = [n for n in g("analysis", "orders") if not 0 <= n <= limit]
        _require(not bad, f"[analysis] orders: each N must lie in [0, n_max - 2] = [0, {limit}], got {bad}")
    if command == "oracle":
        try:
            OracleGrid(g("oracle", "half_width"), g("oracle", "nx"), g("oracle", "dt"))
        except AdmissibilityError as exc:
            raise ConfigError(_blame("oracle", exc)) from exc
        t_final = g("oracle", "t_final")
        _require(0 < t_final <= 1e3, "[oracle] t_final: must lie in (0, 1000]")
        need = 10 * math.sqrt(t_final) + 20
        _require(g("oracle", "half_width") >= need, f"[oracle] half_width: must be >= 10 sqrt(t_final) + 20 = {need:g}")
        snaps = g("oracle", "snapshot_times") or []
        _require(all(0 < s <= t_final for s in snaps), "[oracle] snapshot_times: must lie in (0, t_final]")
        _require(g("oracle", "output_stride") >= 1, "[oracle] output_stride: must be >= 1")
        _require(g("oracle", "compare_points") >= 0, "[oracle] compare_points: must be >= 0")
        _require(
            g("oracle", "compare_points") == 0 or g("oracle", "half_width") >= 30,
            "[oracle] half_width: comparison on [-20, 20] needs half_width >= 30",
        )
    return Context(command, cfg, datum, opts)


# ---------------------------------------------------------------- output


def _fmt(v: Any) -> str:
    if isinstance(v, (float, np.floating)):
        return "%.17g" % (v + 0.0)  # no "-0"
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    return str(v)


def render_csv(ctx: Context, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    versions = " ".join(
        [f"burgers_asymptotics={_version()}", f"numpy={np.__version__}", f"scipy={_scipy_version()}", f"python={platform.python_version()}"]
    )
    out = [f"# command={ctx.command}", f"# config_sha256={config_hash(ctx.cfg)}", f"# versions {versions}", ",".join(header)]
    out += [",".join(_fmt(v) for v in row) for row in rows]
    return "\n".join(out) + "\n"


def _version() -> str:
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "unknown"


def _scipy_version() -> str:
    import scipy

    return scipy.__version__


def _jsonable(v: Any) -> Any:
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, np.ndarray):
        return _jsonable(v.tolist())
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else str(v)
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if v is None or isinstance(v, (str, int, bool)):
        return v
    return repr(v)


def render_json(summary: dict) -> str:
    return json.dumps(_jsonable(summary), indent=2, sort_keys=True) + "\n"


def _write(dest: str, text: str, stdout) -> None:
    if dest == "-":
        stdout.write(text)
    else:
        with open(dest, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# ---------------------------------------------------------------- commands


@_command(
    "solve",
    "rescaled solution t**(a/(1+a)) f(t**(1/(1+a)) z, t) by Hopf-Cole quadrature",
    ["analysis.t", "analysis.z", "analysis.x", "solver.log_cutoff", "solver.panel_refinement", "solver.rel_tol"],
    table=False,
)
def _solve(ctx: Context):
    t = ctx.get("analysis", "t")
    frame0 = Frame(default_alpha0(ctx.datum), t)
    xs = ctx.get("analysis", "x")
    zs = [x / frame0.space_scale for x in xs] if xs is not None else ctx.get("analysis", "z")
    rows, samples = [], []
    for z in zs:
        s = rescaled_solution(ctx.datum, frame0.at(z), ctx.opts)
        samples.append(s)
        rows.append([t, z, z * frame0.space_scale, s.value, s.value / frame0.amplitude_scale, s.error_estimate])
    header = ["t", "z", "x", "value", "physical_value", "error_estimate"]
    summary = samples[0].to_dict() if len(samples) == 1 else {"points": [s.to_dict() for s in samples]}
    return header, rows, summary


@_command(
    "landscape",
    "critical points of the rescaled phase y -> H_t(y, z)",
    ["analysis.t", "analysis.z", "analysis.window", "analysis.resolution", "analysis.exclusion_radius"],
    table=False,
)
def _landscape(ctx: Context):
    frame = Frame(default_alpha0(ctx.datum), ctx.get("analysis", "t"), ctx.get("analysis", "z")[0])
    win = ctx.get("analysis", "window")
    report = scan_landscape(ctx.datum, frame, None if win is None else tuple(win), ctx.get("analysis", "resolution"))
    summary = report.to_dict()
    summary["max_gap"] = max_gap(report, ctx.get("analysis", "exclusion_radius"))
    rows = [[p.y, p.h_value, p.kind, p.curvature] for p in report.points]
    return ["y", "h_value", "kind", "curvature"], rows, summary


@_command(
    "critical",
    "limit objects of the leading tail: z_c, branch roots, profile jump, jump constants",
    ["analysis.betas", "analysis.p_form"],
    table=False,
)
def _critical(ctx: Context):
    cs = find_zc(LeadingTail.of(ctx.datum))
    form = ctx.get("analysis", "p_form")
    kappa2 = ctx.get("datum", "kappa2")
    summary = cs.to_dict()
    summary["a"] = cs.half_jump
    summary["p_form"] = form
    rows, consts = [], []
    for b in ctx.get("analysis", "betas"):
        pp = p_correction(b, "plus", cs, kappa2, form)
        pm = p_correction(b, "minus", cs, kappa2, form)
        rows.append([b, pp, pm])
        consts.append({"beta": b, "P_plus": pp, "P_minus": pm})
    summary["jump_constants"] = consts
    return ["beta", "P_plus", "P_minus"], rows, summary


@_command(
    "prop11",
    "zoomed correction t**gamma (A f - p) at z = z_c + t**-gamma x for the two_term datum",
    ["analysis.xs", "analysis.t_lo_exp", "analysis.t_hi_exp", "analysis.per_decade", "analysis.p_form",
     "solver.log_cutoff", "solver.panel_refinement", "solver.rel_tol"],
    table=True,
)
def _prop11(ctx: Context):
    d = ctx.datum
    cs = find_zc(LeadingTail.of(d))
    second = d.tails[1]
    form = ctx.get("analysis", "p_form")
    ts = ctx.times
    rows, fits = [], []
    for x in ctx.get("analysis", "xs"):
        side = "plus" if x > 0 else "minus"
        predicted = p_correction(second.alpha, side, cs, second.kappa, form)
        scaled = []
        for t in ts:
            raw, q = zoom_sample(d, cs, x, t, ctx.opts)
            scaled.append(q)
            rows.append([t, x, raw, q, predicted])
        ex = extrapolate(ts, scaled)
        entry = {
            "x": x,
            "extrapolated_limit": ex.limit,
            "error_bar": ex.error_bar,
            "theta": ex.theta,
            "predicted": predicted,
            "rel_error": abs(ex.limit - predicted) / abs(predicted),
        }
        try:
            fit = rate_fit(list(zip(ts, np.abs(np.array(scaled) - ex.limit))))
            entry.update(slope=fit.slope, r2=fit.r_squared)
        except AdmissibilityError:
            entry.update(slope=None, r2=None)
        fits.append(entry)
    summary = {"beta": second.alpha, "p_form": form, "z_c": cs.z_c, "results": fits}
    return ["t", "x", "raw", "scaled", "predicted"], rows, summary


@_command(
    "thm12",
    "residual of the nested expansion, scaled by t**gamma_N, at z = z_c + t**-gamma_N x",
    ["analysis.xs", "analysis.orders", "analysis.t_lo_exp", "analysis.t_hi_exp", "analysis.per_decade",
     "solver.log_cutoff", "solver.panel_refinement", "solver.rel_tol"],
    table=True,
)
def _thm12(ctx: Context):
    d = ctx.datum
    cs = find_zc(LeadingTail.of(d))
    alphas, weights = list(d.alphas), list(d.kappas)
    a0 = alphas[0]
    ts = ctx.times
    rows, fits = [], []
    for n in ctx.get("analysis", "orders"):
        g_n = zoom_exponent(alphas[n], a0)
        for x in ctx.get("analysis", "xs"):
            y = abs(cs.y_at_zc("plus" if x > 0 else "minus"))
            scaled = []
            for t in ts:
                raw = nested_residual(d, cs, n, x, t, ctx.opts)
                s = raw * t**g_n
                nxt = weights[n + 1] * y ** (-alphas[n + 1]) * t ** (g_n - zoom_exponent(alphas[n + 1], a0))
                scaled.append(s)
                rows.append([t, n, x, raw, s, nxt])
            mags = np.abs(scaled)
            entry = {
                "N": n,
                "x": x,
                "first": scaled[0],
                "last": scaled[-1],
                "reduction": float(mags[0] / mags[-1]) if mags[-1] > 0 else math.inf,
                "monotone": bool(np.all(np.diff(mags) < 0)),
            }
            try:
                fit = rate_fit(list(zip(ts, mags)))
                entry.update(slope=fit.slope, r2=fit.r_squared)
            except AdmissibilityError:
                entry.update(slope=None, r2=None)
            fits.append(entry)
    return ["t", "N", "x", "raw", "scaled", "predicted"], rows, {"alphas": alphas, "z_c": cs.z_c, "results": fits}


@_command(
    "rates",
    "log-log convergence rates of the profile and, for two_term, of the minus root shift",
    ["analysis.z_offsets", "analysis.t_lo_exp", "analysis.t_hi_exp", "analysis.per_decade",
     "solver.log_cutoff", "solver.panel_refinement", "solver.rel_tol"],
    table=True,
)
def _rates(ctx: Context):
    d = ctx.datum
    lead = LeadingTail.of(d)
    cs = find_zc(lead)
    a0 = lead.alpha
    ts = ctx.times
    rows, fits = [], []
    for off in ctx.get("analysis", "z_offsets"):
        z = cs.z_c + off
        p = profile_p(z, cs)
        errs = []
        for t in ts:
            e = abs(rescaled_solution(d, Frame(a0, t, z), ctx.opts).value - p)
            errs.append(e)
            rows.append(["profile", z, t, e])
        fit = rate_fit(list(zip(ts, errs)))
        fits.append({"quantity": "profile", "z": z, "predicted_slope": -(1 - a0) / (2 * (1 + a0)), **fit.to_dict()})
    if d.family == "two_term":
        beta = d.tails[1].alpha
        ym = cs.y_star_minus_at_zc
        errs = []
        for t in ts:
            e = abs(finite_t_maxima(d, cs.z_c, t)[0] - ym)
            errs.append(e)
            rows.append(["minus_root_shift", cs.z_c, t, e])
        fit = rate_fit(list(zip(ts, errs)))
        gamma = zoom_exponent(beta, a0)
        fits.append(
            {
                "quantity": "minus_root_shift",
                "z": cs.z_c,
                "predicted_slope": -gamma,
                "prefactor_at_t_max": errs[-1] * ts[-1] ** gamma,
                "coefficient_closed": abs(root_shift_coefficient(beta, "minus", cs, d.tails[1].kappa)),
                "coefficient_linearized": abs(root_shift_coefficient(beta, "minus", cs, d.tails[1].kappa, "linearized")),
                **fit.to_dict(),
            }
        )
    return ["quantity", "z", "t", "error"], rows, {"z_c": cs.z_c, "fits": fits}


@_command(
    "oracle",
    "finite-difference integration of f_t + f f_x = f_xx from f0",
    ["oracle.t_final", "oracle.half_width", "oracle.nx", "oracle.dt", "oracle.snapshot_times",
     "oracle.output_stride", "oracle.compare_points", "solver.log_cutoff", "solver.panel_refinement", "solver.rel_tol"],
    table=True,
)
def _oracle(ctx: Context):
    g = lambda k: ctx.get("oracle", k)  # noqa: E731
    grid = OracleGrid(g("half_width"), g("nx"), g("dt"))
    snaps = integrate(ctx.datum, grid, g("t_final"), g("snapshot_times"))
    x = grid.x[:: g("output_stride")]
    rows = [[s.t, xi, fi] for s in snaps for xi, fi in zip(x, s.values[:: g("output_stride")])]
    summary: dict[str, Any] = {
        "dx": grid.dx,
        "snapshots": [{"t": s.t, "min": float(s.values.min()), "max": float(s.values.max())} for s in snaps],
    }
    if g("compare_points"):
        xs = np.linspace(-20.0, 20.0, g("compare_points"))
        summary["compare"] = compare(ctx.datum, g("t_final"), xs, grid, ctx.opts).to_dict()
    return ["t", "x", "f"], rows, summary


@_command(
    "profile-plot-data",
    "limit profile p(z) and finite-t rescaled solutions on a grid straddling z_c",
    ["analysis.z_span", "analysis.z_points", "analysis.times", "solver.log_cutoff", "solver.panel_refinement", "solver.rel_tol"],
    table=True,
)
def _profile(ctx: Context):
    d = ctx.datum
    cs = find_zc(LeadingTail.of(d))
    span, npts = ctx.get("analysis", "z_span"), ctx.get("analysis", "z_points")
    zs = [z for z in np.linspace(cs.z_c - span, cs.z_c + span, npts) if z != cs.z_c]
    times = ctx.get("analysis", "times")
    a0 = d.leading.alpha
    rows = []
    for z in zs:
        row = [z, profile_p(z, cs)]
        row += [rescaled_solution(d, Frame(a0, t, z), ctx.opts).value for t in times]
        rows.append(row)
    header = ["z", "p"] + ["solution_t=%.17g" % t for t in times]
    summary = {"z_c": cs.z_c, "p_left": cs.p_minus, "p_right": cs.p_plus, "a": cs.half_jump, "points": len(zs)}
    return header, rows, summary


# ---------------------------------------------------------------- driver


def _help_line(opt: Option, cfg_default: Any) -> str:
    shown = format_value(opt, cfg_default) or "unset"
    choices = f"; one of {', '.join(opt.choices)}" if opt.choices else ""
    return f"{opt.help} [unit: {opt.unit}; default: {shown}{choices}]"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="burgers-asym",
        description="Long-time asymptotics of viscous Burgers with slowly decaying data.",
        epilog=f"Environment overrides: {ENV_PREFIX}<SECTION>_<KEY>, e.g. {ENV_PREFIX}DATUM_ALPHA=0.4.",
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    dflt = defaults()
    for name, (doc, keys, _) in COMMANDS.items():
        p = sub.add_parser(name, help=doc, description=doc)
        p.add_argument("--config", metavar="PATH", help="INI configuration file [unit: path; default: none]")
        p.add_argument("--dump-config", metavar="PATH", help="write the effective configuration here [unit: path; default: none]")
        p.add_argument("--datum", metavar="PATH", dest="config", help="alias of --config")
        wanted = [(o.section, o.key) for o in OPTIONS if o.section in COMMON] + list(keys)
        for sk in dict.fromkeys(wanted):
            opt = BY_NAME[sk]
            p.add_argument(*opt.flags, dest=f"{opt.section}.{opt.key}", metavar="VALUE", default=None, help=_help_line(opt, dflt[sk]))
    return parser


def effective_config(args: argparse.Namespace, env: dict[str, str]) -> dict:
    cfg = defaults()
    if args.config:
        load_file(args.config, cfg)
    load_env(env, cfg)
    for dest, text in vars(args).items():
        if "." in dest and text is not None:
            section, key = dest.split(".", 1)
            cfg[(section, key)] = parse_value(BY_NAME[(section, key)], text)
    return cfg


def run(argv: Sequence[str] | None = None, env: dict[str, str] | None = None, stdout=None, stderr=None) -> int:
    """Parse, validate and execute one subcommand; returns the exit code."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    env = dict(os.environ) if env is None else env
    parser = build_parser()
    try:
        with contextlib.redirect_stdout(stdout), contextlib.redirect_stderr(stderr):
            args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        cfg = effective_config(args, env)
        ctx = validate(args.command, cfg)
    except ConfigError as exc:
        stderr.write(f"error: {exc}\n")
        return 2

    if args.dump_config:
        _write(args.dump_config, dump_config(cfg), stdout)

    _, _, table = COMMANDS[args.command]
    try:
        header, rows, summary = _RUNNERS[args.command](ctx)
    except AdmissibilityError as exc:
        stderr.write(f"error: {exc}\n")
        stderr.write(render_json(exc.to_dict()))
        return 2
    except BurgersError as exc:
        stderr.write(render_json(exc.to_dict()))
        return 1

    csv_to, json_to = cfg[("output", "csv")], cfg[("output", "json")]
    if not csv_to and not json_to:
        csv_to, json_to = ("-", "") if table else ("", "-")
    elif not json_to and csv_to != "-":
        json_to = "-"
    if csv_to:
        _write(csv_to, render_csv(ctx, header, rows), stdout)
    if json_to:
        _write(json_to, render_json(summary), stdout)
    return 0


def main() -> None:
    sys.exit(run())
