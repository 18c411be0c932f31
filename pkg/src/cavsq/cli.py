"""Batch command-line front end emitting CSV tables and optional SVG plots.

Commands
--------
traj              squeezing trajectory over a time (or shearing) grid
sweep-detuning    exact-simulator minimal squeezing per detuning
scaling           minimal squeezing vs ensemble size, with power-law fit
scatter           scattering moment model over a shearing grid per eta
optimize-detuning scattering-limited optimum per detuning on a grid
validate          numeric margins of every validity condition

All rates are angular frequencies in rad/us, times in us; no unit conversion
happens here.  Flags override config-file keys (flat ``key = value`` lines,
``#`` comments, hyphens and underscores interchangeable).  Numeric output is
serialized with 12 significant digits; identical configurations produce
byte-identical CSV except for the timestamp comment, which ``--no-meta``
removes.  Exit codes: 0 success, 2 bad input, 3 numeric failure, 4 model out
of regime.  The CAVSQ_THREADS environment variable caps worker parallelism
(0 = auto).
"""

from __future__ import annotations

import argparse
import datetime
import math
import os
import sys
from dataclasses import dataclass, fields

import numpy as np

from .analytic_models import ScatterModelInput, validity, xi2_scatter
from .cavity_field import DriveParams, PhysicalRates
from .collective_spin import EnsembleSpec
from .dynamics import sweep_trajectory, time_for_shearing
from .errors import (
    BelowRegimeError,
    CavsqError,
    ComplexDiscriminantError,
    ConfigError,
    DegenerateDirectionError,
    NoFiniteTimeError,
    NoMinimumError,
    NumericFailureError,
)
from .optimize import (
    exact_minimum,
    minimize_scatter_over_qx,
    optimal_over_detuning,
    scaling_fit,
)
from .svg import emit_svg

COMMANDS = ("traj", "sweep-detuning", "scaling", "scatter", "optimize-detuning", "validate")


def _num(v) -> str:
    """12-significant-digit, locale-independent rendering."""
    if isinstance(v, str):
        return v
    return f"{float(v):.12g}"


@dataclass
class CsvTable:
    """One output table: header, numeric rows, optional footer and notes."""

    header: tuple[str, ...]
    rows: list[tuple]
    footer: tuple | None = None
    notes: tuple[str, ...] = ()

    def to_csv(self, meta: bool = True) -> str:
        lines = []
        if meta:
            stamp = datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds")
            lines.append(f"# generated: {stamp}")
        lines.extend(f"# {note}" for note in self.notes)
        lines.append(",".join(self.header))
        lines.extend(",".join(_num(c) for c in row) for row in self.rows)
        if self.footer is not None:
            lines.append(",".join(_num(c) for c in self.footer))
        return "\n".join(lines) + "\n"


def parse_csv(text: str) -> CsvTable:
    """Inverse of CsvTable.to_csv; comment lines are skipped, the footer (if
    any) comes back as the last row."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    if not lines:
        raise ConfigError("empty CSV")
    header = tuple(lines[0].split(","))
    rows = []
    for ln in lines[1:]:
        cells = []
        for cell in ln.split(","):
            try:
                cells.append(float(cell))
            except ValueError:
                cells.append(cell)
        rows.append(tuple(cells))
    return CsvTable(header=header, rows=rows)


@dataclass(frozen=True)
class GridSpec:
    """lo:hi:count[:lin|log] range specification."""

    lo: float
    hi: float
    count: int
    spacing: str = "lin"

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.lo])
        if self.spacing == "log":
            return np.geomspace(self.lo, self.hi, self.count)
        return np.linspace(self.lo, self.hi, self.count)


def _parse_grid(text: str, name: str) -> GridSpec:
    parts = text.split(":")
    if len(parts) not in (3, 4):
        raise ConfigError(f"{name} must look like lo:hi:count[:lin|log], got {text!r}")
    try:
        lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise ConfigError(f"bad numbers in {name}: {text!r}")
    spacing = parts[3] if len(parts) == 4 else "lin"
    if spacing not in ("lin", "log"):
        raise ConfigError(f"{name} spacing must be lin or log, got {spacing!r}")
    if count == 1:
        if lo != hi:
            raise ConfigError(f"{name}: a single-point grid needs lo == hi")
    elif count < 2 or not lo < hi:
        raise ConfigError(f"{name}: need lo < hi and count >= 2, got {text!r}")
    if spacing == "log" and lo <= 0:
        raise ConfigError(f"{name}: log spacing needs positive bounds")
    return GridSpec(lo=lo, hi=hi, count=count, spacing=spacing)


def _parse_eta_list(text: str) -> tuple[float, ...]:
    out = []
    for piece in text.split(","):
        piece = piece.strip()
        if piece.lower() in ("inf", "infinity"):
            out.append(math.inf)
            continue
        try:
            out.append(float(piece))
        except ValueError:
            raise ConfigError(f"bad eta value {piece!r}")
    if not out or any(v <= 0 for v in out):
        raise ConfigError(f"eta values must be positive (or inf), got {text!r}")
    return tuple(out)


def _parse_s_list(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(p) for p in text.split(","))
    except ValueError:
        raise ConfigError(f"bad S list {text!r}")
    if len(vals) < 4 or any(b <= a for a, b in zip(vals, vals[1:])):
        raise ConfigError("S-list must be at least 4 strictly increasing values")
    return vals


@dataclass
class RunConfig:
    """Fully resolved run description shared by every command."""

    command: str
    S: float | None = None
    kappa: float | None = None
    Omega: float | None = None
    beta0: float | None = None
    x: float | None = None
    delta: float | None = None
    eta: tuple[float, ...] | None = None
    Qx: float | None = None
    t_grid: GridSpec | None = None
    qx_grid: GridSpec | None = None
    x_grid: GridSpec | None = None
    S_list: tuple[float, ...] | None = None
    mode: str = "exact"
    phase_mode: str = "analytic"
    overlap: str = "on"
    formula_mode: str = "standard"
    g: float | None = None
    Gamma: float | None = None
    omega_a: float | None = None
    omega_c: float | None = None
    omega_l: float | None = None
    out: str | None = None
    no_meta: bool = False
    svg: str | None = None
    svg_x: str | None = None
    svg_y: str | None = None
    svg_log: str | None = None

    def drive_params(self) -> DriveParams:
        self.require("kappa", "Omega", "beta0")
        if self.x is None and self.delta is None:
            raise ConfigError("missing required key: x (or delta)")
        rates = None
        rate_keys = ("g", "Gamma", "omega_a", "omega_c", "omega_l")
        given = [k for k in rate_keys if getattr(self, k) is not None]
        if given:
            if len(given) != len(rate_keys):
                raise ConfigError(
                    f"rate bundle needs all of {', '.join(rate_keys)}; got only {', '.join(given)}"
                )
            rates = PhysicalRates(
                g=self.g,
                Gamma=self.Gamma,
                Delta=self.omega_a / 2.0,
                omega_a=self.omega_a,
                omega_c=self.omega_c,
                omega_l=self.omega_l,
            )
        try:
            return DriveParams(
                kappa=self.kappa,
                Omega=self.Omega,
                beta0=self.beta0,
                x=self.x,
                delta=self.delta,
                rates=rates,
            )
        except ValueError as exc:
            raise ConfigError(str(exc))

    def spec(self) -> EnsembleSpec:
        self.require("S")
        try:
            return EnsembleSpec(self.S)
        except ValueError as exc:
            raise ConfigError(str(exc))

    def require(self, *keys: str):
        for key in keys:
            if getattr(self, key) is None:
                raise ConfigError(f"missing required key: {key}")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavsq",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    def common(p):
        p.add_argument("--config", help="flat key = value config file; flags win")
        p.add_argument("--S", type=float, help="total spin S = N/2")
        p.add_argument("--kappa", type=float, help="cavity linewidth (rad/us)")
        p.add_argument("--Omega", type=float, help="dispersive shift per unit S_z (rad/us)")
        p.add_argument("--beta0", type=float, help="drive amplitude (dimensionless)")
        p.add_argument("--x", type=float, help="normalized detuning, delta = -x*kappa/2")
        p.add_argument("--delta", type=float, help="laser-cavity detuning (rad/us)")
        p.add_argument("--out", help="output CSV path (default: stdout)")
        p.add_argument("--no-meta", action="store_true", help="omit the timestamp comment")
        p.add_argument("--svg", help="also write an SVG line plot here")
        p.add_argument("--svg-x", help="SVG abscissa column")
        p.add_argument("--svg-y", help="SVG ordinate column(s), comma separated")
        p.add_argument("--svg-log", choices=("none", "x", "y", "xy"), help="log axes")

    p = sub.add_parser("traj", help="squeezing trajectory on a time or shearing grid")
    common(p)
    p.add_argument("--t-grid", help="time grid lo:hi:count[:lin|log] (us)")
    p.add_argument("--qx-grid", help="shearing grid lo:hi:count[:lin|log] (needs x != 0)")
    p.add_argument("--phase-mode", choices=("analytic", "numeric"))
    p.add_argument("--overlap", choices=("on", "off"), help="apply the cavity overlap factor")

    p = sub.add_parser("sweep-detuning", help="exact minimal squeezing per detuning")
    common(p)
    p.add_argument("--x-grid", help="detuning grid lo:hi:count[:lin|log]")
    p.add_argument("--phase-mode", choices=("analytic", "numeric"))
    p.add_argument("--overlap", choices=("on", "off"))

    p = sub.add_parser("scaling", help="minimal squeezing vs S with power-law fit")
    common(p)
    p.add_argument("--S-list", help="comma-separated increasing spin sizes")
    p.add_argument("--mode", choices=("exact", "analytic"))

    p = sub.add_parser("scatter", help="scattering moment model over a shearing grid")
    common(p)
    p.add_argument("--eta", help="cooperativity value(s), comma separated; inf allowed")
    p.add_argument("--qx-grid", help="shearing grid lo:hi:count[:lin|log]")
    p.add_argument("--formula-mode", choices=("standard", "as-written"))

    p = sub.add_parser("optimize-detuning", help="scattering-limited optimum per detuning")
    common(p)
    p.add_argument("--eta", help="single cooperativity; inf allowed")
    p.add_argument("--x-grid", help="detuning grid lo:hi:count[:lin|log]")

    p = sub.add_parser("validate", help="numeric margins of the validity conditions")
    common(p)
    p.add_argument("--Qx", type=float, help="shearing strength to score")
    p.add_argument("--g", type=float, help="atom-cavity coupling (rad/us)")
    p.add_argument("--Gamma", type=float, help="excited-state decay rate (rad/us)")
    p.add_argument("--omega-a", type=float, help="ground-state splitting (rad/us)")
    p.add_argument("--omega-c", type=float, help="cavity frequency (rad/us)")
    p.add_argument("--omega-l", type=float, help="laser frequency (rad/us)")
    return parser


def _read_config_file(path: str) -> dict[str, str]:
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    entries: dict[str, str] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigError(f"{path}:{lineno}: expected key = value, got {raw.strip()!r}")
            key, value = (part.strip() for part in line.split("=", 1))
            entries[key.replace("-", "_")] = value
    return entries


_BOOL_KEYS = {"no_meta"}
_STR_KEYS = {
    "t_grid", "qx_grid", "x_grid", "S_list", "eta", "mode", "phase_mode",
    "overlap", "formula_mode", "out", "svg", "svg_x", "svg_y", "svg_log", "config",
}


def parse_config(argv: list[str]) -> RunConfig:
    """Resolve CLI flags plus optional config file into a RunConfig."""
    parser = _build_parser()
    ns = parser.parse_args(argv)
    values = vars(ns).copy()
    command = values.pop("command")

    if values.get("config"):
        file_entries = _read_config_file(values["config"])
        known = set(values)
        for key, raw in file_entries.items():
            if key == "config":
                raise ConfigError("config files cannot nest another config")
            if key not in known:
                raise ConfigError(f"unknown config key: {key}")
            if values.get(key) not in (None, False):
                continue  # flag wins
            if key in _BOOL_KEYS:
                values[key] = raw.lower() in ("1", "true", "yes", "on")
            elif key in _STR_KEYS:
                values[key] = raw
            else:
                try:
                    values[key] = float(raw)
                except ValueError:
                    raise ConfigError(f"config key {key} needs a number, got {raw!r}")
    values.pop("config", None)

    cfg = RunConfig(command=command)
    for f in fields(RunConfig):
        if f.name == "command" or f.name not in values or values[f.name] is None:
            continue
        setattr(cfg, f.name, values[f.name])
    if isinstance(cfg.t_grid, str):
        cfg.t_grid = _parse_grid(cfg.t_grid, "t-grid")
    if isinstance(cfg.qx_grid, str):
        cfg.qx_grid = _parse_grid(cfg.qx_grid, "qx-grid")
    if isinstance(cfg.x_grid, str):
        cfg.x_grid = _parse_grid(cfg.x_grid, "x-grid")
    if isinstance(cfg.S_list, str):
        cfg.S_list = _parse_s_list(cfg.S_list)
    if isinstance(cfg.eta, str):
        cfg.eta = _parse_eta_list(cfg.eta)
    return cfg


# ----------------------------------------------------------------------
# command implementations, each returning a list of (suffix, CsvTable)


def _cmd_traj(cfg: RunConfig):
    spec = cfg.spec()
    params = cfg.drive_params()
    if (cfg.t_grid is None) == (cfg.qx_grid is None):
        raise ConfigError("traj needs exactly one of t-grid or qx-grid")
    if cfg.t_grid is not None:
        t_values = cfg.t_grid.values()
    else:
        # negative detuning flips the Qx -> t map, so restore time order
        t_values = np.sort(
            [time_for_shearing(params, spec.S, Qx=q) for q in cfg.qx_grid.values()]
        )
    traj = sweep_trajectory(
        spec,
        params,
        t_values,
        phase_mode=cfg.phase_mode,
        include_overlap=(cfg.overlap == "on"),
    )
    rows = [
        (
            pt.t,
            pt.Q,
            pt.Qx,
            rep.xi2,
            rep.contrast,
            mom.mean[0],
            rep.xi2 * spec.S / 2.0 if math.isfinite(rep.xi2) else math.inf,
        )
        for pt, rep, mom in traj.points
    ]
    best_pt, best_rep, _ = traj.minimum
    notes = (
        f"minimum: t={_num(best_pt.t)} Q={_num(best_pt.Q)} "
        f"Qx={_num(best_pt.Qx)} xi2={_num(best_rep.xi2)}",
    )
    table = CsvTable(
        header=("t", "Q", "Qx", "xi2", "contrast", "Sx", "varMin"),
        rows=rows,
        notes=notes,
    )
    return [("", table)]


def _cmd_sweep_detuning(cfg: RunConfig):
    spec = cfg.spec()
    cfg.require("kappa", "Omega", "beta0")
    if cfg.x_grid is None:
        raise ConfigError("missing required key: x-grid")
    rows = []
    for x in cfg.x_grid.values():
        params = DriveParams(kappa=cfg.kappa, Omega=cfg.Omega, beta0=cfg.beta0, x=float(x))
        qx_opt, xi2, _ = exact_minimum(
            spec, params, phase_mode=cfg.phase_mode, include_overlap=(cfg.overlap == "on")
        )
        rows.append((float(x), qx_opt, xi2))
    return [("", CsvTable(header=("x", "Qx_opt", "xi2_min"), rows=rows))]


def _cmd_scaling(cfg: RunConfig):
    cfg.require("S_list")
    if cfg.mode == "analytic":
        # the closed forms only depend on x; fill unused drive fields
        cfg.kappa = cfg.kappa if cfg.kappa is not None else 4.0
        cfg.Omega = cfg.Omega if cfg.Omega is not None else 0.01
        cfg.beta0 = cfg.beta0 if cfg.beta0 is not None else 1.0
    params = cfg.drive_params()
    fit = scaling_fit(params, cfg.S_list, mode=cfg.mode)
    rows = [(s, q, v) for s, q, v in fit.points]
    table = CsvTable(
        header=("S", "Qx_opt", "xi2_min"),
        rows=rows,
        footer=(fit.exponent, fit.prefactor, fit.r_squared),
        notes=("footer row: exponent,prefactor,rSquared",),
    )
    return [("", table)]


def _cmd_scatter(cfg: RunConfig):
    cfg.require("S", "x", "eta")
    if cfg.qx_grid is None:
        raise ConfigError("missing required key: qx-grid")
    tables = []
    for eta in cfg.eta:
        rows = []
        bad = 0
        for qx in cfg.qx_grid.values():
            inp = ScatterModelInput(Qx=float(qx), x=cfg.x, S=cfg.S, eta=eta)
            std = xi2_scatter(inp, "standard")
            try:
                raw = xi2_scatter(inp, "as-written")
            except ComplexDiscriminantError:
                raw = math.nan
                bad += 1
            rows.append((float(qx), std, raw, inp.Rx))
        notes = [f"eta={_num(eta)}"]
        if bad:
            notes.append(f"as-written discriminant negative at {bad} grid points (nan)")
        tables.append(
            (
                f"_eta{_num(eta)}" if len(cfg.eta) > 1 else "",
                CsvTable(
                    header=("Qx", "xi2_standard", "xi2_aswritten", "Rx"),
                    rows=rows,
                    notes=tuple(notes),
                ),
            )
        )
    return tables


def _cmd_optimize_detuning(cfg: RunConfig):
    cfg.require("S", "eta")
    if cfg.x_grid is None:
        raise ConfigError("missing required key: x-grid")
    if len(cfg.eta) != 1:
        raise ConfigError("optimize-detuning takes a single eta")
    eta = cfg.eta[0]
    rows = []
    for x in cfg.x_grid.values():
        res = minimize_scatter_over_qx(cfg.S, eta, float(x))
        rows.append((float(x), float(res.argmin), res.value))
    best = optimal_over_detuning(cfg.S, eta, (cfg.x_grid.lo, cfg.x_grid.hi))
    notes = (
        f"optimum: x={_num(best.argmin[0])} Qx={_num(best.argmin[1])} xi2={_num(best.value)}",
    )
    return [("", CsvTable(header=("x", "Qx_opt", "xi2_min"), rows=rows, notes=notes))]


def _cmd_validate(cfg: RunConfig):
    cfg.require("S", "Qx")
    params = cfg.drive_params()
    report = validity(params, cfg.S, cfg.Qx)
    rows = [(name, value, int(ok)) for name, value, ok in report.rows()]
    notes = (
        f"detuning regime: {report.detuning_regime} "
        f"(bounds {_num(report.detuning_lower)}..{_num(report.detuning_upper)}); "
        f"threshold={_num(report.threshold)}",
    )
    return [("", CsvTable(header=("check", "value", "pass"), rows=rows, notes=notes))]


_RUNNERS = {
    "traj": _cmd_traj,
    "sweep-detuning": _cmd_sweep_detuning,
    "scaling": _cmd_scaling,
    "scatter": _cmd_scatter,
    "optimize-detuning": _cmd_optimize_detuning,
    "validate": _cmd_validate,
}

_SVG_DEFAULTS = {
    "traj": ("Qx", "xi2", "none"),
    "sweep-detuning": ("x", "xi2_min", "xy"),
    "scaling": ("S", "xi2_min", "xy"),
    "scatter": ("Qx", "xi2_standard", "none"),
    "optimize-detuning": ("x", "xi2_min", "xy"),
}


def _with_suffix(path: str, suffix: str) -> str:
    if not suffix:
        return path
    root, ext = os.path.splitext(path)
    return f"{root}{suffix}{ext}"


def run(cfg: RunConfig) -> int:
    """Execute the command, write CSV (and SVG) outputs, return exit code.

    Any output file already written is removed if a later step fails.
    """
    written: list[str] = []
    try:
        tables = _RUNNERS[cfg.command](cfg)
        for suffix, table in tables:
            text = table.to_csv(meta=not cfg.no_meta)
            if cfg.out:
                path = _with_suffix(cfg.out, suffix)
                with open(path, "w", encoding="utf-8", newline="") as fh:
                    fh.write(text)
                written.append(path)
            else:
                sys.stdout.write(text)
                if len(tables) > 1:
                    sys.stdout.write("\n")
        if cfg.svg:
            if cfg.command == "validate":
                raise ConfigError("validate has no numeric columns to plot")
            default_x, default_y, default_log = _SVG_DEFAULTS[cfg.command]
            x_col = cfg.svg_x or default_x
            y_cols = (cfg.svg_y or default_y).split(",")
            log_mode = cfg.svg_log or default_log
            for suffix, table in tables:
                doc = emit_svg(
                    table,
                    x_col,
                    y_cols,
                    log_x=log_mode in ("x", "xy"),
                    log_y=log_mode in ("y", "xy"),
                    title=cfg.command,
                )
                path = _with_suffix(cfg.svg, suffix)
                with open(path, "w", encoding="utf-8", newline="") as fh:
                    fh.write(doc)
                written.append(path)
    except BaseException:
        for path in written:
            try:
                os.unlink(path)
            except OSError:
                pass
        raise
    return 0


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
        return run(cfg)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericFailureError, NoMinimumError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except (
        BelowRegimeError,
        ComplexDiscriminantError,
        DegenerateDirectionError,
        NoFiniteTimeError,
    ) as exc:
        print(f"out of regime: {exc}", file=sys.stderr)
        return 4
    except CavsqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
