"""Deterministic 1-d minimization, nested detuning optimization, and
power-law scaling fits.

The squeezing curves oscillate past their first dip, so every minimization
here brackets on a coarse pre-grid first and only then refines by golden
section.  All routines are pure functions of their inputs: repeated runs
return bit-identical results.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import _threads
from .analytic_models import ScatterModelInput, ideal_optimum, xi2_scatter
from .cavity_field import DriveParams
from .collective_spin import EnsembleSpec
from .dynamics import sweep_trajectory, time_for_shearing
from .errors import NoMinimumError, RegimeWarning

__all__ = [
    "OptimizeResult",
    "ScalingFit",
    "minimize_1d",
    "optimal_over_detuning",
    "scaling_fit",
    "exact_minimum",
]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0

#: Default exact-mode shearing-strength sweep: log-spaced Q_x grid bounds/size.
QX_SWEEP_LO = 0.1
QX_SWEEP_HI_CAP = 1e3
QX_SWEEP_POINTS = 200


@dataclass(frozen=True)
class OptimizeResult:
    """Outcome of a bracketed minimization.

    ``argmin`` is a float for 1-d searches and an (x, Qx) pair for the nested
    detuning search; ``bracket`` is the final interval width, never larger
    than the requested tolerance.
    """

    argmin: float | tuple[float, float]
    value: float
    evaluations: int
    bracket: float


@dataclass(frozen=True)
class ScalingFit:
    """Log-log least-squares fit of minimal squeezing against spin size.

    ``points`` holds (S, Qx_opt, xi2_min) triples actually used by the fit;
    the model is xi2_min = prefactor * S**exponent.
    """

    exponent: float
    prefactor: float
    r_squared: float
    points: tuple[tuple[float, float, float], ...]


def minimize_1d(
    objective,
    lo: float,
    hi: float,
    tol: float = 1e-8,
    pre_grid: int = 64,
    log_spacing: bool = False,
) -> OptimizeResult:
    """Pre-grid bracketing followed by golden-section refinement.

    Evaluates ``objective`` on a ``pre_grid``-point grid over [lo, hi]
    (log-spaced if requested), brackets the smallest finite value (ties break
    toward smaller argument), and golden-sections the bracket down to width
    ``tol``.  The returned value never exceeds any evaluation made along the
    way.  Deterministic for fixed inputs.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    if pre_grid < 2:
        raise ValueError(f"pre_grid must be at least 2, got {pre_grid}")
    if log_spacing and lo <= 0:
        raise ValueError("log spacing needs a positive lower bound")
    grid = np.geomspace(lo, hi, pre_grid) if log_spacing else np.linspace(lo, hi, pre_grid)
    evals = 0

    def f(q):
        nonlocal evals
        evals += 1
        return float(objective(q))

    values = np.array([f(q) for q in grid])
    finite = np.isfinite(values)
    if not finite.any():
        raise NoMinimumError("objective is not finite anywhere on the pre-grid")
    masked = np.where(finite, values, np.inf)
    i_best = int(np.argmin(masked))  # first index wins ties -> smallest argument
    best_q, best_f = float(grid[i_best]), float(values[i_best])

    a = float(grid[max(i_best - 1, 0)])
    b = float(grid[min(i_best + 1, pre_grid - 1)])
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for q, v in ((c, fc), (d, fd)):
        if v < best_f or (v == best_f and q < best_q):
            best_q, best_f = q, v
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
            if fc < best_f or (fc == best_f and c < best_q):
                best_q, best_f = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
            if fd < best_f or (fd == best_f and d < best_q):
                best_q, best_f = d, fd
    return OptimizeResult(argmin=best_q, value=best_f, evaluations=evals, bracket=b - a)


def _scatter_qx_bounds(S: float, eta: float, x: float) -> tuple[float, float]:
    """Shearing-strength search window covering both optimum families."""
    hi = 10.0 * 12.0**0.2 * S**0.4
    if math.isfinite(eta):
        hi = max(hi, 10.0 * math.sqrt(12.0 * S * eta / (1.0 + x**2)))
    return 1e-2, min(max(hi, 10.0), 4.0 * S)


def minimize_scatter_over_qx(
    S: float, eta: float, x: float, qx_range=None, points: int = 200, tol_rel: float = 1e-6
) -> OptimizeResult:
    """Minimize the scattering moment model over the shearing strength.

    The moment model loses meaning once every atom has scattered a photon
    (R_x > 1) or a transverse variance turns negative; such evaluations score
    as +inf so the search stays on the physical branch.
    """
    lo, hi = qx_range if qx_range is not None else _scatter_qx_bounds(S, eta, x)

    def objective(qx):
        inp = ScatterModelInput(Qx=qx, x=x, S=S, eta=eta)
        if inp.Rx > 1.0:
            return math.inf
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RegimeWarning)
            val = xi2_scatter(inp)
        return val if val >= 0.0 else math.inf

    return minimize_1d(
        objective, lo, hi, tol=tol_rel * hi, pre_grid=points, log_spacing=True
    )


def optimal_over_detuning(
    S: float,
    eta: float,
    x_range,
    qx_range=None,
    x_points: int = 32,
    qx_points: int = 200,
    tol_rel: float = 1e-4,
) -> OptimizeResult:
    """Best squeezing over detuning: inner minimum over Q_x, outer over x.

    ``x_range`` is a positive (lo, hi) pair; a degenerate range (lo == hi)
    skips the outer search and reduces to the inner minimization.  The outer
    search runs on a log-spaced grid refined by golden section.  ``argmin``
    is the (x, Qx) pair at the optimum.
    """
    lo, hi = float(x_range[0]), float(x_range[-1])
    if lo <= 0 or hi <= 0:
        raise ValueError(f"x range must be positive, got [{lo}, {hi}]")

    def inner(x):
        return minimize_scatter_over_qx(S, eta, x, qx_range=qx_range, points=qx_points)

    if lo == hi:
        res = inner(lo)
        return OptimizeResult(
            argmin=(lo, float(res.argmin)),
            value=res.value,
            evaluations=res.evaluations,
            bracket=0.0,
        )
    outer = minimize_1d(
        lambda x: inner(x).value,
        lo,
        hi,
        tol=tol_rel * hi,
        pre_grid=x_points,
        log_spacing=True,
    )
    best_x = float(outer.argmin)
    res = inner(best_x)
    return OptimizeResult(
        argmin=(best_x, float(res.argmin)),
        value=min(outer.value, res.value),
        evaluations=outer.evaluations,
        bracket=outer.bracket,
    )


def exact_minimum(
    spec: EnsembleSpec,
    params: DriveParams,
    qx_lo: float = QX_SWEEP_LO,
    qx_hi: float | None = None,
    points: int = QX_SWEEP_POINTS,
    phase_mode: str = "analytic",
    include_overlap: bool = True,
) -> tuple[float, float, bool]:
    """Minimal xi2 of the exact simulator over a log-spaced Q_x sweep.

    Returns (Qx_opt, xi2_min, hit_boundary); ``hit_boundary`` flags a minimum
    on the sweep edge, where the true optimum may lie outside the window.
    The sweep covers |Q_x| in [qx_lo, qx_hi] with the sign of the detuning
    (blue detuning accumulates negative Q_x at positive drive time).
    """
    if qx_hi is None:
        qx_hi = min(4.0 * spec.S, QX_SWEEP_HI_CAP)
    sign = 1.0 if params.x >= 0 else -1.0
    qx_grid = sign * np.geomspace(qx_lo, qx_hi, points)
    t_grid = np.array([time_for_shearing(params, spec.S, Qx=q) for q in qx_grid])
    traj = sweep_trajectory(
        spec, params, t_grid, phase_mode=phase_mode, include_overlap=include_overlap
    )
    grid_xi2 = np.array([rep.xi2 for _, rep, _ in traj.points])
    i_grid = int(np.argmin(grid_xi2))
    point = traj.minimum[0]
    xi2 = traj.minimum[1].xi2
    edge = i_grid in (0, len(grid_xi2) - 1)
    return point.Qx, xi2, edge


def scaling_fit(params: DriveParams, S_list, mode: str = "exact") -> ScalingFit:
    """Fit ln(xi2_min) against ln(S) across ensemble sizes.

    ``mode="exact"`` sweeps the full simulator per S (log-spaced Q_x grid,
    golden-refined); ``mode="analytic"`` uses the ideal closed-form optimum.
    Sizes whose exact minimum lands on the sweep boundary are excluded from
    the fit (with a warning), since boundary minima bias the exponent.  At
    least 4 usable sizes are required.
    """
    if mode not in ("exact", "analytic"):
        raise ValueError(f"mode must be 'exact' or 'analytic', got {mode!r}")
    sizes = [float(s) for s in S_list]
    if len(sizes) < 4:
        raise ValueError(f"need at least 4 sizes, got {len(sizes)}")
    if any(b <= a for a, b in zip(sizes, sizes[1:])):
        raise ValueError("S_list must be strictly increasing")

    def one_size(S):
        try:
            if mode == "analytic":
                opt = ideal_optimum(params.x, S)
                return (S, opt.Qx_star, opt.xi2_star, False)
            qx_opt, xi2, edge = exact_minimum(EnsembleSpec(S), params)
            return (S, qx_opt, xi2, edge)
        except Exception as exc:
            raise RuntimeError(f"minimization failed at S={S}: {exc}") from exc

    results = _threads.map_ordered(one_size, sizes)
    kept = [(s, q, v) for s, q, v, edge in results if not edge]
    dropped = [s for s, _, _, edge in results if edge]
    if dropped:
        warnings.warn(f"excluded boundary minima at S={dropped}", stacklevel=2)
    if len(kept) < 4:
        raise RuntimeError(f"only {len(kept)} non-boundary sizes; need at least 4")

    ln_s = np.log([p[0] for p in kept])
    ln_xi = np.log([p[2] for p in kept])
    slope, intercept = np.polyfit(ln_s, ln_xi, 1)
    fitted = slope * ln_s + intercept
    ss_res = float(np.sum((ln_xi - fitted) ** 2))
    ss_tot = float(np.sum((ln_xi - ln_xi.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else 1.0 - ss_res / ss_tot
    return ScalingFit(
        exponent=float(slope),
        prefactor=float(np.exp(intercept)),
        r_squared=float(min(max(r2, 0.0), 1.0)),
        points=tuple(kept),
    )
