"""Reduced spin-state assembly, squeezing trajectories, and their minima.

``evolve`` glues the band of decoherence factors from cavity_field onto the
coherent-spin machinery of collective_spin; ``sweep_trajectory`` maps a time
grid to squeezing reports and refines the best point by golden section.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _threads
from .cavity_field import DriveParams, build_phase_band
from .collective_spin import (
    EnsembleSpec,
    MomentSet,
    SqueezeReport,
    make_css,
    moments_from_band,
    squeezing_parameter,
)
from .errors import DegenerateDirectionError, NoFiniteTimeError

__all__ = [
    "ShearingPoint",
    "TrajectoryResult",
    "shearing_strength",
    "time_for_shearing",
    "evolve",
    "sweep_trajectory",
]

#: Contrast below which a sweep reports xi2 = +inf instead of raising.
DECOHERED_CONTRAST = 1e-9


@dataclass(frozen=True)
class ShearingPoint:
    """Bare (Q) and detuning-weighted (Q_x) shearing strengths at time t."""

    Q: float
    Qx: float
    t: float


@dataclass(frozen=True)
class TrajectoryResult:
    """Per-grid-point results plus the refined minimum of the sweep.

    ``points`` is ordered by strictly increasing time; each element is a
    (ShearingPoint, SqueezeReport, MomentSet) triple.  ``minimum`` is the
    triple with the smallest squeezing parameter after local refinement
    (earliest time wins ties).
    """

    points: list[tuple[ShearingPoint, SqueezeReport, MomentSet]]
    minimum: tuple[ShearingPoint, SqueezeReport, MomentSet]


def shearing_strength(params: DriveParams, S: float, t: float) -> ShearingPoint:
    """Dimensionless shearing strengths Q = 4 S beta0^2 Omega^2 t / kappa
    and Q_x = 4 Q x / (1 + x^2)^2 accumulated after drive time t."""
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    q = 4.0 * S * params.beta0**2 * params.Omega**2 * t / params.kappa
    qx = 4.0 * q * params.x / (1.0 + params.x**2) ** 2
    return ShearingPoint(Q=q, Qx=qx, t=t)


def time_for_shearing(
    params: DriveParams, S: float, Q: float | None = None, Qx: float | None = None
) -> float:
    """Drive time that reaches the requested Q (or Q_x); inverse of
    shearing_strength to double rounding."""
    if (Q is None) == (Qx is None):
        raise ValueError("give exactly one of Q or Qx")
    if Qx is not None:
        if Qx == 0.0:
            return 0.0
        if params.x == 0.0:
            raise NoFiniteTimeError("Q_x stays zero at zero detuning")
        Q = Qx * (1.0 + params.x**2) ** 2 / (4.0 * params.x)
    if Q == 0.0:
        return 0.0
    if params.Omega == 0.0 or params.beta0 == 0.0:
        raise NoFiniteTimeError("no finite time reaches Q > 0 without coupling and drive")
    return Q * params.kappa / (4.0 * S * params.beta0**2 * params.Omega**2)


def evolve(
    spec: EnsembleSpec,
    params: DriveParams,
    t: float,
    phase_mode: str = "analytic",
    include_overlap: bool = True,
) -> tuple[MomentSet, SqueezeReport]:
    """Moments and squeezing report of the driven ensemble at time t.

    Builds the |m - n| <= 2 phase band, reduces it to spin moments, and
    extracts the squeezing parameter; O(S) time and memory.
    """
    band = build_phase_band(spec.S, params, t, phase_mode, include_overlap)
    moments = moments_from_band(spec, make_css(spec), band)
    return moments, squeezing_parameter(spec, moments)


def _sentinel_report(spec: EnsembleSpec, moments: MomentSet) -> SqueezeReport:
    nan3 = np.full(3, math.nan)
    contrast = float(np.linalg.norm(moments.mean)) / spec.S
    return SqueezeReport(
        xi2=math.inf, mean_spin_dir=nan3, min_var_dir=nan3, contrast=contrast
    )


def _evolve_for_sweep(spec, params, t, phase_mode, include_overlap):
    """Like evolve, but fully decohered states return xi2 = +inf."""
    band = build_phase_band(spec.S, params, t, phase_mode, include_overlap)
    moments = moments_from_band(spec, make_css(spec), band)
    if np.linalg.norm(moments.mean) < DECOHERED_CONTRAST * spec.S:
        return moments, _sentinel_report(spec, moments)
    try:
        return moments, squeezing_parameter(spec, moments)
    except DegenerateDirectionError:
        return moments, _sentinel_report(spec, moments)


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _refine_minimum(xi2_of_t, lo, hi, t_best, f_best, rel_tol):
    """Golden-section refinement of a bracketed minimum; smallest value wins,
    earliest time on ties."""
    a, b = lo, hi
    tol = rel_tol * max(abs(hi), abs(lo), 1e-300)
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = xi2_of_t(c), xi2_of_t(d)
    for cand_t, cand_f in ((c, fc), (d, fd)):
        if cand_f < f_best or (cand_f == f_best and cand_t < t_best):
            t_best, f_best = cand_t, cand_f
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = xi2_of_t(c)
            if fc < f_best or (fc == f_best and c < t_best):
                t_best, f_best = c, fc
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = xi2_of_t(d)
            if fd < f_best or (fd == f_best and d < t_best):
                t_best, f_best = d, fd
    return t_best, f_best


def sweep_trajectory(
    spec: EnsembleSpec,
    params: DriveParams,
    t_grid,
    phase_mode: str = "analytic",
    include_overlap: bool = True,
    refine_rel_tol: float = 1e-4,
) -> TrajectoryResult:
    """Squeezing trajectory over ``t_grid`` with a refined minimum.

    Grid points are evaluated independently (thread pool capped by
    CAVSQ_THREADS) and assembled in order.  The smallest grid value is then
    refined by golden section between its neighbors to relative time
    tolerance ``refine_rel_tol``; on ties the earliest time wins.
    """
    t_arr = np.asarray(t_grid, dtype=float)
    if t_arr.ndim != 1 or t_arr.size == 0:
        raise ValueError("time grid must be a nonempty 1-d sequence")
    if t_arr.size > 1 and not np.all(np.diff(t_arr) > 0):
        raise ValueError("time grid must be strictly increasing")
    if t_arr[0] < 0:
        raise ValueError("times must be non-negative")

    def run_point(t):
        moments, report = _evolve_for_sweep(spec, params, t, phase_mode, include_overlap)
        return shearing_strength(params, spec.S, t), report, moments

    points = _threads.map_ordered(run_point, t_arr.tolist())

    xi2s = np.array([rep.xi2 for _, rep, _ in points])
    i_best = int(np.argmin(xi2s))  # argmin returns the first (earliest) tie
    minimum = points[i_best]
    if refine_rel_tol and np.isfinite(xi2s[i_best]) and t_arr.size > 1:
        lo = t_arr[max(i_best - 1, 0)]
        hi = t_arr[min(i_best + 1, t_arr.size - 1)]
        if hi > lo:
            def xi2_of_t(t):
                return _evolve_for_sweep(spec, params, t, phase_mode, include_overlap)[1].xi2

            t_ref, _ = _refine_minimum(
                xi2_of_t, lo, hi, float(t_arr[i_best]), float(xi2s[i_best]), refine_rel_tol
            )
            minimum = run_point(t_ref)
    return TrajectoryResult(points=points, minimum=minimum)
