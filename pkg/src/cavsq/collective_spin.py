"""Collective spin in the Dicke basis.

The ensemble of N two-level atoms is restricted to the symmetric manifold of
total spin S = N/2 with basis states |S, m>, m = -S..S.  Amplitudes of the
x-polarized coherent spin state are kept in the log domain so that ensembles
far beyond the factorial-overflow point (S ~ 85) stay exact to double
precision.  All observables needed here (first and second spin moments) only
couple basis states with |m - n| <= 2, so moments are evaluated from a banded
set of density-matrix factors in O(S) time without ever materializing the
(2S+1)^2 matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DegenerateDirectionError, IncompleteBandError, InvalidSpecError

__all__ = [
    "EnsembleSpec",
    "CssAmplitudes",
    "MomentSet",
    "SqueezeReport",
    "make_css",
    "ladder_element",
    "moments_from_band",
    "squeezing_parameter",
]


@dataclass(frozen=True)
class EnsembleSpec:
    """Total spin S (positive integer or half-integer) and derived basis data."""

    S: float

    def __post_init__(self):
        if not math.isfinite(self.S) or self.S <= 0:
            raise InvalidSpecError(f"total spin must be positive, got {self.S}")
        two_s = 2.0 * self.S
        if abs(two_s - round(two_s)) > 1e-9:
            raise InvalidSpecError(f"2S must be an integer, got S={self.S}")

    @property
    def dim(self) -> int:
        """Dimension of the Dicke manifold, 2S+1."""
        return int(round(2.0 * self.S)) + 1

    @property
    def m_values(self) -> np.ndarray:
        """Projection quantum numbers -S..S in unit steps."""
        return -self.S + np.arange(self.dim, dtype=float)


@dataclass(frozen=True)
class CssAmplitudes:
    """Log-domain amplitudes C_m of a coherent spin state along +x.

    ``logmag[i]`` is ln|C_m| for m = m_values[i]; ``sign[i]`` is +-1.  For the
    x-polarized state every sign is +1 and sum_m C_m^2 = 1.
    """

    logmag: np.ndarray
    sign: np.ndarray

    def amplitudes(self) -> np.ndarray:
        """Linear-domain amplitudes (tiny tails may underflow to zero)."""
        return self.sign * np.exp(self.logmag)


@dataclass(frozen=True)
class MomentSet:
    """First and symmetrized second spin moments, in (x, y, z) order.

    ``mean`` holds <S_x>, <S_y>, <S_z>; ``second[a, b]`` holds
    <S_a S_b + S_b S_a>/2.
    """

    mean: np.ndarray
    second: np.ndarray


@dataclass(frozen=True)
class SqueezeReport:
    """Squeezing parameter and the geometry it was extracted from.

    ``xi2`` is the minimal variance perpendicular to the mean-spin direction
    divided by the coherent-state reference S/2.  ``contrast`` is |<S>|/S.
    """

    xi2: float
    mean_spin_dir: np.ndarray
    min_var_dir: np.ndarray
    contrast: float


def make_css(spec: EnsembleSpec) -> CssAmplitudes:
    """Amplitudes of the coherent spin state polarized along +x.

    C_m = 2^-S sqrt((2S)! / ((S-m)!(S+m)!)), evaluated through log-gamma so
    arbitrarily large S never overflows.
    """
    S = spec.S
    m = spec.m_values
    logmag = (
        -S * math.log(2.0)
        + 0.5 * (gammaln(2.0 * S + 1.0) - gammaln(S - m + 1.0) - gammaln(S + m + 1.0))
    )
    return CssAmplitudes(logmag=logmag, sign=np.ones_like(logmag))


def ladder_element(S: float, m):
    """Raising-operator matrix element <m+1|S_+|m> = sqrt(S(S+1) - m(m+1)).

    Vectorized over ``m``; zero at the top of the ladder (m = S).
    """
    m_arr = np.asarray(m, dtype=float)
    if np.any(m_arr < -S - 1e-12) or np.any(m_arr > S + 1e-12):
        raise IndexError(f"m out of range [-{S}, {S}]")
    val = S * (S + 1.0) - m_arr * (m_arr + 1.0)
    out = np.sqrt(np.maximum(val, 0.0))
    return float(out) if np.isscalar(m) or out.ndim == 0 else out


def moments_from_band(spec: EnsembleSpec, amplitudes: CssAmplitudes, band) -> MomentSet:
    """Spin moments of the reduced state rho_{m,n} = C_m C_n f_{m,n}.

    ``band`` supplies the complex factors f_{m,n} (accumulated phase times
    cavity overlap) on the offsets |m - n| <= 2 through ``band.factor(k)``.
    S_z is diagonal, S_+- shift m by one and their products by at most two,
    so these offsets are sufficient for every requested observable.
    """
    for k in (0, 1, 2):
        if not band.has_offset(k):
            raise IncompleteBandError(f"band is missing offset {k}")
    S = spec.S
    m = spec.m_values
    lg = amplitudes.logmag
    sg = amplitudes.sign

    pop = np.exp(2.0 * lg) * band.factor(0)  # diagonal of rho
    w1 = np.exp(lg[:-1] + lg[1:]) * sg[:-1] * sg[1:] * band.factor(1)
    w2 = np.exp(lg[:-2] + lg[2:]) * sg[:-2] * sg[2:] * band.factor(2)

    a = ladder_element(S, m)  # a[i] = <m_i+1|S_+|m_i>
    a_prev_sq = np.concatenate(([0.0], a[:-1] ** 2))  # <m|S_+S_-|m>

    s_z = np.sum(pop * m)
    s_z2 = np.sum(pop * m * m)
    sp_sm_sym = np.sum(pop * (a_prev_sq + a**2))  # <S_+S_- + S_-S_+>
    s_plus = np.sum(w1 * a[:-1])
    sz_splus = np.sum(w1 * (2.0 * m[:-1] + 1.0) * a[:-1])  # <S_z S_+ + S_+ S_z>
    s_plus2 = np.sum(w2 * a[:-2] * a[1:-1])

    mean = np.array([s_plus.real, s_plus.imag, s_z.real])
    xx = (2.0 * s_plus2.real + sp_sm_sym.real) / 4.0
    yy = (sp_sm_sym.real - 2.0 * s_plus2.real) / 4.0
    zz = s_z2.real
    xy = s_plus2.imag / 2.0
    xz = sz_splus.real / 2.0
    yz = sz_splus.imag / 2.0
    second = np.array([[xx, xy, xz], [xy, yy, yz], [xz, yz, zz]])
    return MomentSet(mean=mean, second=second)


def _perpendicular_pair(n0: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal pair spanning the plane perpendicular to unit vector n0."""
    pivot = np.zeros(3)
    pivot[int(np.argmin(np.abs(n0)))] = 1.0
    e1 = np.cross(n0, pivot)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n0, e1)
    return e1, e2


def squeezing_parameter(spec: EnsembleSpec, moments: MomentSet) -> SqueezeReport:
    """Minimal perpendicular variance over S/2, from the 2x2 covariance.

    Builds an orthonormal pair spanning the plane perpendicular to the
    mean-spin direction, projects the symmetrized second moments onto it and
    takes the smaller eigenvalue in closed form.  The result is invariant
    under rotations of the pair about the mean-spin axis.
    """
    norm = float(np.linalg.norm(moments.mean))
    if norm < 1e-9 * spec.S:
        raise DegenerateDirectionError(
            f"mean spin length {norm:.3e} below 1e-9*S; squeezing undefined"
        )
    n0 = moments.mean / norm
    e1, e2 = _perpendicular_pair(n0)
    v11 = float(e1 @ moments.second @ e1)
    v22 = float(e2 @ moments.second @ e2)
    v12 = float(e1 @ moments.second @ e2)
    half_diff = 0.5 * (v11 - v22)
    radius = math.hypot(half_diff, v12)
    lam_min = 0.5 * (v11 + v22) - radius
    # eigenvector of the smaller eigenvalue, expressed back in 3-space
    if radius < 1e-300:
        vec = e1
    else:
        u = np.array([v12, lam_min - v11])
        if np.linalg.norm(u) < 1e-14 * max(abs(v11), abs(v22), 1.0):
            u = np.array([lam_min - v22, v12])
        if np.linalg.norm(u) == 0.0:
            u = np.array([1.0, 0.0])
        u /= np.linalg.norm(u)
        vec = u[0] * e1 + u[1] * e2
    xi2 = max(lam_min, 0.0) / (spec.S / 2.0)
    return SqueezeReport(
        xi2=xi2,
        mean_spin_dir=n0,
        min_var_dir=vec / np.linalg.norm(vec),
        contrast=norm / spec.S,
    )
