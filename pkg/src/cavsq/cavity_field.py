"""Driven-cavity branch fields and traced-environment phase factors.

Each spin projection m drives the cavity into a coherent state whose
amplitude obeys a damped, detuned linear response.  Tracing out the output
continuum leaves a complex phase factor phi_{m,n} between branches m and n;
tracing out the intracavity mode contributes a coherent-state overlap
<phi_n|phi_m> on top.

Units: every rate (kappa, delta, Omega, g, Gamma, ...) is an angular
frequency in rad/us and times are in us.  Only dimensionless combinations
(x, Q, Q_x) enter the physics, so any consistent unit pair works.

Conventions: the drive is beta_in(t) = i sqrt(kappa) beta0 with beta0 real
and non-negative; the normalized detuning x is defined through
delta = -x kappa / 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from types import MappingProxyType
from typing import Mapping

import numpy as np

from .errors import IncompleteBandError

__all__ = [
    "PhysicalRates",
    "DriveParams",
    "BranchField",
    "PhaseBand",
    "transient_field",
    "steady_field",
    "phase_numeric",
    "phase_analytic",
    "coherent_overlap",
    "build_phase_band",
]


@dataclass(frozen=True)
class PhysicalRates:
    """Optional microscopic rate bundle (all rad/us).

    ``Delta`` is the atom-cavity detuning magnitude omega_a/2 of the
    symmetric three-level scheme; the dispersive shift follows as
    Omega = 2 g^2 / |Delta| and the single-atom cooperativity as
    eta = 4 g^2 / (kappa Gamma).
    """

    g: float
    Gamma: float
    Delta: float
    omega_a: float
    omega_c: float
    omega_l: float


@dataclass(frozen=True)
class DriveParams:
    """Cavity linewidth, detuning, dispersive shift and drive amplitude.

    Exactly one of ``x`` (normalized detuning) or ``delta`` (rad/us) may be
    given; the other is derived from delta = -x kappa / 2.  If both are given
    they must agree to 1e-12.
    """

    kappa: float
    Omega: float
    beta0: float
    x: float | None = None
    delta: float | None = None
    rates: PhysicalRates | None = None

    def __post_init__(self):
        if not (self.kappa > 0):
            raise ValueError(f"kappa must be positive, got {self.kappa}")
        if self.beta0 < 0:
            raise ValueError(f"beta0 is a real non-negative amplitude, got {self.beta0}")
        if self.x is None and self.delta is None:
            raise ValueError("one of x or delta is required")
        if self.x is None:
            object.__setattr__(self, "x", -2.0 * self.delta / self.kappa)
        elif self.delta is None:
            object.__setattr__(self, "delta", -self.x * self.kappa / 2.0)
        else:
            implied = -self.x * self.kappa / 2.0
            if abs(self.delta - implied) > 1e-12 * max(1.0, abs(self.delta)):
                raise ValueError(
                    f"inconsistent detuning: delta={self.delta} but -x*kappa/2={implied}"
                )
        if self.rates is not None:
            r = self.rates
            implied_omega = 2.0 * r.g**2 / abs(r.Delta)
            if abs(self.Omega - implied_omega) > 1e-9 * abs(implied_omega):
                raise ValueError(
                    f"rates imply Omega={implied_omega}, got Omega={self.Omega}"
                )
            implied_delta = r.omega_c - r.omega_l
            if abs(self.delta - implied_delta) > 1e-9 * max(1.0, abs(implied_delta)):
                raise ValueError(
                    f"rates imply delta={implied_delta}, got delta={self.delta}"
                )
            if self.eta <= 0:
                raise ValueError("cooperativity 4g^2/(kappa*Gamma) must be positive")

    @property
    def eta(self) -> float:
        """Single-atom cooperativity 4 g^2 / (kappa Gamma); requires rates."""
        if self.rates is None:
            raise ValueError("eta requires the physical rate bundle")
        return 4.0 * self.rates.g**2 / (self.kappa * self.rates.Gamma)


@dataclass(frozen=True)
class BranchField:
    """Intracavity amplitude of one spin branch, transient or steady."""

    m: float
    value: complex
    mode: str  # "transient" | "steady"

    @classmethod
    def at_time(cls, params: DriveParams, m: float, t: float) -> "BranchField":
        return cls(m=m, value=complex(transient_field(params, m, t)), mode="transient")

    @classmethod
    def steady(cls, params: DriveParams, m: float) -> "BranchField":
        return cls(m=m, value=complex(steady_field(params, m)), mode="steady")


def _pole(params: DriveParams, m):
    """Complex response pole kappa/2 + i(delta + Omega m) of branch m."""
    return params.kappa / 2.0 + 1j * (params.delta + params.Omega * np.asarray(m, dtype=float))


def _rise(z):
    """1 - exp(-z) for complex z (the driven-cavity rise factor)."""
    return 1.0 - np.exp(-z)


def steady_field(params: DriveParams, m):
    """Long-time branch amplitude kappa beta0 / (kappa/2 + i(delta + Omega m))."""
    out = params.kappa * params.beta0 / _pole(params, m)
    return complex(out) if np.isscalar(m) else out


def transient_field(params: DriveParams, m, t: float):
    """Branch amplitude at time t >= 0 from an empty cavity, constant drive.

    Equals the steady value times (1 - exp(-(kappa/2 + i(delta+Omega m)) t)),
    so it converges to steady_field with error <= exp(-kappa t / 2).
    """
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    pole = _pole(params, m)
    out = params.kappa * params.beta0 / pole * _rise(pole * t)
    return complex(out) if np.isscalar(m) else out


def coherent_overlap(phi_m, phi_n):
    """Coherent-state inner product <phi_n|phi_m>."""
    phi_m = np.asarray(phi_m)
    phi_n = np.asarray(phi_n)
    return np.exp(
        -0.5 * np.abs(phi_m) ** 2 - 0.5 * np.abs(phi_n) ** 2 + np.conj(phi_n) * phi_m
    )


def _time_integral_single(params: DriveParams, m, t: float):
    """int_0^t phi_m(t') dt' in closed form."""
    pole = _pole(params, m)
    f = params.kappa * params.beta0 / pole
    return f * (t - _rise(pole * t) / pole)


def _time_integral_pair(params: DriveParams, m, n, t: float):
    """int_0^t conj(phi_n(t')) phi_m(t') dt' in closed form.

    The integrand is a sum of four exponentials; each antiderivative is
    exact, so the only error is double rounding.
    """
    pm = _pole(params, m)
    pn_c = np.conj(_pole(params, n))
    fm = params.kappa * params.beta0 / pm
    fn_c = params.kappa * params.beta0 / pn_c
    both = pn_c + pm  # real part = kappa > 0, never zero
    return fn_c * fm * (
        t - _rise(pn_c * t) / pn_c - _rise(pm * t) / pm + _rise(both * t) / both
    )


def _phase_exact(params: DriveParams, m, n, t: float):
    """Continuum-trace phase phi_{m,n}(t) with transient fields, exact forms.

    Four contributions: the drive-induced phase difference between the two
    branches, the norm decay of each branch into the continuum, and the
    branch cross term.  The real part is -kappa/2 int |phi_m - phi_n|^2 <= 0.
    """
    kappa, beta0 = params.kappa, params.beta0
    drive = -1j * kappa * beta0 * (
        _time_integral_single(params, m, t).imag - _time_integral_single(params, n, t).imag
    )
    norm_n = -0.5 * kappa * _time_integral_pair(params, n, n, t).real
    norm_m = -0.5 * kappa * _time_integral_pair(params, m, m, t).real
    cross = kappa * _time_integral_pair(params, m, n, t)
    return drive + norm_n + norm_m + cross


def phase_numeric(params: DriveParams, m, n, t: float):
    """Accumulated phase and cavity overlap between branches m and n at t.

    Integrates the transient-field phase exactly (the integrands are products
    of exponentials, so closed-form antiderivatives are used; accuracy is set
    by double rounding, far below 1e-12).  Also returns the coherent-state
    overlap <phi_n(t)|phi_m(t)>.
    """
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    phi = _phase_exact(params, m, n, t)
    ovl = coherent_overlap(transient_field(params, m, t), transient_field(params, n, t))
    if np.isscalar(m) and np.isscalar(n):
        return complex(phi), complex(ovl)
    return phi, ovl


def phase_analytic(params: DriveParams, m, n, t: float):
    """Long-time phase rate times t, with steady branch fields.

    phi_{m,n} = i |phi_m|^2 |phi_n|^2 Omega^2 t / (kappa beta0^2) * {
        (kappa^2/4 + delta^2)/(Omega kappa) (n - m)
        + (delta/kappa)(n^2 - m^2)
        + (Omega/kappa) n m (n - m)
        + i (n - m)^2 / 2 }

    Valid for t >> 1/kappa where the transient has died out; exactly
    Hermitian-symmetric with non-positive real part.  The zero-drive limit
    beta0 = 0 is taken as zero phase.
    """
    if params.beta0 == 0.0:
        shape = np.broadcast(np.asarray(m, dtype=float), np.asarray(n, dtype=float)).shape
        zero = np.zeros(shape, dtype=complex)
        return complex(0.0) if zero.shape == () else zero
    kappa, delta, omega = params.kappa, params.delta, params.Omega
    m_arr = np.asarray(m, dtype=float)
    n_arr = np.asarray(n, dtype=float)
    amp2_m = np.abs(steady_field(params, m_arr)) ** 2
    amp2_n = np.abs(steady_field(params, n_arr)) ** 2
    prefac = amp2_m * amp2_n * omega**2 * t / (kappa * params.beta0**2)
    diff = n_arr - m_arr
    brace = (
        (kappa**2 / 4.0 + delta**2) / (omega * kappa) * diff
        + (delta / kappa) * (n_arr**2 - m_arr**2)
        + (omega / kappa) * n_arr * m_arr * diff
        + 0.5j * diff**2
    )
    out = 1j * prefac * brace
    return complex(out) if np.isscalar(m) and np.isscalar(n) else out


@dataclass(frozen=True)
class PhaseBand:
    """Phase factors and cavity overlaps on the offsets |m - n| <= 2.

    ``phi[k][i]`` holds phi_{m_i, m_i + k} and ``overlap[k][i]`` holds
    <phi_{m_i+k}|phi_{m_i}> for m_i = -S + i; offsets -1, -2 follow from
    Hermitian symmetry.  Construction checks the diagonal (zero phase, unit
    overlap) and that the combined factor never exceeds unit magnitude.
    """

    S: float
    phi: Mapping[int, np.ndarray]
    overlap: Mapping[int, np.ndarray]

    def __post_init__(self):
        dim = int(round(2.0 * self.S)) + 1
        object.__setattr__(self, "phi", MappingProxyType(dict(self.phi)))
        object.__setattr__(self, "overlap", MappingProxyType(dict(self.overlap)))
        for table, name in ((self.phi, "phi"), (self.overlap, "overlap")):
            for k, arr in table.items():
                if k not in (0, 1, 2):
                    raise ValueError(f"{name} offset must be in {{0, 1, 2}}, got {k}")
                if arr.shape != (dim - k,):
                    raise ValueError(
                        f"{name}[{k}] must have length {dim - k}, got {arr.shape}"
                    )
        if set(self.phi) != set(self.overlap):
            raise ValueError("phi and overlap must cover the same offsets")
        if 0 in self.phi:
            if np.any(np.abs(self.phi[0]) > 1e-10):
                raise ValueError("diagonal phase must vanish")
            if np.any(np.abs(self.overlap[0] - 1.0) > 1e-10):
                raise ValueError("diagonal overlap must be one")
        for k in self.phi:
            mag = np.abs(np.exp(self.phi[k]) * self.overlap[k])
            if np.any(mag > 1.0 + 1e-10):
                raise ValueError(f"offset {k}: |exp(phi)*overlap| exceeds 1")

    def has_offset(self, k: int) -> bool:
        return abs(k) in self.phi

    def factor(self, k: int) -> np.ndarray:
        """Combined decoherence factor exp(phi_k) * overlap_k for offset k >= 0."""
        if k not in self.phi:
            raise IncompleteBandError(f"band is missing offset {k}")
        return np.exp(self.phi[k]) * self.overlap[k]

    def entry(self, m: float, n: float) -> tuple[complex, complex]:
        """(phi_{m,n}, overlap_{m,n}) for a single in-band pair."""
        k = int(round(n - m))
        if abs(k) not in self.phi:
            raise IncompleteBandError(f"band is missing offset {abs(k)}")
        i = int(round(min(m, n) + self.S))
        phi = self.phi[abs(k)][i]
        ovl = self.overlap[abs(k)][i]
        if k >= 0:
            return complex(phi), complex(ovl)
        return complex(np.conj(phi)), complex(np.conj(ovl))


def build_phase_band(
    S: float,
    params: DriveParams,
    t: float,
    phase_mode: str = "analytic",
    include_overlap: bool = True,
) -> PhaseBand:
    """Assemble the banded phase factors for all projections of spin S.

    ``phase_mode`` selects the exact transient integrals ("numeric") or the
    long-time steady-field rate ("analytic") for the continuum phase.  The
    cavity overlap always uses the transient fields at time t, so the band is
    exact at t = 0 in either mode; ``include_overlap=False`` drops it,
    keeping only the continuum-trace factor.
    """
    if phase_mode not in ("analytic", "numeric"):
        raise ValueError(f"phase_mode must be 'analytic' or 'numeric', got {phase_mode!r}")
    if t < 0:
        raise ValueError(f"time must be non-negative, got {t}")
    dim = int(round(2.0 * S)) + 1
    m_all = -S + np.arange(dim, dtype=float)
    fields = transient_field(params, m_all, t) if include_overlap else None

    phi: dict[int, np.ndarray] = {0: np.zeros(dim, dtype=complex)}
    overlap: dict[int, np.ndarray] = {0: np.ones(dim, dtype=complex)}
    for k in (1, 2):
        count = max(dim - k, 0)
        m_lo = m_all[:count]
        n_hi = m_lo + k
        if phase_mode == "numeric":
            phi[k] = np.atleast_1d(_phase_exact(params, m_lo, n_hi, t))
        else:
            phi[k] = np.atleast_1d(np.asarray(phase_analytic(params, m_lo, n_hi, t)))
        if include_overlap:
            overlap[k] = np.atleast_1d(coherent_overlap(fields[:count], fields[k:]))
        else:
            overlap[k] = np.ones(count, dtype=complex)
    return PhaseBand(S=S, phi=phi, overlap=overlap)
