"""Closed-form squeezing models, validity diagnostics, and their optima.

Three tiers, each valid in a progressively narrower regime:

* the ideal detuned model xi2(Q_x) = 1/Q_x^2 + 2/(Q_x x) + Q_x^4/(24 S^2),
  with closed-form optima in an intermediate- and a large-detuning regime;
* a Gaussian moment model that folds free-space photon scattering (R_x
  photons per atom at cooperativity eta) into the transverse variances;
* its small-R_x asymptotic xi2(Q_x) = 1/Q_x^2 + 2/(Q_x x)
  + Q_x (x^2+1)/(6 x S eta), with closed-form scattering optima.

"Much less than" conditions are scored against a declared ratio threshold
(default 0.1) and surfaced in a ValidityReport rather than hard-coded.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

from .cavity_field import DriveParams, steady_field
from .errors import BelowRegimeError, ComplexDiscriminantError, RegimeWarning

__all__ = [
    "IdealModelInput",
    "ScatterModelInput",
    "ValidityReport",
    "IdealOptimum",
    "ScatterOptimum",
    "detuning_bounds",
    "xi2_ideal",
    "ideal_optimum",
    "xi2_scatter",
    "xi2_scatter_asymptotic",
    "scatter_optimum",
    "validity",
]

#: Ratio at or below which a "much less than" condition is scored as met.
MUCH_LESS_THAN = 0.1


@dataclass(frozen=True)
class IdealModelInput:
    """Arguments of the ideal detuned squeezing model (x must be nonzero)."""

    Qx: float
    x: float
    S: float

    def __post_init__(self):
        if self.x == 0.0:
            raise ValueError("the ideal model is undefined at zero detuning (x = 0)")
        if self.Qx <= 0.0:
            raise ValueError(f"Qx must be positive, got {self.Qx}")
        if self.S < 1.0:
            raise ValueError(f"S must be at least 1, got {self.S}")


@dataclass(frozen=True)
class ScatterModelInput:
    """Arguments of the scattering moment model, with derived intermediates.

    R_x is the mean number of photons scattered into free space per atom over
    the protocol; U and V are the exponents controlling transverse-variance
    growth and shear decay.  ``eta`` may be ``math.inf`` for the no-scattering
    limit.
    """

    Qx: float
    x: float
    S: float
    eta: float
    Rx: float = field(init=False)
    U: float = field(init=False)
    V: float = field(init=False)

    def __post_init__(self):
        if self.x == 0.0:
            raise ValueError("the scattering model is undefined at zero detuning")
        if self.S < 1.0:
            raise ValueError(f"S must be at least 1, got {self.S}")
        if not self.eta > 0.0:
            raise ValueError(f"eta must be positive, got {self.eta}")
        rx = self.Qx * (1.0 + self.x**2) / (8.0 * self.x * self.S * self.eta)
        curv = self.Qx**2 * (1.0 - 2.0 * rx / 3.0)
        u = 2.0 * self.Qx / (self.x * self.S) + curv / self.S
        v = self.Qx / (2.0 * self.x * self.S) + 2.0 * rx + curv / (4.0 * self.S)
        object.__setattr__(self, "Rx", rx)
        object.__setattr__(self, "U", u)
        object.__setattr__(self, "V", v)


@dataclass(frozen=True)
class IdealOptimum:
    Qx_star: float
    xi2_star: float
    regime: str  # "intermediate" | "large"


@dataclass(frozen=True)
class ScatterOptimum:
    Q_scatt: float
    xi2_star: float
    regime: str  # "small-detuning" | "large-detuning"


@dataclass(frozen=True)
class ValidityReport:
    """Numeric margins of the approximations behind the closed-form models.

    Each margin is the left-hand side of a "much less than one" condition;
    the paired flag records margin <= threshold.  ``detuning_regime``
    classifies |x| against the closed-form optimum bounds.  ``dispersive``
    lists (name, margin, ok) rows for the microscopic premises, present only
    when physical rates were supplied.
    """

    threshold: float
    small_shift_value: float
    small_shift: bool
    qx_lower_margin: float  # 1 / |Qx|
    qx_upper_margin: float  # |Qx| / S
    regime_q: bool
    detuning_regime: str  # "below" | "intermediate" | "large"
    detuning_lower: float
    detuning_upper: float
    dispersive: tuple[tuple[str, float, bool], ...] = ()

    def rows(self) -> list[tuple[str, float, bool]]:
        """(name, value, ok) per inequality, for tabular output."""
        out = [
            ("small_shift", self.small_shift_value, self.small_shift),
            ("qx_lower", self.qx_lower_margin, self.qx_lower_margin <= self.threshold),
            ("qx_upper", self.qx_upper_margin, self.qx_upper_margin <= self.threshold),
            ("detuning_lower", self.detuning_lower, self.detuning_regime != "below"),
            ("detuning_upper", self.detuning_upper, self.detuning_regime == "large"),
        ]
        out.extend(self.dispersive)
        return out


def detuning_bounds(S: float) -> tuple[float, float]:
    """(lower, upper) detuning bounds of the ideal closed-form optima.

    Below ``lower`` neither closed form applies; at and above ``upper`` the
    squeezing saturates at the one-axis-twisting limit.
    """
    lower = (5.0 / 2.0) ** 1.25 * 12.0**-0.25 * S**-0.5
    upper = 12.0 ** (1.0 / 6.0) * S ** (1.0 / 3.0)
    return lower, upper


def xi2_ideal(inp: IdealModelInput) -> float:
    """Ideal detuned squeezing parameter 1/Qx^2 + 2/(Qx x) + Qx^4/(24 S^2).

    The formula is a regime-limited approximation: outside its regime (for
    example negative x at large S) it can go below zero, which is impossible
    for a variance ratio; such evaluations return the raw value and raise a
    RegimeWarning.
    """
    val = 1.0 / inp.Qx**2 + 2.0 / (inp.Qx * inp.x) + inp.Qx**4 / (24.0 * inp.S**2)
    if val < 0.0:
        warnings.warn(
            f"ideal model out of regime: xi2={val:.3g} < 0 at Qx={inp.Qx}, x={inp.x}",
            RegimeWarning,
            stacklevel=2,
        )
    return val


def ideal_optimum(x: float, S: float) -> IdealOptimum:
    """Closed-form optimum of the ideal model at detuning x > 0.

    Intermediate regime: Qx* = 12^(1/5) S^(2/5) x^(-1/5) with
    xi2* = (5/2) 12^(-1/5) S^(-2/5) x^(-4/5).  Large-detuning regime
    (x >> 12^(1/6) S^(1/3)): Qx* = 12^(1/6) S^(1/3) with
    xi2* = (3/2) 12^(-1/3) S^(-2/3).  Between the two (within a factor 10 of
    the bound) both candidates are scored against the full model and the
    better one is returned with a RegimeWarning.
    """
    if x <= 0.0:
        raise ValueError(f"detuning x must be positive, got {x}")
    if S < 1.0:
        raise ValueError(f"S must be at least 1, got {S}")
    lower, upper = detuning_bounds(S)
    if x < lower:
        raise BelowRegimeError(
            f"x={x} is below the closed-form validity bound {lower:.6g}", bound=lower
        )
    qx_mid = 12.0**0.2 * S**0.4 * x**-0.2
    xi_mid = 2.5 * 12.0**-0.2 * S**-0.4 * x**-0.8
    qx_big = 12.0 ** (1.0 / 6.0) * S ** (1.0 / 3.0)
    xi_big = 1.5 * 12.0 ** (-1.0 / 3.0) * S ** (-2.0 / 3.0)
    if x <= MUCH_LESS_THAN * upper:
        return IdealOptimum(qx_mid, xi_mid, "intermediate")
    if x >= upper / MUCH_LESS_THAN:
        return IdealOptimum(qx_big, xi_big, "large")
    # boundary zone: score both candidate strengths against the full model
    full_mid = xi2_ideal(IdealModelInput(Qx=qx_mid, x=x, S=S))
    full_big = xi2_ideal(IdealModelInput(Qx=qx_big, x=x, S=S))
    warnings.warn(
        f"x={x} sits between the optimum regimes (bound {upper:.6g}); "
        "returning the better-scoring branch",
        RegimeWarning,
        stacklevel=2,
    )
    if full_mid <= full_big:
        return IdealOptimum(qx_mid, xi_mid, "intermediate")
    return IdealOptimum(qx_big, xi_big, "large")


def xi2_scatter(inp: ScatterModelInput, formula_mode: str = "standard") -> float:
    """Squeezing parameter of the scattering moment model.

    The transverse moments are
        <Sy~^2> = (S/2) [1 + S exp(-4 Rx) (1 - exp(-U))],
        <Sz^2>  = S/2,
        W = <Sy~ Sz + Sz Sy~> = S (1 - Rx) Qx exp(-V),
    and the minimal variance in the transverse plane gives

        xi2 = [<Sy~^2> + <Sz^2> - sqrt((<Sy~^2> - <Sz^2>)^2 + W^2)] / S.

    ``formula_mode="standard"`` uses that minimal-variance form;
    ``"as-written"`` leaves the first difference unsquared under the root,
    raising ComplexDiscriminantError when that discriminant goes negative.
    """
    if formula_mode not in ("standard", "as-written"):
        raise ValueError(f"formula_mode must be 'standard' or 'as-written', got {formula_mode!r}")
    S = inp.S
    sy2 = 0.5 * S * (1.0 + S * math.exp(-4.0 * inp.Rx) * -math.expm1(-inp.U))
    sz2 = 0.5 * S
    w = S * (1.0 - inp.Rx) * inp.Qx * math.exp(-inp.V)
    if sy2 < 0.0:
        warnings.warn(
            f"scattering model out of regime: <Sy~^2>={sy2:.3g} < 0 at "
            f"Qx={inp.Qx}, Rx={inp.Rx:.3g}",
            RegimeWarning,
            stacklevel=2,
        )
    if formula_mode == "standard":
        disc = (sy2 - sz2) ** 2 + w**2
    else:
        disc = sy2 - sz2 + w**2
        if disc < 0.0:
            raise ComplexDiscriminantError(
                f"negative discriminant {disc:.6g} in as-written mode at Qx={inp.Qx}",
                discriminant=disc,
            )
    return (sy2 + sz2 - math.sqrt(disc)) / S


def xi2_scatter_asymptotic(Qx: float, x: float, S: float, eta: float) -> float:
    """Small-R_x asymptotic 1/Qx^2 + 2/(Qx x) + Qx (x^2+1) / (6 x S eta).

    Warns when R_x is not small, where the expansion loses accuracy.
    """
    if Qx <= 0.0:
        raise ValueError(f"Qx must be positive, got {Qx}")
    inp = ScatterModelInput(Qx=Qx, x=x, S=S, eta=eta)
    if inp.Rx > MUCH_LESS_THAN:
        warnings.warn(
            f"asymptotic scattering model outside its regime: Rx={inp.Rx:.3g}",
            RegimeWarning,
            stacklevel=2,
        )
    return 1.0 / Qx**2 + 2.0 / (Qx * x) + Qx * (x**2 + 1.0) / (6.0 * x * S * eta)


def scatter_optimum(x: float, S: float, eta: float) -> ScatterOptimum:
    """Closed-form optimum of the scattering-limited squeezing.

    Small-detuning branch: Q_scatt = sqrt(12 S eta / (x^2+1)) with
    xi2* = sqrt(4 (x^2+1) / (3 S eta x^2)).  Large-detuning branch
    (x >> 12^(1/6) S^(1/3)): Q_scatt = (12 x S eta / (1+x^2))^(1/3) with
    xi2* = 3 ((1+x^2) / (12 x S eta))^(2/3).  Requires a large collective
    cooperativity; warns when S*eta < 10.
    """
    if x <= 0.0:
        raise ValueError(f"detuning x must be positive, got {x}")
    if not eta > 0.0:
        raise ValueError(f"eta must be positive, got {eta}")
    if S * eta < 10.0:
        warnings.warn(
            f"collective cooperativity S*eta={S * eta:.3g} < 10; optimum unreliable",
            RegimeWarning,
            stacklevel=2,
        )
    _, upper = detuning_bounds(S)
    if x >= upper:
        q = (12.0 * x * S * eta / (1.0 + x**2)) ** (1.0 / 3.0)
        xi = 3.0 * ((1.0 + x**2) / (12.0 * x * S * eta)) ** (2.0 / 3.0)
        return ScatterOptimum(q, xi, "large-detuning")
    q = math.sqrt(12.0 * S * eta / (x**2 + 1.0))
    xi = math.sqrt(4.0 * (x**2 + 1.0) / (3.0 * S * eta * x**2))
    return ScatterOptimum(q, xi, "small-detuning")


def validity(params: DriveParams, S: float, Qx: float) -> ValidityReport:
    """Score every validity condition of the closed-form models.

    Reports the dispersive-shift smallness, the shearing-strength window
    1 << |Qx| << S, and the detuning-regime classification; when physical
    rates are attached to ``params`` the dispersive-regime premises
    (|Delta| >> kappa, Gamma, g and low intracavity photon number) are
    scored as well.  Purely diagnostic: never raises.
    """
    thr = MUCH_LESS_THAN
    x = params.x
    shift = (
        (params.Omega / params.kappa)
        * math.sqrt(S / 2.0)
        * (1.0 + abs(x))
        / (1.0 + x**2)
    )
    q_lo = math.inf if Qx == 0.0 else 1.0 / abs(Qx)
    q_hi = abs(Qx) / S
    lower, upper = detuning_bounds(S)
    ax = abs(x)
    if ax < lower:
        regime = "below"
    elif ax < upper:
        regime = "intermediate"
    else:
        regime = "large"
    dispersive: list[tuple[str, float, bool]] = []
    if params.rates is not None:
        r = params.rates
        big_delta = abs(r.Delta)
        for name, rate in (("kappa/Delta", params.kappa), ("Gamma/Delta", r.Gamma), ("g/Delta", r.g)):
            margin = rate / big_delta
            dispersive.append((name, margin, margin <= thr))
        # worst-case steady photon number over the spin branches
        n_max = max(
            abs(steady_field(params, -S)) ** 2,
            abs(steady_field(params, S)) ** 2,
            abs(steady_field(params, max(-S, min(S, -params.delta / params.Omega if params.Omega else 0.0)))) ** 2,
        )
        photon_margin = n_max * (r.g / big_delta) ** 2
        dispersive.append(("photons/(Delta/g)^2", photon_margin, photon_margin <= thr))
    return ValidityReport(
        threshold=thr,
        small_shift_value=shift,
        small_shift=shift <= thr,
        qx_lower_margin=q_lo,
        qx_upper_margin=q_hi,
        regime_q=(q_lo <= thr and q_hi <= thr),
        detuning_regime=regime,
        detuning_lower=lower,
        detuning_upper=upper,
        dispersive=tuple(dispersive),
    )
