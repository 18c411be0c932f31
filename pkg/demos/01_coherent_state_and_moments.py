"""Coherent spin states and the squeezing parameter.

The simulation state space is the symmetric (fixed total spin) manifold of
an ensemble of N two-level atoms, S = N/2.  Everything starts from the
coherent spin state (CSS) polarized along +x: mean spin length S, isotropic
transverse variance S/2, squeezing parameter exactly 1.  This script walks
through those reference numbers and shows the log-domain amplitudes staying
exact far beyond the factorial overflow point.
"""

import numpy as np

from cavsq import (
    EnsembleSpec,
    MomentSet,
    make_css,
    moments_from_band,
    squeezing_parameter,
    build_phase_band,
    DriveParams,
)

# --- amplitudes -----------------------------------------------------------

for S in (0.5, 1.0, 50.0, 5000.0):
    spec = EnsembleSpec(S)
    css = make_css(spec)
    norm_err = abs(np.sum(np.exp(2 * css.logmag)) - 1.0)
    print(f"S = {S:6g}: dim = {spec.dim:5d}, CSS normalization error = {norm_err:.2e}")

spec = EnsembleSpec(1.0)
print("\nS = 1 amplitudes (should be 1/2, 1/sqrt2, 1/2):",
      np.round(make_css(spec).amplitudes(), 6))

# --- moments of the undisturbed state --------------------------------------

S = 50.0
spec = EnsembleSpec(S)
params = DriveParams(kappa=4.0, Omega=0.2, beta0=1.0, x=1.0)
band = build_phase_band(S, params, t=0.0)  # no drive time: identity factors
moments = moments_from_band(spec, make_css(spec), band)
print(f"\nCSS moments at S = {S:g}:")
print("  <S>           =", np.round(moments.mean, 10))
print("  Var(S_y), Var(S_z) =", moments.second[1, 1], ",", moments.second[2, 2])
print("  Casimir <S.S> =", np.trace(moments.second), " (S(S+1) =", S * (S + 1), ")")

report = squeezing_parameter(spec, moments)
print(f"  xi^2 = {report.xi2:.12f}, contrast = {report.contrast:.12f}")
print("  mean-spin direction =", np.round(report.mean_spin_dir, 8))
print("  min-variance direction =", np.round(report.min_var_dir, 8))

# --- a hand-made sheared moment set ----------------------------------------

# squeezing one transverse direction below S/2 while the other absorbs the
# excess: the parameter is the smaller eigenvalue over S/2
sheared = MomentSet(
    mean=np.array([S, 0.0, 0.0]),
    second=np.array([[S * S, 0.0, 0.0], [0.0, S / 4, 3.0], [0.0, 3.0, S]]),
)
rep = squeezing_parameter(spec, sheared)
print(f"\nsheared example: xi^2 = {rep.xi2:.6f} (below 1 means squeezing)")
