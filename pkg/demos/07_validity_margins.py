"""Scoring the closed-form models before trusting them.

Every analytic shortcut in this package has a validity window: the
dispersive shift must barely move the cavity line, the shearing strength
must sit between 1 and S, and the detuning decides which optimum formula
applies.  `validity` turns each condition into a numeric margin instead of
a silent assumption.
"""

from cavsq import DriveParams, PhysicalRates, ideal_optimum, validity

# a weakly coupled operating point; note how S = 50 leaves the shearing
# window 1 << Qx << S only marginally satisfied at its own optimum
params = DriveParams(kappa=4.0, Omega=0.01, beta0=1.0, x=1.0)
report = validity(params, S=50.0, Qx=7.86)
print(f"operating point: S = 50, x = 1, Omega/kappa = {params.Omega / params.kappa}")
print(f"detuning regime: {report.detuning_regime} "
      f"(bounds {report.detuning_lower:.3f} .. {report.detuning_upper:.3f})")
for name, value, ok in report.rows():
    print(f"  {name:22} = {value:10.4g}   {'ok' if ok else 'violated'}")

# the same machinery flags a strongly driven point
strong = DriveParams(kappa=4.0, Omega=0.4, beta0=1.0, x=0.5)
rep2 = validity(strong, S=50.0, Qx=40.0)
print("\nstrong coupling, small detuning:")
for name, value, ok in rep2.rows():
    print(f"  {name:22} = {value:10.4g}   {'ok' if ok else 'violated'}")

# attaching microscopic rates adds the dispersive-regime premises
g, Delta, Gamma = 0.2, 40.0, 1.0
rates = PhysicalRates(g=g, Gamma=Gamma, Delta=Delta, omega_a=2 * Delta,
                      omega_c=1e6, omega_l=1e6 + 2.0)
micro = DriveParams(kappa=4.0, Omega=2 * g**2 / Delta, beta0=1.0,
                    delta=-2.0, rates=rates)
print(f"\nwith rates attached (eta = {micro.eta:.3f}):")
for name, value, ok in validity(micro, S=50.0, Qx=8.0).rows():
    print(f"  {name:22} = {value:10.4g}   {'ok' if ok else 'violated'}")

# regime tags propagate into the optimum helpers
for x in (1.0, 500.0):
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        opt = ideal_optimum(x, 50.0)
    print(f"\nideal optimum at x = {x:g}: Qx* = {opt.Qx_star:.2f}, "
          f"xi^2* = {opt.xi2_star:.4f}  [{opt.regime} regime]")
