"""Free-space photon scattering and the closed-form optima.

Every scattered photon randomizes one atom's phase, shortening the mean
spin: at cooperativity eta the protocol costs R_x photons per atom.  The
Gaussian moment model folds that into the squeezing parameter; its minimum
over shearing strength tracks the closed-form optimum

    Q_scatt = (12 x S eta / (1 + x^2))^(1/3),
    xi2*    = 3 ((1 + x^2) / (12 x S eta))^(2/3)

at large detuning.  Note the verbatim "as-written" variant of the formula
is kept for comparison but is not physically meaningful away from tiny Q_x.
"""

import math

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from cavsq import ScatterModelInput, scatter_optimum, xi2_scatter, xi2_scatter_asymptotic
from cavsq.optimize import minimize_scatter_over_qx

OUT = __file__.replace(".py", ".png")
S, x = 1e4, 200.0

fig, ax = plt.subplots(figsize=(6.5, 4.5))
q_grid = np.geomspace(0.5, 300.0, 400)
for eta, style in ((2.0, "-"), (20.0, "--"), (math.inf, ":")):
    xi = [xi2_scatter(ScatterModelInput(Qx=float(q), x=x, S=S, eta=eta)) for q in q_grid]
    label = "eta = inf" if math.isinf(eta) else f"eta = {eta:g}"
    ax.loglog(q_grid, xi, style, label=label)
    res = minimize_scatter_over_qx(S, eta, x)
    print(f"{label:12}: min xi^2 = {res.value:.5f} at Q_x = {res.argmin:.2f}")
    if math.isfinite(eta):
        opt = scatter_optimum(x, S, eta)
        print(f"{'':12}  closed form ({opt.regime}): xi^2 = {opt.xi2_star:.5f} "
              f"at Q_scatt = {opt.Q_scatt:.2f}")

ax.set_xlabel("detuned shearing strength Q_x")
ax.set_ylabel("squeezing parameter")
ax.set_title(f"scattering limits the squeezing (S = {S:g}, x = {x:g})")
ax.legend()
fig.tight_layout()
fig.savefig(OUT, dpi=110)
print("wrote", OUT)

# the asymptotic three-term model is faithful while R_x stays small
inp = ScatterModelInput(Qx=10.0, x=x, S=S, eta=2.0)
print(f"\nat Q_x = 10: R_x = {inp.Rx:.4f}, full model {xi2_scatter(inp):.5f}, "
      f"asymptotic {xi2_scatter_asymptotic(10.0, x, S, 2.0):.5f}")
