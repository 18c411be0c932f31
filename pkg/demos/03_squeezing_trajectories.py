"""Squeezing trajectories against shearing strength.

Two classic scans with the exact banded simulator at S = 50:

* fixed small detuning (x = 1), coupling Omega swept: weaker coupling
  squeezes deeper but needs proportionally longer drive;
* fixed coupling (Omega = 0.2), detuning swept: both moderate and very
  large detuning beat the near-resonant drive once plotted against the
  detuning-weighted strength Q_x.

The dips recur before the spin decoheres: the ensemble squeezes more than
once.
"""

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from cavsq import DriveParams, EnsembleSpec, sweep_trajectory, time_for_shearing

OUT = __file__.replace(".py", ".png")
S = 50.0
spec = EnsembleSpec(S)
fig, axes = plt.subplots(1, 2, figsize=(11, 4))

for omega in (0.01, 0.2, 0.4):
    params = DriveParams(kappa=4.0, Omega=omega, beta0=1.0, x=1.0)
    t_grid = [time_for_shearing(params, S, Qx=q) for q in np.geomspace(0.1, 60.0, 250)]
    traj = sweep_trajectory(spec, params, t_grid)
    q = [pt.Q for pt, _, _ in traj.points]
    xi = [rep.xi2 for _, rep, _ in traj.points]
    axes[0].semilogx(q, xi, label=f"Omega = {omega}")
    best = traj.minimum
    print(f"Omega = {omega:4}: min xi^2 = {best[1].xi2:.4f} at Q = {best[0].Q:.2f}")
axes[0].set_xlabel("shearing strength Q")
axes[0].set_ylabel("squeezing parameter")
axes[0].set_title(f"S = {S:g}, x = 1")
axes[0].legend()

for x in (0.5, 1.0, 500.0):
    params = DriveParams(kappa=4.0, Omega=0.2, beta0=1.0, x=x)
    t_grid = [time_for_shearing(params, S, Qx=q) for q in np.geomspace(0.1, 60.0, 250)]
    traj = sweep_trajectory(spec, params, t_grid)
    qx = [pt.Qx for pt, _, _ in traj.points]
    xi = [rep.xi2 for _, rep, _ in traj.points]
    axes[1].semilogx(qx, xi, label=f"x = {x}")
    best = traj.minimum
    print(f"x = {x:5}: min xi^2 = {best[1].xi2:.4f} at Q_x = {best[0].Qx:.2f}")
axes[1].set_xlabel("detuned shearing strength Q_x")
axes[1].set_ylabel("squeezing parameter")
axes[1].set_title(f"S = {S:g}, Omega = 0.2")
axes[1].legend()

fig.tight_layout()
fig.savefig(OUT, dpi=110)
print("wrote", OUT)
