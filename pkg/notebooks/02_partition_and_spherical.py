"""
Conical partition of unity and spherical functions
==================================================

The A2 charts on the unit circle, then phi_lambda on H2 and H3 by quadrature
over K against the one-dimensional closed forms.
"""

# %%
import os
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from symkernel import barycentric as bary
from symkernel import spherical as sph
from symkernel.rootsys import build_root_system

out = Path(os.environ.get("NOTEBOOK_OUT", "notebook_out"))
out.mkdir(exist_ok=True)

# %% charts on the circle
rs = build_root_system("SL3R")
c1 = bary.select_c1(rs)
prof = bary.CutoffProfile(c1)
th = np.linspace(0, 2 * np.pi, 721)
u = np.stack([np.cos(th), np.sin(th)], -1)
fig, ax = plt.subplots(figsize=(7, 3.5))
for c in bary.charts(rs, prof):
    ax.plot(th, bary.normalized_chart(c, u), lw=1)
ax.set_xlabel("angle")
ax.set_ylabel("chart value")
fig.savefig(out / "a2_charts.png", dpi=120)
print("C1 =", c1, " max |sum - 1| =", bary.partition_deviation(rs, prof))
for rep in (bary.support_verify(c) for c in bary.charts(rs, prof)):
    print(f"{rep.chart:12s} kappa={rep.kappa:.3f}")

# %% quadrature against closed forms; the error estimate bounds the difference
lam = np.linspace(0, 8, 17)
for label in ("H2", "H3"):
    rs1 = build_root_system(label)
    for r in (0.5, 3.0, 8.0):
        q = sph.phi_quadrature(rs1, lam[:, None], np.array([r]))
        closed = sph.phi_closed_form(rs1, lam, r).value
        print(f"{label} r={r:4.1f} max diff {np.max(np.abs(q.value - closed)):.1e} "
              f"max estimate {np.max(q.error):.1e}")

# %% |phi_lambda| stays under phi_0, which tracks (1 + r) exp(-r) on H3
rs3 = build_root_system("H3")
r = np.linspace(0.01, 8, 200)
fig, ax = plt.subplots(figsize=(6, 4.5))
for L in (0.0, 1.0, 4.0):
    ax.semilogy(r, [abs(np.ravel(sph.phi_closed_form(rs3, np.array([L]), x).value)[0]) for x in r],
                label=f"lambda={L}")
ax.semilogy(r, sph.phi0_envelope(rs3, r[:, None]), "k--", label="(1+r)exp(-r)")
ax.set_xlabel("r")
ax.legend()
fig.savefig(out / "h3_spherical.png", dpi=120)
