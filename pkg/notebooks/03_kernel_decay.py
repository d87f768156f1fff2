"""
Schrodinger kernel decay
========================

The H3 kernel against its closed form, time-decay slopes in both regimes, and
the local slope of the rank-two inner integral, which reaches -D/2 = -4 only
past t ~ 10.
"""

# %%
import os
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from symkernel import kernel as kern
from symkernel.rootsys import build_root_system

out = Path(os.environ.get("NOTEBOOK_OUT", "notebook_out"))
out.mkdir(exist_ok=True)

# %% H3: exact value sqrt(pi) / (2 (it)^(3/2)) (r / sinh r) exp(i r^2 / 4t)
h3 = build_root_system("H3")
for t, r in ((0.1, 0.5), (1.0, 2.0), (10.0, 5.0)):
    s = kern.schrodinger_kernel(h3, t, np.array([r]))
    exact = np.sqrt(np.pi) / (2 * (1j * t) ** 1.5) * r / np.sinh(r) * np.exp(1j * r * r / (4 * t))
    print(f"t={t:5.1f} r={r} rel diff {abs(s.value - exact) / abs(exact):.1e} rel estimate {s.relative_error:.1e}")

# %% slopes
for label, regime, x, window in (("H3", "small", [0.05], None), ("H3", "large", [0.5], None),
                                 ("H2", "small", [0.05], None), ("H2", "large", [0.5], (1.0, 100.0)),
                                 ("H2", "large", [0.5], (10.0, 1000.0))):
    fit = kern.decay_slope(build_root_system(label), np.array(x), regime, window, jobs=4)
    print(f"{label} {regime:5s} t in [{fit.times[0]:g}, {fit.times[-1]:g}]: {fit.slope:.3f} (target {fit.target})")

# %% rank two: |I(t, 0)| and its local slope
sl3 = build_root_system("SL3R")
t = kern.time_grid(1.0, 1000.0, 8)
vals = np.array([abs(kern.inner_integral_I(sl3, x)[0]) for x in t])
local = np.gradient(np.log(vals), np.log(t))
fig, ax = plt.subplots(1, 2, figsize=(10, 4))
ax[0].loglog(t, vals, "o-", ms=3)
ax[0].set_xlabel("t")
ax[0].set_ylabel("|I(t, 0)|")
ax[1].semilogx(t, local, "o-", ms=3)
ax[1].axhline(-4, color="k", ls="--")
ax[1].set_xlabel("t")
ax[1].set_ylabel("local slope")
fig.tight_layout()
fig.savefig(out / "sl3_inner_integral.png", dpi=120)
print("local slope at t = 1, 10, 100, 1000:", np.round(np.interp([1, 10, 100, 1000], t, local), 3))
