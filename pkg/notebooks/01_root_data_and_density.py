"""
Root data and the Plancherel density
====================================

Catalogue dimensions, then the density along a chamber ray: |lambda|^(D - rank)
near the origin and |lambda|^(d - rank) at infinity.
"""

# %%
import os
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from symkernel.plancherel import asymptotic_slope, log_density
from symkernel.rootsys import LABELS, build_root_system, weyl_group

out = Path(os.environ.get("NOTEBOOK_OUT", "notebook_out"))
out.mkdir(exist_ok=True)

# %% dimension table
for label in LABELS:
    rs = build_root_system(label)
    print(f"{label:5s} rank={rs.rank} d={rs.dim} D={rs.pseudo_dim} |W|={len(weyl_group(rs))}")

# %% fitted slopes in both regimes
for label in LABELS:
    rs = build_root_system(label)
    small, large = (asymptotic_slope(rs, r) for r in ("small", "large"))
    print(f"{label:5s} small {small.slope:7.4f} (target {small.target})  large {large.slope:7.4f} "
          f"(target {large.target})")

# %% density profiles; dashed lines are the two power laws
radii = np.geomspace(1e-3, 1e3, 300)
fig, ax = plt.subplots(figsize=(6, 4.5))
for label in ("H2", "H3", "SL3R"):
    rs = build_root_system(label)
    u = asymptotic_slope(rs, "small").direction
    ax.loglog(radii, np.exp(log_density(rs, radii[:, None] * u)), label=label)
ax.set_xlabel("|lambda|")
ax.set_ylabel("density")
ax.legend()
fig.savefig(out / "density_profiles.png", dpi=120)
