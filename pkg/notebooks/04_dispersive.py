"""
Dispersive exponents, admissibility and the NLS classifier
==========================================================
"""

# %%
import os
from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from symkernel import dispersive as disp
from symkernel.rootsys import build_root_system

out = Path(os.environ.get("NOTEBOOK_OUT", "notebook_out"))
out.mkdir(exist_ok=True)

# %% admissible region in the (1/p, 1/q) square for d = 3
n = 200
grid = np.array([[disp.is_admissible(disp.AdmissiblePair.from_reciprocals(Fraction(i, 2 * n), Fraction(j, 2 * n), 3))
                  for i in range(n + 1)] for j in range(n + 1)])
fig, ax = plt.subplots(figsize=(4.5, 4.5))
ax.imshow(grid, origin="lower", extent=(0, 0.5, 0, 0.5), cmap="Greys")
ax.set_xlabel("1/p")
ax.set_ylabel("1/q")
fig.savefig(out / "admissible_d3.png", dpi=120)

# %% exponents
for q, qt in ((4, 4), (6, 3), (np.inf, np.inf)):
    print(f"d=5 D=3 q={q} q~={qt}:", disp.dispersive_exponents(5, 3, q, qt))

# %% classifier around the L2 and H1 thresholds in d = 5
for cls, thr in (("L2", 1 + Fraction(4, 5)), ("H1", 1 + Fraction(4, 3))):
    for gamma in (thr - Fraction(1, 5), thr, thr + Fraction(1, 5)):
        for size in ("small", "arbitrary"):
            print(f"{cls} gamma={str(gamma):5s} {size:9s}", disp.classify_regime(5, gamma, cls, None, size).line())

# %% Kunze-Stein bound of ball indicators grows with the radius
h3 = build_root_system("H3")
for R in (0.5, 1.0, 2.0, 4.0):
    ball = lambda x, R=R: (np.linalg.norm(x, axis=-1) <= R).astype(float)  # noqa: E731
    print(f"R={R}: q=4 bound {disp.kunze_stein_bound(h3, ball, 4.0, radius=R):.6f}")
