"""Figures rendered from experiment CSV files (never fed back into computation)."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .kernel import KERNEL_COLUMNS

SCHEMAS = {
    "decay": KERNEL_COLUMNS,
    "partition": ("angle", "chart", "value"),
    "density": ("lambda_norm", "log_density"),
}


class SchemaError(ConfigurationError):
    """CSV header does not match a known schema."""


def _read(path: Path) -> tuple[list[str], list[dict]]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
        return list(reader.fieldnames or []), rows


def detect_schema(header) -> str:
    cols = set(header)
    best, best_hits = None, 0
    for name, need in SCHEMAS.items():
        hits = len(cols & set(need))
        if hits == len(need):
            return name
        if hits > best_hits:
            best, best_hits = name, hits
    if best is None:
        raise SchemaError(f"unrecognized CSV header {header}")
    missing = [c for c in SCHEMAS[best] if c not in cols]
    raise SchemaError(f"{best} CSV is missing column(s): {', '.join(missing)}")


def emit_plots(csv_path, out_dir=None) -> list[Path]:
    """Render figures for a decay, partition or density CSV; returns the written PNG paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    csv_path = Path(csv_path)
    header, rows = _read(csv_path)
    schema = detect_schema(header)
    if not rows:
        raise SchemaError(f"{csv_path} has no data rows")
    out_dir = Path(out_dir) if out_dir else csv_path.parent
    out_dir.mkdir(parents=True, exist_ok=True)
    fig, ax = plt.subplots(figsize=(6, 4.5))
    if schema == "decay":
        t = np.array([float(r["t"]) for r in rows])
        a = np.array([float(r["abs_value"]) for r in rows])
        slope, icpt = np.polyfit(np.log(t), np.log(a), 1)
        ax.loglog(t, a, "o", ms=4, label=f"|s_t| ({rows[0]['space']})")
        ax.loglog(t, np.exp(icpt) * t**slope, "-", label=f"fit slope {slope:.3f}")
        ax.set_xlabel("t")
        ax.set_ylabel("|s_t(x)|")
        ax.legend()
    elif schema == "partition":
        names = list(dict.fromkeys(r["chart"] for r in rows))
        angles = np.array(sorted({float(r["angle"]) for r in rows}))
        grid = np.zeros((len(names), len(angles)))
        index = {a: i for i, a in enumerate(angles)}
        for r in rows:
            grid[names.index(r["chart"]), index[float(r["angle"])]] = float(r["value"])
        im = ax.imshow(grid, aspect="auto", origin="lower", cmap="viridis",
                       extent=(angles[0], angles[-1], -0.5, len(names) - 0.5))
        ax.set_yticks(range(len(names)), names)
        ax.set_xlabel("angle")
        fig.colorbar(im, ax=ax, label="chart value")
    else:
        lam = np.array([float(r["lambda_norm"]) for r in rows])
        g = np.array([float(r["log_density"]) for r in rows])
        ax.semilogx(lam, g / np.log(10), "-")
        ax.set_xlabel("|lambda|")
        ax.set_ylabel("log10 density")
    fig.tight_layout()
    out = out_dir / f"{csv_path.stem}.png"
    fig.savefig(out, dpi=120)
    plt.close(fig)
    return [out]
