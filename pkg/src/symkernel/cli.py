"""Command-line experiments writing CSV files and a plain-text report.txt.

Exit status: 0 when every check passes, 1 when a check fails, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import barycentric as bary
from . import dispersive as disp
from . import kernel as kern
from . import plancherel as planch
from . import spherical as sph
from .errors import (CatalogueError, ConfigurationError, DomainError, UnsupportedDimensionError,
                     UnsupportedSpaceError)
from .plots import emit_plots
from .rootsys import build_root_system, dual_basis, half_sum_rho, root_table, weyl_group

EXPERIMENTS = ("rootinfo", "density", "partition", "spherical", "decay", "subordination", "kunzestein",
               "admissible", "classify", "plot")

# windows where the leading large-time term dominates (see kernel.decay_slope)
LARGE_WINDOWS = {"H2": (10.0, 1000.0), "SL2R": (10.0, 1000.0), "SL3R": (10.0, 1000.0)}
SLOPE_TOL = {"small": 0.1, "large": 0.1}
RANK_TWO_LARGE_TOL = 0.2


@dataclass
class RunConfig:
    space: str = "H3"
    experiment: str = "rootinfo"
    t_min: float | None = None
    t_max: float | None = None
    per_decade: int = 12
    nodes: int = 32
    eta: float = kern.ETA
    lam_max: float | None = None
    out: str | None = None  # None: "symkernel_out" (plots: next to the CSV)
    seed: int = 0
    jobs: int = 1
    slow: bool = False
    options: dict = field(default_factory=dict)

    def validate(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigurationError(f"unknown experiment {self.experiment!r}")
        build_root_system(self.space)
        if self.per_decade < 1 or self.nodes < 1 or self.jobs < 1:
            raise ConfigurationError("grid and budget parameters must be positive")
        if not self.eta > 0 or (self.lam_max is not None and not self.lam_max > 0):
            raise ConfigurationError("quadrature budgets must be positive")
        if self.t_min is not None and self.t_max is not None and not 0 < self.t_min < self.t_max:
            raise ConfigurationError("time grid needs 0 < t_min < t_max")


@dataclass
class Outcome:
    passed: bool
    lines: list[str]
    files: dict[str, str] = field(default_factory=dict)


def _check(lines, name, ok, detail):
    lines.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return bool(ok)


# ---------------------------------------------------------------- experiments


def _rootinfo(cfg):
    rs = build_root_system(cfg.space)
    W = weyl_group(rs)
    lines = [f"space={rs.label} rank={rs.rank} d={rs.dim} D={rs.pseudo_dim} |W|={len(W)}",
             f"rho={' '.join(f'{c:.15g}' for c in half_sum_rho(rs))}"]
    ok = _check(lines, "dimension formula", rs.dim == rs.rank + int(rs.mult.sum() + rs.mult2.sum())
                and rs.pseudo_dim == rs.rank + 2 * rs.n_reduced, f"d={rs.dim} D={rs.pseudo_dim}")
    return Outcome(ok, lines, {"roots.txt": root_table(rs)})


def _density(cfg):
    rs = build_root_system(cfg.space)
    lines, ok, files = [], True, {}
    for regime in ("small", "large"):
        fit = planch.asymptotic_slope(rs, regime, int(cfg.options.get("points", 40)), cfg.seed)
        ok &= _check(lines, f"{regime} |lambda| slope", abs(fit.slope - fit.target) <= 0.05,
                     f"slope={fit.slope:.6f} target={fit.target} tol=0.05")
        if regime == "small":
            radii = np.geomspace(1e-3, 1e4, 141)
            files["density.csv"] = planch.density_profile_csv(rs, fit.direction, radii)
    return Outcome(ok, lines, files)


def _partition(cfg):
    rs = build_root_system(cfg.space)
    samples = int(cfg.options.get("samples", 10000))
    lines = []
    c1 = bary.select_c1(rs)
    lines.append(f"C1={c1:.6g}")
    prof = bary.CutoffProfile(c1)
    dev = bary.partition_deviation(rs, prof, samples, cfg.seed)
    ok = _check(lines, "sum of charts", dev < 1e-12, f"max|sum-1|={dev:.3e} tol=1e-12 samples={samples}")
    for c in bary.charts(rs, prof):
        rep = bary.support_verify(c)
        detail = f"kappa={rep.kappa:.4f} orthogonal_roots={rep.orthogonal_roots}"
        ok &= _check(lines, f"support {rep.chart}", rep.passed or rs.rank == 1, detail)
    return Outcome(ok, lines, {"partition.csv": bary.chart_values_csv(rs, prof)})


def _spherical(cfg):
    rs = build_root_system(cfg.space)
    n = int(cfg.options.get("grid", 20))
    lam = np.linspace(0.5, 10.0, n)
    radii = np.linspace(0.1, 3.0, n)
    lines, ok = [], True
    rows = ["lambda_norm,r,re_value,im_value,err_estimate,closed_form"]
    if rs.rank != 1:
        x = 0.5 * dual_basis(rs).sum(axis=0)
        u = np.array([1.0, 0.3]) / np.hypot(1.0, 0.3)
        val = sph.phi_quadrature(rs, lam[:, None] * u, x, cfg.nodes)
        env = sph.phi_quadrature(rs, np.zeros(rs.rank), x, cfg.nodes)
        bound = np.abs(val.value) <= 1.01 * env.value.real + val.error
        ok &= _check(lines, "|phi_lambda| <= 1.01 phi_0", bool(bound.all()), f"grid={n} x={x.round(4)}")
        for L, v, e in zip(lam, val.value, val.error):
            rows.append(f"{L:.17g},{np.linalg.norm(x):.17g},{v.real:.17g},{v.imag:.17g},{e:.17g},nan")
        return Outcome(ok, lines, {"spherical.csv": "\n".join(rows) + "\n"})
    worst_ratio, worst_env = 0.0, 0.0
    for r in radii:
        closed = np.asarray(sph.phi_closed_form(rs, lam, r).value)
        phi0 = float(sph.phi_closed_form(rs, np.zeros(1), r).value)
        worst_env = max(worst_env, float(np.max(np.abs(closed) / phi0)))
        if rs.embedding is not None:
            q = sph.phi_quadrature(rs, lam[:, None], np.array([r]), cfg.nodes)
            diff = np.abs(q.value - closed)
            worst_ratio = max(worst_ratio, float(np.max(diff / np.maximum(q.error, 1e-300))))
            err = q.error
            vals = q.value
        else:
            err, vals = np.zeros(n), closed.astype(complex)
        for L, v, e, c in zip(lam, vals, err, closed):
            rows.append(f"{L:.17g},{r:.17g},{v.real:.17g},{v.imag:.17g},{e:.17g},{c:.17g}")
    if rs.embedding is not None:
        ok &= _check(lines, "quadrature vs closed form", worst_ratio <= 1.0,
                     f"max |diff|/err_estimate={worst_ratio:.3e}")
    ok &= _check(lines, "|phi_lambda| <= 1.01 phi_0", worst_env <= 1.01, f"max ratio={worst_env:.6f}")
    if rs.label in ("H3", "SL2C"):
        res = max(float(np.max(sph.radial_laplacian_residual(L, radii[1:]))) for L in lam)
        ok &= _check(lines, "eigenfunction residual", res < 1e-6, f"max relative residual={res:.3e}")
    return Outcome(ok, lines, {"spherical.csv": "\n".join(rows) + "\n"})


def _default_x(rs, regime, t_min):
    if rs.rank == 1:
        return np.array([0.05 if regime == "small" else 0.5])
    if regime == "small":
        return 0.5 * np.sqrt(t_min) * dual_basis(rs).sum(axis=0) / np.linalg.norm(dual_basis(rs).sum(axis=0))
    return np.zeros(rs.rank)


def _decay(cfg):
    rs = build_root_system(cfg.space)
    regime = cfg.options.get("regime", "large")
    if regime not in ("small", "large"):
        raise ConfigurationError("regime must be small or large")
    window = kern.DEFAULT_WINDOWS[regime]
    if regime == "large":
        window = LARGE_WINDOWS.get(rs.label, window)
    lo = cfg.t_min if cfg.t_min is not None else window[0]
    hi = cfg.t_max if cfg.t_max is not None else window[1]
    x = cfg.options.get("x")
    x = _default_x(rs, regime, lo) if x is None else np.array([float(c) for c in str(x).split(",")])
    fit = kern.decay_slope(rs, x, regime, (lo, hi), cfg.per_decade, cfg.jobs, cfg.slow, cfg.eta)
    tol = RANK_TWO_LARGE_TOL if (rs.rank > 1 and regime == "large") else SLOPE_TOL[regime]
    lines = kern.fit_report(fit, tol).strip().splitlines()
    ok = _check(lines, f"{regime}-time slope", abs(fit.slope - fit.target) <= tol,
                f"slope={fit.slope:.4f} target={fit.target} tol={tol}")
    return Outcome(ok, lines, {"decay.csv": kern.kernel_csv(rs.label, fit.samples)})


def _subordination(cfg):
    rng = np.random.default_rng(cfg.seed)
    n = int(cfg.options.get("samples", 20))
    t = rng.uniform(0.1, 10.0, n) * rng.choice([-1.0, 1.0], n)
    mu = rng.uniform(0.0, 5.0, n)
    rows = ["t,mu,re_value,im_value,abs_error"]
    worst = 0.0
    for ti, mi in zip(t, mu):
        v = kern.subordination_check(ti, mi)
        e = abs(v - np.exp(-1j * ti * mi**2))
        worst = max(worst, e)
        rows.append(f"{ti:.17g},{mi:.17g},{v.real:.17g},{v.imag:.17g},{e:.17g}")
    lines = []
    ok = _check(lines, "subordination identity", worst < 1e-6, f"max error={worst:.3e} tol=1e-6 samples={n}")
    return Outcome(ok, lines, {"subordination.csv": "\n".join(rows) + "\n"})


def _kunzestein(cfg):
    rs = build_root_system(cfg.space)
    q = float(cfg.options.get("q", 4))
    R = float(cfg.options.get("radius", 1.0))
    ball = lambda x: (np.linalg.norm(x, axis=-1) <= R).astype(float)  # noqa: E731
    val = disp.kunze_stein_bound(rs, ball, q, radius=R)
    lines = [f"space={rs.label} q={q:g} kappa=indicator(|x+| <= {R:g}) bound={val:.15g}"]
    ok = _check(lines, "finite", np.isfinite(val), f"{val:.6g}")
    double = disp.kunze_stein_bound(rs, lambda x: 2 * ball(x), q, radius=R)
    ok &= _check(lines, "homogeneity", abs(double - 2 * val) <= 1e-12 * max(val, 1.0), f"{double:.15g}")
    sup = disp.kunze_stein_bound(rs, ball, np.inf, radius=R)
    ok &= _check(lines, "q = inf gives sup", sup == 1.0, f"{sup:g}")
    return Outcome(ok, lines)


def _admissible(cfg):
    d = int(cfg.options.get("d", build_root_system(cfg.space).dim))
    lines, files = [], {}
    p, q = cfg.options.get("p"), cfg.options.get("q")
    if p is not None and q is not None:
        pair = disp.AdmissiblePair(_extended(p), _extended(q), d)
        lines.append(f"d={d} p={p} q={q} admissible={disp.is_admissible(pair)}")
    n = int(cfg.options.get("grid", 50))
    rows = ["inv_p,inv_q,admissible"]
    for i in range(n + 1):
        for j in range(n + 1):
            a, b = Fraction(i, 2 * n), Fraction(j, 2 * n)
            ok = disp.is_admissible(disp.AdmissiblePair.from_reciprocals(a, b, d))
            rows.append(f"{float(a):.17g},{float(b):.17g},{int(ok)}")
    files["admissible.csv"] = "\n".join(rows) + "\n"
    return Outcome(True, lines, files)


def _extended(s):
    s = str(s).strip().lower()
    return np.inf if s in ("inf", "infinity") else Fraction(s)


def _classify(cfg):
    text = cfg.options.get("request", "")
    line = disp.classify_text(text)
    print(line)
    return Outcome(True, [f"request: {text}", line])


def _plot(cfg):
    paths = emit_plots(cfg.options["csv"], _out_dir(cfg))
    return Outcome(True, [f"wrote {p}" for p in paths])


RUNNERS = {"rootinfo": _rootinfo, "density": _density, "partition": _partition, "spherical": _spherical,
           "decay": _decay, "subordination": _subordination, "kunzestein": _kunzestein,
           "admissible": _admissible, "classify": _classify, "plot": _plot}


def _out_dir(cfg: RunConfig) -> Path:
    chosen = os.environ.get("SYMKERNEL_OUT") or cfg.out
    if chosen:
        return Path(chosen)
    if cfg.experiment == "plot":
        return Path(cfg.options["csv"]).parent
    return Path("symkernel_out")


def run(cfg: RunConfig) -> tuple[int, list[Path]]:
    """Execute one experiment; returns (exit status, written files)."""
    cfg.validate()
    outcome = RUNNERS[cfg.experiment](cfg)
    out = _out_dir(cfg)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in outcome.files.items():
        path = out / name
        path.write_text(text)
        written.append(path)
    status = "PASS" if outcome.passed else "FAIL"
    report = [f"experiment={cfg.experiment} space={cfg.space} seed={cfg.seed}"] + outcome.lines + [f"status={status}"]
    # plots sit next to their CSV, so keep the experiment's report.txt intact
    name = "report.txt" if cfg.experiment != "plot" else f"{Path(cfg.options['csv']).stem}_plot_report.txt"
    (out / name).write_text("\n".join(report) + "\n")
    written.append(out / name)
    return (0 if outcome.passed else 1), written


# ---------------------------------------------------------------- argument parsing


def _bool(s) -> bool:
    if isinstance(s, bool):
        return s
    v = str(s).strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"not a boolean: {s!r}")


def read_config(path) -> dict:
    """Flat ``key=value`` file; blank lines and ``#`` comments ignored."""
    out = {}
    for n, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"{path}:{n}: expected key=value")
        k, v = line.split("=", 1)
        out[k.strip().replace("-", "_")] = v.strip()
    return out


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--space", default="H3", help="catalogue label (H2..H6, SL2R, SL3R, SL2C)")
    common.add_argument("--out", help="output directory, default symkernel_out (SYMKERNEL_OUT overrides)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--jobs", type=int, default=1, help="worker processes for independent grid points")
    common.add_argument("--slow", action="store_true", help="allow the K-integral kernel in rank two")
    common.add_argument("--config", help="key=value file; flags given on the command line win")

    p = argparse.ArgumentParser(prog="symkernel", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="experiment", required=True)
    sub.add_parser("rootinfo", parents=[common], help="root data and dimensions")
    s = sub.add_parser("density", parents=[common], help="Plancherel density slopes")
    s.add_argument("--points", type=int, default=40)
    s = sub.add_parser("partition", parents=[common], help="partition of unity and support checks")
    s.add_argument("--samples", type=int, default=10000)
    s = sub.add_parser("spherical", parents=[common], help="spherical function oracles")
    s.add_argument("--grid", type=int, default=20)
    s.add_argument("--nodes", type=int, default=32)
    s = sub.add_parser("decay", parents=[common], help="kernel decay slope")
    s.add_argument("--regime", choices=("small", "large"), default="large")
    s.add_argument("--t-min", type=float)
    s.add_argument("--t-max", type=float)
    s.add_argument("--per-decade", type=int, default=12)
    s.add_argument("--eta", type=float, default=kern.ETA, help="eps0 = eta |t|")
    s.add_argument("--x", help="chamber point, comma separated")
    s = sub.add_parser("subordination", parents=[common], help="scalar subordination identity")
    s.add_argument("--samples", type=int, default=20)
    s = sub.add_parser("kunzestein", parents=[common], help="Kunze-Stein bound of a ball indicator")
    s.add_argument("--q", type=float, default=4.0)
    s.add_argument("--radius", type=float, default=1.0)
    s = sub.add_parser("admissible", parents=[common], help="Strichartz admissibility")
    s.add_argument("--d", type=int)
    s.add_argument("--p")
    s.add_argument("--q")
    s.add_argument("--grid", type=int, default=50)
    s = sub.add_parser("classify", parents=[common], help="NLS regime classifier")
    s.add_argument("request", nargs="+", help="key=value tokens: d, gamma, class, flags, size")
    s = sub.add_parser("plot", parents=[common], help="figures from a CSV file")
    s.add_argument("csv")
    return p


CORE = {"space", "out", "seed", "jobs", "slow", "t_min", "t_max", "per_decade", "nodes", "eta", "lam_max"}


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    vals = vars(ns).copy()
    exp = vals.pop("experiment")
    vals.pop("config", None)
    core = {k: vals.pop(k) for k in list(vals) if k in CORE}
    if exp == "classify":
        vals["request"] = " ".join(vals["request"])
    if exp == "admissible" and vals.get("d") is None:
        vals.pop("d")
    return RunConfig(experiment=exp, options={k: v for k, v in vals.items() if v is not None}, **core)


def parse(argv=None) -> RunConfig:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    ns = parser.parse_args(argv)
    if ns.config:
        values = read_config(ns.config)
        sub = parser._subparsers._group_actions[0].choices[ns.experiment]
        known = {a.dest: a for a in sub._actions}
        defaults = {}
        for k, v in values.items():
            if k not in known:
                raise ConfigurationError(f"config key {k!r} does not apply to {ns.experiment}")
            defaults[k] = _bool(v) if isinstance(known[k], argparse._StoreTrueAction) else v
        sub.set_defaults(**defaults)
        ns = parser.parse_args(argv)
    return config_from_args(ns)


def main(argv=None) -> int:
    try:
        cfg = parse(argv)
        status, files = run(cfg)
    except SystemExit as exc:  # argparse usage errors
        return int(exc.code or 0)
    except (CatalogueError, ConfigurationError, DomainError, UnsupportedSpaceError, UnsupportedDimensionError,
            FileNotFoundError, KeyError) as exc:
        print(f"symkernel: error: {exc}", file=sys.stderr)
        return 2
    for f in files:
        print(f)
    return status


if __name__ == "__main__":
    sys.exit(main())
