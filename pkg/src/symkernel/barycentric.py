"""Smooth conical partition of unity subordinate to the barycentric tiling of the chamber.

Charts are indexed by a Weyl element ``w`` and a simple-root index ``j``
(0-based here).  The raw chart is

    prod_{k != j} chi(<w a_k, u>) chi(<w a_j, u> - <w a_k, u>),   u = lambda / |lambda|,

and normalized charts divide by the sum of all raw charts.  In rank one the
product is empty, so both charts equal 1/2 after normalization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import stats

from .errors import ConfigurationError, DomainError
from .plancherel import density
from .rootsys import RootSystem, WeylElement, build_root_system, dual_basis, weyl_group


def _smooth_step(s):
    s = np.asarray(s, dtype=float)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        f0 = np.where(s > 0, np.exp(-1.0 / np.where(s > 0, s, 1.0)), 0.0)
        f1 = np.where(s < 1, np.exp(-1.0 / np.where(s < 1, 1.0 - s, 1.0)), 0.0)
    return f0 / (f0 + f1)


@dataclass(frozen=True)
class CutoffProfile:
    """Smooth nondecreasing ramp: 0 for r <= -width, 1 for r >= 0."""

    width: float

    def __post_init__(self):
        if not self.width > 0:
            raise DomainError("cutoff width must be positive")

    def __call__(self, r):
        return _smooth_step((np.asarray(r, dtype=float) + self.width) / self.width)


@dataclass(frozen=True, eq=False)
class Chart:
    w: WeylElement
    j: int
    rs: RootSystem = field(repr=False)
    profile: CutoffProfile

    @property
    def direction(self) -> np.ndarray:
        """w . Lambda_j."""
        return self.w(dual_basis(self.rs)[self.j])

    @property
    def name(self) -> str:
        word = "".join(str(i + 1) for i in self.w.word) or "e"
        return f"w={word}:j={self.j + 1}"


def charts(rs: RootSystem, profile: CutoffProfile) -> list[Chart]:
    return [Chart(w, j, rs, profile) for w in weyl_group(rs) for j in range(rs.rank)]


def _unit(lam) -> np.ndarray:
    lam = np.asarray(lam, dtype=float)
    norm = np.linalg.norm(lam, axis=-1, keepdims=True)
    if np.any(norm == 0):
        raise DomainError("charts are undefined at lambda = 0")
    return lam / norm


def raw_chart(c: Chart, lam) -> np.ndarray:
    u = _unit(lam)
    p = u @ c.w(c.rs.simple_roots).T  # <w a_k, u>
    out = np.ones(u.shape[:-1])
    chi = c.profile
    for k in range(c.rs.rank):
        if k != c.j:
            out = out * chi(p[..., k]) * chi(p[..., c.j] - p[..., k])
    return out


@lru_cache(maxsize=32)
def _chart_set(label: str, width: float) -> tuple[Chart, ...]:
    return tuple(charts(build_root_system(label), CutoffProfile(width)))


def partition_denominator(rs: RootSystem, profile: CutoffProfile, lam) -> np.ndarray:
    return sum(raw_chart(c, lam) for c in _chart_set(rs.label, profile.width))


def normalized_chart(c: Chart, lam) -> np.ndarray:
    den = partition_denominator(c.rs, c.profile, lam)
    if np.any(den <= 1e-14):
        raise ConfigurationError(f"partition denominator vanishes; cutoff width C1={c.profile.width} is too small")
    return raw_chart(c, lam) / den


def sphere_samples(rs: RootSystem, n: int, rng: np.random.Generator | None = None) -> np.ndarray:
    """Unit vectors: ``[+1], [-1]`` in rank one; an even angle grid (or random if ``rng``) in rank two."""
    if rs.rank == 1:
        return np.array([[1.0], [-1.0]])
    if rng is None:
        th = 2 * np.pi * (np.arange(n) + 0.5) / n
        return np.stack([np.cos(th), np.sin(th)], axis=-1)
    v = rng.standard_normal((n, rs.rank))
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def partition_deviation(rs: RootSystem, profile: CutoffProfile, n_samples: int = 10_000, seed: int = 0,
                        wall_gap: float = 1e-6) -> float:
    """max |sum of normalized charts - 1| over random directions away from root walls."""
    rng = np.random.default_rng(seed)
    v = rng.standard_normal((n_samples, rs.rank))
    u = v / np.linalg.norm(v, axis=-1, keepdims=True)
    pair = np.abs(u @ rs.positive_roots.T) / np.linalg.norm(rs.positive_roots, axis=1)
    u = u[np.all(pair > wall_gap, axis=-1)]
    total = sum(normalized_chart(c, u) for c in _chart_set(rs.label, profile.width))
    return float(np.max(np.abs(total - 1.0)))


@dataclass
class SupportReport:
    chart: str
    kappa_lambda: float
    kappa_roots: dict[int, float]
    orthogonal_roots: list[int]
    kappa_min: float
    n_support: int
    passed: bool = False

    @property
    def kappa(self) -> float:
        return min([self.kappa_lambda, *self.kappa_roots.values()])


def support_verify(c: Chart, samples: int = 2000, kappa_min: float = 0.05) -> SupportReport:
    """Lower bounds of |<alpha, lambda>| / |lambda| and |<w Lambda_j, lambda>| / |lambda| on the chart support.

    Root indices refer to ``rs.positive_roots``; negatives give the same ratios.
    """
    if samples < 100:
        raise DomainError("support_verify needs at least 100 samples")
    u = sphere_samples(c.rs, samples)
    u = u[normalized_chart(c, u) > 0]
    wl = c.direction
    kappa_l = float(np.min(np.abs(u @ wl)))
    kroots, ortho = {}, []
    for i, a in enumerate(c.rs.positive_roots):
        if abs(a @ wl) < 1e-12:
            ortho.append(i)
        else:
            kroots[i] = float(np.min(np.abs(u @ a)))
    rep = SupportReport(c.name, kappa_l, kroots, ortho, kappa_min, len(u))
    rep.passed = rep.kappa >= kappa_min
    return rep


def select_c1(rs: RootSystem, upper: float = 0.1, kappa_min: float = 0.05, den_floor: float = 0.5,
              samples: int = 2000, iters: int = 30) -> float:
    """Largest width <= ``upper`` with denominator >= ``den_floor`` and every chart's kappa >= ``kappa_min``."""
    u = sphere_samples(rs, samples)

    def ok(width):
        prof = CutoffProfile(width)
        if np.min(partition_denominator(rs, prof, u)) < den_floor:
            return False
        return all(support_verify(c, samples, kappa_min).passed for c in _chart_set(rs.label, width))

    if ok(upper):
        return upper
    lo, hi = 0.0, upper
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        lo, hi = (mid, hi) if ok(mid) else (lo, mid)
    if lo == 0.0:
        raise ConfigurationError("no admissible cutoff width found")
    return lo


@dataclass
class SymbolReport:
    chart: str
    order: int
    exponent: float
    stderr: float
    predicted: float
    passed: bool


def directional_derivative(rs: RootSystem, lam, direction, order: int) -> np.ndarray:
    """Central finite difference of the Plancherel density along a unit ``direction``."""
    lam = np.asarray(lam, dtype=float)
    e = np.asarray(direction, dtype=float)
    e = e / np.linalg.norm(e)
    h = 1e-4 * np.maximum(1.0, np.linalg.norm(lam, axis=-1))[..., None]
    if order == 0:
        return density(rs, lam)
    if order == 1:
        return (density(rs, lam + h * e) - density(rs, lam - h * e)) / (2 * h[..., 0])
    if order == 2:
        return (density(rs, lam + h * e) - 2 * density(rs, lam) + density(rs, lam - h * e)) / h[..., 0] ** 2
    raise DomainError("derivative order must be 0, 1 or 2")


def directional_symbol_check(c: Chart, rs: RootSystem | None = None, order: int = 1, n_radii: int = 25,
                             n_dirs: int = 64, tol: float = 0.1) -> SymbolReport:
    """Growth exponent of sup |d^order/d(w Lambda_j)^order density| over the chart support, |lambda| in [1, 1e3].

    Passes when the fitted exponent is at most d - rank - order + ``tol``.
    """
    rs = rs or c.rs
    if order not in (0, 1, 2):
        raise DomainError("derivative order must be 0, 1 or 2")
    u = sphere_samples(rs, n_dirs)
    u = u[raw_chart(c, u) > 0]
    radii = np.geomspace(1.0, 1e3, n_radii)
    lam = radii[:, None, None] * u[None]
    env = np.max(np.abs(directional_derivative(rs, lam, c.direction, order)), axis=1)
    good = env > 0
    if good.sum() < 8:
        raise ConfigurationError("fewer than 8 usable radii for the symbol fit")
    fit = stats.linregress(np.log(radii[good]), np.log(env[good]))
    predicted = rs.dim - rs.rank - order
    return SymbolReport(c.name, order, float(fit.slope), float(fit.stderr), float(predicted),
                        bool(fit.slope <= predicted + tol))


def chart_values_csv(rs: RootSystem, profile: CutoffProfile, n_angles: int = 360) -> str:
    """CSV (angle, chart, value) of normalized chart values on the unit circle (rank <= 2)."""
    if rs.rank == 1:
        angles = np.array([0.0, np.pi])
        u = np.array([[1.0], [-1.0]])
    else:
        angles = 2 * np.pi * np.arange(n_angles) / n_angles
        u = np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    rows = ["angle,chart,value"]
    for c in _chart_set(rs.label, profile.width):
        vals = normalized_chart(c, u)
        rows += [f"{a:.17g},{c.name},{v:.17g}" for a, v in zip(angles, vals)]
    return "\n".join(rows) + "\n"
