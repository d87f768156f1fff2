"""Kunze-Stein bound, dispersive exponents, Strichartz admissibility and the NLS regime classifier.

phi_0 is replaced by its envelope prod (1 + <alpha, x+>) exp(-<rho, x+>) with
constant 1, so Kunze-Stein values are comparative only.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

import numpy as np

from .errors import DomainError, UnsupportedDimensionError
from .quadrature import gauss_panels
from .rootsys import RootSystem, cartan_density, dual_basis
from .spherical import phi0_envelope

INF = float("inf")


# ---------------------------------------------------------------- Kunze-Stein


@dataclass(frozen=True)
class ChamberGrid:
    """Quadrature nodes on the chamber truncated at ``radius``; weights carry delta(x+) times the envelope."""

    points: np.ndarray
    weights: np.ndarray
    radius: float


def chamber_grid(rs: RootSystem, radius: float, n_radial: int = 16, n_angular: int = 48,
                 panel: float = 0.5) -> ChamberGrid:
    """Polar Gauss rule on {x+ in chamber, |x+| <= radius}."""
    if not radius > 0 or not np.isfinite(radius):
        raise DomainError("grid radius must be positive and finite")
    br = np.linspace(0.0, radius, max(1, int(np.ceil(radius / panel))) + 1)
    r, wr = gauss_panels(br, n_radial)
    if rs.rank == 1:
        pts = r[:, None]
        w = wr
    else:
        L = dual_basis(rs)
        a0, a1 = (np.arctan2(v[1], v[0]) for v in L)
        lo, hi = min(a0, a1), max(a0, a1)
        th, wt = gauss_panels(np.linspace(lo, hi, 5), max(2, n_angular // 4))
        u = np.stack([np.cos(th), np.sin(th)], axis=-1)
        pts = (r[:, None, None] * u[None]).reshape(-1, 2)
        w = (wr[:, None] * r[:, None] * wt[None]).ravel()
    return ChamberGrid(pts, w * cartan_density(rs, pts) * phi0_envelope(rs, pts), float(radius))


def _ks_integral(rs, kappa, q, radius, **kw):
    g = chamber_grid(rs, radius, **kw)
    vals = np.abs(np.asarray(kappa(g.points), dtype=float))
    return float(np.sum(g.weights * vals ** (q / 2))), vals


def _ks_sup(rs, kappa, radius, **kw):
    # Gauss nodes are interior, so the origin and the wall endpoints are added
    g = chamber_grid(rs, radius, **kw)
    walls = dual_basis(rs) / np.linalg.norm(dual_basis(rs), axis=1)[:, None]
    ends = np.vstack([np.zeros((1, rs.rank)), radius * walls])
    pts = np.vstack([g.points, ends])
    return float(np.max(np.abs(np.asarray(kappa(pts), dtype=float))))


def kunze_stein_bound(rs: RootSystem, kappa: Callable | np.ndarray, q: float, radius: float = INF,
                      grid: ChamberGrid | None = None, **grid_kw) -> float:
    """(int_{chamber} delta(x+) phi0_env(x+) |kappa(x+)|^(q/2) dx+)^(2/q); q = inf gives sup |kappa|.

    ``kappa`` is a vectorized callable on chamber points (support truncated at
    ``radius``) or an array of samples on ``grid``.  With ``radius = inf`` the
    integral is taken on growing balls and +inf is returned when it does not
    settle.
    """
    q = float(q)
    if q < 2:
        raise DomainError("Kunze-Stein bound needs q >= 2")
    if grid is not None:
        vals = np.abs(np.asarray(kappa, dtype=float))
        if vals.shape != grid.weights.shape:
            raise DomainError("kappa samples do not match the grid")
        if np.isinf(q):
            return float(vals.max(initial=0.0))
        return float(np.sum(grid.weights * vals ** (q / 2)) ** (2 / q))
    if not callable(kappa):
        raise DomainError("kappa must be callable unless a grid is supplied")
    if np.isinf(q):
        return _ks_sup(rs, kappa, 80.0 if np.isinf(radius) else radius, **grid_kw)
    if np.isinf(radius):
        totals = [_ks_integral(rs, kappa, q, R, **grid_kw)[0] for R in (20.0, 40.0, 80.0)]
        if not np.all(np.isfinite(totals)) or abs(totals[2] - totals[1]) > 1e-8 * max(abs(totals[2]), 1e-300):
            return INF
        return totals[2] ** (2 / q)
    return _ks_integral(rs, kappa, q, radius, **grid_kw)[0] ** (2 / q)


# ---------------------------------------------------------------- exponents and admissibility


def _recip(x):
    if x == INF:
        return Fraction(0)
    if isinstance(x, (int, Fraction)):
        return Fraction(1) / Fraction(x)
    return 1.0 / float(x)


def dispersive_exponents(d: int, D: int, q: float, q_tilde: float) -> tuple[float, float]:
    """(max(1/2 - 1/q, 1/2 - 1/q~) d, D/2) for 2 < q, q~ <= inf."""
    for v in (q, q_tilde):
        if not v > 2:
            raise DomainError("dispersive exponents need q, q~ > 2")
    small = max(0.5 - float(_recip(q)), 0.5 - float(_recip(q_tilde))) * d
    return small, D / 2


@dataclass(frozen=True)
class AdmissiblePair:
    p: float
    q: float
    d: int

    def __post_init__(self):
        for v in (self.p, self.q):
            if not (v >= 2):
                raise DomainError("p and q must lie in [2, inf]")

    @classmethod
    def from_reciprocals(cls, inv_p, inv_q, d: int) -> "AdmissiblePair":
        return cls(INF if inv_p == 0 else 1 / Fraction(inv_p), INF if inv_q == 0 else 1 / Fraction(inv_q), d)

    @property
    def dual_q(self):
        """q' with 1/q + 1/q' = 1."""
        r = _recip(self.q)
        return INF if r == 1 else 1 / (1 - r)


def is_admissible(pair: AdmissiblePair) -> bool:
    """(1/p, 1/q) in (0, 1/2] x (0, 1/2) with 2/p + d/q >= d/2, or (1/p, 1/q) = (0, 1/2)."""
    d = pair.d
    if d == 2:
        raise UnsupportedDimensionError("the admissible region is only drawn for d >= 3")
    if d < 2:
        raise DomainError("dimension must be at least 3")
    a, b = _recip(pair.p), _recip(pair.q)
    if a == 0 and b == Fraction(1, 2):
        return True
    if not (0 < a <= Fraction(1, 2) and 0 < b < Fraction(1, 2)):
        return False
    lhs, rhs = 2 * a + d * b, Fraction(d, 2)
    if isinstance(lhs, Fraction):
        return lhs >= rhs
    return lhs >= float(rhs) - 1e-12


# ---------------------------------------------------------------- regime classifier

GLOBAL, LOCAL, OUTSIDE = "globally well-posed", "locally well-posed", "outside stated range"
SCATTERS, NOT_ASSERTED = "scatters", "not asserted"
VERDICT_RANK = {OUTSIDE: 0, LOCAL: 1, GLOBAL: 2}


@dataclass(frozen=True)
class RegimeReport:
    d: int
    gamma: float
    data_class: str
    gauge_invariant: bool
    defocusing: bool
    data_size: str
    threshold: float
    verdict: str
    scattering: str

    def line(self) -> str:
        tail = SCATTERS if self.scattering == SCATTERS else "scattering not asserted"
        return f"{self.verdict}; {tail}"


def _cmp(gamma, threshold) -> int:
    """-1, 0, 1 for gamma below, at, above the threshold (relative tolerance 1e-12 for floats)."""
    if isinstance(gamma, (int, Fraction)):
        diff = Fraction(gamma) - threshold
        return (diff > 0) - (diff < 0)
    diff = float(gamma) - float(threshold)
    if abs(diff) <= 1e-12 * float(threshold):
        return 0
    return 1 if diff > 0 else -1


def _normalize_flags(flags) -> set[str]:
    if flags is None:
        return set()
    if isinstance(flags, str):
        flags = [f for f in re.split(r"[,\s]+", flags) if f]
    if isinstance(flags, dict):
        flags = [k for k, v in flags.items() if v]
    out = {f.strip().lower().replace("_", "-") for f in flags}
    unknown = out - {"gauge-invariant", "defocusing", "none"}
    if unknown:
        raise DomainError(f"unknown flags {sorted(unknown)}")
    return out - {"none"}


def classify_regime(d: int, gamma, data_class: str, flags: Iterable[str] | str | dict | None = None,
                    data_size: str = "small") -> RegimeReport:
    """Well-posedness and scattering verdicts for |u|^(gamma-1) u type nonlinearities.

    L2 data: small data with gamma <= 1 + 4/d is global and scatters; arbitrary
    data with gamma < 1 + 4/d is local, and global when gauge-invariant.  H1
    data: the same with 1 + 4/(d-2) and defocusing.  Anything else is outside
    the stated range.
    """
    if not float(gamma) > 1:
        raise DomainError("gamma must exceed 1")
    cls = str(data_class).upper()
    if cls not in ("L2", "H1"):
        raise DomainError("data class must be L2 or H1")
    size = str(data_size).lower()
    if size not in ("small", "arbitrary"):
        raise DomainError("data size must be small or arbitrary")
    if not isinstance(d, (int, np.integer)) or d < 1:
        raise DomainError("dimension must be a positive integer")
    f = _normalize_flags(flags)
    gauge, defoc = "gauge-invariant" in f, "defocusing" in f
    if cls == "L2":
        threshold, upgrade = 1 + Fraction(4, int(d)), gauge
    else:
        if d < 3:
            raise DomainError("H1 exponent 1 + 4/(d-2) needs d >= 3")
        threshold, upgrade = 1 + Fraction(4, int(d) - 2), defoc
    c = _cmp(gamma, threshold)
    verdict, scattering = OUTSIDE, NOT_ASSERTED
    if size == "small" and c <= 0:
        verdict, scattering = GLOBAL, SCATTERS
    elif size == "arbitrary" and c < 0:
        verdict = GLOBAL if upgrade else LOCAL
    return RegimeReport(int(d), float(gamma), cls, gauge, defoc, size, float(threshold), verdict, scattering)


def parse_request(text: str) -> dict:
    """Parse ``key=value`` tokens (d, gamma, class, flags, size) into classify_regime arguments."""
    fields = {}
    for tok in text.split():
        if "=" not in tok:
            raise DomainError(f"expected key=value, got {tok!r}")
        k, v = tok.split("=", 1)
        fields[k.strip().lower()] = v.strip()
    missing = {"d", "gamma", "class"} - fields.keys()
    if missing:
        raise DomainError(f"missing keys: {', '.join(sorted(missing))}")
    unknown = fields.keys() - {"d", "gamma", "class", "flags", "size"}
    if unknown:
        raise DomainError(f"unknown keys: {', '.join(sorted(unknown))}")
    try:
        d = int(fields["d"])
        gamma = _parse_number(fields["gamma"])
    except (ValueError, ZeroDivisionError) as exc:
        raise DomainError(f"bad number: {exc}") from None
    return dict(d=d, gamma=gamma, data_class=fields["class"], flags=fields.get("flags"),
                data_size=fields.get("size", "small"))


def _parse_number(s: str):
    # exact rationals such as 9/5 or 1.8 and simple sums like 1+4/5
    return sum((Fraction(p) for p in s.split("+")), Fraction(0))


def classify_text(text: str) -> str:
    return classify_regime(**parse_request(text)).line()
