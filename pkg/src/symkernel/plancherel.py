"""Plancherel density |c(lambda)|^{-2} from the Gindikin-Karpelevic product.

Each reduced positive root contributes the modulus of the Gamma quotient

    Gamma(iv) / Gamma(iv + m/2) * Gamma(iv/2 + m/4) / Gamma(iv/2 + m/4 + m2/2)

evaluated at ``v = <alpha, lambda> / <alpha, alpha>``.  The leading constants
C_alpha are set to 1.  Everything is carried in log form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import stats
from scipy.special import gammaln, loggamma

from .errors import ConfigurationError
from .rootsys import RootSystem, half_sum_rho, random_chamber_direction

SMALL_V = 1e-6


@dataclass(frozen=True)
class CFactor:
    root: tuple[float, ...]
    m: int
    m2: int
    rho_ratio: float  # <alpha, rho> / <alpha, alpha>
    const: float = 1.0


def c_factors(rs: RootSystem) -> list[CFactor]:
    rho = half_sum_rho(rs)
    out = []
    for a, m, m2 in zip(rs.positive_roots, rs.mult, rs.mult2):
        out.append(CFactor(tuple(a), int(m), int(m2), float(a @ rho / (a @ a))))
    return out


def _log_origin_coeff(m: int, m2: int) -> float:
    # |c(v)|^{-2} = coeff * v^2 + O(v^4) near v = 0
    out = 2 * gammaln(m / 2)
    if m2:
        out += 2 * gammaln(m / 4 + m2 / 2) - 2 * gammaln(m / 4)
    return float(out)


def log_c_factor_gamma(m: int, m2: int, v) -> np.ndarray:
    """log |c_alpha(v)|^{-2} from complex log-Gamma (``-inf`` at v = 0)."""
    v = np.abs(np.asarray(v, dtype=float))
    small = v < SMALL_V
    iv = 1j * np.where(small, 1.0, v)  # keep loggamma away from its pole
    out = 2 * (loggamma(iv + m / 2).real - loggamma(iv).real)
    if m2:
        out += 2 * (loggamma(iv / 2 + m / 4 + m2 / 2).real - loggamma(iv / 2 + m / 4).real)
    with np.errstate(divide="ignore"):
        guard = _log_origin_coeff(m, m2) + 2 * np.log(v)
    return np.where(small, guard, out)


def log_c_factor_elementary(m: int, v) -> np.ndarray:
    """Same quantity for m2 = 0 and integer m, by the Gamma recurrence and reflection formulas.

    |Gamma(iv + k) / Gamma(iv)|^2 = prod_{j<k} (v^2 + j^2) and
    |Gamma(iv + k + 1/2) / Gamma(iv)|^2 = v tanh(pi v) prod_{j<k} (v^2 + (j + 1/2)^2).
    """
    v = np.abs(np.asarray(v, dtype=float))
    k, odd = divmod(int(m), 2)
    shifts = np.arange(k) + 0.5 * odd
    with np.errstate(divide="ignore"):
        if odd:
            out = np.log(v) + np.log(np.tanh(np.pi * v))
        else:
            out = 2 * np.log(v)
            shifts = shifts[1:]
        for j in shifts:
            out = out + np.log(v * v + j * j)
    return out


def log_c_factor(m: int, m2: int, v) -> np.ndarray:
    """log |c_alpha(v)|^{-2}; elementary closed form when m2 = 0, log-Gamma otherwise."""
    if m2 == 0 and float(m).is_integer() and m >= 1:
        return log_c_factor_elementary(m, v)
    return log_c_factor_gamma(m, m2, v)


def c_factor_modulus_sq_inv(f: CFactor, v) -> np.ndarray:
    """|c_alpha(v)|^{-2}; even in v, ~ v^2 at the origin and ~ |v|^(m + m2) at infinity."""
    return f.const * np.exp(log_c_factor(f.m, f.m2, v))


@dataclass(frozen=True)
class DensityValue:
    log_magnitude: np.ndarray | float

    @property
    def value(self):
        return np.exp(self.log_magnitude)


def log_density(rs: RootSystem, lam) -> np.ndarray:
    """log |c(lambda)|^{-2}, broadcasting over leading axes of ``lam``."""
    lam = np.asarray(lam, dtype=float)
    roots = rs.positive_roots
    v = (lam @ roots.T) / np.einsum("ij,ij->i", roots, roots)
    total = np.zeros(v.shape[:-1])
    for k, (m, m2) in enumerate(zip(rs.mult, rs.mult2)):
        total = total + log_c_factor(int(m), int(m2), v[..., k])
    return total


def density(rs: RootSystem, lam) -> np.ndarray:
    return np.exp(log_density(rs, lam))


def plancherel_density(rs: RootSystem, lam) -> DensityValue:
    return DensityValue(log_density(rs, lam))


REGIMES = {"small": (1e-3, 1e-1), "large": (1e2, 1e4)}


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    stderr: float
    intercept: float
    direction: np.ndarray
    target: float


def asymptotic_slope(rs: RootSystem, regime: str, n_points: int = 40, seed: int = 0) -> SlopeFit:
    """Fit log density against log |lambda| along a random interior chamber ray.

    Targets are D - rank (small) and d - rank (large).
    """
    if regime not in REGIMES:
        raise ConfigurationError(f"regime must be 'small' or 'large', got {regime!r}")
    if n_points < 8:
        raise ConfigurationError("need at least 8 sample points for a slope fit")
    direction = random_chamber_direction(rs, np.random.default_rng(seed))
    radii = np.geomspace(*REGIMES[regime], n_points)
    logs = log_density(rs, radii[:, None] * direction)
    fit = stats.linregress(np.log(radii), logs)
    target = (rs.pseudo_dim if regime == "small" else rs.dim) - rs.rank
    return SlopeFit(float(fit.slope), float(fit.stderr), float(fit.intercept), direction, target)


def density_profile_csv(rs: RootSystem, direction, radii) -> str:
    """CSV (lambda_norm, log_density) along one ray."""
    direction = np.asarray(direction, dtype=float)
    direction = direction / np.linalg.norm(direction)
    radii = np.asarray(radii, dtype=float)
    logs = log_density(rs, radii[:, None] * direction)
    rows = ["lambda_norm,log_density"]
    rows += [f"{r:.17g},{g:.17g}" for r, g in zip(radii, logs)]
    return "\n".join(rows) + "\n"
