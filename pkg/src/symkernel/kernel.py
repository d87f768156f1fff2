"""Schrodinger kernel as a regularized oscillatory spectral integral.

The shifted kernel is

    s_t(x) = int_a |c(lambda)|^{-2} phi_lambda(x) exp(-i t |lambda|^2) d lambda

with the normalizing constant set to 1.  The unshifted propagator of
-Delta - |rho|^2 differs by the unimodular factor exp(i t |rho|^2), so moduli
are unaffected.  The integral is damped by exp(-eps |lambda|^2), truncated at
``lambda_max`` and extrapolated to eps = 0 with a two-step Richardson scheme
over eps0, eps0/2, eps0/4 (the damped value is smooth in eps).

Radial panels are equally spaced in |lambda|^2 so that each spans a fixed
phase of the chirp; a 16-point Gauss rule is compared with an 8-point rule on
the same panels for the quadrature error.  In rank two the angular integral
uses the trapezoid rule, and the nested half rule gives its error.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import stats
from scipy.special import erfc, gammainccinv, gammaincc, gammaln

from .errors import ConfigurationError, DomainError, UnsupportedSpaceError
from .plancherel import log_density
from .quadrature import chirp_breaks, gauss_panels, periodic_nodes
from .rootsys import RootSystem, build_root_system, half_sum_rho, in_chamber
from .spherical import group_element, hyperbolic_phi, iwasawa_A, k_rule

ETA = 0.02  # eps0 = ETA * |t|
TAIL_TARGET = 1e-12  # regularized incomplete Gamma level fixing the default cutoff
PANEL_PHASE = np.pi
CHUNK = 1 << 21  # complex entries per block in batched products


@dataclass(frozen=True)
class KernelSample:
    t: float
    x: np.ndarray
    value: complex
    error: float
    epsilon: float  # eps0 of the Richardson schedule
    lambda_max: float  # cutoff used at the finest level
    tail: float = 0.0
    levels: tuple = field(default=(), repr=False)

    def __post_init__(self):
        if self.t == 0:
            raise DomainError("t must be nonzero")
        if not np.isfinite(self.error):
            raise DomainError("kernel error estimate is not finite")

    @property
    def relative_error(self) -> float:
        return self.error / abs(self.value) if self.value else np.inf


def default_lambda_max(rs: RootSystem, eps: float) -> float:
    """sqrt(x / eps) with Q(d/2, x) = TAIL_TARGET (Q the regularized upper incomplete Gamma)."""
    if eps <= 0:
        raise ConfigurationError("a positive damping is needed to choose lambda_max")
    return float(np.sqrt(gammainccinv(rs.dim / 2, TAIL_TARGET) / eps))


def default_eps0(t: float, r: float = 0.0, eta: float = ETA) -> float:
    """eps0 = |t| min(eta, 0.5 |t| / r^2).

    The damped kernel depends on eps through exp(-eps r^2 / 4 t^2) near the
    wave front, so eps0 shrinks with r^2 / |t| to keep Richardson effective.
    """
    t = abs(t)
    return t * (eta if r == 0 else min(eta, 0.5 * t / r**2))


def _angular_dirs(rs: RootSystem, n: int):
    if rs.rank == 1:
        return np.array([[1.0], [-1.0]]), np.array([1.0, 1.0])
    th, w = periodic_nodes(n)
    return np.stack([np.cos(th), np.sin(th)], axis=-1), w


def tail_bound(rs: RootSystem, eps: float, lam_max: float) -> float:
    """Bound for the damped integrand beyond ``lam_max``, using |phi| <= 1 and density ~ |lambda|^(d - rank)."""
    if eps <= 0:
        return np.inf
    u, w = _angular_dirs(rs, 64)
    lead = np.max(np.exp(log_density(rs, lam_max * u))) / lam_max ** (rs.dim - rs.rank)
    a = rs.dim / 2
    moment = 0.5 * np.exp(gammaln(a) - a * np.log(eps)) * gammaincc(a, eps * lam_max**2)
    return float(2.0 * lead * w.sum() * moment)


def _rank_one_phi(rs: RootSystem, rho, r: float) -> np.ndarray:
    a = float(rs.positive_roots[0, 0])
    m = int(rs.mult[0])
    out = np.empty(len(rho))
    step = max(1, CHUNK // max(1, int(64 + 40 * r * rho.max())))
    for i in range(0, len(rho), step):
        out[i:i + step] = hyperbolic_phi(rho[i:i + step] / a, abs(a) * r, m)
    return out


def _angular_count(rho_max: float, freq: float) -> int:
    n = 64
    while n < 1.5 * rho_max * freq + 64:
        n *= 2
    return n


def _radial_profile(rs: RootSystem, rho, A=None, r=None, n_ang=64):
    """Angular integral g(rho) of density x (phi or exp(i<lambda, A>)), times rho^(rank - 1).

    Returns (values, [alternate values]); the alternate is the nested half
    angular rule in rank two and absent in rank one.
    """
    if rs.rank == 1:
        base = np.exp(log_density(rs, rho[:, None]))
        if r is not None:
            vals = 2.0 * base * _rank_one_phi(rs, rho, r)
        else:
            a = 0.0 if A is None else float(np.ravel(A)[0])
            vals = 2.0 * base * np.cos(rho * a)
        return vals.astype(complex), []
    u, w = _angular_dirs(rs, n_ang)
    lam = rho[:, None, None] * u[None]
    f = np.exp(log_density(rs, lam)).astype(complex)
    if A is not None:
        f = f * np.exp(1j * (lam @ np.asarray(A, dtype=float)))
    full = f @ w
    half = f[:, ::2] @ (2 * w[::2])
    return rho * full, [rho * half]


def _damped(rs, t, eps, lam_max, freq, profile):
    z = eps + 1j * t
    br = chirp_breaks(t, lam_max, freq=freq, phase=PANEL_PHASE)
    out = []
    for n in (16, 8):
        rho, w = gauss_panels(br, n)
        g, alts = profile(rho)
        e = np.exp(-z * rho**2)
        out.append((np.sum(w * g * e), [np.sum(w * a * e) for a in alts]))
    (v16, alts16), (v8, _) = out
    return v16, abs(v16 - v8) + sum(abs(v16 - a) for a in alts16)


def _richardson(rs, t, eps0, lam_max, freq, profile):
    if t == 0:
        raise DomainError("t must be nonzero")
    if eps0 < 0:
        raise DomainError("eps must be nonnegative")
    if eps0 == 0:
        if lam_max is None:
            raise ConfigurationError("eps = 0 needs an explicit lambda_max")
        v, q = _damped(rs, t, 0.0, lam_max, freq, profile)
        return v, q + tail_bound(rs, 0.0, lam_max), (v,), lam_max, np.inf
    vals, quad, lams, tails = [], [], [], []
    for k in range(3):
        eps = eps0 / 2**k
        L = lam_max if lam_max is not None else default_lambda_max(rs, eps)
        v, q = _damped(rs, t, eps, L, freq, profile)
        vals.append(v)
        quad.append(q)
        lams.append(L)
        tails.append(tail_bound(rs, eps, L))
    v0, v1, v2 = vals
    r1 = 2 * v2 - v1
    r2 = (8 * v2 - 6 * v1 + v0) / 3
    numeric = (8 * (quad[2] + tails[2]) + 6 * (quad[1] + tails[1]) + quad[0] + tails[0]) / 3
    return r2, abs(r2 - r1) + numeric, tuple(vals), lams[-1], tails[-1]


def _as_point(rs: RootSystem, x) -> np.ndarray:
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if x.shape != (rs.rank,):
        raise DomainError(f"chamber point for {rs.label} needs {rs.rank} coordinate(s)")
    if not in_chamber(rs, x):
        raise DomainError("x must lie in the closed positive chamber")
    return x


def inner_integral_I(rs: RootSystem, t: float, A=None, eps: float | None = None,
                     lam_max: float | None = None) -> tuple[complex, float]:
    """int_a density(lambda) exp(-i t |lambda|^2 + i <lambda, A>) d lambda, with an error estimate."""
    A = np.zeros(rs.rank) if A is None else np.atleast_1d(np.asarray(A, dtype=float))
    if A.shape != (rs.rank,):
        raise DomainError(f"A must have {rs.rank} coordinate(s)")
    freq = float(np.linalg.norm(A))
    eps0 = default_eps0(t, freq) if eps is None else eps
    L0 = lam_max if lam_max is not None else default_lambda_max(rs, max(eps0, 1e-300) / 4)
    n_ang = _angular_count(L0, freq)
    profile = lambda rho: _radial_profile(rs, rho, A=A, n_ang=n_ang)  # noqa: E731
    v, err, *_ = _richardson(rs, t, eps0, lam_max, freq, profile)
    return complex(v), float(err)


def _k_factorized(rs, t, x, eps0, lam_max, nodes):
    """s_t(x) = int_K exp(<rho, A(kx)>) I(t, A(kx)) dk.

    The K-rule with ``nodes`` points per angle is compared with the rule at
    half that count for the K-discretization error.
    """
    g0 = group_element(rs, x)
    rho_vec = half_sum_rho(rs)
    As, ws = [], []
    for n in (nodes, max(2, nodes // 2)):
        k, w = k_rule(rs, x, n)
        A = iwasawa_A(rs, k @ g0)
        As.append(A)
        ws.append(w * np.exp(A @ rho_vec))
    A = np.concatenate(As)
    W = np.zeros((len(A), 2))
    W[:len(As[0]), 0] = ws[0]
    W[len(As[0]):, 1] = ws[1]
    freq = float(np.max(np.linalg.norm(A, axis=-1)))
    L0 = lam_max if lam_max is not None else default_lambda_max(rs, eps0 / 4)
    n_ang = _angular_count(L0, freq)
    u, wu = _angular_dirs(rs, n_ang)
    half = np.zeros_like(wu)
    half[::2] = 2 * wu[::2]

    def profile(rho):
        lam = rho[:, None, None] * u[None]
        dens = np.exp(log_density(rs, lam))
        g = np.zeros((len(rho), 2), dtype=complex)
        gh = np.zeros(len(rho), dtype=complex)
        step = max(1, CHUNK // (len(rho) * n_ang))
        for i in range(0, len(A), step):
            ph = np.exp(1j * np.einsum("rad,kd->rak", lam, A[i:i + step]))
            kw = np.einsum("rak,kc->rac", ph, W[i:i + step])
            g += np.einsum("ra,a,rac->rc", dens, wu, kw)
            gh += np.einsum("ra,a,ra->r", dens, half, kw[..., 0])
        scale = rho ** (rs.rank - 1)
        alts = [scale * g[:, 1]] + ([scale * gh] if rs.rank > 1 else [])
        return scale * g[:, 0], alts

    return _richardson(rs, t, eps0, lam_max, freq, profile)


def schrodinger_kernel(rs: RootSystem, t: float, x, eps: float | None = None, lam_max: float | None = None,
                       slow: bool = False, k_nodes_per_angle: int = 12, method: str = "auto") -> KernelSample:
    """Shifted Schrodinger kernel s_t(x+) with a combined error estimate.

    ``eps`` is eps0 of the Richardson schedule (default :func:`default_eps0`); ``lam_max``
    defaults to :func:`default_lambda_max` at each level.  Rank-one spaces use
    the closed-form spherical functions.  In rank two the value at x+ = 0 is
    the inner integral I(t, 0); elsewhere the K-factorized evaluation runs only
    with ``slow=True``.  ``method="k-factorized"`` forces the K-integral of the
    inner integral on any matrix model (a cross-check in rank one).
    """
    if method not in ("auto", "k-factorized"):
        raise ConfigurationError(f"method must be 'auto' or 'k-factorized', got {method!r}")
    x = _as_point(rs, x)
    if t == 0:
        raise DomainError("t must be nonzero")
    r = float(np.linalg.norm(x))
    eps0 = default_eps0(t, r) if eps is None else float(eps)
    if method == "k-factorized":
        if rs.embedding is None:
            raise UnsupportedSpaceError(f"no matrix model for {rs.label}")
        out = _k_factorized(rs, t, x, eps0, lam_max, k_nodes_per_angle)
    elif rs.rank == 1:
        profile = lambda rho: _radial_profile(rs, rho, r=r)  # noqa: E731
        out = _richardson(rs, t, eps0, lam_max, r, profile)
    elif r == 0:
        profile = lambda rho: _radial_profile(rs, rho, A=np.zeros(rs.rank),  # noqa: E731
                                              n_ang=64)
        out = _richardson(rs, t, eps0, lam_max, 0.0, profile)
    elif slow:
        if rs.embedding is None:
            raise UnsupportedSpaceError(f"no matrix model for {rs.label}")
        out = _k_factorized(rs, t, x, eps0, lam_max, k_nodes_per_angle)
    else:
        raise UnsupportedSpaceError(f"full kernel on {rs.label} away from the origin needs slow=True")
    v, err, levels, L, tail = out
    return KernelSample(float(t), x, complex(v), float(err), eps0, float(L), float(tail), levels)


def h3_kernel_modulus(t: float, r) -> np.ndarray:
    """(4 pi |t|)^(-3/2) r / sinh r, the modulus of the heat-type closed form on H3."""
    r = np.asarray(r, dtype=float)
    ratio = np.where(r == 0, 1.0, r / np.sinh(np.where(r == 0, 1.0, r)))
    return (4 * np.pi * abs(t)) ** -1.5 * ratio


def subordination_s_max(t: float, mu: float) -> float:
    """Default truncation: 2 |t| mu + 6 sqrt|t|, past the stationary point of the chirp."""
    return 2 * abs(t) * mu + 6 * np.sqrt(abs(t))


def _fresnel_tail(c, a):
    # int_a^inf exp(-c y^2) dy for Re c >= 0 (conditionally convergent when Re c = 0), a > 0
    sc = np.sqrt(c)
    return np.sqrt(np.pi) / (2 * sc) * erfc(sc * a)


def subordination_check(t: float, mu: float, s_max: float | None = None) -> complex:
    """C2 |t|^(-1/2) int_0^inf exp(i s^2 / 4t) cos(s mu) ds, which should equal exp(-i t mu^2).

    Gauss panels on [0, s_max] plus the exact complementary-error-function tail.
    Requires s_max > 2 |t| mu so that both shifted tails start past the
    stationary points.
    """
    if t == 0:
        raise DomainError("t must be nonzero")
    if mu < 0:
        raise DomainError("mu must be nonnegative")
    s_max = subordination_s_max(t, mu) if s_max is None else float(s_max)
    if s_max <= 2 * abs(t) * mu:
        raise ConfigurationError(f"s_max={s_max} must exceed 2|t|mu={2 * abs(t) * mu}")
    s, w = gauss_panels(chirp_breaks(1 / (4 * t), s_max, freq=mu, phase=np.pi / 2), 16)
    body = np.sum(w * np.exp(1j * s**2 / (4 * t)) * np.cos(s * mu))
    c = -1j / (4 * t)
    shift = np.exp(-1j * t * mu**2)
    tail = 0.5 * shift * (_fresnel_tail(c, s_max + 2 * t * mu) + _fresnel_tail(c, s_max - 2 * t * mu))
    c2 = np.exp(-0.25j * np.pi * np.sign(t)) / np.sqrt(np.pi)
    return complex(c2 / np.sqrt(abs(t)) * (body + tail))


def jacobian_J(rs: RootSystem, H) -> np.ndarray:
    """prod over positive roots of (sinh<alpha, H> / <alpha, H>)^m_alpha; 1 at H = 0."""
    H = np.asarray(H, dtype=float)
    roots, mults = rs.all_positive_roots
    u = H @ roots.T
    ratio = np.where(u == 0, 1.0, np.sinh(u) / np.where(u == 0, 1.0, u))
    return np.prod(ratio**mults, axis=-1)


# ---------------------------------------------------------------- decay experiments

DEFAULT_WINDOWS = {"small": (0.01, 0.5), "large": (1.0, 100.0)}


@dataclass
class DecayFit:
    regime: str
    slope: float
    stderr: float
    times: np.ndarray
    target: float
    space: str = ""
    x: np.ndarray = field(default_factory=lambda: np.zeros(0))
    samples: list = field(default_factory=list, repr=False)
    excluded: list = field(default_factory=list)
    method: str = "kernel"

    def __post_init__(self):
        t = np.asarray(self.times)
        if self.regime == "small" and not np.all((t > 0) & (t < 1)):
            raise DomainError("small-time grid must lie strictly inside (0, 1)")
        if self.regime == "large" and not np.all(t >= 1):
            raise DomainError("large-time grid must lie in [1, inf)")


def time_grid(t_min: float, t_max: float, per_decade: int = 12) -> np.ndarray:
    if not 0 < t_min < t_max:
        raise ConfigurationError("time grid needs 0 < t_min < t_max")
    if per_decade < 1:
        raise ConfigurationError("points per decade must be positive")
    n = int(np.ceil(per_decade * np.log10(t_max / t_min))) + 1
    return np.geomspace(t_min, t_max, n)


def _eval_point(args):
    label, t, x, use_inner, eta, slow = args
    rs = build_root_system(label)
    eps0 = default_eps0(t, float(np.linalg.norm(x)), eta)
    if use_inner:
        v, e = inner_integral_I(rs, t, None, eps=eps0)
        return KernelSample(t, np.asarray(x, dtype=float), v, e, eps0, default_lambda_max(rs, eps0 / 4))
    return schrodinger_kernel(rs, t, x, eps=eps0, slow=slow)


def parallel_map(fn, items, jobs: int = 1):
    """Ordered map, run in a process pool when ``jobs`` > 1."""
    items = list(items)
    if jobs is None or jobs <= 1 or len(items) < 2:
        return [fn(i) for i in items]
    with ProcessPoolExecutor(max_workers=min(jobs, os.cpu_count() or 1)) as ex:
        return list(ex.map(fn, items))


def decay_slope(rs: RootSystem, x, regime: str, t_range: tuple[float, float] | None = None,
                per_decade: int = 12, jobs: int = 1, slow: bool = False, eta: float = ETA,
                max_rel_error: float = 0.1) -> DecayFit:
    """Fit log|s_t(x+)| against log t on a geometric grid.

    Points whose error estimate exceeds ``max_rel_error`` of the value are
    excluded and listed; fewer than 8 remaining points is a failure.  In rank
    two (without ``slow``) the inner integral I(t, 0) stands in for the kernel.
    Targets are -d/2 (small) and -D/2 (large).
    """
    if regime not in DEFAULT_WINDOWS:
        raise ConfigurationError(f"regime must be 'small' or 'large', got {regime!r}")
    x = _as_point(rs, x)
    lo, hi = t_range or DEFAULT_WINDOWS[regime]
    times = time_grid(lo, hi, per_decade)
    if regime == "small" and np.linalg.norm(x) > np.sqrt(times[0]) + 1e-12:
        raise DomainError("small-time regime needs |x+| <= sqrt(t_min)")
    if regime == "large" and np.linalg.norm(x) > 2:
        raise DomainError("large-time regime uses |x+| <= 2")
    use_inner = rs.rank > 1 and not slow
    args = [(rs.label, float(t), tuple(x), use_inner, eta, slow) for t in times]
    samples = parallel_map(_eval_point, args, jobs)
    good = np.array([s.error <= max_rel_error * abs(s.value) for s in samples])
    excluded = [float(s.t) for s, g in zip(samples, good) if not g]
    target = -(rs.dim if regime == "small" else rs.pseudo_dim) / 2
    method = "inner integral at A = 0" if use_inner else "kernel"
    if good.sum() < 8:
        raise ConfigurationError(f"only {good.sum()} valid time points (need 8); excluded t = {excluded}")
    vals = np.array([abs(s.value) for s in samples])
    fit = stats.linregress(np.log(times[good]), np.log(vals[good]))
    return DecayFit(regime, float(fit.slope), float(fit.stderr), times, target, rs.label, x,
                    samples, excluded, method)


def envelope_profile(rs: RootSystem, t: float, direction, radii, eta: float = ETA) -> np.ndarray:
    """log|s_t(r u)| + <rho, r u> along a chamber ray (flat up to a polynomial factor)."""
    u = np.asarray(direction, dtype=float)
    u = u / np.linalg.norm(u)
    rho = half_sum_rho(rs)
    out = []
    for r in radii:
        s = schrodinger_kernel(rs, t, r * u, eps=default_eps0(t, r, eta))
        out.append(np.log(abs(s.value)) + r * (u @ rho))
    return np.array(out)


KERNEL_COLUMNS = ("space", "t", "x_norm", "re_value", "im_value", "abs_value", "err_estimate", "epsilon",
                  "lambda_max")


def kernel_csv(space: str, samples) -> str:
    rows = [",".join(KERNEL_COLUMNS)]
    for s in samples:
        rows.append(",".join([space] + [f"{v:.17g}" for v in (
            s.t, float(np.linalg.norm(s.x)), s.value.real, s.value.imag, abs(s.value), s.error, s.epsilon,
            s.lambda_max)]))
    return "\n".join(rows) + "\n"


def fit_report(fit: DecayFit, tol: float) -> str:
    ok = abs(fit.slope - fit.target) <= tol
    return "\n".join([
        f"space={fit.space} regime={fit.regime} method={fit.method}",
        f"x_plus={' '.join(f'{c:.6g}' for c in fit.x)}",
        f"grid t=[{fit.times[0]:.6g}, {fit.times[-1]:.6g}] points={len(fit.times)}",
        f"slope={fit.slope:.6f} stderr={fit.stderr:.2e} target={fit.target:.6g} tol={tol}",
        f"excluded={fit.excluded}",
        f"eps_schedule=eps0,eps0/2,eps0/4 with eps0=|t|min({ETA},0.5|t|/|x|^2) (default)",
        f"lambda_max=sqrt(x/eps), Q(d/2,x)={TAIL_TARGET:g}",
        f"result={'PASS' if ok else 'FAIL'}",
    ]) + "\n"
