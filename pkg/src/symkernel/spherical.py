"""Spherical functions: Iwasawa K-integral quadrature and rank-one closed forms.

Matrix models: H2 and SL2R live in SL(2,R), H3 and SL2C in SL(2,C), SL3R in
SL(3,R).  A chamber point ``c`` corresponds to ``exp(diag(embedding @ c))``.
The Iwasawa decomposition is taken as ``g = n exp(A) k`` with ``n`` upper
triangular unipotent, which matches the positive system ``e_i - e_j, i < j``
used by :mod:`symkernel.rootsys`.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import DomainError, UnsupportedSpaceError
from .quadrature import _leggauss, gauss_panels, periodic_nodes
from .rootsys import RootSystem, chamber_project, half_sum_rho, in_chamber

EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SphericalValue:
    value: complex | np.ndarray
    method: str  # "quadrature" | "closed-form"
    error: float | np.ndarray = 0.0


def _require_matrix_model(rs: RootSystem):
    if rs.embedding is None:
        raise UnsupportedSpaceError(f"{rs.label} has no matrix model; use phi_closed_form")


def group_element(rs: RootSystem, x) -> np.ndarray:
    """exp(x) as a matrix, for a chamber point (or any a-vector) ``x``."""
    _require_matrix_model(rs)
    diag = np.exp(np.asarray(x, dtype=float) @ rs.embedding.T)
    dtype = complex if rs.group_field == "complex" else float
    return np.einsum("...i,ij->...ij", diag, np.eye(len(rs.embedding))).astype(dtype)


def iwasawa_A(rs: RootSystem, g) -> np.ndarray:
    """a-component of ``g = n exp(A) k``, batched over leading axes of ``g``.

    Uses the QR factorization of the row-reversed conjugate transpose,
    which is the RQ factorization of ``g``.
    """
    _require_matrix_model(rs)
    g = np.asarray(g)
    n = len(rs.embedding)
    if g.shape[-2:] != (n, n):
        raise DomainError(f"expected {n}x{n} matrices for {rs.label}")
    b = np.conj(np.swapaxes(g[..., ::-1, :], -1, -2))
    r = np.linalg.qr(b, mode="r")
    log_diag = np.log(np.abs(np.diagonal(r, axis1=-2, axis2=-1)))[..., ::-1]
    return log_diag @ np.linalg.pinv(rs.embedding).T


def _so2(n):
    th, w = periodic_nodes(n)
    c, s = np.cos(th), np.sin(th)
    k = np.stack([np.stack([c, -s], -1), np.stack([s, c], -1)], -2)
    return k, w / (2 * np.pi)


def _euler_grid(n, gamma_period):
    a, wa = periodic_nodes(n)
    g, wg = periodic_nodes(n, gamma_period)
    u, wu = _leggauss(n)  # u = cos(beta)
    A, U, G = np.meshgrid(a, u, g, indexing="ij")
    W = np.einsum("i,j,k->ijk", wa, wu, wg)
    return A.ravel(), np.arccos(U.ravel()), G.ravel(), W.ravel() / W.sum()


def _rot(axis, t):
    c, s = np.cos(t), np.sin(t)
    z, o = np.zeros_like(t), np.ones_like(t)
    if axis == "z":
        rows = [[c, -s, z], [s, c, z], [z, z, o]]
    else:
        rows = [[c, z, s], [z, o, z], [-s, z, c]]
    return np.moveaxis(np.array(rows), [0, 1], [-2, -1])


def _so3(n):
    a, b, g, w = _euler_grid(n, 2 * np.pi)
    return _rot("z", a) @ _rot("y", b) @ _rot("z", g), w


def _su2(n):
    a, b, g, w = _euler_grid(n, 4 * np.pi)
    cb, sb = np.cos(b / 2), np.sin(b / 2)
    k = np.empty(a.shape + (2, 2), dtype=complex)
    k[..., 0, 0] = np.exp(-0.5j * (a + g)) * cb
    k[..., 0, 1] = -np.exp(-0.5j * (a - g)) * sb
    k[..., 1, 0] = np.exp(0.5j * (a - g)) * sb
    k[..., 1, 1] = np.exp(0.5j * (a + g)) * cb
    return k, w


def _graded_breaks(s: float, vmax: float) -> np.ndarray:
    """Breakpoints in t = sin^2 equally spaced in L = log(t e^s + (1 - t) e^-s), L in [-s, s].

    For SL(2) models |row 2 of k exp(x)|^2 = e^L, so A(k exp(x)) is linear in L:
    panels of equal L width resolve both the peak near t = 0 and the phase
    exp(i <lambda, A>).
    """
    if s <= 0:
        return np.array([0.0, 1.0])
    step = min(0.5, np.pi / max(vmax, 1e-300))
    L = np.linspace(-s, s, max(2, int(np.ceil(2 * s / step))) + 1)
    t = np.expm1(L + s) / np.expm1(2 * s)
    t[0], t[-1] = 0.0, 1.0
    return t


def k_rule(rs: RootSystem, x, order: int, vmax: float = 0.0):
    """Quadrature nodes (matrices) and Haar weights on K adapted to the chamber point ``x``.

    SL(2) models: A(k exp(x)) depends on one angle, by invariance under the
    diagonal subgroup of K on both sides, so the rule is a graded 1-D Gauss
    rule with ``order`` points per panel.  SO(2) is reduced to
    theta in [0, pi/2] by symmetry, with panels mapped from t = sin^2(theta); for SU(2) the Haar measure in
    t = sin^2(beta/2) is dt.  SO(3) uses the Euler-angle product grid with
    ``order`` points per angle.  ``vmax`` bounds |<alpha, lambda>| / <alpha, alpha>.
    """
    _require_matrix_model(rs)
    n = len(rs.embedding)
    if n == 3:
        return _so3(order)
    x = np.asarray(x, dtype=float)
    s = float(np.max(x @ rs.positive_roots.T)) if x.size else 0.0
    breaks = _graded_breaks(s, vmax)
    if rs.group_field == "complex":
        t, w = gauss_panels(breaks, order)
        half = np.arcsin(np.sqrt(t))  # beta / 2
        c, sn = np.cos(half), np.sin(half)
        k = np.stack([np.stack([c, -sn], -1), np.stack([sn, c], -1)], -2).astype(complex)
        return k, w
    th, wt = gauss_panels(np.arcsin(np.sqrt(breaks)), order)
    wt = wt * (2 / np.pi)
    c, sn = np.cos(th), np.sin(th)
    return np.stack([np.stack([c, -sn], -1), np.stack([sn, c], -1)], -2), wt


def k_nodes(rs: RootSystem, nodes: int):
    """Unadapted product rule on K (nodes per angle) with normalized Haar weights."""
    _require_matrix_model(rs)
    n = len(rs.embedding)
    if rs.group_field == "complex":
        return _su2(nodes)
    return _so2(nodes) if n == 2 else _so3(nodes)


def cartan_point(rs: RootSystem, g) -> np.ndarray:
    """Chamber point x+ with g in K exp(x+) K, from the singular values of g."""
    _require_matrix_model(rs)
    sv = np.linalg.svd(np.asarray(g), compute_uv=False)
    logs = np.log(sv)
    logs = logs - logs.mean()
    return logs @ np.linalg.pinv(rs.embedding).T


def _as_chamber_point(rs, x):
    x = np.asarray(x)
    if x.ndim == 2 and x.shape[0] == x.shape[1] and x.shape[0] == len(rs.embedding):
        return cartan_point(rs, x)
    x = np.asarray(x, dtype=float)
    if not in_chamber(rs, x, tol=1e-9):
        x = chamber_project(rs, x)  # phi is W-invariant in x
    return x


def _k_average(rs, lam, x, order):
    lam = np.asarray(lam, dtype=float)
    vmax = float(np.max(np.abs(lam @ rs.positive_roots.T) / np.einsum("ij,ij->i", rs.positive_roots,
                                                                       rs.positive_roots), initial=0.0))
    k, w = k_rule(rs, x, order, vmax)
    A = iwasawa_A(rs, k @ group_element(rs, x))
    expo = 1j * (lam @ A.T) + A @ half_sum_rho(rs)
    f = np.exp(expo)
    return f @ w, np.abs(f) @ w


def phi_quadrature(rs: RootSystem, lam, x, nodes: int = 32) -> SphericalValue:
    """phi_lambda(x) = int_K exp(<i lambda + rho, A(kx)>) dk by quadrature on K.

    ``lam`` may carry leading axes (one value per spectral point).  The value
    uses ``2 * nodes`` points per panel (per angle on SO(3)); the error
    estimate is the difference with the ``nodes`` rule plus a roundoff floor.
    """
    _require_matrix_model(rs)
    if nodes < 16:
        raise DomainError("phi_quadrature needs at least 16 nodes per angle")
    x = _as_chamber_point(rs, x)
    coarse, _ = _k_average(rs, lam, x, nodes)
    fine, mass = _k_average(rs, lam, x, 2 * nodes)
    err = np.abs(fine - coarse) + 64 * EPS * mass
    if np.ndim(fine) == 0:
        return SphericalValue(complex(fine), "quadrature", float(err))
    return SphericalValue(fine, "quadrature", err)


def _rank_one(rs: RootSystem):
    if rs.rank != 1:
        raise UnsupportedSpaceError(f"closed forms exist only for rank-one entries, not {rs.label}")
    a = float(rs.positive_roots[0, 0])
    return a, int(rs.mult[0])


def _theta_breaks(s, vmax, rho0):
    # breakpoints equally spaced in log(cosh s - sinh s cos theta), which resolves the
    # peak at theta = 0 and the oscillation of base^(i v)
    if s == 0:
        return np.array([0.0, np.pi])
    step = min(np.pi / max(vmax, 1e-300), 0.5 / max(rho0, 0.5))
    L = np.linspace(-s, s, max(2, int(np.ceil(2 * s / step))) + 1)
    # cosh s - sinh s cos theta = e^-s + 2 sinh s sin^2(theta / 2), free of cancellation
    h = np.clip(np.expm1(L + s) * np.exp(-s) / (2 * np.sinh(s)), 0.0, 1.0)
    br = 2 * np.arcsin(np.sqrt(h))
    br[0], br[-1] = 0.0, np.pi
    return br


def _sphere_norm(m):
    # int_0^pi sin^(m-1) theta d theta
    return np.sqrt(np.pi) * np.exp(gammaln(m / 2) - gammaln((m + 1) / 2))


def hyperbolic_phi(v, s, m: int) -> np.ndarray:
    """Spherical function of real hyperbolic space of dimension m + 1 (unit root).

    ``v`` is the spectral parameter (array), ``s`` the radius.  m = 2 uses
    sin(vs) / (v sinh s); otherwise the K-integral over the sphere reduces to a
    1-D integral in the polar angle.
    """
    v = np.asarray(v, dtype=float)
    s = float(s)
    if s < 0:
        raise DomainError("radius must be nonnegative")
    if m == 2:
        sinc = np.sinc(v * s / np.pi)
        ratio = 1.0 - s * s / 6 if s < 1e-4 else s / np.sinh(s)
        return sinc * ratio
    if s == 0:
        return np.ones_like(v)
    rho0 = m / 2
    vmax = float(np.max(np.abs(v))) if v.size else 0.0
    th, w = gauss_panels(_theta_breaks(s, vmax, rho0), 16)
    weight = w * np.sin(th) ** (m - 1) / _sphere_norm(m)
    log_base = np.log(np.exp(-s) + 2 * np.sinh(s) * np.sin(th / 2) ** 2)
    vals = np.exp(np.multiply.outer(1j * v - rho0, log_base)) @ weight
    return vals.real


def phi_closed_form(rs: RootSystem, lam, r: float) -> SphericalValue:
    """Rank-one spherical function at spectral point(s) ``lam`` and radius r = |x+|.

    SL2C / H3: sin(v s) / (v sinh s).  H_d and SL2R: polar-angle integral.
    Here v = <alpha, lam> / <alpha, alpha> and s = <alpha, x+>.
    """
    a, m = _rank_one(rs)
    lam = np.asarray(lam, dtype=float)
    if lam.ndim and lam.shape[-1] == 1:
        lam = lam[..., 0]
    if r < 0:
        raise DomainError("radius must be nonnegative")
    val = hyperbolic_phi(lam / a, abs(a) * r, m)
    return SphericalValue(val if np.ndim(val) else float(val), "closed-form", 0.0)


def phi0_envelope(rs: RootSystem, x) -> np.ndarray:
    """prod over reduced roots of (1 + <alpha, x+>) times exp(-<rho, x+>)."""
    x = np.asarray(x, dtype=float)
    poly = np.prod(1.0 + x @ rs.positive_roots.T, axis=-1)
    return poly * np.exp(-(x @ half_sum_rho(rs)))


def radial_laplacian_residual(lam: float, r, h: float = 1e-3) -> np.ndarray:
    """Relative residual of -(d^2/dr^2 + 2 coth r d/dr) phi = (lam^2 + 1) phi for the H3 closed form.

    Five-point stencils; normalized by (lam^2 + 1) max |phi| over ``r``.
    """
    r = np.asarray(r, dtype=float)
    f = lambda y: hyperbolic_phi(np.array([lam]), y, 2)[0]  # noqa: E731
    vals = np.array([[f(y + k * h) for k in (-2, -1, 0, 1, 2)] for y in r])
    d1 = (vals[:, 0] - 8 * vals[:, 1] + 8 * vals[:, 3] - vals[:, 4]) / (12 * h)
    d2 = (-vals[:, 0] + 16 * vals[:, 1] - 30 * vals[:, 2] + 16 * vals[:, 3] - vals[:, 4]) / (12 * h * h)
    lhs = -(d2 + 2 / np.tanh(r) * d1)
    rhs = (lam**2 + 1) * vals[:, 2]
    return np.abs(lhs - rhs) / ((lam**2 + 1) * np.max(np.abs(vals[:, 2])))
