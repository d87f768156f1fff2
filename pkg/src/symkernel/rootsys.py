"""Root systems, Weyl groups and Cartan-level geometry for the space catalogue.

Coordinates on the Cartan subspace ``a`` are orthonormal. For SL(n,R)/SO(n)
the roots ``e_i - e_j`` are written in an orthonormal basis of the sum-zero
hyperplane of R^n, so simple roots have squared norm 2. Rank-one hyperbolic
entries use a single unit root.

Spectral points (``lambda``) and chamber points (``x+``) are plain numpy
vectors of length ``rank``; most functions broadcast over leading axes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import CatalogueError, DomainError

LABELS = ("H2", "H3", "H4", "H5", "H6", "SL2R", "SL3R", "SL2C")


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def sum_zero_basis(n: int) -> np.ndarray:
    """Orthonormal basis (columns) of the sum-zero hyperplane of R^n."""
    cols = []
    for k in range(1, n):
        u = np.zeros(n)
        u[:k] = 1.0
        u[k] = -k
        cols.append(u / np.sqrt(k * (k + 1)))
    return np.array(cols).T


@dataclass(frozen=True, eq=False)
class RootSystem:
    """Reduced positive roots with multiplicities, plus a matrix model when one exists.

    ``embedding`` maps a-coordinates to the diagonal of the Lie algebra
    element ``H`` in the matrix model (``H = diag(embedding @ c)``), so that
    ``alpha(H) = <alpha, c>`` for every root.  ``group_field`` is ``"real"``,
    ``"complex"`` or ``None`` when the space has no matrix model here.
    """

    label: str
    rank: int
    positive_roots: np.ndarray  # reduced positive roots, shape (k, rank)
    mult: np.ndarray  # m_alpha
    mult2: np.ndarray  # m_{2 alpha}
    simple_roots: np.ndarray  # shape (rank, rank), one root per row
    embedding: np.ndarray | None = None
    group_field: str | None = None
    _dim: int = field(default=0, repr=False)
    _pseudo_dim: int = field(default=0, repr=False)

    @property
    def dim(self) -> int:
        """Manifold dimension d."""
        return self._dim

    @property
    def pseudo_dim(self) -> int:
        """Dimension at infinity D = rank + 2 |reduced positive roots|."""
        return self._pseudo_dim

    @property
    def all_positive_roots(self) -> tuple[np.ndarray, np.ndarray]:
        """Every positive root (alpha and, where m_{2 alpha} > 0, 2 alpha) with multiplicity."""
        roots = [self.positive_roots]
        mults = [self.mult]
        keep = self.mult2 > 0
        if np.any(keep):
            roots.append(2 * self.positive_roots[keep])
            mults.append(self.mult2[keep])
        return np.concatenate(roots), np.concatenate(mults)

    @property
    def roots(self) -> np.ndarray:
        """The full root set, positive and negative."""
        pos, _ = self.all_positive_roots
        return np.concatenate([pos, -pos])

    @property
    def n_reduced(self) -> int:
        return len(self.positive_roots)

    @property
    def is_rank_one(self) -> bool:
        return self.rank == 1


def _make(label, roots, mult, mult2, simple, embedding=None, field_=None) -> RootSystem:
    roots = _frozen(roots)
    mult = np.array(mult, dtype=int)
    mult2 = np.array(mult2, dtype=int)
    mult.setflags(write=False)
    mult2.setflags(write=False)
    simple = _frozen(simple)
    rank = simple.shape[0]
    d = rank + int(mult.sum() + mult2.sum())
    D = rank + 2 * len(roots)
    emb = None if embedding is None else _frozen(embedding)
    return RootSystem(label, rank, roots, mult, mult2, simple, emb, field_, d, D)


@lru_cache(maxsize=None)
def build_root_system(label: str) -> RootSystem:
    """Instantiate the catalogue entry named ``label`` (H2..H6, SL2R, SL3R, SL2C)."""
    if not isinstance(label, str) or label not in LABELS:
        raise CatalogueError(f"unknown space label {label!r}; expected one of {', '.join(LABELS)}")
    half = [[0.5], [-0.5]]
    if label.startswith("H"):
        d = int(label[1:])
        # H2 = SL(2,R)/SO(2) and H3 = SL(2,C)/SU(2) with the curvature -1 metric
        emb, fld = {2: (half, "real"), 3: (half, "complex")}.get(d, (None, None))
        return _make(label, [[1.0]], [d - 1], [0], [[1.0]], emb, fld)
    if label == "SL2C":
        return _make(label, [[1.0]], [2], [0], [[1.0]], half, "complex")
    n = int(label[2])
    U = sum_zero_basis(n)
    eye = np.eye(n)
    pos = [U.T @ (eye[i] - eye[j]) for i, j in itertools.combinations(range(n), 2)]
    simple = [U.T @ (eye[i] - eye[i + 1]) for i in range(n - 1)]
    return _make(label, pos, [1] * len(pos), [0] * len(pos), simple, U, "real")


def half_sum_rho(rs: RootSystem) -> np.ndarray:
    """rho = 1/2 sum over positive roots of m_alpha alpha."""
    roots, mults = rs.all_positive_roots
    return 0.5 * (mults[:, None] * roots).sum(axis=0)


def dual_basis(rs: RootSystem) -> np.ndarray:
    """Rows Lambda_k with <alpha_j, Lambda_k> = delta_jk."""
    # rows of S are simple roots; S @ L.T = I
    return np.linalg.solve(rs.simple_roots, np.eye(rs.rank)).T


def in_chamber(rs: RootSystem, x, tol: float = 1e-12) -> bool:
    x = np.asarray(x, dtype=float)
    return bool(np.all(x @ rs.simple_roots.T >= -tol))


def cartan_density(rs: RootSystem, x) -> np.ndarray:
    """delta(x+) = prod over positive roots of sinh(<alpha, x+>)^m_alpha."""
    x = np.asarray(x, dtype=float)
    roots, mults = rs.all_positive_roots
    return np.prod(np.sinh(x @ roots.T) ** mults, axis=-1)


def log_cartan_density(rs: RootSystem, x) -> np.ndarray:
    """log delta(x+) for x+ in the open chamber, stable for large arguments."""
    x = np.asarray(x, dtype=float)
    roots, mults = rs.all_positive_roots
    u = x @ roots.T
    with np.errstate(divide="ignore"):
        log_sinh = u + np.log1p(-np.exp(-2 * u)) - np.log(2.0)
    return (mults * log_sinh).sum(axis=-1)


@dataclass(frozen=True, eq=False)
class WeylElement:
    matrix: np.ndarray
    word: tuple[int, ...]

    @property
    def det(self) -> int:
        return int(round(np.linalg.det(self.matrix)))

    def __call__(self, v):
        return np.asarray(v, dtype=float) @ self.matrix.T


def reflection(alpha) -> np.ndarray:
    alpha = np.asarray(alpha, dtype=float)
    return np.eye(len(alpha)) - 2.0 * np.outer(alpha, alpha) / (alpha @ alpha)


@lru_cache(maxsize=None)
def _weyl_cached(label: str) -> tuple[WeylElement, ...]:
    rs = build_root_system(label)
    gens = [reflection(a) for a in rs.simple_roots]
    key = lambda m: tuple(np.round(m, 9).ravel())  # noqa: E731
    seen = {key(np.eye(rs.rank)): WeylElement(_frozen(np.eye(rs.rank)), ())}
    frontier = list(seen.values())
    while frontier:
        nxt = []
        for el in frontier:
            for i, s in enumerate(gens):
                m = s @ el.matrix
                k = key(m)
                if k not in seen:
                    seen[k] = WeylElement(_frozen(m), (i,) + el.word)
                    nxt.append(seen[k])
        frontier = nxt
    return tuple(seen.values())


def weyl_group(rs: RootSystem) -> list[WeylElement]:
    """All Weyl group elements, found by breadth-first closure over simple reflections.

    ``word`` lists simple-reflection indices, leftmost applied last.
    """
    return list(_weyl_cached(rs.label))


def chamber_project(rs: RootSystem, v) -> np.ndarray:
    """Weyl-conjugate of ``v`` lying in the closed positive chamber."""
    x = np.array(v, dtype=float)
    S = rs.simple_roots
    for _ in range(1000):
        p = S @ x
        j = int(np.argmin(p))
        if p[j] >= -1e-14:
            return x
        a = S[j]
        x = x - 2.0 * p[j] / (a @ a) * a
    raise DomainError("chamber projection did not terminate")  # pragma: no cover


def root_table(rs: RootSystem) -> str:
    """Plain-text export: one reduced positive root per line, coordinates then m_alpha, m_2alpha."""
    lines = [f"# {rs.label} rank={rs.rank} d={rs.dim} D={rs.pseudo_dim}"]
    for a, m, m2 in zip(rs.positive_roots, rs.mult, rs.mult2):
        coords = " ".join(f"{c:.15g}" for c in a)
        lines.append(f"{coords} {m} {m2}")
    return "\n".join(lines) + "\n"


def random_chamber_direction(rs: RootSystem, rng: np.random.Generator, margin: float = 0.05) -> np.ndarray:
    """Unit vector in the open chamber, away from the walls by ``margin`` (relative pairing)."""
    for _ in range(1000):
        v = chamber_project(rs, rng.standard_normal(rs.rank))
        v /= np.linalg.norm(v)
        if np.all(rs.simple_roots @ v > margin * np.linalg.norm(rs.simple_roots, axis=1)):
            return v
    raise DomainError("could not sample an interior chamber direction")  # pragma: no cover
