"""Composite Gauss-Legendre rules used by the spectral and K-integrals."""

from __future__ import annotations

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=None)
def _leggauss(n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gauss_panels(breaks, n: int = 16):
    """Nodes and weights of an ``n``-point Gauss-Legendre rule on each panel of ``breaks``."""
    breaks = np.asarray(breaks, dtype=float)
    x, w = _leggauss(n)
    a, b = breaks[:-1, None], breaks[1:, None]
    half = 0.5 * (b - a)
    return (half * x + 0.5 * (a + b)).ravel(), (half * w).ravel()


def chirp_breaks(t: float, upper: float, freq: float = 0.0, phase: float = np.pi) -> np.ndarray:
    """Panel breakpoints on [0, upper] for integrands carrying exp(-i t r^2) and exp(i freq r).

    Each panel spans at most ``phase`` radians of either oscillation.
    """
    pieces = [np.array([0.0, upper])]
    if t:
        du = phase / abs(t)
        pieces.append(np.sqrt(np.arange(0.0, upper**2, du)))
    if freq > 0:
        pieces.append(np.arange(0.0, upper, phase / freq))
    br = np.unique(np.concatenate(pieces))
    br = br[br <= upper]
    keep = np.concatenate([[True], np.diff(br) > 1e-12 * max(upper, 1.0)])
    return br[keep]


def periodic_nodes(n: int, period: float = 2 * np.pi):
    """Trapezoid rule on a full period."""
    th = period * np.arange(n) / n
    return th, np.full(n, period / n)
