"""Fixed-rule radial quadrature shared by the overlap integrals."""

from __future__ import annotations

import numpy as np

_GL_CACHE: dict[int, tuple[np.ndarray, np.ndarray]] = {}


def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1], cached per order."""
    if n not in _GL_CACHE:
        _GL_CACHE[n] = np.polynomial.legendre.leggauss(n)
    return _GL_CACHE[n]


def panel_nodes(edges, order: int = 32) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes/weights over consecutive ``edges``."""
    edges = np.asarray(edges, dtype=float)
    x, w = gauss_legendre(order)
    lo, hi = edges[:-1, None], edges[1:, None]
    half = 0.5 * (hi - lo)
    nodes = (lo + half * (x + 1)).ravel()
    weights = (half * w).ravel()
    return nodes, weights


def radial_nodes(knots, outer: float, panel_width: float, order: int = 32, density: int = 1):
    """Nodes for integrals of the form int_0^outer g(r) r dr.

    Panels never straddle a knot (a radius where the integrand is not
    smooth). ``density`` multiplies the number of panels, which is how the
    convergence checks refine the rule. Returned weights already include
    the ``2 pi r`` area factor.
    """
    knots = sorted(k for k in knots if 0 < k < outer)
    bounds = [0.0, *knots, outer]
    edges = [0.0]
    for lo, hi in zip(bounds[:-1], bounds[1:]):
        n_panels = max(1, int(np.ceil((hi - lo) / panel_width))) * density
        edges.extend(np.linspace(lo, hi, n_panels + 1)[1:])
    r, w = panel_nodes(edges, order)
    return r, 2 * np.pi * r * w


def evanescent_edges(start: float, first: float, decay: float, outer: float) -> np.ndarray:
    """Panel edges on [start, outer]: widths grow geometrically from ``first``
    up to ``decay``, then stay at ``decay``. Keeps the panel count bounded
    when the decay length is many times the core radius."""
    edges = [start]
    width = min(first, decay)
    while edges[-1] < outer:
        edges.append(min(edges[-1] + width, outer))
        width = min(width * 1.5, decay)
    return np.asarray(edges)
