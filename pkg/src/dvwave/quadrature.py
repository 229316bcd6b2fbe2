"""Gauss-Legendre quadrature on intervals and tensor-product boxes.

All integrals in the solvers (element volumes, spatial face slabs, temporal
cross-sections) are evaluated with tensor products of 1-D Gauss-Legendre
rules mapped affinely from the reference interval [-1, 1].
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

MAX_POINTS_1D = 64


class QuadratureError(ValueError):
    pass


@dataclass(frozen=True)
class QuadratureRule:
    """Quadrature points and weights, points of shape (n, k)."""

    points: np.ndarray
    weights: np.ndarray

    @property
    def npoints(self) -> int:
        return self.weights.shape[0]


def gauss_1d(n: int) -> QuadratureRule:
    """Gauss-Legendre rule with ``n`` points on [-1, 1].

    Exact for polynomials of degree <= 2n-1; nodes symmetric about 0.
    """
    if not 1 <= n <= MAX_POINTS_1D:
        raise QuadratureError(f"point count must be in [1, {MAX_POINTS_1D}], got {n}")
    x, w = np.polynomial.legendre.leggauss(n)
    # enforce exact symmetry of the node set
    x = 0.5 * (x - x[::-1])
    w = 0.5 * (w + w[::-1])
    return QuadratureRule(points=x.reshape(-1, 1), weights=w)


def tensor_rule(n_per_axis: int, box) -> QuadratureRule:
    """Tensor Gauss rule over an axis-aligned box.

    ``box`` is a sequence of (lo, hi) pairs, one per axis.  Weights carry the
    box measure, so sum(weights) == prod(hi - lo).
    """
    box = [(float(lo), float(hi)) for lo, hi in box]
    for lo, hi in box:
        if not hi > lo:
            raise QuadratureError(f"degenerate box axis [{lo}, {hi}]")
    base = gauss_1d(n_per_axis)
    x1 = base.points[:, 0]
    w1 = base.weights
    axes_pts = []
    axes_wts = []
    for lo, hi in box:
        half = 0.5 * (hi - lo)
        axes_pts.append(lo + half * (x1 + 1.0))
        axes_wts.append(half * w1)
    grids = np.meshgrid(*axes_pts, indexing="ij")
    pts = np.stack([g.ravel() for g in grids], axis=1)
    wts = axes_wts[0]
    for w in axes_wts[1:]:
        wts = np.multiply.outer(wts, w)
    return QuadratureRule(points=pts, weights=wts.ravel())


def embedded_box_rule(n_per_axis: int, bounds, fixed: dict[int, float],
                      total_dims: int) -> QuadratureRule:
    """Tensor rule over a box embedded in a higher-dimensional space.

    ``bounds`` maps varying-axis index -> (lo, hi); ``fixed`` maps frozen-axis
    index -> coordinate value.  Points come back with ``total_dims`` columns.
    """
    varying = sorted(bounds)
    inner = tensor_rule(n_per_axis, [bounds[a] for a in varying])
    pts = np.empty((inner.npoints, total_dims))
    for col, axis in enumerate(varying):
        pts[:, axis] = inner.points[:, col]
    for axis, value in fixed.items():
        pts[:, axis] = value
    return QuadratureRule(points=pts, weights=inner.weights)


def face_rule(face, n_per_axis: int) -> QuadratureRule:
    """Quadrature over a mesh face, with points in full (t, x...) coordinates.

    Spatial faces integrate over time-slab x cross-section; temporal
    interfaces integrate over the spatial cell at the fixed time node.
    Dispatches on the ``quadrature_geometry`` protocol of the face objects.
    """
    bounds, fixed, total = face.quadrature_geometry()
    return embedded_box_rule(n_per_axis, bounds, fixed, total)
