"""Interpolation on the Grassmannian of p-dimensional subspaces of R^n.

Subspaces are represented by n x p matrices with orthonormal columns
(non-unique under the right O(p) action); horizontal tangents at a base
are n x p matrices Z with base^T Z = 0.  The chart maps are computed from
thin SVDs of n x p matrices only, so everything runs in O(n p^2); the
orthogonal complement of the base is never materialized.

    exp:  Z = U Theta V^T   ->  base V cos(Theta) + U sin(Theta)
    log:  (I - base base^T) A (base^T A)^{-1} = U S V^T
          ->  Z = U arctan(S) V^T

All comparisons of results are made with the subspace distance (the norm
of the principal-angle vector), never entrywise: SVD factors carry sign
and ordering ambiguity.
"""

import numpy as np

from . import charts
from .errors import CutLocusError, RankError, ShapeError
from .validation import as_matrix, check_horizontal, check_orthonormal_columns

__all__ = [
    "GrassmannChart",
    "grass_exp",
    "grass_log",
    "interpolate_grassmann",
    "interpolate_grassmann_karcher",
    "subspace_distance",
    "orthonormalize",
]

_CUT_LOCUS_COND = 1e12


def orthonormalize(m, rel_tol=1e-10):
    """Orthonormal basis with the same column span as ``m`` (n x p, full rank).

    Raises :class:`RankError` when the smallest singular value falls below
    ``rel_tol`` times the largest.
    """
    m = as_matrix(m, "basis")
    if m.shape[0] < m.shape[1]:
        raise ShapeError(f"basis must be tall, got shape {m.shape}")
    svals = np.linalg.svd(m, compute_uv=False)
    if svals[-1] <= rel_tol * svals[0]:
        raise RankError("basis matrix is rank deficient")
    q, _ = np.linalg.qr(m)
    return q


def _exp_factors(z):
    u, theta, vh = np.linalg.svd(z, full_matrices=False)
    return u, theta, vh


def grass_exp(base, z, tol=1e-10):
    """Geodesic endpoint ``base V cos(Theta) + U sin(Theta)`` for the
    horizontal tangent ``z = U Theta V^T``.  ``z = 0`` returns ``base``."""
    base = check_orthonormal_columns(base, name="base")
    z = check_horizontal(z, base, tol=tol)
    if not np.any(z):
        return base
    u, theta, vh = _exp_factors(z)
    return (base @ vh.T) * np.cos(theta)[np.newaxis, :] + u * np.sin(theta)[np.newaxis, :]


def _log_factors(base, point):
    """Thin-SVD factors (U, S, V^T) of (I - base base^T) point (base^T point)^{-1}.

    Raises :class:`CutLocusError` when ``base^T point`` is singular or has
    condition number beyond 1e12 (a principal angle at or near pi/2).
    """
    overlap = base.T @ point
    svals = np.linalg.svd(overlap, compute_uv=False)
    if svals[-1] <= 0 or svals[0] / svals[-1] > _CUT_LOCUS_COND:
        raise CutLocusError(
            "subspace is at a principal angle of ~pi/2 from the base "
            "(base^T A singular); the chart does not extend there"
        )
    t = np.linalg.solve(overlap.T, point.T).T     # point (base^T point)^{-1}
    g = t - base @ (base.T @ t)
    return np.linalg.svd(g, full_matrices=False)


def grass_log(base, point):
    """Horizontal tangent at ``base`` whose geodesic reaches ``point``.

    Requires every principal angle between the subspaces to be below pi/2.
    """
    base = check_orthonormal_columns(base, name="base")
    point = check_orthonormal_columns(point, name="point")
    if base.shape != point.shape:
        raise ShapeError(
            f"base has shape {base.shape} but point has shape {point.shape}")
    u, s, vh = _log_factors(base, point)
    return (u * np.arctan(s)[np.newaxis, :]) @ vh


class GrassmannChart(charts.Chart):
    """Chart of Gr(p, n) centered at an orthonormal ``base`` basis."""

    def __init__(self, base):
        self._base = check_orthonormal_columns(base, name="base")

    @property
    def base(self):
        return self._base

    def to_tangent(self, point):
        u, s, vh = _log_factors(self._base, np.asarray(point, dtype=float))
        return (u * np.arctan(s)[np.newaxis, :]) @ vh

    def from_tangent(self, tangent):
        tangent = np.asarray(tangent, dtype=float)
        if not np.any(tangent):
            return self._base
        u, theta, vh = _exp_factors(tangent)
        return ((self._base @ vh.T) * np.cos(theta)[np.newaxis, :]
                + u * np.sin(theta)[np.newaxis, :])


def interpolate_grassmann(data, shapes, x, base=None):
    """Subspace interpolant: weighted sum of horizontal logs at ``base``
    mapped back through the geodesic exponential.

    ``base`` defaults to the first datum.  Output is an orthonormal basis
    of the interpolated subspace; it reproduces the data subspaces at the
    shape-function nodes.  Work per datum is O(n p^2).
    """
    if base is None:
        base = data[0]
    return charts.interpolate(list(data), shapes, x, GrassmannChart(base))


def interpolate_grassmann_karcher(data, shapes, x, base=None, tol=1e-12,
                                  max_iter=100):
    """Weighted Riemannian mean on the Grassmannian by fixed-point
    re-centering of :func:`interpolate_grassmann`.

    Semantics of ``base``, ``tol`` and ``max_iter`` match
    :func:`symspace.charts.interpolate_karcher`.
    """
    return charts.interpolate_karcher(
        list(data), shapes, x, GrassmannChart, base=base, tol=tol,
        max_iter=max_iter,
    )


def subspace_distance(v, w):
    """2-norm of the principal-angle vector between two subspaces.

    Zero exactly when the spans coincide; invariant under right O(p)
    changes of basis of either argument.
    """
    v = as_matrix(v, "V")
    w = as_matrix(w, "W")
    if v.shape != w.shape:
        raise ShapeError(f"V has shape {v.shape} but W has shape {w.shape}")
    cosines = np.linalg.svd(v.T @ w, compute_uv=False)
    angles = np.arccos(np.clip(cosines, -1.0, 1.0))
    return float(np.linalg.norm(angles))
