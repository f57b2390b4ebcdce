"""Nodal shape functions on the reference cube [0, 1]^d.

Tensor products of 1-D Lagrange polynomials on equispaced nodes, with
gradient and Hessian evaluation.  Multi-indices (and therefore nodes) are
ordered lexicographically, the last coordinate varying fastest.
"""

import itertools
from typing import NamedTuple

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import UnsupportedBasisError

__all__ = ["ShapeValues", "ShapeSet", "make_tensor_lagrange"]

_SUPPORTED_DIMS = (1, 2, 3, 4)
_SUPPORTED_DEGREES = (1, 2, 3)
_DOMAIN_SLACK = 1e-9


class ShapeValues(NamedTuple):
    """Values, gradients and Hessians of all shape functions at one point."""

    values: np.ndarray     # (m,)
    gradients: np.ndarray  # (m, d)
    hessians: np.ndarray   # (m, d, d)


def _lagrange_polys(k):
    """1-D Lagrange basis polynomials and derivatives on equispaced nodes."""
    nodes = np.linspace(0.0, 1.0, k + 1)
    polys = []
    for i in range(k + 1):
        others = np.delete(nodes, i)
        coeffs = P.polyfromroots(others) / np.prod(nodes[i] - others)
        d1 = P.polyder(coeffs)
        d2 = P.polyder(d1)
        polys.append((coeffs, d1, d2))
    return nodes, polys


class ShapeSet:
    """Tensor-Lagrange nodal basis of degree ``k`` on ``[0, 1]^d``.

    The ``(k+1)^d`` basis functions satisfy the Kronecker property at the
    nodes and form a partition of unity on the cube.  Instances are
    immutable; evaluation is pure.
    """

    def __init__(self, dim, degree):
        if dim not in _SUPPORTED_DIMS or degree not in _SUPPORTED_DEGREES:
            raise UnsupportedBasisError(
                f"unsupported basis: dim={dim} (need 1..4), degree={degree} (need 1..3)"
            )
        self.dim = dim
        self.degree = degree
        nodes_1d, self._polys = _lagrange_polys(degree)
        self._nodes_1d = nodes_1d
        self._indices = list(itertools.product(range(degree + 1), repeat=dim))
        self.nodes = np.array([[nodes_1d[i] for i in idx] for idx in self._indices])

    def __len__(self):
        return len(self._indices)

    def _check_point(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape != (self.dim,):
            raise ValueError(f"expected a point of dimension {self.dim}, got {x.shape}")
        if np.any(x < -_DOMAIN_SLACK) or np.any(x > 1.0 + _DOMAIN_SLACK):
            raise ValueError(f"point {x} lies outside the reference cube")
        return x

    def _eval_1d(self, x):
        """Per-coordinate tables of 1-D values and derivatives: (3, d, k+1)."""
        table = np.empty((3, self.dim, self.degree + 1))
        for i, (c, d1, d2) in enumerate(self._polys):
            table[0, :, i] = P.polyval(x, c)
            table[1, :, i] = P.polyval(x, d1)
            table[2, :, i] = P.polyval(x, d2)
        return table

    def values(self, x):
        """Values of every basis function at ``x``, shape ``(m,)``."""
        x = self._check_point(x)
        table = self._eval_1d(x)
        vals = np.empty(len(self))
        for row, idx in enumerate(self._indices):
            vals[row] = np.prod([table[0, j, i] for j, i in enumerate(idx)])
        return vals

    def eval(self, x):
        """Values, gradients and Hessians of every basis function at ``x``."""
        x = self._check_point(x)
        table = self._eval_1d(x)
        m, d = len(self), self.dim
        vals = np.empty(m)
        grads = np.empty((m, d))
        hess = np.empty((m, d, d))
        for row, idx in enumerate(self._indices):
            f = np.array([table[0, j, i] for j, i in enumerate(idx)])
            df = np.array([table[1, j, i] for j, i in enumerate(idx)])
            ddf = np.array([table[2, j, i] for j, i in enumerate(idx)])
            vals[row] = f.prod()
            for a in range(d):
                rest = np.prod(np.delete(f, a))
                grads[row, a] = df[a] * rest
                hess[row, a, a] = ddf[a] * rest
                for b in range(a + 1, d):
                    rest_ab = np.prod(np.delete(f, (a, b)))
                    hess[row, a, b] = hess[row, b, a] = df[a] * df[b] * rest_ab
        return ShapeValues(vals, grads, hess)

    def values_at(self, points):
        """Stacked values at many points, shape ``(npoints, m)``."""
        return np.stack([self.values(p) for p in np.atleast_2d(points)])

    def __repr__(self):
        return f"ShapeSet(dim={self.dim}, degree={self.degree})"


def make_tensor_lagrange(dim, degree):
    """Tensor-product Lagrange basis of the given degree on ``[0, 1]^dim``."""
    return ShapeSet(dim, degree)
