"""Lorentzian metric fields used by the benchmark harness.

Both fields are static (no t dependence) 4x4 symmetric matrix functions of
Cartesian coordinates with signature (3, 1) on their domain, and both
supply analytic gradients for the H^1 error integrals.  Evaluation is
vectorized: scalar coordinates give a (4, 4) array, arrays of shape ``s``
give ``s + (4, 4)``.
"""

import numpy as np

from .errors import HorizonError
from .signature import lorentz_form

__all__ = ["SchwarzschildMetric", "Sin2Metric", "get_metric"]

FORM = lorentz_form(4)


class SchwarzschildMetric:
    """Schwarzschild metric in Cartesian coordinates, valid for r > radius.

    The time-time entry is -(1 - R/r) and the spatial block is
    I + (R / (r - R)) x x^T / r^2; the determinant is identically -1.
    """

    name = "schwarzschild"

    def __init__(self, radius=1.0):
        if radius <= 0:
            raise ValueError("Schwarzschild radius must be positive")
        self.radius = radius

    def _radius_check(self, x, y, z):
        r = np.sqrt(x * x + y * y + z * z)
        if np.any(r <= self.radius):
            raise HorizonError(
                f"evaluation point has r = {float(np.min(r)):g} <= "
                f"Schwarzschild radius {self.radius:g}"
            )
        return r

    def __call__(self, t, x, y, z):
        t, x, y, z = np.broadcast_arrays(*map(np.asarray, (t, x, y, z)))
        r = self._radius_check(x, y, z)
        big_r = self.radius
        w = big_r / ((r - big_r) * r * r)
        out = np.zeros(r.shape + (4, 4))
        out[..., 0, 0] = -(1.0 - big_r / r)
        coords = (x, y, z)
        for a in range(3):
            for b in range(3):
                out[..., 1 + a, 1 + b] = w * coords[a] * coords[b]
            out[..., 1 + a, 1 + a] += 1.0
        return out

    def gradient(self, t, x, y, z):
        """Derivatives along (t, x, y, z); shape ``s + (4, 4, 4)`` indexed
        ``[..., direction, row, col]``.  The t-derivative is zero."""
        t, x, y, z = np.broadcast_arrays(*map(np.asarray, (t, x, y, z)))
        r = self._radius_check(x, y, z)
        big_r = self.radius
        w = big_r / ((r - big_r) * r * r)
        dw = -big_r * (3.0 * r - 2.0 * big_r) / ((r - big_r) ** 2 * r ** 3)
        out = np.zeros(r.shape + (4, 4, 4))
        coords = (x, y, z)
        for c in range(3):
            xc_over_r = coords[c] / r
            out[..., 1 + c, 0, 0] = -big_r * coords[c] / r ** 3
            for a in range(3):
                for b in range(3):
                    val = dw * xc_over_r * coords[a] * coords[b]
                    if a == c:
                        val = val + w * coords[b]
                    if b == c:
                        val = val + w * coords[a]
                    out[..., 1 + c, 1 + a, 1 + b] = val
        return out


class Sin2Metric:
    """Oscillating (3,1)-signature metric whose componentwise linear
    interpolant turns positive definite on part of the domain.

    Only the leading 2x2 block varies, and only with x; the extreme
    eigenvalues of that block stay below -0.54138 and above 2.23064.
    """

    name = "sin2"

    def __init__(self):
        pass

    @staticmethod
    def _block(x):
        a = -6.0 * np.sin(2 * np.pi * x) ** 2 + 3.0 * np.sin(np.pi * x) ** 2
        b = 3.0 * np.cos(2 * np.pi * x)
        c = 2.0 * np.sin(2 * np.pi * x) ** 2 + 2.0 * np.sin(np.pi * x) ** 2
        return a, b, c

    def __call__(self, t, x, y, z):
        t, x, y, z = np.broadcast_arrays(*map(np.asarray, (t, x, y, z)))
        a, b, c = self._block(x)
        out = np.zeros(x.shape + (4, 4))
        out[..., 0, 0] = a
        out[..., 0, 1] = out[..., 1, 0] = b
        out[..., 1, 1] = c
        out[..., 2, 2] = 1.0
        out[..., 3, 3] = 1.0
        return out

    def gradient(self, t, x, y, z):
        t, x, y, z = np.broadcast_arrays(*map(np.asarray, (t, x, y, z)))
        da = -12.0 * np.pi * np.sin(4 * np.pi * x) + 3.0 * np.pi * np.sin(2 * np.pi * x)
        db = -6.0 * np.pi * np.sin(2 * np.pi * x)
        dc = 4.0 * np.pi * np.sin(4 * np.pi * x) + 2.0 * np.pi * np.sin(2 * np.pi * x)
        out = np.zeros(x.shape + (4, 4, 4))
        out[..., 1, 0, 0] = da
        out[..., 1, 0, 1] = out[..., 1, 1, 0] = db
        out[..., 1, 1, 1] = dc
        return out


def get_metric(name, radius=1.0):
    """Metric field by CLI name (``schwarzschild`` or ``sin2``)."""
    if name == "schwarzschild":
        return SchwarzschildMetric(radius)
    if name == "sin2":
        return Sin2Metric()
    raise ValueError(f"unknown metric {name!r}")
