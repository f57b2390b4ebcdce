"""Generic interpolation over a charted symmetric space.

A chart pairs points of the space with a flat tangent parameterization
around a base point:  ``from_tangent`` maps tangents to points with
``from_tangent(0) == base``, and ``to_tangent`` inverts it near the base.
Interpolation pulls the data back through the chart, combines the tangents
with scalar shape-function weights, and pushes the weighted sum forward.

The fixed-point (Karcher) variant re-centers the chart at the current
interpolant until the weighted tangent sum vanishes, which characterizes
the weighted Riemannian mean.
"""

import abc
from typing import NamedTuple

import numpy as np

from .errors import ChartDomainError, KarcherDivergenceError

__all__ = [
    "Chart",
    "KarcherResult",
    "interpolate",
    "interpolate_derivative",
    "interpolate_second_derivative",
    "interpolate_karcher",
]


class KarcherResult(NamedTuple):
    """Converged point with the iteration count and final residual."""

    point: object
    iterations: int
    residual: float


class Chart(abc.ABC):
    """A local chart of a symmetric space around ``base``.

    Tangents are plain ndarrays forming a vector space; weighted sums of
    tangents of admissible data stay inside the parameterization.
    """

    @property
    @abc.abstractmethod
    def base(self):
        """The point the chart is centered on (``from_tangent(0)``)."""

    @abc.abstractmethod
    def to_tangent(self, point):
        """Tangent coordinates of ``point``; raises a domain error outside
        the chart."""

    @abc.abstractmethod
    def from_tangent(self, tangent):
        """Point with the given tangent coordinates."""

    # Ambient realizations of chart derivatives; only matrix-realized
    # charts provide these.
    def push_forward(self, tangent, velocity):
        """Ambient derivative d/dt|_0 from_tangent(tangent + t velocity)."""
        raise NotImplementedError(f"{type(self).__name__} has no derivative realization")

    def push_forward_second(self, tangent, vel_j, vel_k, accel):
        """Ambient mixed second derivative of
        (s, t) -> from_tangent(tangent + t vel_j + s vel_k + s t accel)."""
        raise NotImplementedError(f"{type(self).__name__} has no derivative realization")


def _weights(shapes, x, m):
    if len(shapes) != m:
        raise ValueError(
            f"{m} data values but shape set has {len(shapes)} basis functions"
        )
    return shapes.values(x)


def _tangents(chart, data):
    out = []
    for i, u in enumerate(data):
        try:
            out.append(chart.to_tangent(u))
        except ChartDomainError as err:
            if err.index is None:
                err.index = i
            raise
    return np.stack(out)


def interpolate(data, shapes, x, chart):
    """Interpolant of ``data`` at ``x``: weighted tangent combination mapped
    back through the chart.  Reproduces ``data[j]`` at node ``j``."""
    w = _weights(shapes, x, len(data))
    tangents = _tangents(chart, data)
    return chart.from_tangent(np.tensordot(w, tangents, axes=1))


def interpolate_derivative(data, shapes, x, chart, direction):
    """Ambient derivative of the interpolant along reference direction
    ``direction``; matrix-realized charts only."""
    sv = shapes.eval(x)
    if len(shapes) != len(data):
        raise ValueError("data/shape-set size mismatch")
    tangents = _tangents(chart, data)
    p = np.tensordot(sv.values, tangents, axes=1)
    dp = np.tensordot(sv.gradients[:, direction], tangents, axes=1)
    return chart.push_forward(p, dp)


def interpolate_second_derivative(data, shapes, x, chart, dir_j, dir_k):
    """Ambient mixed second derivative of the interpolant along the pair of
    reference directions."""
    sv = shapes.eval(x)
    if len(shapes) != len(data):
        raise ValueError("data/shape-set size mismatch")
    tangents = _tangents(chart, data)
    p = np.tensordot(sv.values, tangents, axes=1)
    dp_j = np.tensordot(sv.gradients[:, dir_j], tangents, axes=1)
    dp_k = np.tensordot(sv.gradients[:, dir_k], tangents, axes=1)
    d2p = np.tensordot(sv.hessians[:, dir_j, dir_k], tangents, axes=1)
    return chart.push_forward_second(p, dp_j, dp_k, d2p)


def _weighted_tangent_sum(w, data, chart):
    return np.tensordot(w, _tangents(chart, data), axes=1)


def interpolate_karcher(data, shapes, x, chart_factory, base=None, tol=1e-12,
                        max_iter=100, full_output=False):
    """Fixed-point interpolant: re-center the chart at the current
    interpolant until the weighted tangent sum has Frobenius norm <= tol.

    ``chart_factory(point)`` builds the chart centered at ``point``.  The
    default initial base is the datum with the largest weight at ``x``.
    With ``full_output=True`` a :class:`KarcherResult` is returned instead
    of the bare point.

    With ``tol=None`` the iteration is truncated after exactly ``max_iter``
    re-centering steps and the result returned without a convergence check;
    one truncated step reproduces the fixed-base interpolant based at the
    initial base.

    Raises
    ------
    KarcherDivergenceError
        If the residual still exceeds ``tol`` after ``max_iter`` steps.
    """
    w = _weights(shapes, x, len(data))
    if base is None:
        base = data[int(np.argmax(w))]
    current = base
    residual = np.inf
    steps = 0
    for _ in range(max_iter):
        chart = chart_factory(current)
        tangent_sum = _weighted_tangent_sum(w, data, chart)
        residual = float(np.linalg.norm(tangent_sum))
        if tol is not None and residual <= tol:
            break
        current = chart.from_tangent(tangent_sum)
        steps += 1
    else:
        if tol is not None:
            tangent_sum = _weighted_tangent_sum(w, data, chart_factory(current))
            residual = float(np.linalg.norm(tangent_sum))
            if residual > tol:
                raise KarcherDivergenceError(
                    f"Karcher iteration did not reach residual {tol:g} after "
                    f"{max_iter} steps (last residual {residual:g})",
                    residual=residual,
                    iterations=max_iter,
                )
    if full_output:
        return KarcherResult(current, steps, residual)
    return current
