"""Input-validation helpers shared by the numerical kernels and estimators."""

import numpy as np

from .errors import ShapeError, TangentError

__all__ = [
    "as_matrix",
    "as_square_matrix",
    "check_finite",
    "check_symmetric",
    "check_orthonormal_columns",
    "check_same_shape",
    "check_lts_tangent",
    "check_horizontal",
]


def check_finite(a, name="array"):
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite entries")
    return a


def as_matrix(a, name="matrix"):
    """Coerce to a 2-D float array with finite entries."""
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise ShapeError(f"{name} must be 2-D, got shape {a.shape}")
    return check_finite(a, name)


def as_square_matrix(a, name="matrix"):
    a = as_matrix(a, name)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"{name} must be square, got shape {a.shape}")
    return a


def check_symmetric(a, tol=1e-12, name="matrix"):
    a = as_square_matrix(a, name)
    scale = max(1.0, np.linalg.norm(a))
    if np.linalg.norm(a - a.T) > tol * scale:
        raise ValueError(f"{name} is not symmetric to tolerance {tol:g}")
    return a


def check_orthonormal_columns(a, tol=1e-10, name="basis"):
    a = as_matrix(a, name)
    n, p = a.shape
    if p > n:
        raise ShapeError(f"{name} must be tall (n >= p), got shape {a.shape}")
    gram = a.T @ a
    if np.linalg.norm(gram - np.eye(p)) > tol * max(1.0, p):
        raise ValueError(f"{name} does not have orthonormal columns")
    return a


def check_same_shape(a, b, names=("first operand", "second operand")):
    if a.shape != b.shape:
        raise ShapeError(
            f"{names[0]} has shape {a.shape} but {names[1]} has shape {b.shape}"
        )


def check_lts_tangent(x, j_diag, tol=1e-9, name="tangent"):
    """Check membership X J = J X^T of the Lie triple system of a signature form.

    ``j_diag`` is the 1-D diagonal of J.
    """
    x = as_square_matrix(x, name)
    resid = x * j_diag[np.newaxis, :] - j_diag[:, np.newaxis] * x.T
    if np.linalg.norm(resid) > tol * max(1.0, np.linalg.norm(x)):
        raise TangentError(f"{name} is not in the Lie triple system (X J != J X^T)")
    return x


def check_horizontal(z, base, tol=1e-10, name="tangent"):
    """Check base^T Z = 0 for a horizontal Grassmann tangent."""
    z = as_matrix(z, name)
    check_same_shape(z, base, (name, "base"))
    resid = base.T @ z
    if np.linalg.norm(resid) > tol * max(1.0, np.linalg.norm(z)):
        raise TangentError(f"{name} is not horizontal at the base point")
    return z
