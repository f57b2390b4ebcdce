"""Dense real matrix-function kernel.

Principal exponential, logarithm and square root, spectrum queries,
thin SVD, symmetric signature, and first/second directional derivatives
of the exponential recovered from block-triangular exponentials.

All public functions take a single 2-D array.  The private ``*_stack``
variants operate on stacks of matrices (shape ``(..., n, n)``) and are the
work-horses used by the interpolation kernels and the benchmark harness;
the public functions are thin wrappers so there is exactly one code path.
"""

from dataclasses import dataclass

import numpy as np

from .errors import ExpOverflowError, LogBranchError, ShapeError, SingularError
from .errors import DegenerateSignatureError
from .validation import as_matrix, as_square_matrix, check_same_shape, check_symmetric

__all__ = [
    "SpectrumCheck",
    "mat_exp",
    "mat_log_principal",
    "mat_sqrt_principal",
    "spectrum_check",
    "dexp",
    "d2exp",
    "thin_svd",
    "sym_signature",
]

# [13/13] Pade numerator coefficients for exp and its 1-norm switching radius.
_PADE13_B = np.array([
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0, 129060195264000.0, 10559470521600.0,
    670442572800.0, 33522128640.0, 1323241920.0, 40840800.0,
    960960.0, 16380.0, 182.0, 1.0,
])
_THETA13 = 5.371920351148152

# Gauss-Legendre nodes/weights on [0, 1]; the m-point rule applied to
# log(I+E) = int_0^1 E (I + t E)^{-1} dt reproduces the [m/m] Pade
# approximant of the logarithm, accurate to double precision for
# ||E|| <= 0.25 once m >= 7.
_LOG_PADE_DEGREE = 8
_LOG_NODES, _LOG_WEIGHTS = np.polynomial.legendre.leggauss(_LOG_PADE_DEGREE)
_LOG_NODES = (_LOG_NODES + 1.0) / 2.0
_LOG_WEIGHTS = _LOG_WEIGHTS / 2.0

_LOG_SCALE_TARGET = 0.25   # square-root until ||A - I||_1 falls below this
_MAX_SQRT_STEPS = 60
_DB_MAX_ITER = 50          # Denman-Beavers iteration cap
_DB_TOL = 1e-14            # residual target on ||M - I||_F / sqrt(n)


def _one_norm(a):
    """1-norm of each matrix of a stack."""
    return np.abs(a).sum(axis=-2).max(axis=-1)


def _eye_like(a):
    return np.broadcast_to(np.eye(a.shape[-1]), a.shape).copy()


def _expm_stack(a):
    """Scaling-and-squaring exponential (degree-13 Pade) of a matrix stack."""
    norm = _one_norm(a).max() if a.size else 0.0
    s = 0
    if norm > _THETA13:
        s = int(np.ceil(np.log2(norm / _THETA13)))
    scaled = a / (2.0 ** s) if s else a
    ident = np.eye(a.shape[-1])
    b = _PADE13_B
    a2 = scaled @ scaled
    a4 = a2 @ a2
    a6 = a4 @ a2
    u = scaled @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
                  + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    f = np.linalg.solve(v - u, v + u)
    for _ in range(s):
        f = f @ f
    return f


def _sqrtm_db_stack(a):
    """Principal square root by the product form of the Denman-Beavers
    iteration, with determinant scaling far from convergence.

    Assumes the spectrum avoids the closed negative real axis; under that
    assumption the iteration converges quadratically.
    """
    n = a.shape[-1]
    ident = _eye_like(a)
    m = a.copy()
    x = a.copy()
    target = _DB_TOL * np.sqrt(n)
    prev = np.inf
    for _ in range(_DB_MAX_ITER):
        res = np.linalg.norm(m - ident, axis=(-2, -1)).max()
        if res <= target or res >= 0.9 * prev:
            break
        prev = res
        if res > 1e-2:
            _, logdet = np.linalg.slogdet(m)
            mu = np.exp(-logdet / (2 * n))[..., np.newaxis, np.newaxis]
        else:
            mu = 1.0
        m_inv = np.linalg.inv(m)
        x = 0.5 * mu * x @ (ident + m_inv / mu ** 2)
        m = 0.5 * (ident + 0.5 * (mu ** 2 * m + m_inv / mu ** 2))
    return x


def _spectrum_flags(a, tol):
    """Per-matrix flags: (on negative real axis, singular, min real part of
    the near-real eigenvalues)."""
    eig = np.linalg.eigvals(a)
    scale = np.maximum(np.abs(eig).max(axis=-1), 1e-300)
    near_real = np.abs(eig.imag) <= tol
    on_axis = near_real & (eig.real <= tol)
    real_parts = np.where(near_real, eig.real, np.inf)
    singular = np.abs(eig).min(axis=-1) <= 1e-14 * scale
    return on_axis.any(axis=-1), singular, real_parts.min(axis=-1)


def _check_log_domain_stack(a, tol=1e-10):
    on_axis, singular, _ = _spectrum_flags(a, tol)
    if np.any(singular):
        raise SingularError("matrix is singular to working precision")
    if np.any(on_axis):
        raise LogBranchError(
            "matrix has an eigenvalue on the closed negative real axis; "
            "the principal logarithm is not defined"
        )


def _logm_stack(a, check=True):
    """Principal logarithm by inverse scaling and squaring.

    Repeated Denman-Beavers square roots bring the stack within the
    convergence disc of the Pade approximant of log(I + E); the result is
    rescaled by the matching power of two.
    """
    if check:
        _check_log_domain_stack(a)
    ident = _eye_like(a)
    k = 0
    while _one_norm(a - ident).max() > _LOG_SCALE_TARGET and k < _MAX_SQRT_STEPS:
        a = _sqrtm_db_stack(a)
        k += 1
    e = a - ident
    out = np.zeros_like(a)
    eye = np.eye(a.shape[-1])
    for t, w in zip(_LOG_NODES, _LOG_WEIGHTS):
        out += w * np.linalg.solve(np.swapaxes(eye + t * e, -2, -1),
                                   np.swapaxes(e, -2, -1))
    return (2.0 ** k) * np.swapaxes(out, -2, -1)


def mat_exp(a):
    """Principal matrix exponential of a square matrix.

    Scaling and squaring with a degree-13 Pade approximant.  Raises
    :class:`ExpOverflowError` when the result overflows double precision.
    """
    a = as_square_matrix(a)
    f = _expm_stack(a)
    if not np.all(np.isfinite(f)):
        raise ExpOverflowError("matrix exponential overflowed")
    return f


def mat_log_principal(a, tol=1e-10):
    """Principal matrix logarithm.

    Defined for nonsingular matrices with no eigenvalue on the closed
    negative real axis; ``tol`` is the detection band around the axis.

    Raises
    ------
    SingularError
        If the matrix is singular to working precision.
    LogBranchError
        If an eigenvalue lies on the closed negative real axis.
    """
    a = as_square_matrix(a)
    _check_log_domain_stack(a, tol)
    return _logm_stack(a, check=False)


def mat_sqrt_principal(a, tol=1e-10):
    """Principal matrix square root (same domain as the principal log)."""
    a = as_square_matrix(a)
    _check_log_domain_stack(a, tol)
    return _sqrtm_db_stack(a)


@dataclass(frozen=True)
class SpectrumCheck:
    """Result of testing a spectrum against the closed negative real axis.

    ``min_real_part_on_axis`` is the smallest real part among eigenvalues
    within ``tolerance_used`` of the real axis (``inf`` if there are none).
    """

    has_negative_real_eigenvalue: bool
    min_real_part_on_axis: float
    tolerance_used: float


def spectrum_check(a, tol=1e-10):
    """Flag eigenvalues on the closed negative real axis.

    An eigenvalue ``lam`` counts as on the axis when ``|Im lam| <= tol``
    and ``Re lam <= tol``; this includes near-zero eigenvalues.
    """
    a = as_square_matrix(a)
    if not tol > 0:
        raise ValueError("tol must be positive")
    on_axis, _, min_real = _spectrum_flags(a, tol)
    return SpectrumCheck(bool(on_axis), float(min_real), float(tol))


def _dexp_block(x, y):
    """exp of [[X, Y], [0, X]]; the (1,2) block is dexp_X Y."""
    n = x.shape[-1]
    block = np.zeros(x.shape[:-2] + (2 * n, 2 * n))
    block[..., :n, :n] = x
    block[..., :n, n:] = y
    block[..., n:, n:] = x
    return _expm_stack(block)


def _dexp_stack(x, y):
    n = x.shape[-1]
    return _dexp_block(x, y)[..., :n, n:]


def dexp(x, y):
    """Directional derivative of the matrix exponential at X along Y.

    Read off the (1,2) block of exp([[X, Y], [0, X]]).
    """
    x = as_square_matrix(x, "X")
    y = as_square_matrix(y, "Y")
    check_same_shape(x, y, ("X", "Y"))
    return _dexp_stack(x, y)


def _d2exp_stack(x, y, z, w):
    n = x.shape[-1]
    block = np.zeros(x.shape[:-2] + (4 * n, 4 * n))
    for i in range(4):
        block[..., i * n:(i + 1) * n, i * n:(i + 1) * n] = x
    block[..., 0:n, n:2 * n] = y
    block[..., 0:n, 2 * n:3 * n] = z
    block[..., 0:n, 3 * n:4 * n] = w
    block[..., n:2 * n, 3 * n:4 * n] = z
    block[..., 2 * n:3 * n, 3 * n:4 * n] = y
    return _expm_stack(block)[..., 0:n, 3 * n:4 * n]


def d2exp(x, y, z, w):
    """Mixed second derivative of exp(X + t Y + s Z + s t W) at s = t = 0.

    Read off the (1,4) block of the 4x4 block-triangular exponential.
    """
    x = as_square_matrix(x, "X")
    for name, m in (("Y", y), ("Z", z), ("W", w)):
        m = as_square_matrix(m, name)
        check_same_shape(x, m, ("X", name))
    return _d2exp_stack(x, np.asarray(y, float), np.asarray(z, float),
                        np.asarray(w, float))


def thin_svd(a):
    """Thin singular value decomposition A = U diag(s) V^T for tall A.

    Returns ``(u, s, v)`` with ``u`` of shape ``(n, p)``, ``s`` the
    nonnegative singular values in descending order, and ``v`` orthogonal
    ``(p, p)`` (not transposed).
    """
    a = as_matrix(a)
    n, p = a.shape
    if n < p:
        raise ShapeError(f"thin_svd expects n >= p, got shape {a.shape}")
    u, s, vh = np.linalg.svd(a, full_matrices=False)
    return u, s, vh.T


def sym_signature(s, rel_tol=1e-10):
    """Signature of a nonsingular symmetric matrix.

    Returns ``(num_positive, num_negative)`` eigenvalue counts.  Raises
    :class:`DegenerateSignatureError` when some eigenvalue is smaller than
    ``rel_tol`` times the spectral norm, making the counts unreliable.
    """
    s = check_symmetric(s, name="signature input")
    eig = np.linalg.eigvalsh(s)
    scale = np.abs(eig).max()
    if scale == 0.0 or np.abs(eig).min() <= rel_tol * scale:
        raise DegenerateSignatureError(
            "matrix is numerically singular; signature is not well defined"
        )
    num_positive = int((eig > 0).sum())
    return num_positive, eig.size - num_positive
