"""The symmetric space of nonsingular symmetric matrices with fixed signature.

With ``J = diag(-1, ..., -1, 1, ..., 1)`` the space carries the congruence
action ``L -> A L A^T`` of the general linear group; the indefinite
orthogonal group O(p, q) stabilizes J.  The canonical chart at J is

    sig_exp(X) = exp(2 X) J,        sig_log(L) = log(L J) / 2,

defined for L whose product with J has no eigenvalue on the closed
negative real axis.  Charts at a general base L̄ interpolate via

    L̄ exp( sum_i phi_i(x) log(L̄^{-1} L_i) ),

which preserves symmetry and signature pointwise, commutes with the
O(p, q) action and with inversion, and interpolates log|det| linearly in
the weights.  The fixed-point variant re-centers the base at the current
interpolant and computes the weighted Riemannian (Karcher) mean; with
``J = I`` the fixed-base scheme is the weighted log-Euclidean mean of
symmetric positive-definite matrices.

Special cases: ``J = I`` gives SPD matrices, ``J = diag(-1, 1, 1, 1)``
Lorentzian metrics.
"""

from dataclasses import dataclass, field

import numpy as np

from . import charts
from .errors import ChartDomainError, TangentError
from .matfun import (_check_log_domain_stack, _d2exp_stack, _dexp_stack,
                     _expm_stack, _logm_stack, _spectrum_flags)
from .validation import as_square_matrix, check_symmetric

__all__ = [
    "SignatureForm",
    "spd_form",
    "lorentz_form",
    "SignatureChart",
    "sig_exp",
    "sig_log",
    "generalized_polar",
    "interpolate_signature",
    "interpolate_signature_karcher",
    "interpolate_signature_derivatives",
]


@dataclass(frozen=True)
class SignatureForm:
    """The diagonal form J with ``num_negative`` entries -1 followed by
    ``num_positive`` entries +1.  The associated matrices have signature
    ``(num_positive, num_negative)``."""

    num_negative: int
    num_positive: int
    j_diag: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.num_negative < 0 or self.num_positive < 0 or self.n < 1:
            raise ValueError("signature counts must be nonnegative with n >= 1")
        diag = np.concatenate([
            -np.ones(self.num_negative), np.ones(self.num_positive)
        ])
        object.__setattr__(self, "j_diag", diag)

    @property
    def n(self):
        return self.num_negative + self.num_positive

    @property
    def j(self):
        """The form as a dense matrix."""
        return np.diag(self.j_diag)

    @property
    def signature(self):
        """(positive count, negative count), the invariant of the space."""
        return (self.num_positive, self.num_negative)


def spd_form(n):
    """Form of the symmetric positive-definite matrices (J = I)."""
    return SignatureForm(0, n)


def lorentz_form(n=4):
    """Form of the Lorentzian metrics, J = diag(-1, 1, ..., 1)."""
    return SignatureForm(1, n - 1)


def _check_chart_domain(products, tol=1e-10):
    """Raise ChartDomainError (with datum index for stacks) when some
    product L̄^{-1} L has an eigenvalue on the closed negative real axis."""
    on_axis, singular, min_real = _spectrum_flags(products, tol)
    bad = np.atleast_1d(on_axis | singular)
    if bad.any():
        idx = int(np.argmax(bad))
        worst = np.atleast_1d(min_real)[idx]
        raise ChartDomainError(
            "matrix lies outside the principal-log chart: eigenvalue with "
            f"real part {worst:g} on the closed negative real axis",
            index=idx if products.ndim == 3 else None,
        )


def sig_exp(x, form, tol=1e-9):
    """Chart from the Lie triple system to the signature space: exp(2X) J.

    ``x`` must satisfy X J = J X^T (within ``tol``, relative).
    """
    x = as_square_matrix(x, "tangent")
    j = form.j_diag
    if x.shape[0] != form.n:
        raise TangentError(f"tangent has size {x.shape[0]}, form has n={form.n}")
    resid = x * j[np.newaxis, :] - j[:, np.newaxis] * x.T
    if np.linalg.norm(resid) > tol * max(1.0, np.linalg.norm(x)):
        raise TangentError("tangent is not in the Lie triple system (X J != J X^T)")
    return _expm_stack(2.0 * x) * j[np.newaxis, :]


def sig_log(l, form, tol=1e-10):
    """Inverse chart at J: log(L J) / 2.

    Requires ``L J`` to have no eigenvalue on the closed negative real axis
    (``tol`` is the detection band); raises :class:`ChartDomainError`
    otherwise.
    """
    l = check_symmetric(l, name="signature matrix")
    if l.shape[0] != form.n:
        raise ValueError(f"matrix has size {l.shape[0]}, form has n={form.n}")
    lj = l * form.j_diag[np.newaxis, :]
    _check_chart_domain(lj, tol)
    return 0.5 * _logm_stack(lj, check=False)


def generalized_polar(a, form):
    """Generalized polar factors A = P Q with P J = J P^T and Q J Q^T = J.

    P is the principal square root of ``A J A^T J``; defined whenever that
    product has no eigenvalue on the closed negative real axis.
    """
    a = as_square_matrix(a)
    if a.shape[0] != form.n:
        raise ValueError(f"matrix has size {a.shape[0]}, form has n={form.n}")
    j = form.j_diag
    s = (a * j[np.newaxis, :]) @ (a.T * j[:, np.newaxis])
    try:
        _check_chart_domain(s)
    except ChartDomainError as err:
        raise ChartDomainError(
            f"generalized polar decomposition undefined: {err}") from err
    # sqrt via exp(log(S)/2); shares the verified log kernel
    p = _expm_stack(0.5 * _logm_stack(s, check=False))
    q = np.linalg.solve(p, a)
    return p, q


class SignatureChart(charts.Chart):
    """Chart of the fixed-signature space centered at ``base``.

    Tangent coordinates of L are ``log(base^{-1} L)``; the chart map is
    ``T -> base exp(T)``.  At ``base = J`` these coincide (up to the factor
    2 bookkeeping) with :func:`sig_log` / :func:`sig_exp`.
    """

    def __init__(self, form, base=None, tol=1e-10):
        self.form = form
        self._base = form.j if base is None else as_square_matrix(base, "base")
        if self._base.shape[0] != form.n:
            raise ValueError("base size does not match the form")
        self.tol = tol

    @property
    def base(self):
        return self._base

    def to_tangent(self, point):
        point = np.asarray(point, dtype=float)
        prod = np.linalg.solve(self._base, point)
        _check_chart_domain(prod, self.tol)
        return _logm_stack(prod, check=False)

    def from_tangent(self, tangent):
        return self._base @ _expm_stack(np.asarray(tangent, dtype=float))

    def push_forward(self, tangent, velocity):
        return self._base @ _dexp_stack(tangent, velocity)

    def push_forward_second(self, tangent, vel_j, vel_k, accel):
        return self._base @ _d2exp_stack(tangent, vel_j, vel_k, accel)


def _is_identity_base(form, base):
    return form.num_negative == 0 and (
        base is None or np.array_equal(base, np.eye(form.n))
    )


def _spd_log_stack(mats):
    w, v = np.linalg.eigh(mats)
    if np.any(w <= 0):
        idx = int(np.argmax((w <= 0).any(axis=-1))) if mats.ndim == 3 else None
        raise ChartDomainError("matrix is not positive definite", index=idx)
    return (v * np.log(w)[..., np.newaxis, :]) @ np.swapaxes(v, -2, -1)


def _sym_exp(s):
    w, v = np.linalg.eigh(s)
    return (v * np.exp(w)[..., np.newaxis, :]) @ np.swapaxes(v, -2, -1)


def _data_stack(data, form):
    mats = np.stack([np.asarray(l, dtype=float) for l in data])
    if mats.shape[-2:] != (form.n, form.n):
        raise ValueError(
            f"data matrices have shape {mats.shape[-2:]}, form has n={form.n}")
    return mats


def _tangent_logs(mats, form, base, spd_fast):
    """Stack of log(base^{-1} L_i) with datum-indexed domain errors."""
    if spd_fast:
        return _spd_log_stack(mats)
    base = form.j if base is None else base
    prods = np.linalg.solve(base, mats)
    _check_chart_domain(prods)
    return _logm_stack(prods, check=False)


def _assert_symmetric_result(l, tol=1e-9):
    asym = np.linalg.norm(l - l.T)
    if asym > tol * max(1.0, np.linalg.norm(l)):
        raise ArithmeticError(
            f"interpolant lost symmetry (asymmetry {asym:g}); inputs are "
            "likely far outside the chart"
        )
    return l


def interpolate_signature(data, shapes, x, form, base=None):
    """Fixed-base interpolant  base * exp( sum_i phi_i(x) log(base^{-1} L_i) ).

    ``base`` defaults to J.  The result is symmetric with the data's
    signature and reproduces the data at the shape-function nodes.  With
    ``J = I`` and the default base this is the weighted log-Euclidean mean,
    computed through a symmetric eigendecomposition fast path.

    Raises :class:`ChartDomainError` (carrying the datum index) when some
    ``base^{-1} L_i`` has an eigenvalue on the closed negative real axis.
    """
    mats = _data_stack(data, form)
    w = shapes.values(x)
    if len(shapes) != len(mats):
        raise ValueError("data/shape-set size mismatch")
    fast = _is_identity_base(form, base)
    logs = _tangent_logs(mats, form, base, fast)
    p = np.tensordot(w, logs, axes=1)
    if fast:
        out = _sym_exp(0.5 * (p + p.T))
    else:
        b = form.j if base is None else base
        out = b @ _expm_stack(p)
    return _assert_symmetric_result(out)


def interpolate_signature_karcher(data, shapes, x, form, base=None, tol=1e-12,
                                  max_iter=100, full_output=False):
    """Weighted Riemannian-mean interpolant via fixed-point re-centering.

    Stops when ``||sum_i phi_i(x) log(base^{-1} L_i)||_F <= tol``; the
    initial base defaults to the datum with the largest weight at ``x``.
    ``tol=None`` truncates after exactly ``max_iter`` steps (one step is
    the fixed-base interpolant at the initial base).  ``full_output=True``
    returns a :class:`symspace.charts.KarcherResult`.
    """
    mats = _data_stack(data, form)
    return charts.interpolate_karcher(
        list(mats), shapes, x, lambda b: SignatureChart(form, b),
        base=base, tol=tol, max_iter=max_iter, full_output=full_output,
    )


def interpolate_signature_derivatives(data, shapes, x, form, base=None):
    """Interpolant with its ambient first and mixed second derivatives.

    Returns ``(value, first, second)`` where ``first[j]`` is the derivative
    along reference direction j and ``second[j, k]`` the mixed second
    derivative; first derivatives come from the 2x2 and second derivatives
    from the 4x4 block-triangular exponential.
    """
    mats = _data_stack(data, form)
    sv = shapes.eval(x)
    if len(shapes) != len(mats):
        raise ValueError("data/shape-set size mismatch")
    b = form.j if base is None else np.asarray(base, dtype=float)
    logs = _tangent_logs(mats, form, base, spd_fast=False)
    p = np.tensordot(sv.values, logs, axes=1)
    dps = np.tensordot(sv.gradients.T, logs, axes=1)          # (d, n, n)
    d2ps = np.tensordot(sv.hessians.transpose(1, 2, 0), logs, axes=1)
    value = _assert_symmetric_result(b @ _expm_stack(p))
    d = shapes.dim
    first = b @ _dexp_stack(np.broadcast_to(p, dps.shape), dps)
    second = np.empty((d, d, form.n, form.n))
    for j in range(d):
        for k in range(j, d):
            blk = b @ _d2exp_stack(p, dps[j], dps[k], d2ps[j, k])
            second[j, k] = blk
            second[k, j] = blk
    return value, first, second
