"""Benchmark harness: elementwise metric interpolation on uniform grids.

Interpolates a metric field over the slice U = {t0} x [2,3]^3 on a uniform
N x N x N grid of cubes, with one of three schemes per element:

* ``symspace``       fixed-base structure-preserving interpolation at J,
* ``componentwise``  plain polynomial interpolation of the entries,
* ``karcher``        fixed-point weighted Riemannian mean per point.

Reports L^2 and H^1 interpolation errors by tensor Gauss-Legendre
quadrature (all four coordinate directions enter the H^1 sum; the t term
vanishes identically because the fields are static and t is frozen), and
a signature census over all quadrature points.  Elements are processed
and accumulated in lexicographic order, so output is reproducible.
"""

import itertools
import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import ChartDomainError, DegenerateSignatureError, KarcherDivergenceError
from .matfun import _dexp_stack, _expm_stack, _logm_stack, _spectrum_flags, sym_signature
from .metrics import FORM
from .shapes import make_tensor_lagrange
from .signature import interpolate_signature_karcher

__all__ = [
    "GridSpec",
    "SCHEMES",
    "ConvergenceRow",
    "ConvergenceReport",
    "CensusReport",
    "run_convergence",
    "convergence_study",
    "run_signature_census",
    "render_convergence_csv",
    "render_census_csv",
    "report_to_json",
]

SCHEMES = ("symspace", "componentwise", "karcher")
_REGION = ((2.0, 3.0), (2.0, 3.0), (2.0, 3.0))
_FD_STEP = 1e-6  # reference-coordinate step for karcher H^1 derivatives


@dataclass(frozen=True)
class GridSpec:
    """One interpolation run: N^3 cubes, tensor-Lagrange degree, scheme,
    quadrature points per axis."""

    n_cells: int
    degree: int = 1
    scheme: str = "symspace"
    quad: int = 4
    region: tuple = _REGION
    t0: float = 0.0
    karcher_tol: float = 1e-12
    karcher_max_iter: int = 100

    def __post_init__(self):
        if self.n_cells < 1:
            raise ValueError("n_cells must be >= 1")
        if self.degree not in (1, 2):
            raise ValueError("degree must be 1 or 2")
        if self.scheme not in SCHEMES:
            raise ValueError(f"scheme must be one of {SCHEMES}")
        if self.quad < self.degree + 1:
            raise ValueError("need at least degree+1 quadrature points per axis")


def _gauss_cube(q):
    """Tensor Gauss-Legendre rule on [0,1]^3: points (q^3, 3), weights (q^3,)."""
    x, w = np.polynomial.legendre.leggauss(q)
    x = (x + 1.0) / 2.0
    w = w / 2.0
    pts = np.array(list(itertools.product(x, repeat=3)))
    wts = np.array([wa * wb * wc for wa, wb, wc in itertools.product(w, repeat=3)])
    return pts, wts


def _element_geometry(spec):
    lo = np.array([r[0] for r in spec.region])
    hi = np.array([r[1] for r in spec.region])
    h = (hi - lo) / spec.n_cells
    return lo, h


def _element_nodes(spec, shapes, lo, h, idx):
    corner = lo + h * np.array(idx)
    return corner + shapes.nodes * h


def _sample_metric(metric, spec, points):
    return metric(np.full(len(points), spec.t0),
                  points[:, 0], points[:, 1], points[:, 2])


@dataclass
class _ElementTables:
    """Per-(degree, quad) reference tables shared by all elements."""

    shapes: object
    qpoints: np.ndarray   # (nq, 3) reference coordinates
    qweights: np.ndarray  # (nq,)
    phi: np.ndarray       # (nq, m)
    dphi: np.ndarray      # (nq, m, 3)


def _tables(spec):
    shapes = make_tensor_lagrange(3, spec.degree)
    qpoints, qweights = _gauss_cube(spec.quad)
    phi = np.empty((len(qpoints), len(shapes)))
    dphi = np.empty((len(qpoints), len(shapes), 3))
    for i, pt in enumerate(qpoints):
        sv = shapes.eval(pt)
        phi[i] = sv.values
        dphi[i] = sv.gradients
    return _ElementTables(shapes, qpoints, qweights, phi, dphi)


def _symspace_values(tables, data, h, want_derivatives):
    """Structure-preserving interpolant (base J) at all quadrature points.

    Returns ``(values, derivs)`` with derivs ``(nq, 3, 4, 4)`` in physical
    coordinates, or None when not requested.
    """
    jd = FORM.j_diag
    products = jd[:, np.newaxis] * data
    on_axis, singular, min_real = _spectrum_flags(products, 1e-10)
    bad = on_axis | singular
    if bad.any():
        raise ChartDomainError(
            "element datum outside the principal-log chart "
            f"(eigenvalue real part {min_real[bad].min():g})",
            index=int(np.argmax(bad)),
        )
    logs = _logm_stack(products, check=False)
    p = np.tensordot(tables.phi, logs, axes=1)
    values = jd[:, np.newaxis] * _expm_stack(p)
    derivs = None
    if want_derivatives:
        derivs = np.empty((len(p), 3, 4, 4))
        for a in range(3):
            dp = np.tensordot(tables.dphi[:, :, a], logs, axes=1) / h[a]
            derivs[:, a] = jd[:, np.newaxis] * _dexp_stack(p, dp)
    return values, derivs


def _componentwise_values(tables, data, h, want_derivatives):
    values = np.tensordot(tables.phi, data, axes=1)
    derivs = None
    if want_derivatives:
        derivs = np.stack(
            [np.tensordot(tables.dphi[:, :, a], data, axes=1) / h[a]
             for a in range(3)], axis=1)
    return values, derivs


def _karcher_values(tables, data, h, want_derivatives, spec):
    data_list = list(data)
    iterations = []

    def solve(x, record=False):
        result = interpolate_signature_karcher(
            data_list, tables.shapes, x, FORM,
            tol=spec.karcher_tol, max_iter=spec.karcher_max_iter,
            full_output=True,
        )
        if record:
            iterations.append(result.iterations)
        return result.point

    values = np.stack([solve(x, record=True) for x in tables.qpoints])
    derivs = None
    if want_derivatives:
        derivs = np.empty((len(values), 3, 4, 4))
        for i, x in enumerate(tables.qpoints):
            for a in range(3):
                step = np.zeros(3)
                step[a] = _FD_STEP
                derivs[i, a] = (solve(x + step) - solve(x - step)) / (2 * _FD_STEP * h[a])
    return values, derivs, iterations


def _element_values(tables, data, h, spec, want_derivatives):
    if spec.scheme == "symspace":
        vals, ders = _symspace_values(tables, data, h, want_derivatives)
        return vals, ders, None
    if spec.scheme == "componentwise":
        vals, ders = _componentwise_values(tables, data, h, want_derivatives)
        return vals, ders, None
    return _karcher_values(tables, data, h, want_derivatives, spec)


@dataclass
class SingleRunResult:
    """Errors of one (N, degree, scheme) run."""

    l2_error: float
    h1_error: float
    element_l2_sq: list
    element_h1_sq: list
    failures: list          # (element index tuple, message)
    karcher_iterations: list


def run_convergence(spec, metric):
    """L^2 and H^1 interpolation errors of ``metric`` under ``spec``.

    Chart-domain failures are recorded per element and the run continues;
    failed elements contribute nothing to the error integrals.
    """
    tables = _tables(spec)
    lo, h = _element_geometry(spec)
    cell_volume = float(np.prod(h))
    l2_sq_total = 0.0
    h1_sq_total = 0.0
    element_l2 = []
    element_h1 = []
    failures = []
    karcher_iters = []
    for idx in itertools.product(range(spec.n_cells), repeat=3):
        nodes = _element_nodes(spec, tables.shapes, lo, h, idx)
        data = _sample_metric(metric, spec, nodes)
        qphys = lo + h * np.array(idx) + tables.qpoints * h
        t_arr = np.full(len(qphys), spec.t0)
        exact = metric(t_arr, qphys[:, 0], qphys[:, 1], qphys[:, 2])
        exact_grad = metric.gradient(t_arr, qphys[:, 0], qphys[:, 1], qphys[:, 2])
        try:
            values, derivs, iters = _element_values(tables, data, h, spec, True)
        except (ChartDomainError, KarcherDivergenceError) as err:
            failures.append((idx, str(err)))
            element_l2.append(float("nan"))
            element_h1.append(float("nan"))
            continue
        if iters:
            karcher_iters.extend(iters)
        diff = values - exact
        l2_sq = cell_volume * float(
            np.dot(tables.qweights, (diff ** 2).sum(axis=(-2, -1))))
        # t-direction: static field interpolated on a frozen-t slice, the
        # derivative error is identically zero but stays in the sum.
        h1_sq = 0.0
        for a in range(3):
            gdiff = derivs[:, a] - exact_grad[:, 1 + a]
            h1_sq += cell_volume * float(
                np.dot(tables.qweights, (gdiff ** 2).sum(axis=(-2, -1))))
        l2_sq_total += l2_sq
        h1_sq_total += h1_sq
        element_l2.append(l2_sq)
        element_h1.append(h1_sq)
    return SingleRunResult(
        l2_error=float(np.sqrt(l2_sq_total)),
        h1_error=float(np.sqrt(h1_sq_total)),
        element_l2_sq=element_l2,
        element_h1_sq=element_h1,
        failures=failures,
        karcher_iterations=karcher_iters,
    )


@dataclass
class ConvergenceRow:
    degree: int
    n_cells: int
    l2_error: float
    l2_order: Optional[float]
    h1_error: float
    h1_order: Optional[float]


@dataclass
class ConvergenceReport:
    metric: str
    scheme: str
    quad: int
    rows: list = field(default_factory=list)
    failures: list = field(default_factory=list)   # (degree, N, element, message)
    karcher_iterations: list = field(default_factory=list)
    runs: dict = field(default_factory=dict)        # (degree, N) -> SingleRunResult


def convergence_study(metric, ns, degrees, scheme="symspace", quad=4, **kw):
    """Errors and dyadic refinement orders across a list of grid sizes.

    Orders are ``log2(e_N / e_2N)``, reported on the finer row and only for
    consecutive dyadic N.
    """
    report = ConvergenceReport(metric=metric.name, scheme=scheme, quad=quad)
    for degree in degrees:
        prev = None
        for n in ns:
            spec = GridSpec(n_cells=n, degree=degree, scheme=scheme, quad=quad, **kw)
            result = run_convergence(spec, metric)
            l2_order = h1_order = None
            if prev is not None and prev.n_cells * 2 == n:
                if result.l2_error > 0 and prev.l2_error > 0:
                    l2_order = float(np.log2(prev.l2_error / result.l2_error))
                if result.h1_error > 0 and prev.h1_error > 0:
                    h1_order = float(np.log2(prev.h1_error / result.h1_error))
            row = ConvergenceRow(degree, n, result.l2_error, l2_order,
                                 result.h1_error, h1_order)
            report.rows.append(row)
            report.runs[(degree, n)] = result
            report.failures.extend(
                (degree, n, el, msg) for el, msg in result.failures)
            report.karcher_iterations.extend(result.karcher_iterations)
            prev = row
    return report


@dataclass
class CensusReport:
    metric: str
    scheme: str
    n_cells: int
    degree: int
    quad: int
    counts: dict
    total: int
    failures: list


def run_signature_census(spec, metric):
    """Signature of the interpolant at every quadrature point of the grid.

    Returns counts keyed by the ``(positive, negative)`` signature pair;
    points where the signature is numerically degenerate are counted under
    ``"degenerate"``.
    """
    tables = _tables(spec)
    lo, h = _element_geometry(spec)
    counts = {}
    failures = []
    total = 0
    for idx in itertools.product(range(spec.n_cells), repeat=3):
        nodes = _element_nodes(spec, tables.shapes, lo, h, idx)
        data = _sample_metric(metric, spec, nodes)
        try:
            values, _, _ = _element_values(tables, data, h, spec, False)
        except (ChartDomainError, KarcherDivergenceError) as err:
            failures.append((idx, str(err)))
            continue
        for val in values:
            total += 1
            try:
                key = sym_signature(val)
            except DegenerateSignatureError:
                key = "degenerate"
            counts[key] = counts.get(key, 0) + 1
    return CensusReport(
        metric=metric.name, scheme=spec.scheme, n_cells=spec.n_cells,
        degree=spec.degree, quad=spec.quad, counts=counts, total=total,
        failures=failures,
    )


# ---------------------------------------------------------------------------
# rendering

def _fmt(x):
    if x is None:
        return ""
    return f"{x:.15g}"


def render_convergence_csv(report):
    """Table-style CSV, one block per degree, orders on the finer rows."""
    lines = []
    for degree in sorted({row.degree for row in report.rows}):
        lines.append(f"# metric={report.metric} scheme={report.scheme} "
                     f"degree={degree} quad={report.quad}")
        lines.append("N,L2_error,L2_order,H1_error,H1_order")
        for row in report.rows:
            if row.degree != degree:
                continue
            lines.append(",".join([
                str(row.n_cells), _fmt(row.l2_error), _fmt(row.l2_order),
                _fmt(row.h1_error), _fmt(row.h1_order)]))
    if report.failures:
        lines.append(f"# {len(report.failures)} element failure(s); see JSON output")
    return "\n".join(lines) + "\n"


def _census_key_str(key):
    return key if isinstance(key, str) else f"({key[0]},{key[1]})"


def render_census_csv(report):
    lines = [f"# metric={report.metric} scheme={report.scheme} "
             f"N={report.n_cells} degree={report.degree} quad={report.quad}",
             "signature,count"]
    for key in sorted(report.counts, key=_census_key_str):
        count = report.counts[key]
        sig = _census_key_str(key)
        sig = f'"{sig}"' if "," in sig else sig
        lines.append(f"{sig},{count}")
    return "\n".join(lines) + "\n"


def _round_floats(obj):
    """Round floats to 15 significant digits for serialization."""
    if isinstance(obj, float):
        return float(f"{obj:.15g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def report_to_json(report):
    """Full-diagnostics JSON text for either report type."""
    if isinstance(report, CensusReport):
        payload = {
            "command": "census",
            "metric": report.metric,
            "scheme": report.scheme,
            "N": report.n_cells,
            "degree": report.degree,
            "quad": report.quad,
            "total": report.total,
            "counts": {_census_key_str(k): v for k, v in report.counts.items()},
            "failures": [{"element": list(el), "message": msg}
                         for el, msg in report.failures],
        }
    else:
        payload = {
            "command": "convergence",
            "metric": report.metric,
            "scheme": report.scheme,
            "quad": report.quad,
            "rows": [{
                "degree": row.degree, "N": row.n_cells,
                "L2_error": row.l2_error, "L2_order": row.l2_order,
                "H1_error": row.h1_error, "H1_order": row.h1_order,
            } for row in report.rows],
            "elements": {
                f"degree={degree},N={n}": {
                    "l2_sq": run.element_l2_sq,
                    "h1_sq": run.element_h1_sq,
                }
                for (degree, n), run in report.runs.items()
            },
            "failures": [{"degree": d, "N": n, "element": list(el), "message": msg}
                         for d, n, el, msg in report.failures],
            "karcher_iterations": report.karcher_iterations,
        }
    return json.dumps(_round_floats(payload), indent=2) + "\n"
