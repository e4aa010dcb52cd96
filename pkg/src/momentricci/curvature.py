"""Finite-difference curvature of metrics given in a coordinate chart.

Everything here works from metric evaluations only: first derivatives of the
metric by second-order central differences, derivatives of the Christoffel
symbols by a second (nested) layer of central differences.  Nothing in this
module knows about warped products, so it serves as the independent check for
the closed-form Ricci formulas elsewhere in the package.

Metric callables are vectorized: they take points of shape ``(..., d)`` and
return matrices of shape ``(..., d, d)``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
import scipy.linalg

MAX_DIM = 9
DEFAULT_STEP = 1e-3


class CurvatureError(ValueError):
    """Evaluation failed at a specific point."""

    def __init__(self, message: str, point=None):
        super().__init__(message)
        self.point = None if point is None else np.asarray(point, dtype=float)


class SingularMetricError(CurvatureError):
    pass


class BoundaryError(CurvatureError):
    pass


@dataclass(frozen=True)
class MetricChart:
    """A metric g(x) on a coordinate box.

    ``lower``/``upper`` bound the box; use ``-inf``/``inf`` for periodic
    angles.  ``margin`` is the minimum distance evaluation points must keep
    from the box boundary on top of what the stencil needs.
    """

    metric: Callable[[np.ndarray], np.ndarray]
    lower: np.ndarray
    upper: np.ndarray
    margin: float = 0.0
    name: str = ""

    def __post_init__(self):
        lo = np.asarray(self.lower, dtype=float)
        hi = np.asarray(self.upper, dtype=float)
        if lo.shape != hi.shape or lo.ndim != 1:
            raise ValueError("lower/upper must be 1-d arrays of equal length")
        if not 1 <= lo.size <= MAX_DIM:
            raise ValueError(f"chart dimension must be between 1 and {MAX_DIM}")
        if np.any(hi <= lo):
            raise ValueError("empty coordinate box")
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)

    @property
    def dim(self) -> int:
        return self.lower.size

    def __call__(self, x) -> np.ndarray:
        return self.metric(np.asarray(x, dtype=float))

    def default_step(self) -> np.ndarray:
        width = self.upper - self.lower
        finite = np.isfinite(width)
        scale = np.where(finite, width, 1.0)
        return DEFAULT_STEP * scale

    def check_interior(self, x: np.ndarray, reach) -> None:
        x = np.atleast_2d(x)
        reach = np.maximum(np.broadcast_to(reach, (self.dim,)), self.margin)
        bad = np.any((x - self.lower < reach) | (self.upper - x < reach), axis=-1)
        if np.any(bad):
            point = x[np.argmax(bad)]
            raise BoundaryError(
                f"point {point} closer than {reach} to the boundary of {self.name or 'chart'}",
                point,
            )


@dataclass
class CurvatureSample:
    point: np.ndarray
    christoffel: np.ndarray
    ricci: np.ndarray
    step: np.ndarray


@dataclass
class RicciScan:
    """Grid report of the smallest eigenvalue of g^{-1} Ric."""

    points: np.ndarray
    min_eigenvalues: np.ndarray
    step: np.ndarray
    label: str = ""
    extra: dict = field(default_factory=dict)

    @property
    def min_value(self) -> float:
        return float(self.min_eigenvalues[self.argmin])

    @property
    def argmin(self) -> int:
        # lexicographic tie-break on the point keeps merges deterministic
        vals = self.min_eigenvalues
        order = np.lexsort(tuple(self.points[:, k] for k in reversed(range(self.points.shape[1]))) + (vals,))
        return int(order[0])

    @property
    def argmin_point(self) -> np.ndarray:
        return self.points[self.argmin]

    @property
    def positive(self) -> bool:
        return bool(self.min_value > 0)

    def summary(self) -> dict:
        return {
            "label": self.label,
            "n_points": int(self.points.shape[0]),
            "min_eigenvalue": self.min_value,
            "argmin": [float(v) for v in self.argmin_point],
            "step": [float(s) for s in self.step],
            **self.extra,
        }


def _steps(chart: MetricChart, step) -> np.ndarray:
    if step is None:
        return chart.default_step()
    h = np.broadcast_to(np.asarray(step, dtype=float), (chart.dim,)).copy()
    if np.any(h <= 0):
        raise ValueError("finite-difference step must be positive")
    return h


def _metric_and_derivative(metric, X: np.ndarray, h: np.ndarray):
    """g and dg[p, l, i, j] = d_l g_ij at points X of shape (P, d)."""
    P, d = X.shape
    offsets = np.eye(d) * h[:, None]
    stencil = np.concatenate([X[:, None, :] + offsets, X[:, None, :] - offsets], axis=1)
    G = metric(np.concatenate([X[:, None, :], stencil], axis=1).reshape(-1, d))
    G = np.asarray(G, dtype=float).reshape(P, 2 * d + 1, d, d)
    g = G[:, 0]
    dg = (G[:, 1 : d + 1] - G[:, d + 1 :]) / (2.0 * h[None, :, None, None])
    return g, dg


def _inverse(g: np.ndarray, X: np.ndarray) -> np.ndarray:
    try:
        np.linalg.cholesky(g)
    except np.linalg.LinAlgError:
        bad = X[0]
        for p in range(g.shape[0]):
            if np.any(np.linalg.eigvalsh(g[p]) <= 0):
                bad = X[p]
                break
        raise SingularMetricError(f"metric not positive definite at {bad}", bad) from None
    return np.linalg.inv(g)


def _christoffel_batch(metric, X: np.ndarray, h: np.ndarray) -> np.ndarray:
    g, dg = _metric_and_derivative(metric, X, h)
    ginv = _inverse(g, X)
    # lowered symbols Gamma_{l,ij} = (d_i g_jl + d_j g_il - d_l g_ij) / 2
    low = 0.5 * (np.einsum("pijl->plij", dg) + np.einsum("pjil->plij", dg) - dg)
    return np.einsum("pkl,plij->pkij", ginv, low)


def christoffel_at(chart: MetricChart, x, step=None) -> np.ndarray:
    """Gamma[k, i, j] at x (or at each row of a (P, d) array)."""
    h = _steps(chart, step)
    X = np.atleast_2d(np.asarray(x, dtype=float))
    chart.check_interior(X, 2 * h)
    G = _christoffel_batch(chart.metric, X, h)
    return G[0] if np.ndim(x) == 1 else G


def _ricci_batch(metric, X: np.ndarray, h: np.ndarray):
    P, d = X.shape
    H = 2.0 * h
    offsets = np.eye(d) * H[:, None]
    pts = np.concatenate([X[:, None, :], X[:, None, :] + offsets, X[:, None, :] - offsets], axis=1)
    Gam = _christoffel_batch(metric, pts.reshape(-1, d), h).reshape(P, 2 * d + 1, d, d, d)
    G0 = Gam[:, 0]
    # dG[p, m, k, i, j] = d_m Gamma^k_ij
    dG = (Gam[:, 1 : d + 1] - Gam[:, d + 1 :]) / (2.0 * H[None, :, None, None, None])
    term1 = np.einsum("pkkij->pij", dG)
    term2 = np.einsum("pjkik->pij", dG)
    trace = np.einsum("pkkl->pl", G0)
    term3 = np.einsum("pl,plij->pij", trace, G0)
    term4 = np.einsum("pkjl,plik->pij", G0, G0)
    ric = term1 - term2 + term3 - term4
    return 0.5 * (ric + np.swapaxes(ric, -1, -2)), G0


def _ricci_extrapolated(metric, X: np.ndarray, h: np.ndarray, extrapolate: bool):
    ric, gam = _ricci_batch(metric, X, h)
    if extrapolate:
        # Richardson: the scheme is even in h, so this cancels the h^2 term
        coarse, _ = _ricci_batch(metric, X, 2 * h)
        ric = (4 * ric - coarse) / 3
    return ric, gam


def _reach(h, extrapolate):
    return (8 if extrapolate else 4) * h


def ricci_at(chart: MetricChart, x, step=None, extrapolate: bool = False) -> np.ndarray:
    """Ricci tensor R_ij (coordinate components) at x or at each row of x.

    With ``extrapolate`` the steps h and 2h are combined to fourth order.
    """
    h = _steps(chart, step)
    X = np.atleast_2d(np.asarray(x, dtype=float))
    chart.check_interior(X, _reach(h, extrapolate))
    ric, _ = _ricci_extrapolated(chart.metric, X, h, extrapolate)
    return ric[0] if np.ndim(x) == 1 else ric


def curvature_sample(chart: MetricChart, x, step=None) -> CurvatureSample:
    h = _steps(chart, step)
    X = np.atleast_2d(np.asarray(x, dtype=float))
    chart.check_interior(X, 4 * h)
    ric, gam = _ricci_batch(chart.metric, X, h)
    return CurvatureSample(point=X[0], christoffel=gam[0], ricci=ric[0], step=h)


def ricci_quadratic_form(chart: MetricChart, x, v, step=None, extrapolate: bool = False) -> float:
    """Ric(v, v) / g(v, v)."""
    v = np.asarray(v, dtype=float)
    if not np.any(v):
        raise ValueError("zero tangent vector")
    ric = ricci_at(chart, x, step, extrapolate)
    g = chart(np.asarray(x, dtype=float))
    return float(v @ ric @ v / (v @ g @ v))


def ricci_eigenvalues(chart: MetricChart, x, step=None, extrapolate: bool = False) -> np.ndarray:
    """Eigenvalues of g^{-1} Ric, ascending; shape (d,) or (P, d)."""
    X = np.atleast_2d(np.asarray(x, dtype=float))
    ric = np.atleast_3d(ricci_at(chart, X, step, extrapolate))
    g = chart(X).reshape(ric.shape)
    out = np.array([scipy.linalg.eigh(r, gg, eigvals_only=True) for r, gg in zip(ric, g)])
    return out[0] if np.ndim(x) == 1 else out


def grid_points(axes: Sequence[Sequence[float]]) -> np.ndarray:
    """Tensor-product grid, first axis slowest."""
    mesh = np.meshgrid(*[np.asarray(a, dtype=float) for a in axes], indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=-1)


def min_ricci_scan(
    chart: MetricChart, grid, step=None, label: str = "", chunk: int = 256, extrapolate: bool = False
) -> RicciScan:
    """Smallest eigenvalue of g^{-1} Ric at every grid point.

    ``grid`` is either an explicit (P, d) array or a sequence of per-axis
    coordinate arrays.
    """
    if isinstance(grid, np.ndarray) and grid.ndim == 2:
        pts = grid.astype(float)
    else:
        pts = grid_points(grid)
    h = _steps(chart, step)
    mins = np.empty(pts.shape[0])
    for start in range(0, pts.shape[0], chunk):
        block = pts[start : start + chunk]
        chart.check_interior(block, _reach(h, extrapolate))
        ric, _ = _ricci_extrapolated(chart.metric, block, h, extrapolate)
        g = chart(block)
        for i in range(block.shape[0]):
            mins[start + i] = scipy.linalg.eigh(ric[i], g[i], eigvals_only=True)[0]
    return RicciScan(points=pts, min_eigenvalues=mins, step=h, label=label)
