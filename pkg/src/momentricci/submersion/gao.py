"""Interpolating two metrics with the same 1-jet at a point.

S = D^2 x D^2 is the product of two geodesic caps of the unit 2-sphere,
written in Cartesian exponential coordinates on R^4 = R^2 x R^2.  The model
it is blended into near the origin is a ball of CP^2 with the Fubini-Study
metric at scale R, in geodesic polar coordinates around a point.  With
R = sqrt(6) both metrics have Ric = g.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..curvature import MetricChart, RicciScan, min_ricci_scan, ricci_eigenvalues
from ..profiles import smoothstep5

R_CP_DEFAULT = float(np.sqrt(6.0))
JET_TOL = 1e-8


class JetMismatchError(ValueError):
    pass


class DegenerateBlendError(ValueError):
    def __init__(self, message: str, point=None):
        super().__init__(message)
        self.point = point


def _sin_over(r):
    """sin(r)/r with the removable singularity filled in."""
    return np.sinc(np.asarray(r, dtype=float) / np.pi)


def _radial_split(y):
    """(r, P) with P the projector onto the radial line (zero at the origin)."""
    r = np.linalg.norm(y, axis=-1)
    safe = np.where(r > 0, r, 1.0)
    u = y / safe[..., None]
    P = np.einsum("...i,...j->...ij", u, u)
    return r, np.where((r > 0)[..., None, None], P, 0.0)


def cap_metric(x) -> np.ndarray:
    """Product of two unit 2-sphere caps, dr^2 + sin(r)^2 dtheta^2 in each R^2 factor."""
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape[:-1] + (4, 4))
    eye = np.eye(2)
    for s in (0, 2):
        r, P = _radial_split(x[..., s : s + 2])
        k = _sin_over(r) ** 2
        out[..., s : s + 2, s : s + 2] = P + k[..., None, None] * (eye - P)
    return out


def cp_ball_metric(R: float = R_CP_DEFAULT) -> Callable:
    """Fubini-Study ball of CP^2 at scale R in Cartesian normal coordinates on C^2.

    g = dt^2 + h(t)^2 (Hopf direction)^2 + f(t)^2 (horizontal), f = R sin(t/R),
    h = f cos(t/R); the complex structure is i on each of (x0, x1), (x2, x3).
    """
    if R <= 0:
        raise ValueError("scale R must be positive")

    def metric(x):
        x = np.asarray(x, dtype=float)
        t = np.linalg.norm(x, axis=-1)
        safe = np.where(t > 0, t, 1.0)
        u = x / safe[..., None]
        Ju = np.stack([-u[..., 1], u[..., 0], -u[..., 3], u[..., 2]], axis=-1)
        Pr = np.einsum("...i,...j->...ij", u, u)
        Pv = np.einsum("...i,...j->...ij", Ju, Ju)
        Ph = np.eye(4) - Pr - Pv
        fr = _sin_over(t / R)  # f/t
        hr = fr * np.cos(t / R)  # h/t
        out = Pr + (hr**2)[..., None, None] * Pv + (fr**2)[..., None, None] * Ph
        return np.where((t > 0)[..., None, None], out, np.eye(4))

    return metric


def s_point(t, theta, a, b) -> np.ndarray:
    """Point of S from (t, theta, a, b): radii t cos(theta/2), t sin(theta/2), angles a, b."""
    t2 = t * np.cos(theta / 2)
    t3 = t * np.sin(theta / 2)
    return np.stack(np.broadcast_arrays(t2 * np.cos(a), t2 * np.sin(a), t3 * np.cos(b), t3 * np.sin(b)), axis=-1)


def s_ricci_unit_check(point) -> float:
    """max |lambda - 1| over the closed-form Ricci eigenvalues of S at ``point``.

    Each cap factor is dr^2 + h(r)^2 dtheta^2 with h = sin, whose Ricci
    eigenvalue is -h''/h; at r = 0 the limit is used.
    """
    x = np.asarray(point, dtype=float)
    vals = []
    for s in (0, 2):
        r = float(np.linalg.norm(x[s : s + 2]))
        if r >= np.pi:
            raise ValueError("point outside the geodesic caps")
        lam = 1.0 if r == 0 else -(-np.sin(r)) / np.sin(r)
        vals += [lam, lam]
    return float(np.max(np.abs(np.array(vals) - 1.0)))


def s_ricci_oracle(point, step: float = 1e-3) -> np.ndarray:
    chart = MetricChart(cap_metric, [-3.0] * 4, [3.0] * 4, name="S")
    return ricci_eigenvalues(chart, point, step=step, extrapolate=True)


# -- 1-jets -------------------------------------------------------------------


def metric_jet(metric, x, h: float = 1e-4):
    """(g, dg) at x, dg[k] = d_k g by fourth-order central differences."""
    x = np.asarray(x, dtype=float)
    d = x.size
    g = metric(x)
    dg = np.empty((d,) + g.shape)
    for k in range(d):
        e = np.zeros(d)
        e[k] = h
        dg[k] = (8 * (metric(x + e) - metric(x - e)) - (metric(x + 2 * e) - metric(x - 2 * e))) / (12 * h)
    return g, dg


@dataclass
class JetReport:
    value_gap: float
    derivative_gap: float
    tol: float

    @property
    def passed(self) -> bool:
        return bool(max(self.value_gap, self.derivative_gap) <= self.tol)


def jet_match_check(g0, g1, center=None, tol: float = JET_TOL, h: float = 1e-4) -> JetReport:
    center = np.zeros(4) if center is None else np.asarray(center, dtype=float)
    a, da = metric_jet(g0, center, h)
    b, db = metric_jet(g1, center, h)
    return JetReport(float(np.max(np.abs(a - b))), float(np.max(np.abs(da - db))), tol)


# -- the interpolation ------------------------------------------------------------


def default_step(u):
    """Monotone C^2 step from 1 (u <= 0) to 0 (u >= 1)."""
    return 1.0 - smoothstep5(u)[0]


@dataclass
class GaoBlend:
    g0: Callable
    g1: Callable
    rho1: float
    rho2: float
    s_profile: Callable = default_step

    def s(self, x) -> np.ndarray:
        r = np.linalg.norm(np.asarray(x, dtype=float), axis=-1)
        return self.s_profile((r - self.rho2) / (self.rho1 - self.rho2))

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        r = np.linalg.norm(x, axis=-1)[..., None, None]
        a, b = self.g0(x), self.g1(x)
        s = self.s(x)[..., None, None]
        mixed = (1 - s) * a + s * b
        # plain selection outside the annulus keeps the inputs bit-for-bit
        return np.where(r <= self.rho2, b, np.where(r >= self.rho1, a, mixed))


def gao_interpolate(g0, g1, rho1: float, rho2: float, s_profile: Callable = default_step,
                    rho0: float = np.inf, check_jets: bool = True, name: str = "gao") -> MetricChart:
    """g = (1 - s) g0 + s g1, s = 1 for |x| <= rho2 and s = 0 for |x| >= rho1."""
    if not 0 < rho2 < rho1 < rho0:
        raise ValueError("need 0 < rho2 < rho1 < rho0")
    if check_jets:
        rep = jet_match_check(g0, g1)
        if not rep.passed:
            raise JetMismatchError(f"1-jets differ at the center: {rep}")
    blend = GaoBlend(g0, g1, rho1, rho2, s_profile)
    box = min(rho0, 1.0)
    return MetricChart(blend, [-box] * 4, [box] * 4, name=name)


def check_positive_definite(chart: MetricChart, points) -> float:
    """Smallest metric eigenvalue over the points; raises with a witness if <= 0."""
    G = chart(np.asarray(points, dtype=float))
    ev = np.linalg.eigvalsh(G)[..., 0]
    i = int(np.argmin(ev))
    if ev[i] <= 0:
        raise DegenerateBlendError(f"blend not positive definite at {points[i]}", points[i])
    return float(ev[i])


def gao_setup(eps: float = 0.1, R: float = R_CP_DEFAULT):
    """(rho1, rho2, chart) for the S-cap / CP^2-ball blend at scale eps."""
    rho2, rho1 = eps / 4, eps / 2
    return rho1, rho2, gao_interpolate(cap_metric, cp_ball_metric(R), rho1, rho2)


def gao_grid(eps: float = 0.1, n_t: int = 23, n_theta: int = 9, n_angle: int = 3) -> np.ndarray:
    """Deterministic sample of S around and across the blending annulus."""
    t = np.linspace(0.05 * eps, 0.6 * eps, n_t)
    theta = np.linspace(0.05, np.pi - 0.05, n_theta)
    ang = np.linspace(0.0, 2 * np.pi, n_angle, endpoint=False) + 0.3
    T, TH, A, B = np.meshgrid(t, theta, ang, ang + 0.7, indexing="ij")
    return s_point(T.ravel(), TH.ravel(), A.ravel(), B.ravel())


def gao_ricci_scan(eps: float = 0.1, R: float = R_CP_DEFAULT, step: float | None = None,
                   grid=None) -> RicciScan:
    rho1, rho2, chart = gao_setup(eps, R)
    pts = gao_grid(eps) if grid is None else np.asarray(grid, dtype=float)
    check_positive_definite(chart, pts)
    h = 2e-3 * eps if step is None else step
    scan = min_ricci_scan(chart, pts, step=h, label=f"gao(eps={eps:g}, R={R:g})", extrapolate=True)
    scan.extra.update(rho1=rho1, rho2=rho2, R=R)
    return scan
