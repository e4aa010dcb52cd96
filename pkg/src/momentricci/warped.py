"""Closed-form Ricci curvature of cohomogeneity-one metrics on R x S^{2n-1}.

Two parameterizations are used:

* ``dt^2 + h(t)^2 ds_v^2 + f(t)^2 ds_h^2`` where ds_v^2, ds_h^2 split the
  unit round metric of S^{2n-1} along the Hopf fibres and their complement;
* ``dr^2/(1 - phi) + r^2 (1 - phi) ds_v^2 + r^2 (1 - delta) ds_h^2``, i.e.
  h = r sqrt(1 - phi), f = r sqrt(1 - delta), dt/dr = 1/sqrt(1 - phi).

All Ricci values are in the unit frame X0 (radial), X1 (vertical),
X2 (horizontal); off-diagonal entries vanish identically.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .curvature import MetricChart
from .profiles import DomainError, RadialProfile, constant, power


class CollapsedOrbitError(ValueError):
    """Formula evaluated where an orbit collapses (h = 0 or f = 0)."""


def _check_n(n) -> int:
    if int(n) != n or n < 2:
        raise ValueError("n must be an integer >= 2")
    return int(n)


# ---------------------------------------------------------------------------
# metrics in the (h, f) form


@dataclass(frozen=True)
class WarpedMetric:
    n: int
    h: RadialProfile
    f: RadialProfile

    def __post_init__(self):
        object.__setattr__(self, "n", _check_n(self.n))


def ricci_from_jets(n, h, h1, h2, f, f1, f2):
    """Diagonal Ricci values (Ric00, Ric11, Ric22) from t-derivatives of h, f."""
    h, h1, h2, f, f1, f2 = (np.asarray(v, dtype=float) for v in (h, h1, h2, f, f1, f2))
    m = 2 * n - 2
    ric0 = -h2 / h - m * f2 / f
    ric1 = -h2 / h - m * f1 * h1 / (f * h) + m * h**2 / f**4
    ric2 = -f2 / f - f1 * h1 / (f * h) - (2 * n - 3) * f1**2 / f**2 + 2 * n / f**2 - 2 * h**2 / f**4
    return ric0, ric1, ric2


def ricci_hf(w: WarpedMetric, t):
    """Ricci values of dt^2 + h^2 ds_v^2 + f^2 ds_h^2 at t."""
    hj, fj = w.h.jet(t), w.f.jet(t)
    if np.any(np.asarray(hj[0]) <= 0) or np.any(np.asarray(fj[0]) <= 0):
        raise CollapsedOrbitError("h or f vanishes at t; use smoothness_limits at a collapsing end")
    return ricci_from_jets(w.n, *hj, *fj)


def fubini_study_polar(R: float, n: int, t):
    """(h, f) of the Fubini-Study metric on CP^n_R at distance t from a point."""
    _check_n(n)
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0) or np.any(t >= R * np.pi / 2):
        raise DomainError("t must lie in (0, R pi/2)")
    s = np.sin(t / R)
    return R * s * np.cos(t / R), R * s


def fubini_study_metric(R: float, n: int) -> WarpedMetric:
    h = RadialProfile(
        0.0, R * np.pi / 2,
        lambda t: 0.5 * R * np.sin(2 * t / R),
        lambda t: np.cos(2 * t / R),
        lambda t: -2.0 / R * np.sin(2 * t / R),
        name="h_FS",
    )
    f = RadialProfile(
        0.0, R * np.pi / 2,
        lambda t: R * np.sin(t / R),
        lambda t: np.cos(t / R),
        lambda t: -np.sin(t / R) / R,
        name="f_FS",
    )
    return WarpedMetric(n, h, f)


# ---------------------------------------------------------------------------
# metrics in the phi form


@dataclass(frozen=True)
class PhiMetric:
    """dr^2/(1-phi) + r^2 (1-phi) ds_v^2 + r^2 ds_h^2 on [phi.a, phi.b]."""

    n: int
    phi: RadialProfile
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "n", _check_n(self.n))
        r = np.linspace(self.a, self.b, 259)[1:-1]
        if np.any(self.phi(r) >= 1):
            raise ValueError("phi must stay below 1 in the interior")

    @property
    def a(self) -> float:
        return self.phi.a

    @property
    def b(self) -> float:
        return self.phi.b


def phi_metric_components(p: PhiMetric, r):
    """(h, f, dt/dr) at r."""
    phi = np.asarray(p.phi(r))
    if np.any(phi >= 1):
        raise ValueError("phi >= 1: not a metric at this radius")
    F = 1.0 - phi
    r = np.asarray(r, dtype=float)
    return r * np.sqrt(F), r * np.ones_like(F), 1.0 / np.sqrt(F)


def ricci_phi(p: PhiMetric, r):
    """(Ric00 = Ric11, Ric22) of the phi metric."""
    r = np.asarray(r, dtype=float)
    v, d1, d2 = p.phi.jet(r)
    n = p.n
    return 0.5 * (d2 + (2 * n + 1) * d1 / r), d1 / r + 2 * n * v / r**2


def ricci_warped_r(n, F, E, r):
    """Ricci values of dr^2/F + r^2 F ds_v^2 + r^2 E ds_h^2.

    ``F`` and ``E`` are jets (value, d/dr, d^2/dr^2).  The expressions are
    the t-form formulas rewritten in r; they stay regular where F = 0.
    """
    n = _check_n(n)
    r = np.asarray(r, dtype=float)
    F0, F1, F2 = (np.asarray(v, dtype=float) for v in F)
    E0, E1, E2 = (np.asarray(v, dtype=float) for v in E)
    if np.any(E0 <= 0):
        raise CollapsedOrbitError("horizontal warp vanishes")
    sE = np.sqrt(E0)
    q = (2 * E0 + r * E1) / (2 * sE)
    q1 = (3 * E1 + r * E2) / (2 * sE) - (2 * E0 + r * E1) * E1 / (4 * E0 * sE)
    htt_h = (3 * F1 + r * F2) / (2 * r)
    ftt_f = (F1 * q / 2 + F0 * q1) / (r * sE)
    fh_fh = q * (F0 + r * F1 / 2) / (r**2 * sE)
    h2_f4 = F0 / (r**2 * E0**2)
    ft2_f2 = F0 * q**2 / (r**2 * E0)
    inv_f2 = 1.0 / (r**2 * E0)
    m = 2 * n - 2
    ric0 = -htt_h - m * ftt_f
    ric1 = -htt_h - m * fh_fh + m * h2_f4
    ric2 = -ftt_f - fh_fh - (2 * n - 3) * ft2_f2 + 2 * n * inv_f2 - 2 * h2_f4
    return ric0, ric1, ric2


def phi_jets_in_t(p: PhiMetric, r, delta: RadialProfile | None = None):
    """t-derivative jets of h = r sqrt(1-phi) and f = r sqrt(1-delta) at r."""
    r = np.asarray(r, dtype=float)
    v, d1, d2 = p.phi.jet(r)
    F, F1, F2 = 1 - v, -d1, -d2
    if delta is None:
        E, E1, E2 = np.ones_like(r), np.zeros_like(r), np.zeros_like(r)
    else:
        dv, dd1, dd2 = delta.jet(r)
        E, E1, E2 = 1 - dv, -dd1, -dd2
    sF, sE = np.sqrt(F), np.sqrt(E)
    h = r * sF
    h_r = sF + r * F1 / (2 * sF)
    h_rr = F1 / sF + r * F2 / (2 * sF) - r * F1**2 / (4 * F * sF)
    f = r * sE
    f_r = sE + r * E1 / (2 * sE)
    f_rr = E1 / sE + r * E2 / (2 * sE) - r * E1**2 / (4 * E * sE)
    # d/dt = sqrt(F) d/dr
    jet_h = (h, sF * h_r, F * h_rr + 0.5 * F1 * h_r)
    jet_f = (f, sF * f_r, F * f_rr + 0.5 * F1 * f_r)
    return jet_h, jet_f


def _integrand_endpoint(p: PhiMetric, e: float) -> bool:
    return abs(1.0 - p.phi(e)) < 1e-12


def arclength_reparam(p: PhiMetric, r_ref: float, r, tol: float = 1e-13):
    """t(r) - t(r_ref) = integral of dr/sqrt(1 - phi), signed.

    An endpoint where phi = 1 is handled by r = e +- s^2, which is regular
    when phi'(e) != 0.  A double zero (phi' = 0 there) is not integrable.
    """
    scalar = np.ndim(r) == 0
    out = np.array([_arclength(p, float(r_ref), float(x), tol) for x in np.atleast_1d(r)])
    return float(out[0]) if scalar else out


def _arclength(p: PhiMetric, lo: float, hi: float, tol: float) -> float:
    if lo == hi:
        return 0.0
    if hi < lo:
        return -_arclength(p, hi, lo, tol)
    phi = p.phi
    # interior check: sample the open interval
    inner = np.linspace(lo, hi, 65)[1:-1]
    if np.any(phi(inner) >= 1):
        raise ValueError("phi >= 1 inside the integration interval")
    opts = dict(epsabs=tol, epsrel=tol, limit=200)
    sing_lo = _integrand_endpoint(p, lo)
    sing_hi = _integrand_endpoint(p, hi)
    for e, flag in ((lo, sing_lo), (hi, sing_hi)):
        if flag and abs(phi(e, 1)) < 1e-12:
            raise ValueError(f"non-integrable endpoint at r = {e}: phi - 1 has a multiple zero")
    if not (sing_lo or sing_hi):
        return quad(lambda x: 1.0 / np.sqrt(1.0 - phi(x)), lo, hi, **opts)[0]
    mid = 0.5 * (lo + hi)
    total = 0.0
    if sing_lo:
        total += quad(lambda s: 2 * s / np.sqrt(max(1.0 - phi(lo + s * s), 0.0)) if s > 0 else
                      2.0 / np.sqrt(-phi(lo, 1)), 0.0, np.sqrt(mid - lo), **opts)[0]
    else:
        total += quad(lambda x: 1.0 / np.sqrt(1.0 - phi(x)), lo, mid, **opts)[0]
    if sing_hi:
        total += quad(lambda s: 2 * s / np.sqrt(max(1.0 - phi(hi - s * s), 0.0)) if s > 0 else
                      2.0 / np.sqrt(phi(hi, 1)), 0.0, np.sqrt(hi - mid), **opts)[0]
    else:
        total += quad(lambda x: 1.0 / np.sqrt(1.0 - phi(x)), mid, hi, **opts)[0]
    return total


def smoothness_limits(p: PhiMetric):
    """(df/dt, dh/dt) at the collapsing end r = a, where phi(a) = 1.

    With dt = dr/sqrt(F), F = 1 - phi: dh/dt = F + r F'/2 -> -a phi'(a)/2 and
    df/dt = sqrt(F) -> 0.  At a = 1 this is -phi'(1)/2.
    """
    a = p.a
    if abs(p.phi(a) - 1.0) > 1e-9:
        raise ValueError("phi(a) != 1: the orbit does not collapse at the left end")
    d1 = p.phi(a, 1)
    if d1 >= 0:
        raise ValueError("phi'(a) >= 0: smoothness criterion does not apply")
    return 0.0, float(-a * d1 / 2)


# ---------------------------------------------------------------------------
# psi calculus


def psi_from_phi(p: PhiMetric) -> RadialProfile:
    """psi = r phi' + 2n phi."""
    n, phi = p.n, p.phi
    return RadialProfile(
        phi.a, phi.b,
        lambda r: r * phi(r, 1) + 2 * n * phi(r),
        lambda r: r * phi(r, 2) + (2 * n + 1) * phi(r, 1),
        None,
        kind=phi.kind,
        name=f"psi[{phi.name}]",
    )


def phi_from_psi(psi: RadialProfile, n: int, moment=None, name: str = "") -> PhiMetric:
    """phi(r) = (1 + int_1^r psi(s) s^{2n-1} ds) / r^{2n}, so phi(1) = 1.

    ``moment`` may supply the integral in closed form; otherwise it is
    computed by adaptive quadrature at each requested radius.
    """
    n = _check_n(n)
    if abs(psi.a - 1.0) > 1e-12:
        raise ValueError("the inverse is normalized at r = 1; psi must start at 1")
    if moment is None:
        def moment(r):
            r = np.asarray(r, dtype=float)
            vals = [quad(lambda s: psi(s) * s ** (2 * n - 1), 1.0, x, epsabs=1e-14, epsrel=1e-13, limit=200)[0]
                    for x in np.atleast_1d(r)]
            return np.reshape(vals, r.shape)

    def value(r):
        return (1.0 + moment(r)) / r ** (2 * n)

    def d1(r):
        return (psi(r) - 2 * n * value(r)) / r

    def d2(r):
        return (psi(r, 1) - (2 * n + 1) * d1(r)) / r

    prof = RadialProfile(psi.a, psi.b, value, d1, d2, kind=psi.kind, name=name or f"phi[{psi.name}]")
    return PhiMetric(n, prof, name=prof.name)


def ricci_psi(psi: RadialProfile, r):
    """(Ric00 = Ric11, Ric22) = (psi'/(2r), psi/r^2)."""
    r = np.asarray(r, dtype=float)
    return psi(r, 1) / (2 * r), psi(r) / r**2


# ---------------------------------------------------------------------------
# named profiles


def phi_R(R: float, n: int) -> PhiMetric:
    """r^2/R^2 on [0, R]: Fubini-Study on CP^n_R."""
    return PhiMetric(n, power(1.0 / R**2, 2, 0.0, R, name="phi_R"), name=f"phi_R(R={R})")


def psi_R(R: float, n: int, a: float = 0.0, b: float | None = None) -> RadialProfile:
    return power(2.0 * (n + 1) / R**2, 2, a, R if b is None else b, name="psi_R")


def calabi_phi(n: int, b: float = 10.0) -> PhiMetric:
    """r^{-2n}: the Ricci-flat metric obtained from psi = 0."""
    return PhiMetric(n, power(1.0, -2 * n, 1.0, b, name="calabi"), name="calabi")


def flat_phi(n: int, a: float = 0.0, b: float = 10.0) -> PhiMetric:
    return PhiMetric(n, constant(0.0, a, b, name="flat"), name="flat")


def einstein_constant(R: float, n: int) -> float:
    return 2.0 * (n + 1) / R**2


@dataclass(frozen=True)
class EinsteinReport:
    constant: float
    deviation: float
    n_points: int

    def __post_init__(self):
        if self.deviation < 0:
            raise ValueError("deviation must be nonnegative")


def einstein_report(p: PhiMetric, lam: float, r) -> EinsteinReport:
    """sup |Ric - lam g| on a grid, in the orthonormal frame (closed form)."""
    r = np.asarray(r, dtype=float)
    F = (1 - p.phi(r), -p.phi(r, 1), -p.phi(r, 2))
    E = (np.ones_like(r), np.zeros_like(r), np.zeros_like(r))
    vals = np.stack(ricci_warped_r(p.n, F, E, r))
    return EinsteinReport(lam, float(np.max(np.abs(vals - lam))), int(r.size))


# ---------------------------------------------------------------------------
# coordinate charts for the finite-difference oracle


def sphere_coframes(n: int, y: np.ndarray):
    """Unit S^{2n-1} as a (x) a + H in coordinates y of length 2n - 1.

    n = 2: Hopf coordinates (psi, theta, phi) with a = (dpsi + cos theta dphi)/2
    and H = (dtheta^2 + sin^2 theta dphi^2)/4.
    n >= 3: (tau, x_1, y_1, ..., x_{n-1}, y_{n-1}) with w = x + i y in an
    affine chart of CP^{n-1}, a = dtau + Im(conj(w) . dw)/(1 + |w|^2) and H the
    Fubini-Study metric of holomorphic curvature 4.
    Returns (a, H) with shapes (..., 2n-1) and (..., 2n-1, 2n-1).
    """
    y = np.asarray(y, dtype=float)
    d = 2 * n - 1
    shape = y.shape[:-1]
    if n == 2:
        th = y[..., 1]
        a = np.zeros(shape + (3,))
        a[..., 0] = 0.5
        a[..., 2] = 0.5 * np.cos(th)
        H = np.zeros(shape + (3, 3))
        H[..., 1, 1] = 0.25
        H[..., 2, 2] = 0.25 * np.sin(th) ** 2
        return a, H
    x = y[..., 1::2]
    v = y[..., 2::2]
    rho = 1.0 + np.sum(x**2 + v**2, axis=-1)
    # real and imaginary parts of conj(w).dw as covectors on (x_1, y_1, ...)
    re = np.zeros(shape + (d - 1,))
    im = np.zeros(shape + (d - 1,))
    re[..., 0::2], re[..., 1::2] = x, v
    im[..., 0::2], im[..., 1::2] = -v, x
    a = np.zeros(shape + (d,))
    a[..., 0] = 1.0
    a[..., 1:] = im / rho[..., None]
    H = np.zeros(shape + (d, d))
    eye = np.eye(d - 1)
    H[..., 1:, 1:] = (eye * rho[..., None, None] - np.einsum("...i,...j->...ij", re, re)
                      - np.einsum("...i,...j->...ij", im, im)) / rho[..., None, None] ** 2
    return a, H


def cohomogeneity_chart(n: int, radial, lower, upper, name: str = "") -> MetricChart:
    """Chart for g_rr dx^2 + V(x)^2 a(x)a + W(x)^2 H on (x, sphere coords).

    ``radial(x)`` returns (g_rr, V, W) for the radial coordinate x.
    """
    n = _check_n(n)
    d = 2 * n

    def metric(X):
        X = np.asarray(X, dtype=float)
        grr, V, W = radial(X[..., 0])
        a, H = sphere_coframes(n, X[..., 1:])
        g = np.zeros(X.shape[:-1] + (d, d))
        g[..., 0, 0] = grr
        g[..., 1:, 1:] = (V**2)[..., None, None] * np.einsum("...i,...j->...ij", a, a) + (W**2)[..., None, None] * H
        return g

    return MetricChart(metric, np.asarray(lower, float), np.asarray(upper, float), name=name)


def sphere_box(n: int, x_lo: float, x_hi: float):
    """Coordinate box for cohomogeneity_chart with the radial range [x_lo, x_hi]."""
    if n == 2:
        lo = [x_lo, -np.inf, 0.0, -np.inf]
        hi = [x_hi, np.inf, np.pi, np.inf]
    else:
        lo = [x_lo] + [-np.inf] * (2 * n - 1)
        hi = [x_hi] + [np.inf] * (2 * n - 1)
    return lo, hi


def hf_chart(w: WarpedMetric, t_lo: float, t_hi: float) -> MetricChart:
    """dt^2 + h^2 a(x)a + f^2 H."""
    lo, hi = sphere_box(w.n, t_lo, t_hi)
    return cohomogeneity_chart(w.n, lambda t: (np.ones_like(t), w.h(t), w.f(t)), lo, hi, name="hf")


def phi_chart(p: PhiMetric, delta: RadialProfile | None = None, r_lo=None, r_hi=None) -> MetricChart:
    """dr^2/F + r^2 F a(x)a + r^2 E H in the r coordinate."""
    def radial(r):
        F = 1.0 - p.phi(r)
        E = 1.0 - delta(r) if delta is not None else np.ones_like(r)
        return 1.0 / F, r * np.sqrt(F), r * np.sqrt(E)

    lo, hi = sphere_box(p.n, p.a if r_lo is None else r_lo, p.b if r_hi is None else r_hi)
    return cohomogeneity_chart(p.n, radial, lo, hi, name=p.name or "phi")


def sphere_sample(n: int, rng: np.random.Generator, size: int) -> np.ndarray:
    """Sphere coordinates away from the chart's axes."""
    if n == 2:
        return np.column_stack([
            rng.uniform(0, 2 * np.pi, size),
            rng.uniform(0.3, np.pi - 0.3, size),
            rng.uniform(0, 2 * np.pi, size),
        ])
    return np.column_stack([rng.uniform(0, 2 * np.pi, size), rng.uniform(-1.0, 1.0, (size, 2 * n - 2))])


def expected_eigenvalues(n: int, ric0, ric1, ric2) -> np.ndarray:
    """Sorted eigenvalues of g^{-1} Ric given the frame values."""
    ric0, ric1, ric2 = np.broadcast_arrays(*(np.asarray(v, float) for v in (ric0, ric1, ric2)))
    vals = np.stack([ric0, ric1] + [ric2] * (2 * n - 2), axis=-1)
    return np.sort(vals, axis=-1)
