"""Resolution metric on the blow-up of CP^n_R / Z_n.

Pipeline: psi_n on [1, R] -> phi_n -> attach delta_nu -> certify Ricci
lower bounds -> smoothness at r = 1 -> rescale by 1/R^2 and check the size
estimate of the exceptional CP^{n-1}.

The extension of psi_n into [1, r1] (r1 = sqrt(R)) is built from its
derivative p = psi':

    p = floor + tail + A * K

* floor = 2 kappa' r / R^2 with kappa' = 1.25 kappa gives psi' > kappa/R^2 and
  psi >= kappa (r^2 - 1)/R^2 once the other terms are nonnegative;
* tail = (alpha + beta x) exp(-x), x = (r1 - r)/w, matches psi_R' and
  psi_R'' at r1, so psi is C^2 there;
* K is a normalized (1 - y^2)^3 bump; A fixes psi(r1) = psi_R(r1) and the
  bump centre is solved so that the integral constraint holds.

Integrating by parts, int_1^{r1} psi s^{2n-1} ds = int_1^{r1} p W with
W(r) = (r1^{2n} - r^{2n})/(2n), which makes the constraint linear in p.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import brentq

from .certificates import PositivityCertificate
from .profiles import PIECEWISE, RadialProfile, constant, smoothstep5
from .warped import PhiMetric, phi_from_psi, ricci_warped_r, smoothness_limits

KAPPA_BOOST = 1.25
BUMP_NORM = 35.0 / 32.0
# max |S'| and max |S''| of the quintic smoothstep on [0, 1]
SMOOTHSTEP_D1 = 1.875
SMOOTHSTEP_D2 = 10.0 / np.sqrt(3.0)
NU_CAP = 0.1
NU_SAFETY = 0.9
MAX_HALVINGS = 30


class InfeasibleError(ValueError):
    pass


@dataclass(frozen=True)
class PsiBuilderConfig:
    n: int = 3
    R: float = 9.0
    kappa: float = 1.0
    nodes: int = 48  # Gauss-Legendre nodes per piece
    tol: float = 1e-9  # relative tolerance of the integral constraint

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError("n must be an integer >= 2")
        if not self.R > 4:
            raise ValueError("R must exceed 4")
        if not self.kappa > 0:
            raise ValueError("kappa must be positive")
        if self.nodes < 8:
            raise ValueError("need at least 8 quadrature nodes")

    @property
    def r1(self) -> float:
        return float(np.sqrt(self.R))

    @property
    def eta(self) -> float:
        return self.r1 ** (2 * (self.n + 1)) / self.R**2 - 1.0


class EtaBounds(NamedTuple):
    lower: float
    upper: float
    eta: float
    feasible: bool


def admissible_eta_bounds(n: int, R: float, kappa: float) -> EtaBounds:
    """Both sides of the admissibility window for eta = r1^{2n+2}/R^2 - 1.

    The window is only claimed for R > 2, so smaller R is flagged infeasible
    even when the two numbers happen to bracket eta.
    """
    r1 = np.sqrt(R)
    psi_r1 = 2 * (n + 1) * r1**2 / R**2
    lower = kappa * r1 ** (2 * n) / R**2 * (r1**2 / (2 * n + 2) - 1 / (2 * n))
    upper = psi_r1 / (2 * n) * (r1 ** (2 * n) - 1)
    eta = r1 ** (2 * (n + 1)) / R**2 - 1
    return EtaBounds(float(lower), float(upper), float(eta), bool(R > 2 and lower < eta < upper))


# ---------------------------------------------------------------------------
# psi_n


def _kint(y):
    """Integral of the normalized bump from -1 to y."""
    y = np.clip(y, -1.0, 1.0)
    return BUMP_NORM * (y - y**3 + 0.6 * y**5 - y**7 / 7) + 0.5


@dataclass(frozen=True)
class PsiN:
    """Closed-form pieces of psi_n; see the module docstring."""

    n: int
    R: float
    kappa: float
    kp: float
    alpha: float
    beta: float
    w: float
    A: float
    c: float
    omega: float
    nodes: int = 48
    I: float = field(default=np.nan)

    @property
    def r1(self) -> float:
        return float(np.sqrt(self.R))

    def _x(self, r):
        return (self.r1 - r) / self.w

    def _inner(self, r):
        R, x = self.R, self._x(r)
        x1 = self._x(1.0)
        G = lambda x: (self.alpha + self.beta + self.beta * x) * np.exp(-x)
        return self.kp * (r**2 - 1) / R**2 + self.w * (G(x) - G(x1)) + self.A * _kint((r - self.c) / self.omega)

    def _inner_d1(self, r):
        x = self._x(r)
        y = np.clip((r - self.c) / self.omega, -1.0, 1.0)
        bump = BUMP_NORM * (1 - y**2) ** 3 / self.omega
        return 2 * self.kp * r / self.R**2 + (self.alpha + self.beta * x) * np.exp(-x) + self.A * bump

    def _inner_d2(self, r):
        x = self._x(r)
        y = np.clip((r - self.c) / self.omega, -1.0, 1.0)
        bump = -6 * BUMP_NORM * y * (1 - y**2) ** 2 / self.omega**2
        tail = -(self.beta - self.alpha - self.beta * x) * np.exp(-x) / self.w
        return 2 * self.kp / self.R**2 + tail + self.A * bump

    def value(self, r):
        r = np.asarray(r, dtype=float)
        outer = 2 * (self.n + 1) * r**2 / self.R**2
        return np.where(r < self.r1, self._inner(np.minimum(r, self.r1)), outer)

    def d1(self, r):
        r = np.asarray(r, dtype=float)
        outer = 4 * (self.n + 1) * r / self.R**2
        return np.where(r < self.r1, self._inner_d1(np.minimum(r, self.r1)), outer)

    def d2(self, r):
        r = np.asarray(r, dtype=float)
        outer = np.full_like(r, 4 * (self.n + 1) / self.R**2)
        return np.where(r < self.r1, self._inner_d2(np.minimum(r, self.r1)), outer)

    # cumulative moment int_1^r psi s^{2n-1} ds, piecewise Gauss-Legendre
    def _edges(self):
        return np.array([1.0, self.c - self.omega, self.c + self.omega, self.r1])

    def _gl(self, lo, hi):
        x, wts = np.polynomial.legendre.leggauss(self.nodes)
        lo, hi = np.broadcast_arrays(np.asarray(lo, float), np.asarray(hi, float))
        s = lo[..., None] + (hi - lo)[..., None] * (x + 1) / 2
        vals = self._inner(s) * s ** (2 * self.n - 1)
        return np.sum(vals * wts, axis=-1) * (hi - lo) / 2

    def _cumulative_edges(self):
        e = self._edges()
        return np.concatenate([[0.0], np.cumsum(self._gl(e[:-1], e[1:]))])

    def moment(self, r):
        r = np.asarray(r, dtype=float)
        e = self._edges()
        cum = self._cumulative_edges()
        rr = np.clip(r, 1.0, self.r1)
        k = np.clip(np.searchsorted(e, rr, side="right") - 1, 0, 2)
        inner = cum[k] + self._gl(e[k], rr)
        n, R = self.n, self.R
        outer = cum[-1] + 2 * (n + 1) / R**2 * (r ** (2 * n + 2) - self.r1 ** (2 * n + 2)) / (2 * n + 2)
        return np.where(r <= self.r1, inner, outer)

    def profile(self) -> RadialProfile:
        return RadialProfile(1.0, self.R, self.value, self.d1, self.d2, kind=PIECEWISE, name=f"psi_{self.n}")

    def params(self) -> dict:
        return {k: float(getattr(self, k)) for k in ("kappa", "kp", "alpha", "beta", "w", "A", "c", "omega", "I")}


def _psi_pieces(cfg: PsiBuilderConfig) -> PsiN:
    n, R, kappa = cfg.n, cfg.R, cfg.kappa
    r1, eta = cfg.r1, cfg.eta
    kp = KAPPA_BOOST * kappa
    slope = (4 * (n + 1) - 2 * kp) / R**2
    if slope <= 0:
        raise InfeasibleError(f"kappa = {kappa} too large: psi_R'' cannot be matched from below")
    alpha = slope * r1
    w = 0.25 * (r1 - 1)
    beta = alpha - w * slope
    M = 2 * (n + 1) * r1**2 / R**2

    base = PsiN(n, R, kappa, kp, alpha, beta, w, A=0.0, c=0.5 * (1 + r1), omega=0.25 * (r1 - 1), nodes=cfg.nodes)
    A = M - float(base._inner(r1))
    if A <= 0:
        raise InfeasibleError("floor and tail already exceed psi_R(r1); lower kappa")

    # moment of the floor + tail part, and of the unit bump, against W
    W = lambda r: (r1 ** (2 * n) - r ** (2 * n)) / (2 * n)
    xg, wg = np.polynomial.legendre.leggauss(cfg.nodes)

    def integrate(fn, lo, hi, panels=1):
        edges = np.linspace(lo, hi, panels + 1)
        total = 0.0
        for a, b in zip(edges[:-1], edges[1:]):
            s = a + (b - a) * (xg + 1) / 2
            total += np.sum(fn(s) * wg) * (b - a) / 2
        return total

    eta_ft = integrate(lambda r: (2 * kp * r / R**2 + (alpha + beta * (r1 - r) / w) * np.exp(-(r1 - r) / w)) * W(r),
                       1.0, r1, panels=16)
    target = (eta - eta_ft) / A

    def bump_moment(c, om):
        return integrate(lambda r: BUMP_NORM * (1 - ((r - c) / om) ** 2) ** 3 / om * W(r), c - om, c + om)

    om = 0.25 * (r1 - 1)
    for _ in range(40):
        lo, hi = 1 + om, r1 - om
        if bump_moment(lo, om) > target > bump_moment(hi, om):
            break
        om *= 0.5
    else:
        raise InfeasibleError("integral constraint cannot be met by the bump family")
    c = brentq(lambda c: bump_moment(c, om) - target, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=200)
    psi = PsiN(n, R, kappa, kp, alpha, beta, w, A, c, om, cfg.nodes)
    I = float(psi.moment(r1))
    return PsiN(n, R, kappa, kp, alpha, beta, w, A, c, om, cfg.nodes, I)


@dataclass
class PsiBuild:
    cfg: PsiBuilderConfig
    pieces: PsiN
    profile: RadialProfile
    checks: dict

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks.values())


def verify_psi_constraints(psi: RadialProfile, cfg: PsiBuilderConfig, moment=None, num: int = 10_000) -> dict:
    """Post-hoc check of the five constraints on a dense grid."""
    n, R, kappa, r1, eta = cfg.n, cfg.R, cfg.kappa, cfg.r1, cfg.eta
    r = np.linspace(1.0, R, num)
    inner = np.linspace(1.0, r1, num)
    outer = np.linspace(r1, R, num)
    if moment is None:
        from scipy.integrate import quad
        I = quad(lambda s: psi(s) * s ** (2 * n - 1), 1.0, r1, epsabs=0, epsrel=1e-13, limit=400)[0]
    else:
        I = float(moment(r1))
    left = r1 * (1 - 1e-13)
    psiR = (2 * (n + 1) * r1**2 / R**2, 4 * (n + 1) * r1 / R**2, 4 * (n + 1) / R**2)
    jump = max(abs(psi(left, k) - psiR[k]) for k in range(3))
    tail_dev = float(np.max(np.abs(psi(outer) - 2 * (n + 1) * outer**2 / R**2)))
    slope_margin = float(np.min(psi(r, 1)) - kappa / R**2)
    floor_margin = float(np.min(psi(inner) - kappa * (inner**2 - 1) / R**2))
    return {
        "i_slope": {"value": slope_margin, "pass": slope_margin > 0},
        "ii_floor": {"value": floor_margin, "pass": floor_margin >= -1e-14},
        "iii_origin": {"value": float(psi(1.0)), "pass": abs(psi(1.0)) <= 1e-12},
        "iv_integral": {"value": I - eta, "pass": abs(I - eta) <= cfg.tol * max(1.0, abs(eta))},
        "v_match": {"value": max(jump, tail_dev), "pass": max(jump, tail_dev) <= 1e-10},
    }


def build_psi_n(cfg: PsiBuilderConfig) -> PsiBuild:
    bounds = admissible_eta_bounds(cfg.n, cfg.R, cfg.kappa)
    if not bounds.feasible:
        raise InfeasibleError(f"eta = {bounds.eta} outside ({bounds.lower}, {bounds.upper})")
    pieces = _psi_pieces(cfg)
    prof = pieces.profile()
    checks = verify_psi_constraints(prof, cfg, moment=pieces.moment)
    if not checks["iv_integral"]["pass"]:
        raise InfeasibleError(f"integral constraint missed by {checks['iv_integral']['value']}")
    return PsiBuild(cfg, pieces, prof, checks)


def build_phi_n(psi, n: int) -> PhiMetric:
    """phi_n = (1 + int_1^r psi s^{2n-1})/r^{2n}.

    Accepts a PsiBuild (uses its exact tail) or any RadialProfile starting at 1.
    """
    if isinstance(psi, PsiBuild):
        pieces = psi.pieces
        R, r1 = pieces.R, pieces.r1
        gap = 1.0 + pieces.I - r1 ** (2 * n + 2) / R**2  # (I - eta) up to rounding

        def moment(r):
            r = np.asarray(r, dtype=float)
            return pieces.moment(r)

        base = phi_from_psi(psi.profile, n, moment=moment, name=f"phi_{n}")
        prof = base.phi

        def value(r):
            r = np.asarray(r, dtype=float)
            tail = r**2 / R**2 + gap / r ** (2 * n)
            return np.where(r >= r1, tail, prof.value(r))

        out = RadialProfile(1.0, R, value, lambda r: (psi.profile(r) - 2 * n * value(r)) / r,
                            None, kind=PIECEWISE, name=f"phi_{n}")
        d1 = out.d1
        out = RadialProfile(1.0, R, value, d1, lambda r: (psi.profile(r, 1) - (2 * n + 1) * d1(r)) / r,
                            kind=PIECEWISE, name=f"phi_{n}")
        return PhiMetric(n, out, name=f"phi_{n}")
    return phi_from_psi(psi, n)


def phi_checks(phi: PhiMetric, R: float, num: int = 4001) -> dict:
    n = phi.n
    r1 = np.sqrt(R)
    outer = np.linspace(r1, R, num)
    tail = float(np.max(np.abs(phi.phi(outer) - outer**2 / R**2)))
    return {
        "phi_at_1": float(phi.phi(1.0)),
        "dphi_at_1": float(phi.phi(1.0, 1)),
        "tail_dev": tail,
        "pass": abs(phi.phi(1.0) - 1) <= 1e-8 and abs(phi.phi(1.0, 1) + 2 * n) <= 1e-8 and tail <= 1e-9,
    }


# ---------------------------------------------------------------------------
# delta_nu and the glued metric


def delta_amplitude(nu: float, R: float) -> float:
    """delta(1) such that value, slope and curvature of delta are all <= nu."""
    r1 = np.sqrt(R)
    L = r1 - 2
    return nu / max(1.0, SMOOTHSTEP_D1 / L, SMOOTHSTEP_D2 / L**2)


def build_delta_nu(nu: float, R: float, c: float | None = None) -> RadialProfile:
    """Constant on [1, 2], quintic smoothstep down to 0 on [2, r1], zero beyond."""
    if not R > 4:
        raise ValueError("R must exceed 4 so that [2, r1] is nonempty")
    if nu < 0:
        raise ValueError("nu must be nonnegative")
    if c is not None and nu > 2 * c / (1 + c) + 1e-15:
        raise ValueError("nu exceeds 2c/(1+c)")
    if nu == 0:
        return constant(0.0, 1.0, R, name="delta_0")
    r1 = np.sqrt(R)
    L = r1 - 2
    d1 = delta_amplitude(nu, R)

    def jet(r):
        s, s1, s2 = smoothstep5((np.asarray(r, float) - 2) / L)
        return d1 * (1 - s), -d1 * s1 / L, -d1 * s2 / L**2

    return RadialProfile(1.0, R, lambda r: jet(r)[0], lambda r: jet(r)[1], lambda r: jet(r)[2],
                         kind=PIECEWISE, name=f"delta_nu({nu:g})")


def default_nu(c: float) -> float:
    return NU_SAFETY * min(2 * c / (1 + c), NU_CAP)


@dataclass(frozen=True)
class GluedMetric:
    n: int
    R: float
    kappa: float
    phi: PhiMetric
    delta: RadialProfile
    nu: float
    c: float

    @property
    def delta1(self) -> float:
        return float(self.delta(1.0))

    @property
    def r1(self) -> float:
        return float(np.sqrt(self.R))


def min_phi(phi: PhiMetric, num: int = 20001) -> float:
    r = np.linspace(phi.a, phi.b, num)
    return float(np.min(phi.phi(r)))


def glue(phi: PhiMetric, R: float, kappa: float = 1.0, nu: float | None = None) -> GluedMetric:
    c = min_phi(phi)
    if nu is None:
        nu = default_nu(c)
    return GluedMetric(phi.n, R, kappa, phi, build_delta_nu(nu, R, c), nu, c)


def _ricci_glued(g: GluedMetric, r):
    r = np.asarray(r, dtype=float)
    v, d1, d2 = g.phi.phi.jet(r)
    e0, e1, e2 = g.delta.jet(r)
    return ricci_warped_r(g.n, (1 - v, -d1, -d2), (1 - e0, -e1, -e2), r)


def ricci_glued(g: GluedMetric, r):
    """(Ric00, Ric11, Ric22) of dr^2/(1-phi) + r^2(1-phi) ds_v^2 + r^2(1-delta) ds_h^2."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 1) or np.any(r >= g.R):
        raise ValueError("r must lie in (1, R); use smoothness_limits at r = 1")
    return _ricci_glued(g, r)


def ricci_x2_core(g: GluedMetric, r):
    """Horizontal Ricci on [1, 2] where delta is constant, in closed form."""
    r = np.asarray(r, dtype=float)
    n, d = g.n, g.delta1
    phi = g.phi.phi(r)
    psi = r * g.phi.phi(r, 1) + 2 * n * phi
    return psi / r**2 + 2 * d / ((1 - d) * r**2) * (n - (2 - d) / (1 - d) * (1 - phi))


def core_sigma_cap(n: int, delta1: float) -> float:
    """Ricci floor the constant-delta core contributes; sigma may not exceed it."""
    return 2 * delta1 / (1 - delta1) * (n - 2) / 4


def certify_bounds(g: GluedMetric, num: int = 4001) -> PositivityCertificate:
    """Scan the three Ricci families on [1, R] and evaluate the positivity bounds.

    Bounds: core (X2 on [1, 2] above the core cap), outer (R^2 X2 >= 2 kappa on
    [2, R]), warp (R^2 X0, R^2 X1 >= kappa / 2), sigma (positive and below the
    scan minimum) and sigma_cap (sigma at most the core cap).
    sigma is the R^2-normalized minimum of all families.  For n >= 3 it is
    capped by the core cap, which is what makes the size estimate hold.  For
    n = 2 the (n - 2) bounds are vacuous and reported as not applicable.
    """
    n, R, kappa = g.n, g.R, g.kappa
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    r = np.linspace(1.0, R, num)
    r = np.union1d(r, [2.0, g.r1])
    ric = np.stack(_ricci_glued(g, r))
    names = ("X0", "X1", "X2")
    minima = {k: float(v.min()) for k, v in zip(names, ric)}
    flat = ric.min(axis=0)
    i = int(np.argmin(flat))
    fam = names[int(np.argmin(ric[:, i]))]
    sigma_scan = float(R**2 * flat[i])
    core, outer = r <= 2.0, r >= 2.0
    cap = core_sigma_cap(n, g.delta1)
    checks: dict = {}
    values: dict = {}
    if n >= 3:
        values["core"] = float(ric[2, core].min())
        checks["core"] = bool(values["core"] >= cap > 0)
    else:
        checks["core"] = None
    values["outer"] = float(ric[2, outer].min() * R**2)
    checks["outer"] = bool(values["outer"] >= 2 * kappa)
    values["warp"] = float(min(ric[0].min(), ric[1].min()) * R**2)
    checks["warp"] = bool(values["warp"] >= kappa / 2)
    sigma = min(sigma_scan, cap) if n >= 3 else sigma_scan
    checks["sigma"] = bool(sigma_scan >= sigma and sigma > 0)
    checks["sigma_cap"] = bool(cap >= sigma) if n >= 3 else None
    return PositivityCertificate(
        label=f"theorem2 n={n} R={R:g}",
        params={"n": n, "R": R, "kappa": kappa, "nu": g.nu, "delta1": g.delta1, "cR": g.c},
        minima=minima,
        sigma=float(sigma),
        checks=checks,
        witness={"r": float(r[i]), "family": fam, "value": float(flat[i])},
        grid={"r_min": 1.0, "r_max": float(R), "n_points": int(r.size)},
        extra={"sigma_scan": sigma_scan, "core_sigma_cap": cap, "bound_values": values},
    )


class SizeEstimate(NamedTuple):
    eps: float
    D_bound: float
    D_measured: float
    holds: bool


def rescale_and_size(g: GluedMetric, sigma: float, rtol: float = 1e-12) -> SizeEstimate:
    """Scale by 1/R^2: eps = 1/sqrt(R), D = f(1)/R, bound eps^2 sqrt((n-2)/(n-2+2 sigma))."""
    n = g.n
    if n == 2:
        raise ValueError("size bound is degenerate for n = 2")
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    eps = 1 / np.sqrt(g.R)
    D = np.sqrt(1 - g.delta1) / g.R
    bound = eps**2 * np.sqrt((n - 2) / (n - 2 + 2 * sigma))
    return SizeEstimate(float(eps), float(bound), float(D), bool(D <= bound * (1 + rtol)))


# ---------------------------------------------------------------------------
# full pipeline


@dataclass
class Theorem2Result:
    psi: PsiBuild
    phi: PhiMetric
    glued: GluedMetric
    certificate: PositivityCertificate
    phi_checks: dict
    smoothness: tuple
    size: SizeEstimate | None

    @property
    def passed(self) -> bool:
        n = self.glued.n
        smooth_ok = abs(self.smoothness[0]) <= 1e-6 and abs(self.smoothness[1] - n) <= 1e-6
        size_ok = self.size is None or self.size.holds
        return bool(self.psi.passed and self.phi_checks["pass"] and self.certificate.passed and smooth_ok and size_ok)

    def summary(self) -> dict:
        d = {
            "psi_checks": self.psi.checks,
            "psi_params": self.psi.pieces.params(),
            "phi_checks": self.phi_checks,
            "smoothness": list(self.smoothness),
            "certificate": self.certificate.to_dict(),
            "size": None if self.size is None else self.size._asdict(),
            "pass": self.passed,
        }
        return d


def run_theorem2(n: int = 3, R: float = 9.0, kappa: float = 1.0, nu: float | None = None,
                 num: int = 4001) -> Theorem2Result:
    cfg = PsiBuilderConfig(n=n, R=R, kappa=kappa)
    psi = build_psi_n(cfg)
    phi = build_phi_n(psi, n)
    if nu is None:
        # the bounds only hold for nu small enough relative to 1/R^2, so the
        # default policy halves nu until the scan certifies
        nu0 = default_nu(min_phi(phi))
        for halvings in range(MAX_HALVINGS + 1):
            glued = glue(phi, R, kappa, nu0 / 2**halvings)
            cert = certify_bounds(glued, num)
            if cert.passed:
                break
        cert.extra["nu_policy"] = {"nu0": nu0, "halvings": halvings}
    else:
        glued = glue(phi, R, kappa, nu)
        cert = certify_bounds(glued, num)
    size = None
    if n >= 3 and cert.sigma > 0:
        size = rescale_and_size(glued, cert.sigma)
    return Theorem2Result(psi, phi, glued, cert, phi_checks(phi, R), smoothness_limits(phi), size)
