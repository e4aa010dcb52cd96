"""Resolving the Z_2 point of S and scanning the quotient Ricci of the result.

Near the fixed set t2 = t3 = 0 the triple-sphere metric is

    (factor 1 in t1) + dphi2^2 + dphi3^2 + (S in t2, psi2, t3, psi3)

with S the product of two unit caps.  S is rewritten in (t, theta, psi, phi)
with t2 = t cos(theta/2), t3 = t sin(theta/2), psi2 = (psi + phi)/2,
psi3 = (psi - phi)/2.  The resolved block S' is

    t >= rho1          : S itself
    rho2 <= t <= rho1  : the interpolation (1 - s) S + s CP^2_R
    t <= rho2          : the n = 2 construction at scale R_T, shrunk by
                         lambda = R / R_T, in its own radial coordinate r

All three pieces are of the form base(x, theta) + angle block(psi, phi) with
no cross terms, so the submersion engine applies unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..certificates import PositivityCertificate
from ..construction import Theorem2Result, run_theorem2
from ..profiles import smoothstep5
from ..toric import example3_action
from .fprofile import HALF_PI, FProfile, build_f_profile
from .gao import R_CP_DEFAULT, gao_ricci_scan, jet_match_check, cap_metric, cp_ball_metric
from .oneill import NonFreeError, OneillScan, sample_from_forms, submersion_forms

COORDS = ("t1", "x", "theta", "phi1", "psi1", "phi2", "phi3", "psi", "phi")
BLOCK = (1, 2, 7, 8)  # x, theta, psi, phi
S_BASE = (1, 2)
THETA_MARGIN = 0.05
FD_STEP = 1e-4
POLE_OFFSETS = (1e-3, 1e-4)


def _angle_change() -> np.ndarray:
    """Rows: old angles (phi1, psi1, phi2, psi2, phi3, psi3); columns: new angles."""
    M = np.zeros((6, 6))
    M[0, 0] = M[1, 1] = M[2, 2] = M[4, 3] = 1.0
    M[3, 4], M[3, 5] = 1.0, 1.0  # d/dpsi2 = d/dpsi + d/dphi
    M[5, 4], M[5, 5] = 1.0, -1.0  # d/dpsi3 = d/dpsi - d/dphi
    return M


def resolved_killing_rows() -> np.ndarray:
    K = np.array(example3_action().columns(), dtype=float) @ _angle_change()
    out = np.zeros((3, 9))
    out[:, 3:] = K
    return out


# -- S' pieces ------------------------------------------------------------------


def _hopf_block(Q, P, theta):
    """(psi, phi) block of Q/4 (dpsi + cos theta dphi)^2 + P/4 sin^2 theta dphi^2."""
    c, s = np.cos(theta), np.sin(theta)
    return 0.25 * np.array([[Q, Q * c], [Q * c, Q * c * c + P * s * s]])


@dataclass
class CoreBlock:
    """lambda^2 (dr^2/F + r^2 F ds_v^2 + r^2 E ds_h^2) in (r, theta, psi, phi)."""

    res: Theorem2Result
    lam: float

    @property
    def r_lo(self) -> float:
        return 1.0

    def _FE(self, r):
        g = self.res.glued
        v, d1, d2 = g.phi.phi.jet(r)
        e, e1, e2 = g.delta.jet(r)
        return (1 - v, -d1, -d2), (1 - e, -e1, -e2)

    def jets(self, r: float, theta: float):
        """(g, dg, ddg) of the 4x4 block; derivative slots are (r, theta)."""
        (F, F1, F2), (E, E1, E2) = self._FE(r)
        if F <= 0:
            raise NonFreeError("r = 1 is the exceptional sphere; use r > 1")
        L2 = self.lam**2
        Q, Q1, Q2 = r * r * F, 2 * r * F + r * r * F1, 2 * F + 4 * r * F1 + r * r * F2
        P, P1, P2 = r * r * E, 2 * r * E + r * r * E1, 2 * E + 4 * r * E1 + r * r * E2
        # each entry is a sum of A(r) B(theta); keep jets of both factors
        c, s = np.cos(theta), np.sin(theta)
        cos_j = (c, -s, -c)
        cos2_j = (c * c, -2 * s * c, -2 * (c * c - s * s))
        sin2_j = (s * s, 2 * s * c, 2 * (c * c - s * s))
        one = (1.0, 0.0, 0.0)
        Fi = (1 / F, -F1 / F**2, 2 * F1**2 / F**3 - F2 / F**2)
        Qj, Pj = (Q, Q1, Q2), (P, P1, P2)
        terms = {
            (0, 0): [(Fi, one, 1.0)],
            (1, 1): [(Pj, one, 0.25)],
            (2, 2): [(Qj, one, 0.25)],
            (2, 3): [(Qj, cos_j, 0.25)],
            (3, 3): [(Qj, cos2_j, 0.25), (Pj, sin2_j, 0.25)],
        }
        g = np.zeros((4, 4))
        dg = np.zeros((2, 4, 4))
        ddg = np.zeros((2, 2, 4, 4))
        for (i, j), parts in terms.items():
            vals = np.zeros(6)
            for A, B, w in parts:
                vals += w * L2 * np.array([A[0] * B[0], A[1] * B[0], A[0] * B[1],
                                           A[2] * B[0], A[1] * B[1], A[0] * B[2]])
            for (a, b) in {(i, j), (j, i)}:
                g[a, b] = vals[0]
                dg[0, a, b], dg[1, a, b] = vals[1], vals[2]
                ddg[0, 0, a, b], ddg[0, 1, a, b], ddg[1, 0, a, b], ddg[1, 1, a, b] = vals[3], vals[4], vals[4], vals[5]
        return g, dg, ddg


@dataclass
class AnnulusBlock:
    """(1 - s) S + s CP^2_R in (t, theta, psi, phi); jets by central differences."""

    rho1: float
    rho2: float
    R: float = R_CP_DEFAULT
    h: float = FD_STEP

    def s(self, t):
        return 1.0 - smoothstep5((np.asarray(t, dtype=float) - self.rho2) / (self.rho1 - self.rho2))[0]

    def metric(self, t, theta) -> np.ndarray:
        # S: dt^2 + t^2 dtheta^2/4 + sin^2(t2) dpsi2^2 + sin^2(t3) dpsi3^2
        A2 = np.sin(t * np.cos(theta / 2)) ** 2
        A3 = np.sin(t * np.sin(theta / 2)) ** 2
        g0 = np.zeros((4, 4))
        g0[0, 0], g0[1, 1] = 1.0, t * t / 4
        g0[2:, 2:] = 0.25 * np.array([[A2 + A3, A2 - A3], [A2 - A3, A2 + A3]])
        f = self.R * np.sin(t / self.R)
        hh = f * np.cos(t / self.R)
        g1 = np.zeros((4, 4))
        g1[0, 0], g1[1, 1] = 1.0, f * f / 4
        g1[2:, 2:] = _hopf_block(hh * hh, f * f, theta)
        s = float(self.s(t))
        return (1 - s) * g0 + s * g1

    def jets(self, t: float, theta: float):
        h = self.h
        x0 = np.array([t, theta])

        def G(dx):
            return self.metric(*(x0 + dx))

        e = np.eye(2) * h
        g = G(np.zeros(2))
        dg = np.zeros((2, 4, 4))
        ddg = np.zeros((2, 2, 4, 4))
        for a in range(2):
            dg[a] = (8 * (G(e[a]) - G(-e[a])) - (G(2 * e[a]) - G(-2 * e[a]))) / (12 * h)
            ddg[a, a] = (-(G(2 * e[a]) + G(-2 * e[a])) + 16 * (G(e[a]) + G(-e[a])) - 30 * g) / (12 * h * h)
        mixed = (G(e[0] + e[1]) - G(e[0] - e[1]) - G(-e[0] + e[1]) + G(-e[0] - e[1])) / (4 * h * h)
        ddg[0, 1] = ddg[1, 0] = mixed
        return g, dg, ddg


# -- the resolved 9-dimensional metric ---------------------------------------------


@dataclass
class ResolvedMetric:
    """Factor 1, the flat (phi2, phi3) torus and an S' block."""

    fprof: FProfile
    block: object

    def jets(self, x):
        x = np.asarray(x, dtype=float)
        t1, bx, th = x[0], x[1], x[2]
        g = np.zeros((9, 9))
        dg = np.zeros((9, 9, 9))
        ddg = np.zeros((9, 9, 9, 9))
        g[0, 0] = 1.0
        c, s = np.cos(t1), np.sin(t1)
        g[3, 3], dg[0, 3, 3], ddg[0, 0, 3, 3] = c * c, -2 * s * c, -2 * (c * c - s * s)
        fv, f1, f2 = self.fprof.jet(HALF_PI - t1)
        b, b1, b2 = fv, -f1, f2
        g[4, 4], dg[0, 4, 4], ddg[0, 0, 4, 4] = b * b, 2 * b * b1, 2 * (b1 * b1 + b * b2)
        g[5, 5] = g[6, 6] = 1.0
        gb, dgb, ddgb = self.block.jets(bx, th)
        idx = np.array(BLOCK)
        g[np.ix_(idx, idx)] = gb
        for a, A in enumerate(S_BASE):
            dg[A][np.ix_(idx, idx)] = dgb[a]
            for c_, C in enumerate(S_BASE):
                ddg[A, C][np.ix_(idx, idx)] = ddgb[a, c_]
        return g, dg, ddg

    def killing_rows(self) -> np.ndarray:
        return resolved_killing_rows()

    def check_free(self, x) -> None:
        x = np.asarray(x, dtype=float)
        if not (0 < x[0] < HALF_PI) or not (0 < x[2] < np.pi):
            raise NonFreeError("point on a collapsed stratum")


def dn_block(forms, X, block=S_BASE) -> float:
    """(D_X N_B, X), N_B the part of N along the base coordinates in ``block``.

    N = -g^{-1} dPhi; for each k in the block,
    (D_X (n^k d_k), X) = X(n^k) (gX)_k + n^k d_k g(X, X) / 2.
    """
    X = np.asarray(X, dtype=float)
    g, dg = forms.g, forms.dg
    gi = np.linalg.inv(g)
    n = -gi @ forms.dphi
    gX = g @ X
    out = 0.0
    for k in block:
        # d_a n^k = (g^-1 d_a g g^-1 dPhi)^k - (g^-1 d_a dPhi)^k
        dn_k = np.array([(gi @ dg[a] @ gi @ forms.dphi)[k] - (gi @ forms.ddphi[a])[k] for a in range(g.shape[0])])
        out += (X @ dn_k) * gX[k] + 0.5 * n[k] * (X @ dg[k] @ X)
    return float(out)


# -- the pipeline ----------------------------------------------------------------------


@dataclass
class BlowupSetup:
    eps: float
    R_cp: float
    rho1: float
    rho2: float
    R_T: float
    lam: float
    r_max: float
    theorem2: Theorem2Result
    fprof: FProfile
    core: CoreBlock = field(init=False)
    annulus: AnnulusBlock = field(init=False)

    def __post_init__(self):
        self.core = CoreBlock(self.theorem2, self.lam)
        self.annulus = AnnulusBlock(self.rho1, self.rho2, self.R_cp)

    def t_of_r(self, r):
        return self.R_cp * np.arcsin(np.asarray(r, dtype=float) / self.R_T)


def blowup_setup(eps: float = 0.1, R_cp: float = R_CP_DEFAULT, nu: float | None = None) -> BlowupSetup:
    if not 0 < eps <= 0.1:
        raise ValueError("the blow-up pipeline needs 0 < eps <= 0.1")
    rho2, rho1 = eps / 4, eps / 2
    R_T = (2 * R_cp / rho2) ** 2
    lam = R_cp / R_T
    # r1 = sqrt(R_T) must sit inside the FS ball of radius rho2
    r_max = R_T * np.sin(rho2 / R_cp)
    res = run_theorem2(2, R_T, nu=nu)
    return BlowupSetup(eps, R_cp, rho1, rho2, R_T, lam, float(r_max), res, build_f_profile(eps))


def _sample_block_point(S: BlowupSetup, rng) -> tuple[object, float]:
    """Half the samples in the core (log-uniform in r - 1), half in the annulus."""
    h = S.annulus.h
    if rng.uniform() < 0.5:
        u = rng.uniform(np.log(1e-3), np.log(S.r_max - 1))
        return S.core, 1.0 + float(np.exp(u))
    while True:
        t = rng.uniform(S.rho2, S.rho1)
        if min(abs(t - S.rho2), abs(t - S.rho1)) > 3 * h:
            return S.annulus, float(t)


def resolved_scan(S: BlowupSetup, n: int = 1000, seed: int = 0, margin: float = 0.05) -> OneillScan:
    rng = np.random.default_rng(seed)
    K = resolved_killing_rows()
    samples = []
    for _ in range(n):
        block, x = _sample_block_point(S, rng)
        t1 = rng.uniform(margin, HALF_PI - margin)
        th = rng.uniform(THETA_MARGIN, np.pi - THETA_MARGIN)
        ang = rng.uniform(0, 2 * np.pi, 6)
        pt = np.r_[t1, x, th, ang]
        m = ResolvedMetric(S.fprof, block)
        m.check_free(pt)
        forms = submersion_forms(*m.jets(pt), K)
        c = rng.standard_normal(forms.horizontal.shape[1])
        X = forms.horizontal @ (c / np.linalg.norm(c))
        samples.append(sample_from_forms(forms, pt, X))
    return OneillScan(samples)


def _scaled_horizontal(forms, y) -> np.ndarray:
    """Unit horizontal projection of sum_i y_i e_i / |e_i| (fixed direction across points)."""
    g = forms.g
    Y = y / np.sqrt(np.diag(g))
    K = forms.frame
    X = Y - K.T @ (K @ g @ Y)
    return X / np.sqrt(X @ g @ X)


def pole_dn_samples(S: BlowupSetup, n: int = 32, seed: int = 0, offsets=POLE_OFFSETS, margin: float = 0.05):
    """(D_X N_2, X) on the exceptional sphere t = 0 for unit horizontal X.

    The r-chart is singular at r = 1 and the value varies like sqrt(r - 1)
    (i.e. linearly in arclength), so the limit is extrapolated from
    r - 1 = offsets[0] and offsets[1] along a fixed normalized direction.
    """
    rng = np.random.default_rng(seed)
    K = resolved_killing_rows()
    m = ResolvedMetric(S.fprof, S.core)
    d1, d2 = offsets
    q = np.sqrt(d1 / d2)
    vals = []
    for _ in range(n):
        t1 = rng.uniform(margin, HALF_PI - margin)
        th = rng.uniform(THETA_MARGIN, np.pi - THETA_MARGIN)
        y = rng.standard_normal(9)
        v = []
        for d in (d1, d2):
            pt = np.r_[t1, 1.0 + d, th, np.zeros(6)]
            forms = submersion_forms(*m.jets(pt), K)
            v.append(dn_block(forms, _scaled_horizontal(forms, y)))
        vals.append((q * v[1] - v[0]) / (q - 1))
    return np.array(vals)


def blowup_pipeline(eps: float = 0.1, n_samples: int = 1000, seed: int = 0, R_cp: float = R_CP_DEFAULT,
                    n_pole: int = 32) -> PositivityCertificate:
    """Certificate for the resolved region.

    (a) min quotient Ricci over the seeded samples is positive;
    (b) max |(D_X N_2, X)| at the exceptional sphere is at most kappa/2, with
        kappa the smallest R(X, X) seen in the scan.
    Sub-certificates (interpolation scan, n = 2 construction) must pass too.
    """
    S = blowup_setup(eps, R_cp)
    gao_scan = gao_ricci_scan(eps, R_cp)
    jets = jet_match_check(cap_metric, cp_ball_metric(R_cp))
    scan = resolved_scan(S, n_samples, seed)
    dn_pole = pole_dn_samples(S, n_pole, seed)
    kappa = float(scan.column("ricci").min())
    dn_max = float(np.max(np.abs(dn_pole)))
    tot = scan.column("total")
    i = int(np.argmin(tot))
    checks = {
        "gao_jets": jets.passed,
        "gao_ricci_positive": gao_scan.positive,
        "theorem2_n2": S.theorem2.certificate.passed,
        "a_quotient_positive": bool(tot.min() > 0),
        "sum_identity": bool(scan.max_sum_defect <= 1e-9),
        "b_pole_dn_bound": bool(dn_max <= kappa / 2),
    }
    return PositivityCertificate(
        label=f"blowup eps={eps:g}",
        params={"eps": eps, "R_cp": R_cp, "rho1": S.rho1, "rho2": S.rho2, "R_T": S.R_T, "lambda": S.lam,
                "n_samples": n_samples, "seed": seed},
        minima={"total": float(tot.min()), "ricci": kappa, "gao": gao_scan.min_value,
                "theorem2_sigma": S.theorem2.certificate.sigma},
        sigma=float(tot.min()),
        checks=checks,
        witness={"point": scan.samples[i].point, "X": scan.samples[i].X},
        grid={"n_samples": n_samples, "n_pole": n_pole, "pole_offsets": list(POLE_OFFSETS)},
        extra={"kappa_measured": kappa, "pole_dn_max_abs": dn_max, "pole_dn_min": float(dn_pole.min()),
               "max_gauss_defect": scan.max_gauss_defect, "max_sum_defect": scan.max_sum_defect},
    )
