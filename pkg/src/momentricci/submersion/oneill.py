"""Quotient Ricci curvature of a torus action with constant Killing fields.

The metric is given through its exact 2-jet (g, dg, ddg) at a point, with
dg[c, a, b] = d_c g_ab and ddg[c, e, a, b] = d_c d_e g_ab; the Killing fields
are constant coefficient rows (angles only, so the metric does not depend on
those coordinates).  For horizontal X the quotient Ricci is

    Ric~(X, X) = Ric(X, X) + 2 (A_X, A_X) + (T X, T X) - (D_X N, X)

with N the mean curvature of the orbits.  N = -grad Phi, Phi the log of the
orbit volume density, so (D_X N, X) = -Hess Phi(X, X).  An independent value
comes from the Gauss-type identity

    Ric~(X, X) = Ric(X, X) - sum_j <R(X, U_j) U_j, X> + 3 (A_X, A_X)

which uses the full curvature tensor instead of T and N.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ..certificates import PositivityCertificate
from ..curvature import MetricChart, ricci_at

FREE_TOL = 1e-10


class NotHorizontalError(ValueError):
    pass


class NonFreeError(ValueError):
    pass


def christoffel_jets(g, dg, ddg):
    """Gamma[a, b, c] = Gamma^a_bc and dGamma[e, a, b, c] = d_e Gamma^a_bc."""
    gi = np.linalg.inv(g)
    low = 0.5 * (np.einsum("bdc->dbc", dg) + np.einsum("cdb->dbc", dg) - dg)  # low[d,b,c]
    gam = np.einsum("ad,dbc->abc", gi, low)
    dgi = -np.einsum("ap,epq,qd->ead", gi, dg, gi)
    dlow = 0.5 * (np.einsum("ebdc->edbc", ddg) + np.einsum("ecdb->edbc", ddg) - ddg)
    dgam = np.einsum("ead,dbc->eabc", dgi, low) + np.einsum("ad,edbc->eabc", gi, dlow)
    return gam, dgam


def riemann_from_jets(gam, dgam):
    """R[a, b, c, d] = R^a_bcd, with R(d_c, d_d) d_b = R^a_bcd d_a."""
    R = np.einsum("cadb->abcd", dgam) - np.einsum("dacb->abcd", dgam)
    R += np.einsum("ace,edb->abcd", gam, gam) - np.einsum("ade,ecb->abcd", gam, gam)
    return R


def ricci_from_riemann(R):
    ric = np.einsum("abad->bd", R)
    return 0.5 * (ric + ric.T)


def horizontal_basis(G, K) -> np.ndarray:
    """Columns form a G-orthonormal basis of the G-orthogonal complement of the rows of K."""
    ns = scipy.linalg.null_space(K @ G)
    L = np.linalg.cholesky(ns.T @ G @ ns)
    return ns @ np.linalg.inv(L).T


@dataclass
class SubmersionForms:
    """Quadratic forms (coordinate components) at one point."""

    g: np.ndarray
    ricci: np.ndarray
    aa: np.ndarray  # (A_X, A_X)
    tt: np.ndarray  # (T X, T X)
    dn: np.ndarray  # (D_X N, X) = -Hess Phi
    gauss: np.ndarray  # quotient Ricci via the curvature-tensor route
    frame: np.ndarray  # orthonormal vertical fields as rows
    horizontal: np.ndarray  # orthonormal horizontal basis as columns
    N_frame: np.ndarray  # sum_j H nabla_{U_j} U_j
    N_grad: np.ndarray  # -grad Phi
    dphi: np.ndarray
    ddphi: np.ndarray
    gram: np.ndarray
    dg: np.ndarray
    riemann: np.ndarray  # all indices lowered: <R(d_c, d_d) d_b, d_a>

    @property
    def total(self) -> np.ndarray:
        return self.ricci + 2 * self.aa + self.tt - self.dn

    def quotient_eigenvalues(self) -> np.ndarray:
        B = self.horizontal
        M = B.T @ self.total @ B
        return np.linalg.eigvalsh(0.5 * (M + M.T))

    def dn_factor(self, X, block) -> float:
        """(D_X N_B, X) for the part of N along the coordinate directions in ``block``.

        Valid when the coordinates in ``block`` have constant unit metric and are
        orthogonal to everything else (true for the t-coordinates used here).
        """
        X = np.asarray(X, dtype=float)
        out = 0.0
        for k in block:
            out -= X[k] * (X @ self.ddphi[:, k])
            out -= 0.5 * self.dphi[k] * (X @ self.dg[k] @ X)
        return float(out)


def submersion_forms(g, dg, ddg, K, check_free: bool = True) -> SubmersionForms:
    g, dg, ddg, K = (np.asarray(a, dtype=float) for a in (g, dg, ddg, K))
    gam, dgam = christoffel_jets(g, dg, ddg)
    R = riemann_from_jets(gam, dgam)
    ric = ricci_from_riemann(R)

    gram = K @ g @ K.T
    ev = np.linalg.eigvalsh(gram)
    if check_free and ev[0] <= FREE_TOL * max(1.0, ev[-1]):
        raise NonFreeError("Killing fields are linearly dependent here (orbit collapses)")
    L = np.linalg.cholesky(gram)
    C = np.linalg.inv(L).T  # U_j = sum_m C[m, j] K_m
    U = C.T @ K
    gi = np.linalg.inv(g)
    d = g.shape[0]
    P_H = np.eye(d) - K.T @ np.linalg.solve(gram, K @ g)

    # A_X U_j = P_H sum_m C_mj nabla_X K_m, nabla_X K = M X with M[c,a] = Gamma^c_ab K^b
    M = np.einsum("cab,mb->mca", gam, K)
    Amats = np.einsum("mj,mca->jca", C, M)
    Amats = np.einsum("ec,jca->jea", P_H, Amats)
    aa = np.einsum("jea,ef,jfb->ab", Amats, g, Amats)

    # T: v_jk = nabla_{U_j} U_k (coefficients of U are constant along orbits)
    v = np.einsum("cab,ja,kb->jkc", gam, U, U)
    Gv = np.einsum("ac,jkc->jka", g, v)
    tt = np.einsum("jka,jkb->ab", Gv, Gv)
    N_frame = P_H @ np.einsum("jjc->c", v)

    # Phi = 1/2 log det gram
    dgram = np.einsum("ma,cab,nb->cmn", K, dg, K)
    ddgram = np.einsum("ma,ceab,nb->cemn", K, ddg, K)
    gri = np.linalg.inv(gram)
    dphi = 0.5 * np.einsum("mn,cnm->c", gri, dgram)
    X1 = np.einsum("mn,cnp->cmp", gri, dgram)
    ddphi = 0.5 * (np.einsum("mn,cenm->ce", gri, ddgram) - np.einsum("cmp,epm->ce", X1, X1))
    hess = ddphi - np.einsum("cab,c->ab", gam, dphi)
    hess = 0.5 * (hess + hess.T)
    N_grad = -gi @ dphi

    # Gauss route: Ric - sum_j <R(X,U_j)U_j, X> + 3 (A_X, A_X)
    Rlow = np.einsum("ae,ebcd->abcd", g, R)  # R_abcd = <R(d_c,d_d) d_b, d_a>
    # <R(X,U)U, X> = R_abcd X^a U^b X^c U^d
    vert = np.einsum("abcd,jb,jd->ac", Rlow, U, U)
    vert = 0.5 * (vert + vert.T)
    gauss = ric - vert + 3 * aa

    forms = SubmersionForms(
        g=g, ricci=ric, aa=0.5 * (aa + aa.T), tt=0.5 * (tt + tt.T), dn=-hess, gauss=gauss,
        frame=U, horizontal=horizontal_basis(g, K), N_frame=N_frame, N_grad=N_grad,
        dphi=dphi, ddphi=ddphi, gram=gram, dg=dg, riemann=Rlow,
    )
    return forms


def sectional_curvature(forms: SubmersionForms, X, Y) -> float:
    """K(X, Y) = <R(X,Y)Y, X> / |X ^ Y|^2."""
    X, Y = np.asarray(X, dtype=float), np.asarray(Y, dtype=float)
    num = np.einsum("abcd,a,b,c,d->", forms.riemann, X, Y, X, Y)
    g = forms.g
    den = (X @ g @ X) * (Y @ g @ Y) - (X @ g @ Y) ** 2
    return float(num / den)


@dataclass
class QuotientRicciSample:
    point: np.ndarray
    X: np.ndarray
    ricci: float  # R(X, X)
    aa2: float  # 2 (A X, A X)
    tt: float  # (T X, T X)
    dn: float  # (D_X N, X)
    total: float
    gauss: float

    @property
    def parts_sum(self) -> float:
        return self.ricci + self.aa2 + self.tt - self.dn

    @property
    def lower_bound(self) -> float:
        """R(X, X) - (D_X N, X), the value with both square terms dropped."""
        return self.ricci - self.dn

    def as_row(self) -> dict:
        row = {f"x{i}": float(v) for i, v in enumerate(self.point)}
        row.update({f"X{i}": float(v) for i, v in enumerate(self.X)})
        row.update(ricci=self.ricci, aa2=self.aa2, tt=self.tt, dn=self.dn, total=self.total, gauss=self.gauss)
        return row


def _form(M, X) -> float:
    return float(X @ M @ X)


def sample_from_forms(forms: SubmersionForms, point, X, tol: float = 1e-12) -> QuotientRicciSample:
    X = np.asarray(X, dtype=float)
    if not np.any(X):
        raise ValueError("zero tangent vector")
    K = forms.frame
    pair = K @ forms.g @ X
    # relative to the size of the metric, which is large in singular charts
    scale = max(1.0, float(np.linalg.norm(forms.g, 2)) * float(np.linalg.norm(X)))
    if np.max(np.abs(pair)) > tol * scale:
        raise NotHorizontalError(f"X pairs with the vertical frame: {pair}")
    return QuotientRicciSample(
        point=np.asarray(point, dtype=float), X=X,
        ricci=_form(forms.ricci, X), aa2=2 * _form(forms.aa, X), tt=_form(forms.tt, X),
        dn=_form(forms.dn, X), total=_form(forms.total, X), gauss=_form(forms.gauss, X),
    )


def oneill_quotient_ricci(m, point, X) -> QuotientRicciSample:
    """Four-term quotient Ricci at ``point`` for horizontal X.

    ``m`` provides ``jets(point)``, ``killing_rows()`` and optionally
    ``check_free(point)`` (raising NonFreeError on non-free strata).
    """
    if hasattr(m, "check_free"):
        m.check_free(point)
    forms = submersion_forms(*m.jets(point), m.killing_rows())
    return sample_from_forms(forms, point, X)


# -- quotient chart oracle ------------------------------------------------------


def quotient_metric_matrix(G, K, C) -> np.ndarray:
    """Metric of the quotient in coordinates embedded by the columns of C."""
    W = K.T
    GW = G @ W
    Gh = G - GW @ np.linalg.solve(W.T @ GW, GW.T)
    return C.T @ Gh @ C


def quotient_chart(metric, K, C, lower, upper, name: str = "quotient") -> MetricChart:
    """Chart of the orbit space.

    ``metric`` is the full metric (vectorized); C (d x q) embeds the quotient
    coordinates, which must contain all coordinates the metric depends on and
    together with the Killing fields span the tangent space.
    """
    K = np.asarray(K, dtype=float)
    C = np.asarray(C, dtype=float)

    def qmetric(y):
        y = np.asarray(y, dtype=float)
        x = y @ C.T
        G = metric(x)
        W = K.T
        GW = G @ W
        A = np.swapaxes(W, -1, -2) @ GW
        Gh = G - GW @ np.linalg.solve(A, np.swapaxes(GW, -1, -2))
        return C.T @ Gh @ C

    return MetricChart(qmetric, lower, upper, name=name)


def oracle_quotient_ricci(chart: MetricChart, y, C, forms: SubmersionForms, Y, step, extrapolate=True):
    """(oracle value, four-term value) of the quotient Ricci along coordinate vector Y."""
    ric_q = ricci_at(chart, y, step=step, extrapolate=extrapolate)
    g = forms.g
    K = forms.frame
    X = C @ np.asarray(Y, dtype=float)
    Xh = X - K.T @ (K @ g @ X)  # frame rows are orthonormal
    return float(Y @ ric_q @ Y), _form(forms.total, Xh)


# -- scans ----------------------------------------------------------------------


@dataclass
class OneillScan:
    samples: list

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(s, name) for s in self.samples])

    @property
    def min_total(self) -> float:
        return float(self.column("total").min())

    @property
    def max_sum_defect(self) -> float:
        return float(np.max(np.abs(self.column("total") - np.array([s.parts_sum for s in self.samples]))))

    @property
    def max_gauss_defect(self) -> float:
        return float(np.max(np.abs(self.column("total") - self.column("gauss"))))

    def rows(self) -> list[dict]:
        return [s.as_row() for s in self.samples]

    def certificate(self, label: str, params: dict, sum_tol: float = 1e-9) -> PositivityCertificate:
        tot = self.column("total")
        i = int(np.argmin(tot))
        checks = {
            "total_positive": bool(tot.min() > 0),
            "sum_identity": bool(self.max_sum_defect <= sum_tol),
            "aa_nonnegative": bool(self.column("aa2").min() >= 0),
            "tt_nonnegative": bool(self.column("tt").min() >= 0),
        }
        return PositivityCertificate(
            label=label, params=params,
            minima={
                "total": float(tot.min()), "ricci": float(self.column("ricci").min()),
                "aa2": float(self.column("aa2").min()), "tt": float(self.column("tt").min()),
                "lower_bound": float(min(s.lower_bound for s in self.samples)),
            },
            sigma=float(tot.min()), checks=checks,
            witness={"point": self.samples[i].point, "X": self.samples[i].X},
            grid={"n_samples": len(self.samples)},
            extra={"max_sum_defect": self.max_sum_defect, "max_gauss_defect": self.max_gauss_defect},
        )
