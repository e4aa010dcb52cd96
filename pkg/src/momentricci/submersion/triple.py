"""The product metric on S^3 x S^3 x S^3 and the torus action on it.

Coordinates are (t1, t2, t3, phi1, psi1, phi2, psi2, phi3, psi3) with
u_i = a_i(t_i) e^{i phi_i}, v_i = b_i(t_i) e^{i psi_i}.  Factor i carries the
doubly-warped metric dt^2 + a^2 dphi^2 + b^2 dpsi^2 with

    factor 1: (cos t, f(pi/2 - t))
    factor 2: (f(t), f(pi/2 - t))
    factor 3: (f(t), sin t)

The torus T^3 acts through the weight matrix of ``toric.example3_action``;
its Killing fields are the weight columns read as constant combinations of
the angle fields.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..curvature import MetricChart
from ..toric import TorusWeightSystem, VanishingStratum, example3_action
from .fprofile import HALF_PI, FProfile, build_f_profile
from .oneill import NonFreeError, OneillScan, sample_from_forms, submersion_forms

DIM = 9
N_ANGLES = 6
COORDS = ("t1", "t2", "t3", "phi1", "psi1", "phi2", "psi2", "phi3", "psi3")
ANGLE_FACTOR = (0, 0, 1, 1, 2, 2)
HORIZONTAL_TOL = 1e-12
ZERO_TOL = 1e-10


class AxisError(ValueError):
    """A warp function vanishes at the requested point."""


def coordinate_index(name: str) -> int:
    return COORDS.index(name)


def unit_vector(name: str) -> np.ndarray:
    e = np.zeros(DIM)
    e[coordinate_index(name)] = 1.0
    return e


def _trig_jet(kind: str, t):
    if kind == "cos":
        return np.cos(t), -np.sin(t), -np.cos(t)
    return np.sin(t), np.cos(t), -np.sin(t)


def _reflected_jet(prof: FProfile, t):
    """Jet of t -> f(pi/2 - t)."""
    v, d1, d2 = prof.jet(HALF_PI - np.asarray(t, dtype=float))
    return v, -d1, d2


def factor_ricci_from_jets(a, a1, a2, b, b1, b2):
    """Unit-frame Ricci (tt, phiphi, psipsi) of dt^2 + a^2 dphi^2 + b^2 dpsi^2."""
    a, b = np.asarray(a, dtype=float), np.asarray(b, dtype=float)
    if np.any(a <= 0) or np.any(b <= 0):
        raise AxisError("warp function vanishes: point lies on an axis")
    cross = a1 * b1 / (a * b)
    return np.stack([-a2 / a - b2 / b, -a2 / a - cross, -b2 / b - cross], axis=-1)


def factor_ricci(a, b, t):
    """Ricci of dt^2 + a(t)^2 dphi^2 + b(t)^2 dpsi^2 at t (unit frame, diagonal).

    ``a`` and ``b`` are profiles with a ``jet`` method or callables
    returning (value, d1, d2).
    """
    ja = a.jet(t) if hasattr(a, "jet") else a(t)
    jb = b.jet(t) if hasattr(b, "jet") else b(t)
    return factor_ricci_from_jets(*ja, *jb)


def factor_chart(a, b, t_lo: float, t_hi: float, name: str = "") -> MetricChart:
    """Three-dimensional chart (t, phi, psi) of a single doubly-warped factor."""

    def metric(x):
        x = np.asarray(x, dtype=float)
        t = x[..., 0]
        va = (a.jet(t) if hasattr(a, "jet") else a(t))[0]
        vb = (b.jet(t) if hasattr(b, "jet") else b(t))[0]
        out = np.zeros(x.shape[:-1] + (3, 3))
        out[..., 0, 0] = 1.0
        out[..., 1, 1] = va**2
        out[..., 2, 2] = vb**2
        return out

    inf = np.inf
    return MetricChart(metric, [t_lo, -inf, -inf], [t_hi, inf, inf], name=name or "factor")


@dataclass
class TripleSphereMetric:
    fprof: FProfile
    action: TorusWeightSystem = field(default_factory=example3_action)

    @classmethod
    def from_eps(cls, eps: float) -> "TripleSphereMetric":
        return cls(build_f_profile(eps))

    @property
    def eps(self) -> float:
        return self.fprof.eps

    # warps ---------------------------------------------------------------
    def factor_jets(self, k: int, t):
        """((a, a', a''), (b, b', b'')) for factor k (0-based) at t."""
        f = self.fprof
        if k == 0:
            return _trig_jet("cos", t), _reflected_jet(f, t)
        if k == 1:
            return f.jet(t), _reflected_jet(f, t)
        if k == 2:
            return f.jet(t), _trig_jet("sin", t)
        raise IndexError("factor index must be 0, 1 or 2")

    def warp_jets(self, x):
        """Warps of the six angle coordinates and their t-derivatives, each (..., 6)."""
        x = np.asarray(x, dtype=float)
        cols = [[], [], []]
        for k in range(3):
            ja, jb = self.factor_jets(k, x[..., k])
            for o in range(3):
                cols[o] += [np.asarray(ja[o], dtype=float), np.asarray(jb[o], dtype=float)]
        return tuple(np.stack(np.broadcast_arrays(*c), axis=-1) for c in cols)

    # metric and jets ------------------------------------------------------
    def metric(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        W, _, _ = self.warp_jets(x)
        diag = np.concatenate([np.ones(x.shape[:-1] + (3,)), W**2], axis=-1)
        out = np.zeros(x.shape[:-1] + (DIM, DIM))
        idx = np.arange(DIM)
        out[..., idx, idx] = diag
        return out

    def jets(self, x):
        """Exact (g, dg, ddg) at a single point; dg[c,a,b] = d_c g_ab."""
        x = np.asarray(x, dtype=float)
        if x.shape != (DIM,):
            raise ValueError("jets expects a single point of 9 coordinates")
        W, W1, W2 = self.warp_jets(x)
        g = self.metric(x)
        dg = np.zeros((DIM,) * 3)
        ddg = np.zeros((DIM,) * 4)
        for m, k in enumerate(ANGLE_FACTOR):
            i = 3 + m
            dg[k, i, i] = 2 * W[m] * W1[m]
            ddg[k, k, i, i] = 2 * (W1[m] ** 2 + W[m] * W2[m])
        return g, dg, ddg

    def chart(self, margin: float = 0.0) -> MetricChart:
        inf = np.inf
        lower = [0.0] * 3 + [-inf] * N_ANGLES
        upper = [HALF_PI] * 3 + [inf] * N_ANGLES
        return MetricChart(self.metric, lower, upper, margin=margin, name=f"S3xS3xS3(eps={self.eps:g})")

    # Ricci ---------------------------------------------------------------
    def unit_ricci(self, x) -> np.ndarray:
        """Ricci in the coordinate unit frame (diagonal), ordered like COORDS."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape[:-1] + (DIM,))
        for k in range(3):
            ja, jb = self.factor_jets(k, x[..., k])
            r = factor_ricci_from_jets(*ja, *jb)
            out[..., k] = r[..., 0]
            out[..., 3 + 2 * k] = r[..., 1]
            out[..., 4 + 2 * k] = r[..., 2]
        return out

    def ricci(self, x) -> np.ndarray:
        """Coordinate components Ric_ij."""
        x = np.asarray(x, dtype=float)
        diag = self.unit_ricci(x) * np.diagonal(self.metric(x), axis1=-2, axis2=-1)
        out = np.zeros(x.shape[:-1] + (DIM, DIM))
        idx = np.arange(DIM)
        out[..., idx, idx] = diag
        return out

    def ricci_form(self, x, X) -> float:
        X = np.asarray(X, dtype=float)
        return float(X @ self.ricci(x) @ X)

    # torus action ----------------------------------------------------------
    def killing_rows(self) -> np.ndarray:
        """Killing fields as rows over all nine coordinates (zero on the t's)."""
        K = np.zeros((self.action.torus_rank, DIM))
        K[:, 3:] = np.array(self.action.columns(), dtype=float)
        return K

    def gram(self, x) -> np.ndarray:
        K = self.killing_rows()
        return K @ self.metric(x) @ K.T

    def check_free(self, x) -> None:
        """The action is free off the coordinate axes t_i in {0, pi/2}."""
        t = np.asarray(x, dtype=float)[:3]
        if np.any(t <= 0) or np.any(t >= HALF_PI):
            raise NonFreeError(f"t = {t} lies on a collapsed stratum")

    def pairings(self, x, X) -> np.ndarray:
        """g(X, K_j) for each Killing field."""
        return self.killing_rows() @ self.metric(x) @ np.asarray(X, dtype=float)


# -- vertical frame -------------------------------------------------------


@dataclass
class VerticalFrame:
    rows: np.ndarray  # raw Killing fields, shape (k, 9)
    orthonormal: np.ndarray  # Gram-Schmidt copies in the metric, shape (k, 9)
    gram: np.ndarray
    rank: int


def vertical_frame(m: TripleSphereMetric, x, tol: float = 1e-9) -> VerticalFrame:
    """Killing fields at x and their Gram-Schmidt orthonormalization, in order."""
    K = m.killing_rows()
    G = m.metric(x)
    gram = K @ G @ K.T
    rank = vertical_rank(m, x, tol)
    ortho = []
    for row in K:
        v = row.copy()
        for e in ortho:
            v = v - (e @ G @ v) * e
        norm2 = v @ G @ v
        if norm2 > tol * max(1.0, np.trace(gram)):
            ortho.append(v / np.sqrt(norm2))
    return VerticalFrame(K, np.array(ortho), gram, rank)


def vertical_rank(m: TripleSphereMetric, x, tol: float = 1e-9) -> int:
    gram = m.gram(x)
    ev = np.linalg.eigvalsh(gram)
    return int(np.sum(ev > tol * max(1.0, ev[-1])))


def stratum_point(tags, generic: float = np.pi / 5) -> np.ndarray:
    """A point of the vanishing stratum: 'u' puts t_i = pi/2, 'v' puts t_i = 0."""
    s = tags if isinstance(tags, VanishingStratum) else VanishingStratum(tuple(tags))
    t = [HALF_PI if tag == "u" else 0.0 if tag == "v" else generic for tag in s.tags]
    return np.array(t + [0.0] * N_ANGLES)


# -- degenerate directions ---------------------------------------------------

CASE1 = "case1"
CASE2 = "case2"
CASE1_FIELDS = ("phi2", "phi3")
CASE2_FIELDS = ("psi1", "psi2")


@dataclass
class FlatFamily:
    case: str
    fields: tuple[str, ...]  # coordinate fields with Ric(e, e) = 0 here
    complete: bool  # True iff the point lies in the full two-dimensional case region

    def basis(self) -> np.ndarray:
        return np.array([unit_vector(n) for n in self.fields])


def flat_fields(m: TripleSphereMetric, x) -> list[str]:
    """Coordinate directions killed by Ric at x, read off from the profile pieces."""
    eps = m.eps
    t1, t2, t3 = (float(v) for v in np.asarray(x)[:3])
    out = []
    if t2 <= eps:
        out.append("phi2")
    if t3 <= eps:
        out.append("phi3")
    if t1 >= HALF_PI - eps:
        out.append("psi1")
    if t2 >= HALF_PI - eps:
        out.append("psi2")
    return out


def degenerate_directions(m: TripleSphereMetric, x) -> list[FlatFamily]:
    """Flat subspaces of Ric at x grouped into the two families.

    A family is reported as soon as one of its coordinate fields is flat;
    ``complete`` marks the two-dimensional case regions t2, t3 <= eps and
    t1, t2 >= pi/2 - eps.
    """
    flat = flat_fields(m, x)
    out = []
    for case, names in ((CASE1, CASE1_FIELDS), (CASE2, CASE2_FIELDS)):
        present = tuple(n for n in names if n in flat)
        if present:
            out.append(FlatFamily(case, present, len(present) == 2))
    return out


def in_flat_region(m: TripleSphereMetric, x) -> bool:
    return bool(flat_fields(m, x))


def horizontality_check(m: TripleSphereMetric, x, X, tol: float = HORIZONTAL_TOL):
    """(is_horizontal, pairings of X with the Killing fields)."""
    X = np.asarray(X, dtype=float)
    if not np.any(X):
        raise ValueError("zero tangent vector")
    p = m.pairings(x, X)
    return bool(np.all(np.abs(p) <= tol)), p


def min_pairing_on_subspace(m: TripleSphereMetric, x, basis) -> float:
    """Smallest singular value of (span basis) -> pairings with the Killing fields.

    Positive iff no nonzero vector of the span is horizontal.
    """
    P = np.array([m.pairings(x, v) for v in np.atleast_2d(basis)]).T
    return float(np.linalg.svd(P, compute_uv=False)[-1])


# -- the swap isometry ---------------------------------------------------------


def swap_map(x) -> np.ndarray:
    """(t1, t2, t3) -> (pi/2 - t3, pi/2 - t2, pi/2 - t1), angles relabelled accordingly."""
    x = np.asarray(x, dtype=float)
    y = np.empty_like(x)
    y[..., 0] = HALF_PI - x[..., 2]
    y[..., 1] = HALF_PI - x[..., 1]
    y[..., 2] = HALF_PI - x[..., 0]
    # phi1 <- psi3, psi1 <- phi3, phi2 <- psi2, psi2 <- phi2, phi3 <- psi1, psi3 <- phi1
    src = (8, 7, 6, 5, 4, 3)
    for j, s in enumerate(src):
        y[..., 3 + j] = x[..., s]
    return y


def swap_jacobian() -> np.ndarray:
    """Linear part of swap_map (constant)."""
    J = np.zeros((DIM, DIM))
    J[0, 2] = J[1, 1] = J[2, 0] = -1.0
    for j, s in enumerate((8, 7, 6, 5, 4, 3)):
        J[3 + j, s] = 1.0
    return J


def swap_defect(m: TripleSphereMetric, x) -> float:
    """max |J^T g(swap(x)) J - g(x)|."""
    J = swap_jacobian()
    lhs = J.T @ m.metric(swap_map(x)) @ J
    return float(np.max(np.abs(lhs - m.metric(x))))


# -- quotient scan ---------------------------------------------------------------

GENERIC_MARGIN = 0.05


def sample_generic_points(n: int, rng: np.random.Generator, margin: float = GENERIC_MARGIN) -> np.ndarray:
    t = rng.uniform(margin, HALF_PI - margin, size=(n, 3))
    ang = rng.uniform(0.0, 2 * np.pi, size=(n, N_ANGLES))
    return np.concatenate([t, ang], axis=1)


def oneill_scan(m: TripleSphereMetric, n: int = 1000, seed: int = 0, margin: float = GENERIC_MARGIN) -> OneillScan:
    """Quotient Ricci at seeded points with a random unit horizontal X at each."""
    rng = np.random.default_rng(seed)
    pts = sample_generic_points(n, rng, margin)
    K = m.killing_rows()
    samples = []
    for x in pts:
        m.check_free(x)
        forms = submersion_forms(*m.jets(x), K)
        c = rng.standard_normal(forms.horizontal.shape[1])
        X = forms.horizontal @ (c / np.linalg.norm(c))
        samples.append(sample_from_forms(forms, x, X))
    return OneillScan(samples)
