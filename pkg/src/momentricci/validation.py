"""Closed-form Ricci formulas checked against the finite-difference oracle."""
from __future__ import annotations

import numpy as np

from .curvature import ricci_eigenvalues
from .profiles import RadialProfile
from .warped import (
    PhiMetric,
    WarpedMetric,
    calabi_phi,
    einstein_constant,
    einstein_report,
    expected_eigenvalues,
    fubini_study_metric,
    hf_chart,
    phi_R,
    phi_chart,
    ricci_hf,
    ricci_phi,
    sphere_sample,
)

HF_STEP = 2.5e-4
ANGLE_STEP = 3e-4


def squashed_fs_metric(R: float = 2.0, n: int = 2, s: float = 0.8) -> WarpedMetric:
    """Fubini-Study with the Hopf warp scaled by s; not Einstein for s != 1."""
    h = RadialProfile(
        0.0, R * np.pi / 2,
        lambda t: s * 0.5 * R * np.sin(2 * t / R),
        lambda t: s * np.cos(2 * t / R),
        lambda t: -s * 2.0 / R * np.sin(2 * t / R),
        name="h_squashed",
    )
    return WarpedMetric(n, h, fubini_study_metric(R, n).f)


def _sample(n: int, lo: float, hi: float, size: int, rng) -> np.ndarray:
    return np.column_stack([rng.uniform(lo, hi, size), sphere_sample(n, rng, size)])


def _steps(n: int, radial: float) -> np.ndarray:
    return np.r_[radial, np.full(2 * n - 1, ANGLE_STEP)]


def hf_oracle_check(w: WarpedMetric, t_lo: float, t_hi: float, n_points: int = 500, seed: int = 0,
                    rel_step: float = HF_STEP) -> dict:
    """Max relative gap between ricci_hf and oracle eigenvalues at random points."""
    rng = np.random.default_rng(seed)
    chart = hf_chart(w, t_lo - 0.05 * (t_hi - t_lo), t_hi + 0.05 * (t_hi - t_lo))
    X = _sample(w.n, t_lo, t_hi, n_points, rng)
    exp = expected_eigenvalues(w.n, *ricci_hf(w, X[:, 0]))
    h = _steps(w.n, rel_step * (t_hi - t_lo))
    ev = ricci_eigenvalues(chart, X, step=h, extrapolate=True)
    scale = np.maximum(np.abs(exp), 1e-12)
    rel = np.abs(ev - exp) / scale
    return {"n_points": int(n_points), "max_rel_error": float(rel.max()), "step": h.tolist()}


def hf_convergence_order(w: WarpedMetric, t_lo: float, t_hi: float, n_points: int = 20, seed: int = 1,
                         h0: float = 4e-3) -> dict:
    """Observed order of the plain oracle under step halving (h0 -> h0/2)."""
    rng = np.random.default_rng(seed)
    chart = hf_chart(w, t_lo - 0.05 * (t_hi - t_lo), t_hi + 0.05 * (t_hi - t_lo))
    X = _sample(w.n, t_lo, t_hi, n_points, rng)
    exp = expected_eigenvalues(w.n, *ricci_hf(w, X[:, 0]))
    errs = []
    for h in (h0, h0 / 2):
        ev = ricci_eigenvalues(chart, X, step=np.full(chart.dim, h))
        errs.append(float(np.max(np.abs(ev - exp))))
    return {"errors": errs, "order": float(np.log2(errs[0] / errs[1]))}


def phi_oracle_deviation(p: PhiMetric, target: float, r_lo: float, r_hi: float, n_points: int = 100,
                         seed: int = 0, rel_step: float = HF_STEP, delta=None) -> float:
    """max |lambda - target| over oracle Ricci eigenvalues of the phi metric."""
    rng = np.random.default_rng(seed)
    width = r_hi - r_lo
    chart = phi_chart(p, delta, max(p.a, r_lo - 0.05 * width), min(p.b, r_hi + 0.05 * width))
    X = _sample(p.n, r_lo, r_hi, n_points, rng)
    ev = ricci_eigenvalues(chart, X, step=_steps(p.n, rel_step * min(width, 1.0)), extrapolate=True)
    return float(np.max(np.abs(ev - target)))


def einstein_check(n: int, R: float, n_points: int = 100, seed: int = 0, grid: int = 2001) -> dict:
    p = phi_R(R, n)
    lam = einstein_constant(R, n)
    closed = einstein_report(p, lam, np.linspace(0.01 * R, 0.99 * R, grid)).deviation
    oracle = phi_oracle_deviation(p, lam, 0.1 * R, 0.9 * R, n_points, seed)
    return {"n": n, "R": R, "lambda": lam, "closed_form_dev": closed, "oracle_dev": oracle,
            "pass": bool(closed <= 1e-8 and oracle <= 1e-5)}


def calabi_check(n: int, r_lo: float = 1.05, r_hi: float = 10.0, n_points: int = 100, seed: int = 0,
                 grid: int = 2001) -> dict:
    p = calabi_phi(n, b=r_hi * 1.1)
    r = np.linspace(r_lo, r_hi, grid)
    closed = float(np.max(np.abs(np.stack(ricci_phi(p, r)))))
    oracle = phi_oracle_deviation(p, 0.0, r_lo, r_hi, n_points, seed)
    return {"n": n, "r_lo": r_lo, "r_hi": r_hi, "closed_form_max": closed, "oracle_max": oracle,
            "pass": bool(closed <= 1e-10 and oracle <= 1e-4)}
