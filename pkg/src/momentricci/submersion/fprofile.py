"""The concave profile f on [0, pi/2]: 1 near 0, cos t near pi/2.

On the bridge [eps, pi/2 - eps] (u = (t - eps)/L, L = pi/2 - 2 eps) we
prescribe

    f'' = -(a u (1-u)^b + sin(eps) u^k)

which is negative inside, vanishes at u = 0 and equals -sin(eps) =
-cos(pi/2 - eps) at u = 1, so f is C^2 at both joints.  a and b are fixed
by the two endpoint conditions f'(pi/2 - eps) = -cos(eps) and
f(pi/2 - eps) = sin(eps); both moments are incomplete beta functions.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq
from scipy.special import beta as beta_fn
from scipy.special import betainc

from ..profiles import PIECEWISE, RadialProfile

HALF_PI = np.pi / 2
TAIL_POWER = 8


class InfeasibleProfileError(ValueError):
    pass


@dataclass(frozen=True)
class FProfile:
    eps: float
    f: RadialProfile
    a: float
    b: float
    bridge: Callable | None = None

    def __call__(self, t, order: int = 0):
        return self.f(t, order)

    def jet(self, t):
        return self.f.jet(t)


def _bridge_coefficients(eps: float, k: int):
    L = HALF_PI - 2 * eps
    se = np.sin(eps)
    mass = np.cos(eps) / L  # int_0^1 g du, g = -f''
    mom = (1 - se) / L**2  # int_0^1 (1 - u) g du
    m1, q1 = se / (k + 1), se / ((k + 1) * (k + 2))
    if mass <= m1:
        raise InfeasibleProfileError("eps too large: no room for a concave bridge")

    def a_of(b):
        return (mass - m1) * (b + 1) * (b + 2)

    def residual(b):
        return a_of(b) / ((b + 2) * (b + 3)) + q1 - mom

    lo, hi = 1e-6, 1e3
    if residual(lo) * residual(hi) > 0:
        raise InfeasibleProfileError(f"eps = {eps}: moment conditions cannot be met by the bridge family")
    b = brentq(residual, lo, hi, xtol=1e-15, rtol=1e-15, maxiter=500)
    return a_of(b), b, L, se


def build_f_profile(eps: float, k: int = TAIL_POWER, verify: bool = True) -> FProfile:
    if not 0 < eps < np.pi / 8:
        raise InfeasibleProfileError("need 0 < eps < pi/8")
    a, b, L, se = _bridge_coefficients(eps, k)
    t_hi = HALF_PI - eps

    def bridge(t):
        u = np.clip((t - eps) / L, 0.0, 1.0)
        G0 = a * beta_fn(2, b + 1) * betainc(2, b + 1, u) + se * u ** (k + 1) / (k + 1)
        G1 = a * beta_fn(3, b + 1) * betainc(3, b + 1, u) + se * u ** (k + 2) / (k + 2)
        g = a * u * (1 - u) ** b + se * u**k
        return 1 - L**2 * (u * G0 - G1), -L * G0, -g

    def pick(t, order):
        t = np.asarray(t, dtype=float)
        lo = t <= eps
        hi = t >= t_hi
        cos_jet = (np.cos(t), -np.sin(t), -np.cos(t))
        flat = (np.ones_like(t), np.zeros_like(t), np.zeros_like(t))
        mid = bridge(t)[order]
        return np.where(lo, flat[order], np.where(hi, cos_jet[order], mid))

    f = RadialProfile(0.0, HALF_PI, lambda t: pick(t, 0), lambda t: pick(t, 1), lambda t: pick(t, 2),
                      kind=PIECEWISE, name=f"f(eps={eps:g})")
    prof = FProfile(eps, f, float(a), float(b), bridge)
    if verify:
        report = verify_f_profile(prof)
        if not report["pass"]:
            raise InfeasibleProfileError(f"profile checks failed: {report}")
    return prof


def verify_f_profile(prof: FProfile, num: int = 20001) -> dict:
    """Flatness near 0, cosine near pi/2, f' < 0 and f'' < 0 in between, C^2 joints."""
    eps = prof.eps
    t = np.linspace(0, HALF_PI, num)
    v, d1, d2 = prof.jet(t)
    inner = (t > eps) & (t < HALF_PI - eps)
    # bridge formula evaluated exactly at the joints against the outer pieces
    c2_gap = 0.0
    if prof.bridge is not None:
        t0, t1 = eps, HALF_PI - eps
        left = np.array(prof.bridge(t0))
        right = np.array(prof.bridge(t1))
        c2_gap = float(max(np.max(np.abs(left - [1.0, 0.0, 0.0])),
                           np.max(np.abs(right - [np.cos(t1), -np.sin(t1), -np.cos(t1)]))))
    low = t <= eps
    high = t >= HALF_PI - eps
    out = {
        "flat_dev": float(np.max(np.abs(v[low] - 1))) if low.any() else 0.0,
        "cos_dev": float(np.max(np.abs(v[high] - np.cos(t[high])))) if high.any() else 0.0,
        "max_d1": float(np.max(d1[inner])),
        "max_d2": float(np.max(d2[inner])),
        "c2_gap": c2_gap,
    }
    out["pass"] = bool(out["flat_dev"] == 0 and out["cos_dev"] <= 1e-15 and out["max_d1"] < 0
                       and out["max_d2"] < 0 and c2_gap <= 1e-9)
    return out
