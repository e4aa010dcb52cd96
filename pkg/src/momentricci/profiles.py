"""Radial profiles: scalar functions on an interval with two derivatives."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

CLOSED_FORM = "closed-form"
PIECEWISE = "piecewise-polynomial"
NUMERIC = "numeric"

Fn = Callable[[np.ndarray], np.ndarray]


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class RadialProfile:
    """f on [a, b] with explicit f', f''.

    ``d2`` may be omitted, in which case it is obtained by central
    differences of ``d1`` (used only where a third derivative of some other
    profile would otherwise be needed).
    """

    a: float
    b: float
    value: Fn
    d1: Fn
    d2: Optional[Fn] = None
    kind: str = CLOSED_FORM
    name: str = ""
    slack: float = 1e-12

    def __post_init__(self):
        if not self.b > self.a:
            raise ValueError(f"empty interval [{self.a}, {self.b}]")

    def _check(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        tol = self.slack * max(1.0, abs(self.a), abs(self.b))
        if np.any(r < self.a - tol) or np.any(r > self.b + tol):
            raise DomainError(f"{self.name or 'profile'} evaluated outside [{self.a}, {self.b}]")
        return r

    def __call__(self, r, order: int = 0):
        r = self._check(r)
        if order == 0:
            out = self.value(r)
        elif order == 1:
            out = self.d1(r)
        elif order == 2:
            out = self._second(r)
        else:
            raise ValueError("only derivatives up to order 2 are available")
        out = np.broadcast_to(np.asarray(out, dtype=float), r.shape)
        return float(out) if out.ndim == 0 else out.copy()

    def _second(self, r):
        if self.d2 is not None:
            return self.d2(r)
        step = 1e-5 * (self.b - self.a)
        lo = np.maximum(r - step, self.a)
        hi = np.minimum(r + step, self.b)
        return (self.d1(hi) - self.d1(lo)) / (hi - lo)

    def jet(self, r):
        """(f, f', f'') at r."""
        return self(r, 0), self(r, 1), self(r, 2)

    def table(self, num: int = 201) -> np.ndarray:
        """Columns r, value, d1, d2 on a uniform grid."""
        r = np.linspace(self.a, self.b, num)
        return np.column_stack([r, self(r), self(r, 1), self(r, 2)])

    def restrict(self, a: float, b: float) -> "RadialProfile":
        if a < self.a or b > self.b:
            raise DomainError("restriction must lie inside the domain")
        return RadialProfile(a, b, self.value, self.d1, self.d2, self.kind, self.name, self.slack)


def constant(c: float, a: float, b: float, name: str = "") -> RadialProfile:
    return RadialProfile(
        a, b,
        lambda r: np.full_like(np.asarray(r, float), c),
        lambda r: np.zeros_like(np.asarray(r, float)),
        lambda r: np.zeros_like(np.asarray(r, float)),
        name=name or f"const({c})",
    )


def polynomial(coeffs, a: float, b: float, name: str = "") -> RadialProfile:
    """Polynomial with coefficients in increasing degree."""
    P = np.polynomial.Polynomial(coeffs)
    P1, P2 = P.deriv(1), P.deriv(2)
    return RadialProfile(a, b, P, P1, P2, name=name or "poly")


def power(c: float, k: float, a: float, b: float, name: str = "") -> RadialProfile:
    """c * r**k."""
    return RadialProfile(
        a, b,
        lambda r: c * r**k,
        lambda r: c * k * r ** (k - 1),
        lambda r: c * k * (k - 1) * r ** (k - 2),
        name=name or f"{c}*r^{k}",
    )


def smoothstep5(x):
    """6x^5 - 15x^4 + 10x^3 clipped to [0, 1], with two derivatives."""
    x = np.clip(np.asarray(x, dtype=float), 0.0, 1.0)
    s = x**3 * (10 - 15 * x + 6 * x**2)
    s1 = 30 * x**2 * (1 - x) ** 2
    s2 = 60 * x * (1 - x) * (1 - 2 * x)
    return s, s1, s2
