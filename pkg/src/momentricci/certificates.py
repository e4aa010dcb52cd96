"""Positivity certificates: recorded Ricci minima with the inputs that produced them."""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np


def _plain(x: Any):
    """Convert numpy scalars/arrays to JSON-ready Python values."""
    if isinstance(x, dict):
        return {str(k): _plain(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return _plain(x.tolist())
    if isinstance(x, (np.floating, float)):
        v = float(x)
        return v if np.isfinite(v) else repr(v)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, np.bool_):
        return bool(x)
    return x


@dataclass
class PositivityCertificate:
    """Grid report of Ricci minima.

    ``checks`` maps a bound name to True/False, or None when the bound does
    not apply to these parameters.  ``passed`` requires every applicable
    check and a strictly positive ``sigma``.
    """

    label: str
    params: dict
    minima: dict
    sigma: float
    checks: dict = field(default_factory=dict)
    witness: dict = field(default_factory=dict)
    grid: dict = field(default_factory=dict)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return bool(self.sigma > 0 and all(v for v in self.checks.values() if v is not None))

    def failed_checks(self) -> list[str]:
        return [k for k, v in self.checks.items() if v is False]

    def to_dict(self) -> dict:
        d = _plain(asdict(self))
        d["pass"] = self.passed
        return d

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, **kw)
