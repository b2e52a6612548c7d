"""Least-squares growth fits and the domination relation on tables."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Iterable, Optional, Tuple

import numpy as np

POLYNOMIAL = "polynomial"
EXPONENTIAL = "exponential"


@dataclass
class GrowthFit:
    exponent: float  # slope of log y against log x
    residual: float  # RMS residual of that fit
    rate: float  # slope of log y against x
    exp_residual: float  # RMS residual of the log-linear fit
    points: int

    @property
    def verdict(self) -> str:
        if self.rate > 0 and self.exp_residual < self.residual:
            return EXPONENTIAL
        return POLYNOMIAL

    def to_json(self):
        return {"exponent": round(self.exponent, 6), "residual": round(self.residual, 6),
                "rate": round(self.rate, 6), "exp_residual": round(self.exp_residual, 6),
                "points": self.points, "verdict": self.verdict}


def _pairs(table) -> Tuple[np.ndarray, np.ndarray]:
    items = table.items() if isinstance(table, dict) else table
    pts = sorted((float(x), float(y)) for x, y in items)
    pts = [(x, y) for x, y in pts if x > 0 and y > 0]
    return np.array([p[0] for p in pts]), np.array([p[1] for p in pts])


def _fit(x, y):
    a, b = np.polyfit(x, y, 1)
    r = y - (a * x + b)
    return float(a), float(np.sqrt(np.mean(r * r)))


def growth_fit(table) -> GrowthFit:
    """Fit ``y ~ x^k`` on a log-log scale and ``y ~ e^(c x)`` on a log-linear
    scale; at least four positive points are needed."""
    x, y = _pairs(table)
    if len(x) < 4:
        raise ValueError("growth_fit needs at least four positive data points")
    ly = np.log(y)
    k, res = _fit(np.log(x), ly)
    c, eres = _fit(x, ly)
    return GrowthFit(k, res, c, eres, len(x))


def dominated(f: Dict[int, float], g: Dict[int, float], c_max: int = 10) -> Optional[int]:
    """Least ``c <= c_max`` with ``f(n) <= c g(c n + c) + c n + c`` at every
    ``n`` where the right side is tabulated, or None."""
    for c in range(1, c_max + 1):
        ok = True
        for n, fv in f.items():
            m = c * n + c
            if m not in g:
                continue
            if fv > c * g[m] + c * n + c:
                ok = False
                break
        if ok:
            return c
    return None
