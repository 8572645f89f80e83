"""Censor utility and the utility-vs-false-positive curves."""
from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .model import ConfigError, UtilityParams


def damage(params: UtilityParams, t, f):
    """The scalar the censor wants small: leaked traffic weighted by 1/d, plus f.

    Utility is a strictly decreasing function of this value whenever c < 0, so
    any ordering of censor outcomes can be done on it directly.
    """
    return (100.0 - np.asarray(t, dtype=float)) / params.d + np.asarray(f, dtype=float)


def eval_utility(params: UtilityParams, t, f):
    """Censor utility ``100 - 200 * (1 - exp(c * ((100 - t) / d + f)))``.

    Accepts scalars or broadcastable arrays; returns a float for scalar input.
    Bounded in (-100, 100] for c < 0, reaching 100 only at t=100, f=0.
    """
    t_arr = np.asarray(t, dtype=float)
    f_arr = np.asarray(f, dtype=float)
    if np.any((t_arr < 0) | (t_arr > 100)) or np.any(f_arr < 0):
        raise ValueError("need 0 <= t <= 100 and f >= 0")
    x = params.c * damage(params, t_arr, f_arr)
    # -expm1(x) == 1 - exp(x) without cancellation near x = 0
    u = 100.0 - 200.0 * -np.expm1(x)
    if u.ndim == 0:
        return float(u)
    return u


@dataclass(frozen=True)
class CurveSpec:
    t_values: tuple[float, ...] = (100.0, 50.0, 0.0)
    f_min: float = 0.0
    f_max: float = 35.0
    f_step: float = 0.25

    def __post_init__(self):
        object.__setattr__(self, "t_values", tuple(self.t_values))
        if not self.t_values:
            raise ConfigError("t_values must not be empty")
        if any(not 0 <= t <= 100 for t in self.t_values):
            raise ConfigError(f"t_values must lie in [0, 100], got {self.t_values}")
        if self.f_min < 0:
            raise ConfigError(f"f_min must be >= 0, got {self.f_min}")
        if self.f_min > self.f_max:
            raise ConfigError(f"f_min ({self.f_min}) must not exceed f_max ({self.f_max})")
        if not self.f_step > 0:
            raise ConfigError(f"f_step must be > 0, got {self.f_step}")

    def f_values(self) -> np.ndarray:
        span = (self.f_max - self.f_min) / self.f_step
        # tolerate representation error so exact multiples keep their endpoint
        count = math.floor(span + 1e-9) + 1
        return self.f_min + np.arange(count) * self.f_step


def utility_curve(params: UtilityParams, spec: CurveSpec) -> list[tuple[float, float, float]]:
    fs = spec.f_values()
    rows = []
    for t in spec.t_values:
        us = eval_utility(params, np.full_like(fs, t), fs)
        rows.extend(zip([t] * len(fs), fs.tolist(), us.tolist()))
    return rows


def format_number(x: float) -> str:
    """Shortest stable text for a sweep coordinate (``100``, ``0.25``)."""
    if float(x).is_integer():
        return str(int(x))
    return f"{x:.6f}".rstrip("0").rstrip(".")


def write_curve_csv(rows: Sequence[tuple[float, float, float]]) -> str:
    buf = io.StringIO()
    buf.write("t,f,utility\n")
    for t, f, u in rows:
        buf.write(f"{format_number(t)},{format_number(f)},{u:.6f}\n")
    return buf.getvalue()
